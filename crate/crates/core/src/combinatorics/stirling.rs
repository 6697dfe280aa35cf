use crate::error::{Error, Result};
use crate::exact::{big, binomial, factorial, int, scaled_pochhammer, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Parameters `(alpha, beta, gamma)` of `S(n, l | alpha, beta, gamma)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StirlingParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl StirlingParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        StirlingParams { alpha, beta, gamma }
    }

    pub fn ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        Self::new(int(alpha), int(beta), int(gamma))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StirlingMethod {
    Recurrence,
    ClosedForm,
}

type Table = Vec<Vec<Rational>>;

fn cache() -> &'static RwLock<HashMap<StirlingParams, Arc<Table>>> {
    static CACHE: OnceLock<RwLock<HashMap<StirlingParams, Arc<Table>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn build_table(p: &StirlingParams, rows: usize) -> Table {
    let mut table: Table = Vec::with_capacity(rows + 1);
    table.push(vec![Rational::one()]);
    for n in 0..rows {
        let prev = &table[n];
        let nn = int(n as i64);
        let mut next = Vec::with_capacity(n + 2);
        for l in 0..=n + 1 {
            let mut v = if l > 0 {
                prev[l - 1].clone()
            } else {
                Rational::zero()
            };
            if l <= n {
                let c = int(l as i64) * &p.beta - &nn * &p.alpha + &p.gamma;
                v += c * &prev[l];
            }
            next.push(v);
        }
        table.push(next);
    }
    table
}

/// Recurrence table with at least `n + 1` rows, shared through a process-wide
/// cache keyed by the full parameter triple.
fn table(n: usize, p: &StirlingParams) -> Arc<Table> {
    if let Some(t) = cache().read().unwrap_or_else(|e| e.into_inner()).get(p) {
        if t.len() > n {
            return t.clone();
        }
    }
    let fresh = Arc::new(build_table(p, n.max(8)));
    let mut guard = cache().write().unwrap_or_else(|e| e.into_inner());
    let entry = guard.entry(p.clone()).or_insert_with(|| fresh.clone());
    if entry.len() <= n {
        *entry = fresh;
    }
    entry.clone()
}

/// Row `n` of `S(n, l | alpha, beta, gamma)`, indexed by `l = 0..=n`.
pub fn stirling_row(n: usize, p: &StirlingParams) -> Vec<Rational> {
    table(n, p)[n].clone()
}

/// `S(n, l | alpha, beta, gamma)` by the three-term recurrence or the closed
/// form `(-1)^l / (beta^l l!) sum_j (-1)^j binom(l, j) (beta j + gamma | alpha)_n`.
pub fn gen_stirling(
    n: u64,
    l: u64,
    p: &StirlingParams,
    method: StirlingMethod,
) -> Result<Rational> {
    if l > n {
        return Ok(Rational::zero());
    }
    match method {
        StirlingMethod::Recurrence => Ok(table(n as usize, p)[n as usize][l as usize].clone()),
        StirlingMethod::ClosedForm => {
            if p.beta.is_zero() {
                return Err(Error::Unsupported("closed form needs beta != 0".into()));
            }
            let mut acc = Rational::zero();
            for j in 0..=l {
                let z = &p.beta * int(j as i64) + &p.gamma;
                let t = big(binomial(l as i64, j)) * scaled_pochhammer(&z, &p.alpha, n);
                if j % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            let mut scale = num_traits::pow(p.beta.clone(), l as usize) * big(factorial(l));
            if l % 2 == 1 {
                scale = -scale;
            }
            Ok(acc / scale)
        }
    }
}

/// Classical Stirling number of the second kind.
pub fn classical_stirling2(n: u64, l: u64) -> BigInt {
    if l > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for v in 0..=l {
        let t = binomial(l as i64, v) * num_traits::pow(BigInt::from(v), n as usize);
        if (l - v).is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / factorial(l)
}

/// `|S(n, l | 1, beta, 0) beta^l / beta^n - S(n, l)|`, which tends to 0 as
/// `beta` grows.
pub fn stirling_limit_gap(n: u64, l: u64, beta: u64) -> Result<Rational> {
    let b = int(beta as i64);
    let s = gen_stirling(
        n,
        l,
        &StirlingParams::new(int(1), b.clone(), int(0)),
        StirlingMethod::ClosedForm,
    )?;
    let scaled = s * num_traits::pow(b.clone(), l as usize) / num_traits::pow(b, n as usize);
    Ok((scaled - big(classical_stirling2(n, l))).abs())
}

/// Enclosure of `e^x` for `0 <= x <= 1` by the Taylor series through `x^terms`
/// plus the tail bound `2 x^{terms+1} / (terms+1)!`.
fn exp_enclosure(x: &Rational, terms: u64) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for i in 0..=terms {
        sum += &term;
        term = term * x / int(i as i64 + 1);
    }
    let tail = term * int(2);
    (sum.clone(), sum + tail)
}

/// Checks `sum_l x^l/l! binom(rl+s, n) = (1/n!) sum_l S(n,l|1,r,s) r^l e^x x^l`
/// with the left side truncated after `l = m` and its tail bounded by a
/// geometric series. Passes when both sides agree within the tail bound plus
/// `tol`. Requires `0 < x <= 1`, `r >= 1`, `s >= 0`.
pub fn dobinski_check(
    n: u64,
    r: u64,
    s: u64,
    x: &Rational,
    m: u64,
    tol: &Rational,
) -> Result<bool> {
    if r == 0 || !x.is_positive() || *x > Rational::one() {
        return Err(Error::InvalidParameter(
            "dobinski_check needs r >= 1 and 0 < x <= 1".into(),
        ));
    }
    let (ri, si) = (r as i64, s as i64);
    let term = |l: u64| -> Rational {
        num_traits::pow(x.clone(), l as usize) / big(factorial(l))
            * big(binomial(ri * l as i64 + si, n))
    };
    let mut partial = Rational::zero();
    for l in 0..=m {
        partial += term(l);
    }
    let a = (r * m + s) as i64;
    let base = a - n as i64 + 1;
    if base <= 0 {
        return Err(Error::InvalidParameter(
            "dobinski_check: truncation too small".into(),
        ));
    }
    let q = x.clone() / int(m as i64 + 1)
        * num_traits::pow(Rational::new((base + ri).into(), base.into()), n as usize);
    if q >= Rational::one() {
        return Err(Error::TruncationTooSmall {
            ratio: crate::exact::to_frac_string(&q),
        });
    }
    let tail = term(m) * &q / (Rational::one() - &q);

    let p = StirlingParams::ints(1, ri, si);
    let mut poly = Rational::zero();
    for l in 0..=n {
        let sv = gen_stirling(n, l, &p, StirlingMethod::Recurrence)?;
        poly += sv * num_traits::pow(int(ri) * x, l as usize);
    }
    poly /= big(factorial(n));
    let (e_lo, e_hi) = exp_enclosure(x, 80);
    let (r_lo, r_hi) = if poly.is_negative() {
        (&poly * e_hi, &poly * e_lo)
    } else {
        (&poly * e_lo, &poly * e_hi)
    };
    let l_lo = partial.clone();
    let l_hi = partial + tail;
    Ok(l_lo <= r_hi + tol && r_lo <= l_hi + tol)
}
