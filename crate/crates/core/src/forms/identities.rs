use crate::combinatorics::{
    gen_eulerian, gen_stirling, h_coeff, h_poly, s_binomial, SBinomialMethod, StirlingMethod,
    StirlingParams,
};
use crate::error::{invalid, Result};
use crate::exact::{big, binomial, factorial, int, Rational};
use crate::poly::RationalPolynomial;
use num_traits::{One, Zero};

/// `(1 - u)^e` as a polynomial in `u`.
fn one_minus_pow(e: u64) -> RationalPolynomial {
    RationalPolynomial::from_ints(&[1, -1]).pow(e as u32)
}

/// Coefficients `0..=m` of `p * series`, where `series` holds the first
/// `m + 1` coefficients of a power series.
fn truncated_product(p: &RationalPolynomial, series: &[Rational], m: usize) -> Vec<Rational> {
    (0..=m)
        .map(|j| {
            let mut acc = Rational::zero();
            for (i, c) in p.coeffs().iter().enumerate().take(j + 1) {
                if let Some(s) = series.get(j - i) {
                    acc += c * s;
                }
            }
            acc
        })
        .collect()
}

fn agrees_through(series: &[Rational], p: &RationalPolynomial) -> bool {
    series.iter().enumerate().all(|(j, c)| *c == p.coeff(j))
}

fn stirling(n: u64, l: u64, p: &StirlingParams) -> Result<Rational> {
    gen_stirling(n, l, p, StirlingMethod::Recurrence)
}

/// `r k! h_{k,r}(x) = sum_{l<k} l! S(k, l+1 | 1, r, k-r) r^{l+2} x^{rl} (1-x^r)^{k-1-l}`,
/// checked coefficientwise in `u = x^r`.
pub fn stirling_identity_check(k: u64, r: u64) -> Result<bool> {
    let h = RationalPolynomial::new(h_poly(k, r)?.coefficients);
    let lhs = h.scale(&(int(r as i64) * big(factorial(k))));
    let params = StirlingParams::ints(1, r as i64, (k - r) as i64);
    let mut rhs = RationalPolynomial::zero();
    for l in 0..k {
        let w = stirling(k, l + 1, &params)?
            * big(factorial(l))
            * num_traits::pow(int(r as i64), (l + 2) as usize);
        let term = &RationalPolynomial::monomial(w, l as usize) * &one_minus_pow(k - 1 - l);
        rhs = &rhs + &term;
    }
    Ok(lhs == rhs)
}

/// The product `(1 - u)^k sum_{l<=m} binom(k + rl, k) u^l / (l+1)` has
/// coefficients `h_{k,r,j}` for `j < k` and zero for `k <= j <= m`.
pub fn termination_check(k: u64, r: u64, m: u64) -> Result<bool> {
    if m <= k || r == 0 || r > k {
        return Err(invalid(format!(
            "termination_check needs 1 <= r <= k < M, got k={k} r={r} M={m}"
        )));
    }
    let series: Vec<Rational> = (0..=m)
        .map(|l| big(binomial((k + r * l) as i64, k)) / int(l as i64 + 1))
        .collect();
    let prod = truncated_product(&one_minus_pow(k), &series, m as usize);
    Ok(prod.iter().enumerate().all(|(j, c)| {
        *c == if (j as u64) < k {
            h_coeff(k, r, j as u64)
        } else {
            Rational::zero()
        }
    }))
}

/// `k x h_{k,1}(x) = 1 - (1 - x)^k`.
pub fn cor6_identity(k: u64) -> Result<bool> {
    let h = RationalPolynomial::new(h_poly(k, 1)?.coefficients);
    let lhs = &h * &RationalPolynomial::monomial(int(k as i64), 1);
    let rhs = &RationalPolynomial::one() - &one_minus_pow(k);
    Ok(lhs == rhs)
}

/// For `r = k`: `h_{k,k,j} = binom(k, jk)_{k-1}`, these agree with the
/// `k`-multisection of `((1 - x^k) / (1 - x))^k`, and the series form
/// `(1 - u)^k sum_l binom(k + kl - 1, k - 1) u^l` reproduces the same table.
pub fn cor7_checks(k: u64) -> Result<bool> {
    if k == 0 {
        return Err(invalid("cor7_checks needs k >= 1"));
    }
    let table = h_poly(k, k)?;
    let sbin: Vec<Rational> = (0..k)
        .map(|j| big(s_binomial(k, j * k, k - 1, SBinomialMethod::DeMoivre)))
        .collect();
    if table.coefficients != sbin {
        return Err(crate::Error::Validation(format!(
            "h_{{{k},{k}}} differs from the s-binomial row"
        )));
    }
    let mut block = RationalPolynomial::monomial(-Rational::one(), k as usize);
    block = &block + &RationalPolynomial::one();
    let (q, rem) = block.div_rem(&RationalPolynomial::from_ints(&[1, -1]))?;
    if !rem.is_zero() {
        return Ok(false);
    }
    let full = q.pow(k as u32);
    let section: Vec<Rational> = (0..k).map(|j| full.coeff((j * k) as usize)).collect();
    if section != sbin {
        return Ok(false);
    }
    let m = 2 * k as usize;
    let series: Vec<Rational> = (0..=m as u64)
        .map(|l| {
            let a = big(binomial((k + k * l) as i64, k)) / int(l as i64 + 1);
            debug_assert_eq!(a, big(binomial((k + k * l - 1) as i64, k - 1)));
            a
        })
        .collect();
    let cleared = truncated_product(&one_minus_pow(k), &series, m);
    Ok(agrees_through(&cleared, &RationalPolynomial::new(sbin)))
}

/// Both transform identities in `u = w^r`, cleared by `(1 - u)^{n+1}`:
///
/// `(1-u)^{n+1} sum_l binom(rl + s, n) u^l = (1/n!) sum_l l! S(n, l | 1, r, s) r^l u^l (1-u)^{n-l}`
///
/// `(1-u)^{n+1} sum_l binom(rl + s, n) u^l / (l+1)
///   = (1/n!) sum_{l<n} l! S(n, l+1 | 1, r, s-r) r^{l+1} u^l (1-u)^{n-l}`,
/// the second for `r <= s <= n + r - 1`. Compared through `u^m`.
pub fn stir1_checks(n: u64, r: u64, s: u64, m: u64) -> Result<bool> {
    if n == 0 || r == 0 {
        return Err(invalid("stir1_checks needs n >= 1 and r >= 1"));
    }
    if !(r <= s && s < n + r) {
        return Err(invalid(format!(
            "stir1_checks needs r <= s <= n+r-1, got n={n} r={r} s={s}"
        )));
    }
    if m <= n + 2 {
        return Err(invalid(format!("stir1_checks needs M > n+2, got M={m}")));
    }
    let nf = big(factorial(n));
    let clear = one_minus_pow(n + 1);
    let rr = int(r as i64);

    let plain: Vec<Rational> = (0..=m)
        .map(|l| big(binomial((r * l + s) as i64, n)))
        .collect();
    let p = StirlingParams::ints(1, r as i64, s as i64);
    let mut rhs1 = RationalPolynomial::zero();
    for l in 0..=n {
        let w =
            stirling(n, l, &p)? * big(factorial(l)) * num_traits::pow(rr.clone(), l as usize) / &nf;
        rhs1 = &rhs1 + &(&RationalPolynomial::monomial(w, l as usize) * &one_minus_pow(n - l));
    }
    let first = agrees_through(&truncated_product(&clear, &plain, m as usize), &rhs1);

    let damped: Vec<Rational> = plain
        .iter()
        .enumerate()
        .map(|(l, c)| c / int(l as i64 + 1))
        .collect();
    let q = StirlingParams::ints(1, r as i64, (s - r) as i64);
    let mut rhs2 = RationalPolynomial::zero();
    for l in 0..n {
        let w = stirling(n, l + 1, &q)?
            * big(factorial(l))
            * num_traits::pow(rr.clone(), (l + 1) as usize)
            / &nf;
        rhs2 = &rhs2 + &(&RationalPolynomial::monomial(w, l as usize) * &one_minus_pow(n - l));
    }
    let second = agrees_through(&truncated_product(&clear, &damped, m as usize), &rhs2);
    Ok(first && second)
}

/// `(1-z)^{n+1} n! sum_{l>=1} binom(rl + s, n) z^l = z sum_j A^{(r,s)}_{n,j} z^j`
/// through `z^m`, together with the Stirling middle form over `l >= 0`.
pub fn eulerian_transform_check(n: u64, r: u64, s: u64, m: u64) -> Result<bool> {
    if n == 0 || r == 0 {
        return Err(invalid("eulerian_transform_check needs n >= 1 and r >= 1"));
    }
    if m <= n + 2 {
        return Err(invalid(format!(
            "eulerian_transform_check needs M > n+2, got M={m}"
        )));
    }
    let nf = big(factorial(n));
    let clear = one_minus_pow(n + 1);
    let from_one: Vec<Rational> = (0..=m)
        .map(|l| {
            if l == 0 {
                Rational::zero()
            } else {
                big(binomial((r * l + s) as i64, n)) * &nf
            }
        })
        .collect();
    let eulerian_side = RationalPolynomial::new(
        std::iter::once(Rational::zero())
            .chain((0..=n).map(|j| gen_eulerian(n, j, r as i64, s as i64)))
            .collect(),
    );
    let transform = agrees_through(
        &truncated_product(&clear, &from_one, m as usize),
        &eulerian_side,
    );

    let from_zero: Vec<Rational> = (0..=m)
        .map(|l| big(binomial((r * l + s) as i64, n)) * &nf)
        .collect();
    let p = StirlingParams::ints(1, r as i64, s as i64);
    let mut stirling_side = RationalPolynomial::zero();
    for j in 0..=n {
        let w =
            stirling(n, j, &p)? * big(factorial(j)) * num_traits::pow(int(r as i64), j as usize);
        stirling_side = &stirling_side
            + &(&RationalPolynomial::monomial(w, j as usize) * &one_minus_pow(n - j));
    }
    let middle = agrees_through(
        &truncated_product(&clear, &from_zero, m as usize),
        &stirling_side,
    );
    Ok(transform && middle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_identity_examples() {
        for (k, r) in [(1, 1), (4, 1), (5, 5), (6, 2)] {
            assert!(stirling_identity_check(k, r).unwrap(), "({k},{r})");
        }
    }

    #[test]
    fn termination_examples() {
        assert!(termination_check(2, 1, 30).unwrap());
        assert!(termination_check(4, 3, 20).unwrap());
        assert!(termination_check(2, 1, 2).is_err());
    }

    #[test]
    fn r_one_and_r_equal_k_examples() {
        for k in [1, 4, 12] {
            assert!(cor6_identity(k).unwrap());
        }
        for k in [1, 3, 4] {
            assert!(cor7_checks(k).unwrap());
        }
    }

    #[test]
    fn transform_examples() {
        assert!(stir1_checks(1, 1, 1, 10).unwrap());
        assert!(stir1_checks(3, 2, 3, 20).unwrap());
        assert!(stir1_checks(3, 2, 5, 20).is_err());
        assert!(eulerian_transform_check(1, 1, 0, 12).unwrap());
        assert!(eulerian_transform_check(2, 1, 0, 12).unwrap());
        assert!(eulerian_transform_check(2, 3, 3, 16).unwrap());
    }
}
