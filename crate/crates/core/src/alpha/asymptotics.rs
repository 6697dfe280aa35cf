use super::AlphaAlgebraic;
use crate::error::{invalid, Error, Result};
use crate::exact::{
    big, binomial, int, interval_log, log_point, pow2_neg, rat, Rational, RationalInterval, Sign,
};
use num_traits::{One, Signed, Zero};

/// `g(b) = b - log(1 - b/L) - log L` for `L = log k`, enclosed for a rational
/// `b` given an enclosure of `L`.
fn g_enclosure(
    b: &Rational,
    log_k: &RationalInterval,
    log_log_k: &RationalInterval,
    bits: u32,
) -> Result<RationalInterval> {
    let ratio = log_k.recip()?.scale(b);
    let inner = (-ratio).add_scalar(&Rational::one());
    let l = interval_log(&inner, bits)?;
    Ok((-(l + log_log_k.clone())).add_scalar(b))
}

/// Encloses the solution `b_k` of `b - log(1 - b / log k) = log log k`.
///
/// The left side is increasing with slope at least 1, so whenever the sign at
/// a trial point cannot be decided its distance to the root is bounded by the
/// width of the value enclosure.
pub fn b_solver(k: u64, bits: u32) -> Result<RationalInterval> {
    if k < 3 {
        return Err(invalid(format!("b_solver needs k >= 3, got {k}")));
    }
    let work = bits + 32;
    let log_k = log_point(&int(k as i64), work)?;
    let log_log_k = interval_log(&log_k, work)?;
    let mut lo = Rational::zero();
    let mut hi = log_log_k.lo() * int(2);
    if &hi >= log_k.lo() {
        return Err(Error::Bracket("2 log log k reaches log k".into()));
    }
    let g_hi = g_enclosure(&hi, &log_k, &log_log_k, work)?;
    if g_hi.sign() != Some(Sign::Positive) {
        return Err(Error::Bracket(
            "b_solver upper bracket not certified".into(),
        ));
    }
    let target = pow2_neg(bits);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / int(2);
        let g = g_enclosure(&mid, &log_k, &log_log_k, work)?;
        match g.sign() {
            Some(Sign::Negative) => lo = mid,
            Some(Sign::Positive) => hi = mid,
            _ => {
                let w = g.width().max(g.hi().abs()).max(g.lo().abs());
                lo = lo.max(&mid - &w);
                hi = hi.min(&mid + &w);
                break;
            }
        }
    }
    RationalInterval::new(lo, hi)
}

/// Encloses `|alpha_k - (log k - b_k) / k|`.
pub fn alpha_asymptotic_gap(k: u64, bits: u32) -> Result<RationalInterval> {
    if k < 3 {
        return Err(invalid(format!("asymptotic gap needs k >= 3, got {k}")));
    }
    let alpha = AlphaAlgebraic::new(k, 1)?.refine_bits(bits)?;
    let b = b_solver(k, bits)?;
    let log_k = log_point(&int(k as i64), bits + 32)?;
    let estimate = (log_k - b).scale(&rat(1, k as i64));
    Ok((alpha.enclosure() - &estimate).abs())
}

/// Partial sum of the Lagrange series for `x^N` where `x + x^k = z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeSum {
    pub value: Rational,
    pub last_term_magnitude: Rational,
    /// Term magnitudes strictly increase over the final ten terms.
    pub diverging: bool,
}

/// `sum_{j < terms} (-1)^j N / ((k-1) j + N) binom(kj + N - 1, j) z^{(k-1) j + N}`.
pub fn lagrange_partial_sum(k: u64, n: u64, z: &Rational, terms: u64) -> Result<LagrangeSum> {
    if k < 2 || n < 1 || terms < 1 {
        return Err(invalid(
            "lagrange_partial_sum needs k >= 2, N >= 1, terms >= 1",
        ));
    }
    let mut value = Rational::zero();
    let mut magnitudes = Vec::with_capacity(terms as usize);
    for j in 0..terms {
        let e = (k - 1) * j + n;
        let mag = big(binomial((k * j + n - 1) as i64, j)) * int(n as i64) / int(e as i64)
            * num_traits::pow(z.abs(), e as usize);
        let negative = (j % 2 == 1) != (z.is_negative() && e % 2 == 1);
        if negative {
            value -= &mag;
        } else {
            value += &mag;
        }
        magnitudes.push(mag);
    }
    let tail = &magnitudes[magnitudes.len().saturating_sub(10)..];
    let diverging = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
    Ok(LagrangeSum {
        value,
        last_term_magnitude: magnitudes.pop().unwrap(),
        diverging,
    })
}

/// Encloses the root in `[0, z]` of `x + x^k = z` for `z > 0` by bisection.
pub fn solve_x_plus_xk(k: u64, z: &Rational, width: &Rational) -> Result<RationalInterval> {
    if !z.is_positive() || !width.is_positive() {
        return Err(invalid("solve_x_plus_xk needs z > 0 and width > 0"));
    }
    let f = |x: &Rational| x + num_traits::pow(x.clone(), k as usize) - z;
    let (mut lo, mut hi) = (Rational::zero(), z.clone());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / int(2);
        let v = f(&mid);
        if v.is_zero() {
            return Ok(RationalInterval::point(mid));
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RationalInterval::new(lo, hi)
}
