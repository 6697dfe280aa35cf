//! Three expansions of the `(k+1)`-st derivative of `x^{k-r} H(x^r)`, their
//! exact cross-checks, and certified evaluation of the entropy gap
//! `f(x) = alpha H(x^k) - x^{k-r} H(x^r)`.

mod gap;
mod identities;

pub use gap::{
    equality_point_system_check, f_deriv_eval, f_eval, inequality_scan, multiplicity_at_zero_check,
    GapFunction, ScanReport,
};
pub use identities::{
    cor6_identity, cor7_checks, eulerian_transform_check, stir1_checks, stirling_identity_check,
    termination_check,
};

use crate::combinatorics::{gen_stirling, h_poly, StirlingMethod, StirlingParams};
use crate::error::{invalid, Error, Result};
use crate::exact::{
    big, binomial, ceil_to_bits, factorial, floor_to_bits, int, log_point, pow2_neg,
    to_frac_string, Rational, RationalInterval,
};
use crate::poly::RationalPolynomial;
use num_traits::{One, Signed, Zero};

fn check_unit_open(x: &Rational) -> Result<()> {
    if !x.is_positive() || *x >= Rational::one() {
        return Err(Error::Domain(format!("x must lie in (0, 1), got {x}")));
    }
    Ok(())
}

fn check_kr(k: u64, r: u64) -> Result<()> {
    if !(1 <= r && r <= k) {
        return Err(invalid(format!("need k >= r >= 1, got k={k} r={r}")));
    }
    Ok(())
}

/// Default series truncation `max(4k, 40)`.
pub fn default_truncation(k: u64) -> u64 {
    (4 * k).max(40)
}

/// The rational and Stirling-basis data of the derivative for one `(k, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeForms {
    pub k: u64,
    pub r: u64,
    pub series_truncation: u64,
    /// `-r k! h_{k,r}(x)`, to be divided by `x (1 - x^r)^k`.
    pub rational_numerator: RationalPolynomial,
    /// `(l, l! S(k, l+1 | 1, r, k-r) r^{l+2})` for `l = 0..k-1`.
    pub stirling_weights: Vec<(u64, Rational)>,
}

impl DerivativeForms {
    pub fn new(k: u64, r: u64) -> Result<Self> {
        check_kr(k, r)?;
        let h = h_poly(k, r)?;
        let scale = -(int(r as i64) * big(factorial(k)));
        let rational_numerator = RationalPolynomial::new(h.coefficients)
            .substitute_power(r as usize)
            .scale(&scale);
        let params = StirlingParams::ints(1, r as i64, (k - r) as i64);
        let stirling_weights = (0..k)
            .map(|l| {
                let s = gen_stirling(k, l + 1, &params, StirlingMethod::Recurrence)?;
                Ok((
                    l,
                    s * big(factorial(l)) * num_traits::pow(int(r as i64), (l + 2) as usize),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(DerivativeForms {
            k,
            r,
            series_truncation: default_truncation(k),
            rational_numerator,
            stirling_weights,
        })
    }

    /// Value of the Stirling-basis form
    /// `-sum_l w_l x^{rl-1} / (1 - x^r)^{l+1}` at a rational point.
    pub fn stirling_value(&self, x: &Rational) -> Result<Rational> {
        check_unit_open(x)?;
        let u = num_traits::pow(x.clone(), self.r as usize);
        let one_minus = Rational::one() - &u;
        let mut acc = Rational::zero();
        for (l, w) in &self.stirling_weights {
            acc += w * num_traits::pow(u.clone(), *l as usize)
                / num_traits::pow(one_minus.clone(), (*l + 1) as usize);
        }
        Ok(-acc / x)
    }
}

/// `binom(k + r l, k) / (l + 1)`, the series coefficient of `x^{rl - 1}`
/// before the `-r k!` factor.
fn series_coeff(k: u64, r: u64, l: u64) -> Rational {
    big(binomial((k + r * l) as i64, k)) / int(l as i64 + 1)
}

/// Encloses the derivative by the series
/// `-r k! sum_l binom(k + rl, k) x^{rl-1} / (l+1)` truncated after `l = m`,
/// with the tail bounded geometrically by the term ratio at `m`.
pub fn deriv_series(k: u64, r: u64, x: &Rational, m: u64) -> Result<RationalInterval> {
    check_kr(k, r)?;
    check_unit_open(x)?;
    let xr = num_traits::pow(x.clone(), r as usize);
    let mut partial = Rational::zero();
    let mut power = x.recip();
    let mut last = Rational::zero();
    for l in 0..=m {
        last = series_coeff(k, r, l) * &power;
        partial += &last;
        power *= &xr;
    }
    // the (l+1)/(l+2) factor cancels against the i = r factor of the binomial
    // ratio, so the ratio is nonincreasing in l when k >= r
    let q = &xr * series_coeff(k, r, m + 1) / series_coeff(k, r, m);
    if q >= Rational::one() {
        return Err(Error::TruncationTooSmall {
            ratio: to_frac_string(&q),
        });
    }
    let tail = &last * &q / (Rational::one() - &q);
    let c = int(r as i64) * big(factorial(k));
    RationalInterval::new(-(&c * (&partial + tail)), -(c * partial))
}

/// [`deriv_series`] with the truncation doubled from the default until the
/// enclosure width is at most `width`.
pub fn deriv_series_to_width(
    k: u64,
    r: u64,
    x: &Rational,
    width: &Rational,
) -> Result<(RationalInterval, u64)> {
    let mut m = default_truncation(k);
    loop {
        match deriv_series(k, r, x, m) {
            Ok(e) if &e.width() <= width => return Ok((e, m)),
            Ok(_) | Err(Error::TruncationTooSmall { .. }) => {}
            Err(e) => return Err(e),
        }
        if m > 1 << 20 {
            return Err(Error::Inconclusive(
                "series truncation limit reached".into(),
            ));
        }
        m *= 2;
    }
}

/// `-r k! h_{k,r}(x) / (x (1 - x^r)^k)`, exactly.
pub fn deriv_rational(k: u64, r: u64, x: &Rational) -> Result<Rational> {
    check_kr(k, r)?;
    check_unit_open(x)?;
    let h = h_poly(k, r)?;
    let u = num_traits::pow(x.clone(), r as usize);
    let hx = RationalPolynomial::new(h.coefficients).eval(&u);
    let den = x * num_traits::pow(Rational::one() - u, k as usize);
    Ok(-(int(r as i64) * big(factorial(k))) * hx / den)
}

/// Encloses `x^{k-r} H(x^r)` through
/// `-r x^k log x + x^k - sum_{l>=1} x^{k+rl} / (l (l+1))`.
pub fn fund_series_eval(k: u64, r: u64, x: &Rational, bits: u32) -> Result<RationalInterval> {
    check_kr(k, r)?;
    check_unit_open(x)?;
    let w = bits + 16;
    let xk = num_traits::pow(x.clone(), k as usize);
    let xr = num_traits::pow(x.clone(), r as usize);
    let one_minus = Rational::one() - &xr;
    let target = pow2_neg(bits + 4);
    // powers and partial sums kept as outward-rounded dyadic bounds
    let (mut p_lo, mut p_hi) = (
        floor_to_bits(&(&xk * &xr), w),
        ceil_to_bits(&(&xk * &xr), w),
    );
    let (mut s_lo, mut s_hi) = (Rational::zero(), Rational::zero());
    let mut l: u64 = 1;
    loop {
        let d = int((l * (l + 1)) as i64);
        s_lo += floor_to_bits(&(&p_lo / &d), w);
        s_hi += ceil_to_bits(&(&p_hi / &d), w);
        p_lo = floor_to_bits(&(&p_lo * &xr), w);
        p_hi = ceil_to_bits(&(&p_hi * &xr), w);
        // bound on sum_{j > l} x^{k+rj} / (j (j+1))
        let tail = &p_hi / (&d * &one_minus);
        if tail <= target || l >= 1 << 24 {
            let head = log_point(x, bits + 8)?
                .scale(&-(int(r as i64) * &xk))
                .add_scalar(&xk);
            return RationalInterval::new(head.lo() - s_hi - tail, head.hi() - s_lo);
        }
        l += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{interval_entropy, parse_rational_or_decimal, rat};

    #[test]
    fn series_examples() {
        let e = deriv_series(2, 1, &rat(1, 2), 80).unwrap();
        assert!(e.contains(&int(-12)));
        assert!(e.hi().is_negative());
        for (k, r, x) in [(3, 2, rat(1, 3)), (4, 3, rat(1, 5))] {
            let exact = deriv_rational(k, r, &x).unwrap();
            let (e, _) = deriv_series_to_width(k, r, &x, &rat(1, 1_000_000_000)).unwrap();
            assert!(e.contains(&exact));
        }
        assert!(matches!(
            deriv_series(3, 1, &rat(99, 100), 2),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn rational_examples() {
        assert_eq!(deriv_rational(2, 1, &rat(1, 2)).unwrap(), int(-12));
        let expected = int(-18) * (int(1) + rat(7, 8) + rat(1, 64))
            / (rat(1, 2) * num_traits::pow(rat(7, 8), 3));
        assert_eq!(deriv_rational(3, 3, &rat(1, 2)).unwrap(), expected);
        assert!(deriv_rational(2, 1, &int(1)).is_err());
    }

    #[test]
    fn stirling_form_matches_rational_form() {
        for (k, r) in [(1, 1), (4, 1), (5, 5), (6, 4)] {
            let forms = DerivativeForms::new(k, r).unwrap();
            for x in [rat(1, 10), rat(1, 2), rat(9, 10)] {
                assert_eq!(
                    forms.stirling_value(&x).unwrap(),
                    deriv_rational(k, r, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn fundamental_series_agrees_with_entropy() {
        let x = rat(1, 2);
        let direct = interval_entropy(&RationalInterval::point(rat(1, 4)), 128)
            .unwrap()
            .scale(&x);
        let series = fund_series_eval(3, 2, &x, 128).unwrap();
        assert!(series.overlaps(&direct));
        assert!(series.width() < parse_rational_or_decimal("1e-20").unwrap());
        let ln2 = fund_series_eval(1, 1, &rat(1, 2), 64).unwrap();
        assert!(ln2.lo() < &parse_rational_or_decimal("0.69314718056").unwrap());
        assert!(ln2.hi() > &parse_rational_or_decimal("0.69314718055").unwrap());
        for x in [rat(1, 1024), rat(1023, 1024)] {
            let v = fund_series_eval(3, 2, &x, 64).unwrap();
            assert!(v.lo().is_positive() && v.hi() < &rat(1, 10));
        }
    }
}
