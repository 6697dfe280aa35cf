use super::{approx_log2, rat, Rational, RationalInterval};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Mutex;

/// Smallest accepted `precision_bits` for the log and entropy enclosures.
pub const MIN_PRECISION_BITS: u32 = 16;

const GUARD_BITS: u32 = 32;

fn check_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION_BITS {
        return Err(Error::InvalidParameter(format!(
            "precision_bits must be >= {MIN_PRECISION_BITS}, got {bits}"
        )));
    }
    Ok(())
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Fixed-point bounds `(lo, hi)` with `lo <= 2^w atanh(u) <= hi` for
/// `0 <= u <= 1/3`.
fn atanh_fixed(u: &Rational, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!u.is_negative() && *u <= rat(1, 3));
    let scaled = u.numer() << w;
    let u_lo = scaled.div_floor(u.denom());
    let u_hi = ceil_div(&scaled, u.denom());
    let u2_lo: BigInt = (&u_lo * &u_lo) >> w;
    let u2_hi = ceil_div(&(&u_hi * &u_hi), &(BigInt::one() << w));

    let mut p_lo = u_lo;
    let mut p_hi = u_hi;
    let mut s_lo = BigInt::zero();
    let mut s_hi = BigInt::zero();
    let mut n: u64 = 0;
    while p_hi > BigInt::one() {
        let d = BigInt::from(2 * n + 1);
        s_lo += p_lo.div_floor(&d);
        s_hi += ceil_div(&p_hi, &d);
        p_lo = (&p_lo * &u2_lo) >> w;
        p_hi = ceil_div(&(&p_hi * &u2_hi), &(BigInt::one() << w));
        n += 1;
    }
    // remaining terms are bounded by p_hi / (2n+1) / (1 - u^2) <= 9/8 * p_hi
    let d = BigInt::from(8 * (2 * n + 1));
    s_hi += ceil_div(&(&p_hi * 9), &d) + 1;
    (s_lo, s_hi)
}

struct Ln2Cache {
    w: u32,
    lo: BigInt,
    hi: BigInt,
}

static LN2: Mutex<Option<Ln2Cache>> = Mutex::new(None);

/// Fixed-point bounds on `2^w ln 2`, cached at the largest precision seen.
fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    let mut guard = LN2.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.as_ref() {
        if c.w >= w {
            let shift = c.w - w;
            let lo = &c.lo >> shift;
            let hi = ceil_div(&c.hi, &(BigInt::one() << shift));
            return (lo, hi);
        }
    }
    let (lo, hi) = atanh_fixed(&rat(1, 3), w);
    let (lo, hi) = (lo << 1u32, hi << 1u32);
    *guard = Some(Ln2Cache {
        w,
        lo: lo.clone(),
        hi: hi.clone(),
    });
    (lo, hi)
}

/// Enclosure of `ln 2` with width about `2^-bits`.
pub fn ln2_enclosure(bits: u32) -> RationalInterval {
    let w = bits + GUARD_BITS;
    let (lo, hi) = ln2_fixed(w);
    let den = BigInt::one() << w;
    RationalInterval::hull_of(Rational::new(lo, den.clone()), Rational::new(hi, den))
}

/// Bounds on `2^w log m` for a dyadic `m` in roughly `(3/4, 3/2]`.
/// Returns `(lower, upper)`.
fn log_reduced(m: &Rational, w: u32) -> (BigInt, BigInt) {
    let one = Rational::one();
    if *m >= one {
        let u = (m - &one) / (m + &one);
        let (lo, hi) = atanh_fixed(&u, w);
        (lo << 1u32, hi << 1u32)
    } else {
        let u = (&one - m) / (&one + m);
        let (lo, hi) = atanh_fixed(&u, w);
        (-(hi << 1u32), -(lo << 1u32))
    }
}

/// Enclosure of `log q` for a positive rational `q`.
pub fn log_point(q: &Rational, bits: u32) -> Result<RationalInterval> {
    check_precision(bits)?;
    if !q.is_positive() {
        return Err(Error::Domain("log of a non-positive value".into()));
    }
    if q.is_one() {
        return Ok(RationalInterval::zero());
    }
    // q = m * 2^e with m in (3/4, 3/2]
    let mut e = approx_log2(q);
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as u64)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut m = q / pow2(e);
    let (lower, upper) = (rat(3, 4), rat(3, 2));
    while m <= lower {
        m *= Rational::from_integer(2.into());
        e -= 1;
    }
    while m > upper {
        m /= Rational::from_integer(2.into());
        e += 1;
    }

    let e_bits = 64 - e.unsigned_abs().leading_zeros();
    let w = bits + GUARD_BITS + e_bits;
    let m_lo = super::floor_to_bits(&m, w + 4);
    let m_hi = super::ceil_to_bits(&m, w + 4);
    let (lo, _) = log_reduced(&m_lo, w);
    let (_, hi) = log_reduced(&m_hi, w);

    let (l2_lo, l2_hi) = ln2_fixed(w);
    let eb = BigInt::from(e);
    let (lo, hi) = if e >= 0 {
        (lo + &eb * l2_lo, hi + &eb * l2_hi)
    } else {
        (lo + &eb * l2_hi, hi + &eb * l2_lo)
    };
    let den = BigInt::one() << w;
    Ok(RationalInterval::hull_of(
        Rational::new(lo, den.clone()),
        Rational::new(hi, den),
    ))
}

/// Enclosure of `{log t : t in x}` for an interval with positive lower end.
pub fn interval_log(x: &RationalInterval, bits: u32) -> Result<RationalInterval> {
    check_precision(bits)?;
    if !x.lo().is_positive() {
        return Err(Error::Domain(format!(
            "log of interval touching 0 or below: {x}"
        )));
    }
    if x.is_point() {
        return log_point(x.lo(), bits);
    }
    let lo = log_point(x.lo(), bits)?;
    let hi = log_point(x.hi(), bits)?;
    Ok(RationalInterval::hull_of(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of `H(p) = -p log p - (1-p) log(1-p)` at a single point.
fn entropy_point(p: &Rational, bits: u32) -> Result<RationalInterval> {
    let one = Rational::one();
    if p.is_zero() || *p == one {
        return Ok(RationalInterval::zero());
    }
    let q = &one - p;
    let a = log_point(p, bits)?.scale(p);
    let b = log_point(&q, bits)?.scale(&q);
    Ok(-(a + b))
}

/// Enclosure of the binary entropy (natural log) over `x ⊂ [0, 1]`, with
/// `H(0) = H(1) = 0`.
pub fn interval_entropy(x: &RationalInterval, bits: u32) -> Result<RationalInterval> {
    check_precision(bits)?;
    if x.lo().is_negative() || *x.hi() > Rational::one() {
        return Err(Error::Domain(format!(
            "entropy argument outside [0, 1]: {x}"
        )));
    }
    if x.is_point() {
        return entropy_point(x.lo(), bits);
    }
    let half = rat(1, 2);
    // H increases on [0, 1/2] and decreases on [1/2, 1]
    let at_lo = entropy_point(x.lo(), bits)?;
    let at_hi = entropy_point(x.hi(), bits)?;
    let (lo, hi) = if *x.hi() <= half {
        (at_lo.lo().clone(), at_hi.hi().clone())
    } else if *x.lo() >= half {
        (at_hi.lo().clone(), at_lo.hi().clone())
    } else {
        let peak = ln2_enclosure(bits);
        (
            at_lo.lo().clone().min(at_hi.lo().clone()),
            peak.hi().clone(),
        )
    };
    Ok(RationalInterval::hull_of(lo.max(Rational::zero()), hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, parse_rational_or_decimal, pow2_neg};

    fn dec(s: &str) -> Rational {
        parse_rational_or_decimal(s).unwrap()
    }

    const LN2_40: &str = "0.6931471805599453094172321214581765680755";

    #[test]
    fn log_of_one_is_exact_zero() {
        let r = interval_log(&RationalInterval::point(int(1)), 64).unwrap();
        assert!(r.contains(&Rational::zero()));
        assert!(r.width() <= pow2_neg(64));
    }

    #[test]
    fn log_half_matches_reference() {
        let r = interval_log(&RationalInterval::point(rat(1, 2)), 64).unwrap();
        let reference = -dec(LN2_40);
        assert!(r.lo() <= &(&reference + pow2_neg(120)));
        assert!(r.hi() >= &(&reference - pow2_neg(120)));
        assert!(r.width() <= pow2_neg(64));
    }

    #[test]
    fn ln2_at_high_precision() {
        let r = ln2_enclosure(200);
        let reference = dec(LN2_40);
        let slack = pow2_neg(130);
        assert!(r.lo() <= &(&reference + &slack) && r.hi() >= &(&reference - &slack));
        assert!(r.width() <= pow2_neg(200));
    }

    #[test]
    fn log_interval_covers_range() {
        let r = interval_log(&RationalInterval::new(int(2), int(4)).unwrap(), 16).unwrap();
        assert!(r.lo() <= &dec("0.69314718056") && r.hi() >= &dec("1.38629436111"));
    }

    #[test]
    fn log_large_and_tiny_arguments() {
        let big_q = Rational::from_integer(BigInt::from(10).pow(30));
        let r = log_point(&big_q, 80).unwrap();
        // 30 ln 10
        assert!(r.lo() < &dec("69.0775527898214") && r.hi() > &dec("69.0775527898213"));
        let tiny = log_point(&big_q.recip(), 80).unwrap();
        assert_eq!(tiny.lo(), &-r.hi().clone());
    }

    #[test]
    fn log_rejects_bad_input() {
        assert!(interval_log(&RationalInterval::new(int(0), int(1)).unwrap(), 64).is_err());
        assert!(interval_log(&RationalInterval::point(int(2)), 8).is_err());
    }

    #[test]
    fn entropy_reference_values() {
        let zero = interval_entropy(&RationalInterval::zero(), 64).unwrap();
        assert_eq!(zero, RationalInterval::zero());
        let half = interval_entropy(&RationalInterval::point(rat(1, 2)), 64).unwrap();
        assert!(half.lo() < &dec("0.69314718056") && half.hi() > &dec("0.69314718055"));
        let quarter = interval_entropy(&RationalInterval::point(rat(1, 4)), 64).unwrap();
        assert!(quarter.lo() < &dec("0.56233514462") && quarter.hi() > &dec("0.56233514461"));
    }

    #[test]
    fn entropy_over_straddling_interval() {
        let x = RationalInterval::new(rat(1, 3), rat(3, 4)).unwrap();
        let r = interval_entropy(&x, 64).unwrap();
        let at = |p| interval_entropy(&RationalInterval::point(p), 64).unwrap();
        assert!(r.contains_interval(&at(rat(1, 2))));
        assert!(r.contains_interval(&at(rat(3, 4))));
        assert!(r.contains_interval(&at(rat(1, 3))));
        assert!(interval_entropy(&RationalInterval::new(rat(1, 2), int(2)).unwrap(), 64).is_err());
    }

    #[test]
    fn entropy_symmetry_and_precision_monotone() {
        for (n, d) in [(1, 7), (2, 9), (1, 1000), (5, 11)] {
            let x = rat(n, d);
            let a = interval_entropy(&RationalInterval::point(x.clone()), 64).unwrap();
            let b = interval_entropy(&RationalInterval::point(int(1) - x.clone()), 64).unwrap();
            assert!(a.overlaps(&b));
            let mut width = a.width();
            for bits in [128, 256, 512] {
                let w = interval_entropy(&RationalInterval::point(x.clone()), bits)
                    .unwrap()
                    .width();
                assert!(w <= width);
                width = w;
            }
        }
    }
}
