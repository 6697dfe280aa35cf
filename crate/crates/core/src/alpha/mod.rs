//! The constant `alpha_{k/r}`: the unique root in `(0, 1)` of
//! `t^r (1 + t)^{k-r} = 1`, kept as an isolating interval that can be refined
//! on demand.

mod asymptotics;

pub use asymptotics::{
    alpha_asymptotic_gap, b_solver, lagrange_partial_sum, solve_x_plus_xk, LagrangeSum,
};

use crate::error::{invalid, Error, Result};
use crate::exact::{floor_to_bits, log_point, pow2_neg, rat, Rational, RationalInterval, Sign};
use crate::poly::RationalPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

/// Above this `k` the sign of the defining polynomial is decided through
/// interval logarithms instead of exact integer powers.
const EXACT_SIGN_MAX_K: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaAlgebraic {
    k: u64,
    r: u64,
    enclosure: RationalInterval,
}

impl AlphaAlgebraic {
    /// Builds the bracket `(r/k, 1)` for the exponent `k/r`, reduced to lowest
    /// terms, and checks the sign change of the defining polynomial across it.
    pub fn new(k: u64, r: u64) -> Result<Self> {
        if !(k > r && r >= 1) {
            return Err(invalid(format!("alpha needs k > r >= 1, got k={k} r={r}")));
        }
        let g = k.gcd(&r);
        let (k, r) = (k / g, r / g);
        let lo = rat(r as i64, k as i64);
        let hi = Rational::one();
        let a = AlphaAlgebraic {
            k,
            r,
            enclosure: RationalInterval::new(lo.clone(), hi.clone())?,
        };
        if a.sign_at(&lo)? != Sign::Negative || a.sign_at(&hi)? != Sign::Positive {
            return Err(Error::Bracket(format!(
                "no sign change of A(t) on (r/k, 1) for {k}/{r}"
            )));
        }
        Ok(a)
    }

    /// Reduced numerator of the exponent.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Reduced denominator of the exponent.
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn exponent(&self) -> Rational {
        rat(self.k as i64, self.r as i64)
    }

    pub fn enclosure(&self) -> &RationalInterval {
        &self.enclosure
    }

    pub fn width(&self) -> Rational {
        self.enclosure.width()
    }

    /// `A(t) = t^r (1 + t)^{k-r} - 1`. Its degree is `k`, so this is only
    /// materialized on request.
    pub fn defining(&self) -> RationalPolynomial {
        let t_r = RationalPolynomial::monomial(Rational::one(), self.r as usize);
        let one_plus = RationalPolynomial::from_ints(&[1, 1]).pow((self.k - self.r) as u32);
        &(&t_r * &one_plus) - &RationalPolynomial::one()
    }

    /// Sign of `A(t)` for rational `t > 0`.
    pub fn sign_at(&self, t: &Rational) -> Result<Sign> {
        if !t.is_positive() {
            return Err(invalid("alpha sign test needs t > 0"));
        }
        if self.k <= EXACT_SIGN_MAX_K {
            Ok(self.sign_exact(t))
        } else {
            self.sign_by_logs(t)
        }
    }

    /// Compares `p^r (q + p)^{k-r}` with `q^k` for `t = p/q`.
    fn sign_exact(&self, t: &Rational) -> Sign {
        let (p, q) = (t.numer(), t.denom());
        let s = (self.k - self.r) as usize;
        let lhs: BigInt = num_traits::pow(p.clone(), self.r as usize) * num_traits::pow(q + p, s);
        let rhs: BigInt = num_traits::pow(q.clone(), self.k as usize);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    /// Sign of `r log t + (k - r) log(1 + t)` with escalating precision.
    fn sign_by_logs(&self, t: &Rational) -> Result<Sign> {
        let s = rat((self.k - self.r) as i64, 1);
        let r = rat(self.r as i64, 1);
        let mut bits = 64 + (64 - self.k.leading_zeros());
        while bits <= 1 << 14 {
            let v =
                log_point(t, bits)?.scale(&r) + log_point(&(t + Rational::one()), bits)?.scale(&s);
            match v.sign() {
                Some(Sign::Zero) | None => bits *= 2,
                Some(sign) => return Ok(sign),
            }
        }
        Err(Error::Inconclusive(format!(
            "sign of A(t) undecided at t={t}"
        )))
    }

    /// Bisection until the enclosure width is at most `target`. A target at or
    /// above the current width returns the enclosure unchanged.
    pub fn refine(&self, target: &Rational) -> Result<Self> {
        if !target.is_positive() {
            return Err(invalid("refinement width must be positive"));
        }
        let (mut lo, mut hi) = self.enclosure.clone().into_bounds();
        while &(&hi - &lo) > target {
            let mid = bisection_point(&lo, &hi);
            match self.sign_at(&mid)? {
                Sign::Negative => lo = mid,
                Sign::Positive => hi = mid,
                Sign::Zero => {
                    lo = mid.clone();
                    hi = mid;
                }
            }
        }
        Ok(AlphaAlgebraic {
            k: self.k,
            r: self.r,
            enclosure: RationalInterval::new(lo, hi)?,
        })
    }

    /// Refines to width at most `2^-bits`.
    pub fn refine_bits(&self, bits: u32) -> Result<Self> {
        self.refine(&pow2_neg(bits))
    }

    /// Interval value of `alpha^r (1 + alpha)^{k-r}` over the enclosure.
    pub fn functional_value(&self) -> RationalInterval {
        let a = &self.enclosure;
        a.pow(self.r as u32) * a.add_scalar(&Rational::one()).pow((self.k - self.r) as u32)
    }
}

/// A short dyadic point strictly inside `(lo, hi)` near the middle, keeping
/// denominators small during long bisections.
fn bisection_point(lo: &Rational, hi: &Rational) -> Rational {
    let mid = (lo + hi) / rat(2, 1);
    let w = hi - lo;
    // enough bits to land within a quarter-width of the midpoint
    let bits = (w.denom().bits() as i64 - w.numer().bits() as i64 + 3).max(1) as u32;
    let m = floor_to_bits(&mid, bits);
    if &m > lo && &m < hi {
        m
    } else {
        mid
    }
}

/// Enclosure of `(1 / (1 + alpha))^{1/r}`, the interior equality point, with
/// width about `2^-bits`.
pub fn x_equality_point(a: &AlphaAlgebraic, bits: u32) -> Result<RationalInterval> {
    let a = a.refine_bits(bits + 8)?;
    let one = Rational::one();
    let y = a.enclosure().add_scalar(&one).recip()?;
    let r = a.r() as usize;
    if r == 1 {
        return Ok(y);
    }
    // t^r is increasing on (0, 1); bisect for the r-th roots of both ends
    let root = |target: &Rational, upper: bool| -> Rational {
        let (mut lo, mut hi) = (Rational::from_integer(0.into()), one.clone());
        let eps = pow2_neg(bits + 8);
        while &hi - &lo > eps {
            let mid = bisection_point(&lo, &hi);
            if &num_traits::pow(mid.clone(), r) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if upper {
            hi
        } else {
            lo
        }
    };
    RationalInterval::new(root(y.lo(), false), root(y.hi(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, parse_rational_or_decimal};

    fn dec(s: &str) -> Rational {
        parse_rational_or_decimal(s).unwrap()
    }

    #[test]
    fn construction_and_reduction() {
        let a = AlphaAlgebraic::new(2, 1).unwrap();
        assert_eq!(a.defining(), RationalPolynomial::from_ints(&[-1, 1, 1]));
        let b = AlphaAlgebraic::new(6, 4).unwrap();
        assert_eq!((b.k(), b.r()), (3, 2));
        assert_eq!(b.defining(), RationalPolynomial::from_ints(&[-1, 0, 1, 1]));
        assert!(AlphaAlgebraic::new(3, 3).is_err());
        assert!(AlphaAlgebraic::new(2, 0).is_err());
    }

    #[test]
    fn golden_ratio() {
        let a = AlphaAlgebraic::new(2, 1)
            .unwrap()
            .refine(&rat(1, 1_000_000_000_000))
            .unwrap();
        assert!(a.width() <= rat(1, 1_000_000_000_000));
        assert!(a.enclosure().contains(&dec("0.6180339887498948")));
        let x = x_equality_point(&a, 60).unwrap();
        assert!(x.lo() < &dec("0.618033988749895") && x.hi() > &dec("0.618033988749894"));
    }

    #[test]
    fn three_halves() {
        let a = AlphaAlgebraic::new(3, 2)
            .unwrap()
            .refine(&dec("1e-6"))
            .unwrap();
        let e = a.enclosure();
        assert!(e.lo() < &dec("0.7548777") && e.hi() > &dec("0.7548776"));
        let x = x_equality_point(&a, 40).unwrap();
        // alpha^2 (1 + alpha) = 1 makes the equality point equal to alpha itself
        assert!(x.lo() < &dec("0.75487766625") && x.hi() > &dec("0.75487766624"));
        assert!(x.width() < pow2_neg(35));
    }

    #[test]
    fn refinement_does_not_widen() {
        let a = AlphaAlgebraic::new(5, 2)
            .unwrap()
            .refine(&rat(1, 1000))
            .unwrap();
        assert_eq!(a.refine(&int(1)).unwrap(), a);
        let b = a.refine(&rat(1, 1_000_000)).unwrap();
        assert!(a.enclosure().contains_interval(b.enclosure()));
    }

    #[test]
    fn functional_equation_encloses_one() {
        for (k, r) in [(2, 1), (3, 2), (7, 3), (11, 10)] {
            let a = AlphaAlgebraic::new(k, r).unwrap().refine_bits(50).unwrap();
            assert!(a.functional_value().contains(&int(1)), "{k}/{r}");
        }
    }

    #[test]
    fn log_sign_path_agrees_with_exact() {
        let a = AlphaAlgebraic::new(20, 3).unwrap();
        for t in [rat(1, 10), rat(1, 4), rat(3, 10), rat(1, 2), rat(9, 10)] {
            assert_eq!(a.sign_by_logs(&t).unwrap(), a.sign_exact(&t), "t={t}");
        }
        let big = AlphaAlgebraic::new(1000, 1)
            .unwrap()
            .refine_bits(40)
            .unwrap();
        assert!(big.functional_value().contains(&int(1)));
    }
}
