use super::{ceil_to_bits, floor_to_bits, to_decimal_string, to_frac_string, Rational, Sign};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Arithmetic is exact; the only source of widening is explicit outward
/// rounding via [`RationalInterval::round_outward`], so every operation keeps
/// the true value of the enclosed computation inside the result.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints out of order: [{}, {}]",
                to_frac_string(&lo),
                to_frac_string(&hi)
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    /// Builds an interval from two endpoints in either order.
    pub fn hull_of(a: Rational, b: Rational) -> Self {
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn point(q: Rational) -> Self {
        RationalInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    /// Certified sign, or `None` when the interval straddles zero without
    /// being the single point 0.
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Positive)
        } else if self.hi.is_negative() {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn abs(&self) -> RationalInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            RationalInterval {
                lo: Rational::zero(),
                hi: self.hi.clone().max(-&self.lo),
            }
        } else if self.hi.is_positive() || self.hi.is_zero() && !self.lo.is_negative() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalInterval {
        Self::hull_of(&self.lo * c, &self.hi * c)
    }

    pub fn add_scalar(&self, c: &Rational) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(&self) -> Result<RationalInterval> {
        if self.contains_zero() {
            return Err(Error::Domain(
                "reciprocal of an interval containing 0".into(),
            ));
        }
        Ok(RationalInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &RationalInterval) -> Result<RationalInterval> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, n: u32) -> RationalInterval {
        if n == 0 {
            return Self::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), n as usize);
        let b = num_traits::pow(self.hi.clone(), n as usize);
        // only an even power over an interval straddling zero bottoms out at 0
        if n % 2 == 1 || !self.lo.is_negative() || !self.hi.is_positive() {
            Self::hull_of(a, b)
        } else {
            RationalInterval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        }
    }

    /// Widens both endpoints to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> RationalInterval {
        RationalInterval {
            lo: floor_to_bits(&self.lo, bits),
            hi: ceil_to_bits(&self.hi, bits),
        }
    }

    /// `[lo, hi]` rendered as `num/den` strings.
    pub fn to_frac_strings(&self) -> (String, String) {
        (to_frac_string(&self.lo), to_frac_string(&self.hi))
    }

    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            to_decimal_string(&self.lo, digits),
            to_decimal_string(&self.hi, digits),
        )
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            to_frac_string(&self.lo),
            to_frac_string(&self.hi)
        )
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, rhs: &RationalInterval) -> RationalInterval {
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return RationalInterval {
                lo: &self.lo * &rhs.lo,
                hi: &self.hi * &rhs.hi,
            };
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RationalInterval { lo, hi }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalInterval {
            type Output = RationalInterval;
            fn $method(self, rhs: RationalInterval) -> RationalInterval {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalInterval> for RationalInterval {
            type Output = RationalInterval;
            fn $method(self, rhs: &RationalInterval) -> RationalInterval {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn iv(a: Rational, b: Rational) -> RationalInterval {
        RationalInterval::new(a, b).unwrap()
    }

    #[test]
    fn rejects_reversed_endpoints() {
        assert!(RationalInterval::new(int(1), int(0)).is_err());
    }

    #[test]
    fn mixed_sign_products() {
        let a = iv(int(-1), int(2));
        let b = iv(int(-3), int(1));
        assert_eq!(&a * &b, iv(int(-6), int(3)));
        assert_eq!((&a - &b), iv(int(-2), int(5)));
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let a = iv(int(-2), int(1));
        assert_eq!(a.pow(2), iv(int(0), int(4)));
        assert_eq!(a.pow(3), iv(int(-8), int(1)));
    }

    #[test]
    fn signs_and_reciprocals() {
        assert_eq!(iv(rat(1, 3), int(1)).sign(), Some(Sign::Positive));
        assert_eq!(iv(int(-1), int(1)).sign(), None);
        assert_eq!(RationalInterval::zero().sign(), Some(Sign::Zero));
        assert!(iv(int(-1), int(1)).recip().is_err());
        assert_eq!(
            iv(int(2), int(4)).recip().unwrap(),
            iv(rat(1, 4), rat(1, 2))
        );
    }

    #[test]
    fn outward_rounding_contains_original() {
        let a = iv(rat(1, 3), rat(2, 3));
        let r = a.round_outward(8);
        assert!(r.contains_interval(&a));
        assert!(r.width() <= a.width() + rat(2, 256));
    }
}
