//! Exact scalars: rationals, binomials, scaled Pochhammer symbols, rational
//! intervals and certified enclosures of `log` and the binary entropy.

mod interval;
mod log;

pub use interval::RationalInterval;
pub use log::{interval_entropy, interval_log, ln2_enclosure, log_point, MIN_PRECISION_BITS};

use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// reduced). Every arithmetic operation renormalizes.
pub type Rational = BigRational;

/// Sign of an exactly known or certified quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Negative),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Positive),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `2^-bits` as an exact rational.
pub fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient for any integer upper index and non-negative lower
/// index, with `binom(-n, k) = (-1)^k binom(n + k - 1, k)`.
pub fn binomial(n: i64, k: u64) -> BigInt {
    if n < 0 {
        let m = (-n) as u64 + k - 1;
        let b = binomial(m as i64, k);
        return if k.is_odd() { -b } else { b };
    }
    let n = n as u64;
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Checked variant of [`binomial`] taking a signed lower index.
pub fn binomial_checked(n: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(invalid(format!(
            "binomial lower index must be >= 0, got {k}"
        )));
    }
    Ok(binomial(n, k as u64))
}

/// Scaled Pochhammer symbol `(z|step)_n = z (z - step) ... (z - (n-1) step)`,
/// equal to 1 for `n = 0`.
pub fn scaled_pochhammer(z: &Rational, step: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = z.clone();
    for _ in 0..n {
        acc *= &factor;
        factor -= step;
    }
    acc
}

/// Canonical `num/den` rendering; integers keep their `/1`.
pub fn to_frac_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer. Non-canonical input is accepted and
/// reduced.
pub fn parse_frac(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(s.to_string()))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(s.to_string()));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(big(parse_int(s)?)),
    }
}

/// Parses either `num/den` or an exact decimal with optional exponent
/// (`0.75`, `-1.5e-3`, `1E6`).
pub fn parse_rational_or_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains('/') {
        return parse_frac(t);
    }
    let err = || Error::Parse(s.to_string());
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| err())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        big(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Decimal rendering with `digits` fractional digits, rounded to nearest.
/// For display only; exact values travel as `num/den`.
pub fn to_decimal_string(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q.abs() * big(scale.clone());
    let abs = (scaled + rat(1, 2)).floor().to_integer();
    let neg = q.is_negative() && !abs.is_zero();
    let (whole, frac) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = digits
        )
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Largest `m / 2^bits` not exceeding `q`.
pub fn floor_to_bits(q: &Rational, bits: u32) -> Rational {
    let n = (q.numer() << bits).div_floor(q.denom());
    Rational::new(n, BigInt::one() << bits)
}

/// Smallest `m / 2^bits` not below `q`.
pub fn ceil_to_bits(q: &Rational, bits: u32) -> Rational {
    let n = -(-(q.numer() << bits)).div_floor(q.denom());
    Rational::new(n, BigInt::one() << bits)
}

/// Approximate `log2 |q|` from bit lengths; exact up to ±1.
pub(crate) fn approx_log2(q: &Rational) -> i64 {
    q.numer().bits() as i64 - q.denom().bits() as i64
}

/// Serde adapters storing rationals as `num/den` strings.
pub mod serde_frac {
    use super::{parse_frac, to_frac_string, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_frac_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_frac(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&to_frac_string(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_frac(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(binomial(1, 2), BigInt::zero());
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(0, 0), BigInt::one());
        assert!(binomial_checked(4, -1).is_err());
    }

    #[test]
    fn pascal_rule_on_negative_and_positive_indices() {
        for n in -10i64..=10 {
            for k in 1u64..=10 {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(scaled_pochhammer(&int(3), &int(1), 3), int(6));
        assert_eq!(scaled_pochhammer(&rat(7, 3), &int(1), 0), int(1));
        // 1 * (1 - 2) * (1 - 4)
        assert_eq!(scaled_pochhammer(&int(1), &int(2), 3), int(3));
    }

    #[test]
    fn frac_format_round_trip() {
        assert_eq!(to_frac_string(&rat(-4, 6)), "-2/3");
        assert_eq!(to_frac_string(&int(7)), "7/1");
        assert_eq!(parse_frac("-2/3").unwrap(), rat(-2, 3));
        assert_eq!(parse_frac("4/6").unwrap(), rat(2, 3));
        assert!(parse_frac("1/0").is_err());
        assert!(parse_frac("x").is_err());
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(
            parse_rational_or_decimal("1e-6").unwrap(),
            rat(1, 1_000_000)
        );
        assert_eq!(parse_rational_or_decimal("-0.75").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational_or_decimal("2.5E3").unwrap(), int(2500));
        assert_eq!(parse_rational_or_decimal("1/8").unwrap(), rat(1, 8));
        assert!(parse_rational_or_decimal("1.2.3").is_err());
        assert!(parse_rational_or_decimal("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(to_decimal_string(&rat(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal_string(&int(3), 0), "3");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = rat(1, 3);
        let lo = floor_to_bits(&q, 10);
        let hi = ceil_to_bits(&q, 10);
        assert!(lo <= q && q <= hi);
        assert_eq!(&hi - &lo, pow2_neg(10));
    }
}
