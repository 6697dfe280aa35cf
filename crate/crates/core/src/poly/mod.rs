//! Dense exact polynomials over the rationals and over the rank-2 space
//! `{a + b alpha}`, with the reversal transform used for root counting.

mod alpha_linear;
mod roots;

pub use alpha_linear::{AlphaLinear, AlphaLinearPolynomial};
pub use roots::{descartes_sign_changes, isolate_unit_interval_roots, signs_of};

use crate::error::{invalid, Error, Result};
use crate::exact::{int, serde_frac, Rational, RationalInterval};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial with exact rational coefficients, constant term first. The
/// coefficient vector never ends in a zero, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c x^d`
    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in interval arithmetic; encloses `{p(t) : t in x}`.
    pub fn eval_interval(&self, x: &RationalInterval) -> RationalInterval {
        if x.is_point() {
            return RationalInterval::point(self.eval(x.lo()));
        }
        let mut acc = RationalInterval::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&acc * x).add_scalar(c);
        }
        acc
    }

    /// `p(x^r)`.
    pub fn substitute_power(&self, r: usize) -> Self {
        if r == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * r + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * r] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `p(a + s x)`.
    pub fn compose_linear(&self, a: &Rational, s: &Rational) -> Self {
        let lin = RationalPolynomial::new(vec![a.clone(), s.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + rem` with `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &RationalPolynomial) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RationalPolynomial) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Square-free part `p / gcd(p, p')`.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) < 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0
    }

    /// `(1 + y)^d p(1 / (1 + y)) = sum_i c_i (1 + y)^{d-i}` for declared degree
    /// `d >= deg p`. Roots of `p` in `(0, 1)` become roots in `(0, inf)`.
    pub fn mobius_reversal(&self, d: usize) -> Result<Self> {
        check_declared(self.degree(), d)?;
        let mut acc: Vec<Rational> = Vec::with_capacity(d + 1);
        for i in 0..=d {
            shift_one_plus_y(&mut acc);
            let c = self.coeff(i);
            match acc.first_mut() {
                Some(a0) => *a0 += c,
                None => acc.push(c),
            }
        }
        Ok(Self::new(acc))
    }

    /// Undoes [`mobius_reversal`](Self::mobius_reversal) with the same declared
    /// degree: `x^d q((1 - x) / x) = sum_j q_j (1 - x)^j x^{d-j}`.
    pub fn inverse_mobius_reversal(&self, d: usize) -> Result<Self> {
        check_declared(self.degree(), d)?;
        let one_minus_x = RationalPolynomial::from_ints(&[1, -1]);
        let mut acc = Self::zero();
        for j in (0..=d).rev() {
            acc = &(&acc * &one_minus_x) + &Self::monomial(self.coeff(j), d - j);
        }
        Ok(acc)
    }
}

fn check_declared(deg: Option<usize>, d: usize) -> Result<()> {
    match deg {
        Some(e) if e > d => Err(invalid(format!(
            "declared degree {d} below actual degree {e}"
        ))),
        _ => Ok(()),
    }
}

/// In-place multiplication of a coefficient vector by `1 + y`.
fn shift_one_plus_y(v: &mut Vec<Rational>) {
    if v.is_empty() {
        return;
    }
    v.push(Rational::zero());
    for i in (1..v.len()).rev() {
        let prev = v[i - 1].clone();
        v[i] += prev;
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_frac::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::new(serde_frac::vec::deserialize(d)?))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $method(self, rhs: RationalPolynomial) -> RationalPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
