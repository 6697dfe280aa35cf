use super::RationalPolynomial;
use crate::error::{Error, Result};
use crate::exact::{parse_frac, to_frac_string, Rational, RationalInterval};
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Neg, Sub};

/// The number `a + b alpha` for a fixed but only approximately known `alpha`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlphaLinear {
    pub a: Rational,
    pub b: Rational,
}

impl AlphaLinear {
    pub fn new(a: Rational, b: Rational) -> Self {
        AlphaLinear { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn eval(&self, alpha: &Rational) -> Rational {
        &self.a + &self.b * alpha
    }

    /// Encloses `a + b alpha` for every `alpha` in the given interval.
    pub fn eval_interval(&self, alpha: &RationalInterval) -> RationalInterval {
        alpha.scale(&self.b).add_scalar(&self.a)
    }
}

/// Polynomial `A(x) + alpha B(x)` stored as its two rational components.
/// Products of two alpha parts never arise, so the space is closed under
/// addition and multiplication by rational polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlphaLinearPolynomial {
    a: RationalPolynomial,
    b: RationalPolynomial,
}

impl AlphaLinearPolynomial {
    pub fn new(a: RationalPolynomial, b: RationalPolynomial) -> Self {
        AlphaLinearPolynomial { a, b }
    }

    pub fn from_pairs(pairs: Vec<(Rational, Rational)>) -> Self {
        let (a, b): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Self::new(RationalPolynomial::new(a), RationalPolynomial::new(b))
    }

    /// Constant (alpha-free) component.
    pub fn constant_part(&self) -> &RationalPolynomial {
        &self.a
    }

    /// Component multiplying alpha.
    pub fn alpha_part(&self) -> &RationalPolynomial {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.a.degree().max(self.b.degree())
    }

    pub fn coeff(&self, i: usize) -> AlphaLinear {
        AlphaLinear::new(self.a.coeff(i), self.b.coeff(i))
    }

    /// Coefficient pairs through the degree, constant term first.
    pub fn pairs(&self) -> Vec<AlphaLinear> {
        match self.degree() {
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
            None => Vec::new(),
        }
    }

    pub fn mul_rational(&self, p: &RationalPolynomial) -> Self {
        Self::new(&self.a * p, &self.b * p)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.a.scale(c), self.b.scale(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.a.derivative(), self.b.derivative())
    }

    /// Substitutes the rational `q` for alpha.
    pub fn specialize(&self, q: &Rational) -> RationalPolynomial {
        &self.a + &self.b.scale(q)
    }

    pub fn eval(&self, x: &Rational) -> AlphaLinear {
        AlphaLinear::new(self.a.eval(x), self.b.eval(x))
    }

    /// Encloses the value at `x` for every alpha in the enclosure.
    pub fn eval_interval(
        &self,
        x: &RationalInterval,
        alpha: &RationalInterval,
    ) -> RationalInterval {
        &self.a.eval_interval(x) + &(&self.b.eval_interval(x) * alpha)
    }

    pub fn mobius_reversal(&self, d: usize) -> Result<Self> {
        Ok(Self::new(
            self.a.mobius_reversal(d)?,
            self.b.mobius_reversal(d)?,
        ))
    }

    pub fn inverse_mobius_reversal(&self, d: usize) -> Result<Self> {
        Ok(Self::new(
            self.a.inverse_mobius_reversal(d)?,
            self.b.inverse_mobius_reversal(d)?,
        ))
    }

    /// Componentwise Euclidean division by a rational divisor.
    pub fn div_rem(&self, divisor: &RationalPolynomial) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (qa, ra) = self.a.div_rem(divisor)?;
        let (qb, rb) = self.b.div_rem(divisor)?;
        Ok((Self::new(qa, qb), Self::new(ra, rb)))
    }
}

impl Add for &AlphaLinearPolynomial {
    type Output = AlphaLinearPolynomial;
    fn add(self, rhs: &AlphaLinearPolynomial) -> AlphaLinearPolynomial {
        AlphaLinearPolynomial::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &AlphaLinearPolynomial {
    type Output = AlphaLinearPolynomial;
    fn sub(self, rhs: &AlphaLinearPolynomial) -> AlphaLinearPolynomial {
        AlphaLinearPolynomial::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &AlphaLinearPolynomial {
    type Output = AlphaLinearPolynomial;
    fn neg(self) -> AlphaLinearPolynomial {
        AlphaLinearPolynomial::new(-&self.a, -&self.b)
    }
}

impl Serialize for AlphaLinearPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[String; 2]> = self
            .pairs()
            .iter()
            .map(|c| [to_frac_string(&c.a), to_frac_string(&c.b)])
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlphaLinearPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<[String; 2]>::deserialize(d)?;
        let pairs = rows
            .iter()
            .map(|[a, b]| Ok((parse_frac(a)?, parse_frac(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Self::from_pairs(pairs))
    }
}
