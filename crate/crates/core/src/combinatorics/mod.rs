//! Number families behind the entropy derivatives: the entropy polynomial
//! coefficients `h_{k,r,j}`, generalized Stirling and Eulerian numbers,
//! Bernoulli numbers and `s`-binomial coefficients.

mod eulerian;
mod sbinomial;
mod stirling;

pub use eulerian::{bernoulli, eulerian, eulerian_limit_gap, gen_bernoulli, gen_eulerian};
pub use sbinomial::{s_binomial, s_binomial_row, SBinomialMethod};
pub use stirling::{
    classical_stirling2, dobinski_check, gen_stirling, stirling_limit_gap, stirling_row,
    StirlingMethod, StirlingParams,
};

use crate::error::{invalid, Result};
use crate::exact::{big, binomial, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// `h_{k,r,j} = sum_{v=0}^{j} (-1)^{j-v}/(v+1) binom(rv+k, k) binom(k, j-v)`.
///
/// Defined for every `j >= 0`; for `r <= k` it vanishes once `j >= k`.
pub fn h_coeff(k: u64, r: u64, j: u64) -> Rational {
    let mut acc = Rational::zero();
    // binom(k, j-v) vanishes for j - v > k
    let start = j.saturating_sub(k);
    for v in start..=j {
        let term = big(binomial((r * v + k) as i64, k) * binomial(k as i64, j - v))
            / Rational::from_integer((v + 1).into());
        if (j - v).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The `k - j` term companion formula for `h_{k,r,j}`, valid for
/// `1 <= r <= k` and `1 <= j < k`.
pub fn h_coeff_alt(k: u64, r: u64, j: u64) -> Result<Rational> {
    if !(1 <= r && r <= k && 1 <= j && j < k) {
        return Err(invalid(format!(
            "h_coeff_alt needs 1 <= r <= k and 1 <= j < k, got k={k} r={r} j={j}"
        )));
    }
    let sign = |e: u64| {
        if e.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        }
    };
    let mut acc = sign(j + r + 1) * big(binomial(k as i64, j + 1)) / big(binomial(k as i64, r));
    for v in 2..=(k - j) {
        let b = binomial(k as i64, j + v) * binomial(k as i64 - (r * v) as i64, k);
        acc += sign(j + v) * big(b) / Rational::from_integer((v - 1).into());
    }
    Ok(acc)
}

/// Coefficients `h_{k,r,j}` of `h_{k,r}(x) = sum_j h_{k,r,j} x^{rj}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HCoefficientTable {
    pub k: u64,
    pub r: u64,
    #[serde(with = "crate::exact::serde_frac::vec")]
    pub coefficients: Vec<Rational>,
}

impl HCoefficientTable {
    /// Coefficient of `x^{rj}`, zero past the stored table.
    pub fn get(&self, j: usize) -> Rational {
        self.coefficients
            .get(j)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// The full entropy polynomial table `j = 0..k-1` for `1 <= r <= k`.
pub fn h_poly(k: u64, r: u64) -> Result<HCoefficientTable> {
    if !(1 <= r && r <= k) {
        return Err(invalid(format!(
            "h_poly needs 1 <= r <= k (use h_table for r > k), got k={k} r={r}"
        )));
    }
    Ok(h_table(k, r, k as usize))
}

/// The first `len` coefficients `h_{k,r,0..len}` for any `k, r >= 1`.
pub fn h_table(k: u64, r: u64, len: usize) -> HCoefficientTable {
    HCoefficientTable {
        k,
        r,
        coefficients: (0..len as u64).map(|j| h_coeff(k, r, j)).collect(),
    }
}
