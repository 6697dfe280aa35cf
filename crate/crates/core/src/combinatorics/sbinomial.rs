use crate::exact::binomial;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SBinomialMethod {
    GeneratingFunction,
    DeMoivre,
}

/// All coefficients of `(1 + x + ... + x^s)^k`.
pub fn s_binomial_row(k: u64, s: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); row.len() + s as usize];
        // multiply by the block 1 + ... + x^s using a sliding window sum
        let mut window = BigInt::zero();
        for (i, slot) in next.iter_mut().enumerate() {
            if i < row.len() {
                window += &row[i];
            }
            if i > s as usize && i - s as usize - 1 < row.len() {
                window -= &row[i - s as usize - 1];
            }
            *slot = window.clone();
        }
        row = next;
    }
    row
}

/// The `s`-binomial coefficient `binom(k, l)_s`, the coefficient of `x^l` in
/// `(1 + x + ... + x^s)^k`.
pub fn s_binomial(k: u64, l: u64, s: u64, method: SBinomialMethod) -> BigInt {
    if l > k * s {
        return BigInt::zero();
    }
    match method {
        SBinomialMethod::GeneratingFunction => s_binomial_row(k, s).swap_remove(l as usize),
        SBinomialMethod::DeMoivre => {
            if k == 0 {
                return if l == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
            }
            let mut acc = BigInt::zero();
            let mut j = 0;
            while j * (s + 1) <= l {
                let t = binomial(k as i64, j) * binomial((l - j * (s + 1) + k - 1) as i64, k - 1);
                if j % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
                j += 1;
            }
            acc
        }
    }
}
