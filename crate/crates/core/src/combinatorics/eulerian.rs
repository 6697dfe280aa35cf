use crate::exact::{big, binomial, factorial, int, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

fn alternate(acc: &mut BigInt, t: BigInt, odd: bool) {
    if odd {
        *acc -= t;
    } else {
        *acc += t;
    }
}

/// Eulerian number `A_{n,l} = sum_v (-1)^{l-v} binom(n+1, l-v) (v+1)^n`.
pub fn eulerian(n: u64, l: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for v in 0..=l {
        let t = binomial(n as i64 + 1, l - v) * num_traits::pow(BigInt::from(v + 1), n as usize);
        alternate(&mut acc, t, (l - v) % 2 == 1);
    }
    acc
}

/// Generalized Eulerian number
/// `A^{(r,s)}_{n,l} = n! sum_v (-1)^{l-v} binom(n+1, l-v) binom((v+1)r + s, n)`.
pub fn gen_eulerian(n: u64, l: u64, r: i64, s: i64) -> Rational {
    let mut acc = BigInt::zero();
    for v in 0..=l {
        let t = binomial(n as i64 + 1, l - v) * binomial((v as i64 + 1) * r + s, n);
        alternate(&mut acc, t, (l - v) % 2 == 1);
    }
    big(acc * factorial(n))
}

/// Bernoulli number from `B_n = sum_l sum_v (-1)^v/(l+1) binom(l, v) v^n`
/// (so `B_1 = -1/2`).
pub fn bernoulli(n: u64) -> Rational {
    let mut acc = Rational::zero();
    for l in 0..=n {
        let mut inner = BigInt::zero();
        for v in 0..=l {
            let t = binomial(l as i64, v) * num_traits::pow(BigInt::from(v), n as usize);
            alternate(&mut inner, t, v % 2 == 1);
        }
        acc += big(inner) / int(l as i64 + 1);
    }
    acc
}

/// `B^{(r,s)}_n = n! sum_l sum_v (-1)^v/(l+1) binom(l, v) binom(rv + s, n)`.
pub fn gen_bernoulli(n: u64, r: i64, s: i64) -> Rational {
    let mut acc = Rational::zero();
    for l in 0..=n {
        let mut inner = BigInt::zero();
        for v in 0..=l {
            let t = binomial(l as i64, v) * binomial(r * v as i64 + s, n);
            alternate(&mut inner, t, v % 2 == 1);
        }
        acc += big(inner) / int(l as i64 + 1);
    }
    acc * big(factorial(n))
}

/// `|A^{(r,0)}_{n,l} / r^n - A_{n,l}|`, which tends to 0 as `r` grows.
pub fn eulerian_limit_gap(n: u64, l: u64, r: u64) -> Rational {
    let scaled = gen_eulerian(n, l, r as i64, 0) / num_traits::pow(int(r as i64), n as usize);
    (scaled - big(eulerian(n, l))).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(3, 1), BigInt::from(4));
        for n in 0..8 {
            assert_eq!(eulerian(n, 0), BigInt::from(1));
        }
        // rows sum to n!
        for n in 1..8u64 {
            let total: BigInt = (0..n).map(|l| eulerian(n, l)).sum();
            assert_eq!(total, factorial(n));
        }
        assert_eq!(gen_eulerian(1, 1, 1, 0), int(0));
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        // sum_{j<=n} binom(n+1, j) B_j = 0 for n >= 1
        for n in 1..10u64 {
            let s: Rational = (0..=n)
                .map(|j| big(binomial(n as i64 + 1, j)) * bernoulli(j))
                .sum();
            assert!(s.is_zero(), "n={n}");
        }
    }

    #[test]
    fn generalized_bernoulli_limit() {
        // B^{(r,0)}_n / r^n approaches B_n
        let gap =
            |r: i64| (gen_bernoulli(3, r, 0) / num_traits::pow(int(r), 3) - bernoulli(3)).abs();
        assert!(gap(1000) < gap(100) && gap(100) < gap(10));
    }

    #[test]
    fn eulerian_gap_shrinks() {
        let g: Vec<_> = [2, 4, 8, 16, 32, 64]
            .iter()
            .map(|&r| eulerian_limit_gap(2, 1, r))
            .collect();
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert!(eulerian_limit_gap(3, 1, 10_000) < rat(1, 1000));
    }
}
