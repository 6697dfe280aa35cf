use super::RationalPolynomial;
use crate::error::{invalid, Result};
use crate::exact::{rat, Rational, RationalInterval, Sign};
use num_traits::{One, Zero};

/// Number of strict sign alternations, skipping zeros.
pub fn descartes_sign_changes(signs: &[Sign]) -> usize {
    let mut last = None;
    let mut changes = 0;
    for &s in signs {
        if s == Sign::Zero {
            continue;
        }
        if last.is_some_and(|l| l != s) {
            changes += 1;
        }
        last = Some(s);
    }
    changes
}

/// Exact signs of the coefficients, constant term first.
pub fn signs_of(p: &RationalPolynomial) -> Vec<Sign> {
    p.coeffs().iter().map(Sign::of).collect()
}

/// Descartes bound for roots of `p` in the open interval `(a, b)`.
fn descartes_on(p: &RationalPolynomial, a: &Rational, b: &Rational) -> usize {
    let local = p.compose_linear(a, &(b - a));
    let d = local.degree().unwrap_or(0);
    let t = local.mobius_reversal(d).expect("declared degree matches");
    descartes_sign_changes(&signs_of(&t))
}

/// A point strictly inside `(a, b)` where `p` is nonzero, close to the middle.
fn split_point(p: &RationalPolynomial, a: &Rational, b: &Rational) -> Rational {
    let w = b - a;
    let mut den = 2i64;
    loop {
        for num in [den / 2, den / 2 + 1, den / 2 - 1] {
            if num <= 0 || num >= den {
                continue;
            }
            let m = a + &w * rat(num, den);
            if !p.eval(&m).is_zero() {
                return m;
            }
        }
        den += 1;
    }
}

/// Brackets of the odd-multiplicity roots of `p` in `(0, 1)`, each of width at
/// most `width` and with `p` of opposite sign at the two ends.
///
/// Isolation runs on the square-free part with Descartes bounds on each
/// subinterval, so every root is separated; roots of even multiplicity are then
/// dropped because `p` does not change sign across them.
pub fn isolate_unit_interval_roots(
    p: &RationalPolynomial,
    width: &Rational,
) -> Result<Vec<RationalInterval>> {
    if p.is_zero() {
        return Err(invalid("root isolation of the zero polynomial"));
    }
    if width <= &Rational::zero() {
        return Err(invalid("root isolation width must be positive"));
    }
    let (zero, one) = (Rational::zero(), Rational::one());
    if p.eval(&zero).is_zero() || p.eval(&one).is_zero() {
        return Err(invalid(
            "polynomial vanishes at 0 or 1; deflate endpoint roots first",
        ));
    }
    let q = p.square_free();
    let mut isolated = Vec::new();
    let mut stack = vec![(zero, one)];
    while let Some((a, b)) = stack.pop() {
        match descartes_on(&q, &a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = split_point(&q, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    isolated.sort();

    let mut out = Vec::new();
    for (mut a, mut b) in isolated {
        let sa = Sign::of(&q.eval(&a));
        while &(&b - &a) > width {
            let m = split_point(&q, &a, &b);
            if Sign::of(&q.eval(&m)) == sa {
                a = m;
            } else {
                b = m;
            }
        }
        let (pa, pb) = (Sign::of(&p.eval(&a)), Sign::of(&p.eval(&b)));
        if pa != pb {
            out.push(RationalInterval::new(a, b)?);
        }
    }
    Ok(out)
}
