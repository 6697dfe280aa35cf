//! Certification of the two-root property of
//! `p_{k,r}(x) = alpha k (1 - x^r)^k h_{k,k}(x) - r (1 - x^k)^k h_{k,r}(x)`,
//! which implies the entropy inequality for the exponent `k/r`.

mod certificate;

pub use certificate::{
    emit_certificate, read_certificate, validate_certificate, Certificate, Verdict, Witness,
};

use crate::alpha::AlphaAlgebraic;
use crate::combinatorics::h_poly;
use crate::error::{invalid, Error, Result};
use crate::exact::{int, pow2_neg, rat, Rational, RationalInterval, Sign};
use crate::poly::{descartes_sign_changes, AlphaLinear, AlphaLinearPolynomial, RationalPolynomial};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Widest alpha enclosure ever used, as a power of two.
pub const START_BITS: u32 = 64;
/// Refinement stops once alpha is known to `2^-MAX_BITS`.
pub const MAX_BITS: u32 = 4096;

/// Degree `k^2 + kr - r` of `p_{k,r}`.
pub fn p_degree(k: u64, r: u64) -> usize {
    (k * k + k * r - r) as usize
}

fn one_minus_power(e: usize, k: u64) -> RationalPolynomial {
    let base = &RationalPolynomial::one() - &RationalPolynomial::monomial(Rational::one(), e);
    base.pow(k as u32)
}

/// `p_{k,r}` as `A(x) + alpha B(x)` with `B = k (1-x^r)^k h_{k,k}(x)` and
/// `A = -r (1-x^k)^k h_{k,r}(x)`.
pub fn build_p(k: u64, r: u64) -> Result<AlphaLinearPolynomial> {
    if !(k > r && r >= 1) {
        return Err(invalid(format!(
            "build_p needs k > r >= 1, got k={k} r={r}"
        )));
    }
    if k.gcd(&r) != 1 {
        return Err(invalid(format!(
            "build_p needs coprime k and r, got k={k} r={r}"
        )));
    }
    let hkk = RationalPolynomial::new(h_poly(k, k)?.coefficients).substitute_power(k as usize);
    let hkr = RationalPolynomial::new(h_poly(k, r)?.coefficients).substitute_power(r as usize);
    let b = (&one_minus_power(r as usize, k) * &hkk).scale(&int(k as i64));
    let a = (&one_minus_power(k as usize, k) * &hkr).scale(&-int(r as i64));
    Ok(AlphaLinearPolynomial::new(a, b))
}

/// `p_{k,r}` is divisible by `(1 - x)^k` with quotient of degree
/// `k^2 + kr - r - k`.
pub fn divisibility_check(k: u64, r: u64) -> Result<bool> {
    let p = build_p(k, r)?;
    let (q, rem) = p.div_rem(&RationalPolynomial::from_ints(&[1, -1]).pow(k as u32))?;
    Ok(rem.is_zero() && q.degree() == Some(p_degree(k, r) - k as usize))
}

/// Sign of `a + b alpha` over an enclosure, `None` while undecided.
fn pair_sign(c: &AlphaLinear, alpha: &RationalInterval) -> Option<Sign> {
    if c.is_zero() {
        return Some(Sign::Zero);
    }
    match c.eval_interval(alpha).sign() {
        Some(Sign::Zero) | None => None,
        s => s,
    }
}

/// Tracks the alpha enclosure through the doubling refinement schedule.
#[derive(Clone, Debug)]
pub struct AlphaSchedule {
    alpha: AlphaAlgebraic,
    bits: u32,
    refinements: u32,
    max_refinements: u32,
}

impl AlphaSchedule {
    pub fn new(a: &AlphaAlgebraic, start_bits: u32, max_refinements: u32) -> Result<Self> {
        let bits = start_bits.clamp(1, MAX_BITS);
        Ok(AlphaSchedule {
            alpha: a.refine_bits(bits)?,
            bits,
            refinements: 0,
            max_refinements,
        })
    }

    pub fn enclosure(&self) -> &RationalInterval {
        self.alpha.enclosure()
    }

    pub fn refinements(&self) -> u32 {
        self.refinements
    }

    /// Doubles the precision. Fails once the schedule is exhausted.
    fn refine(&mut self) -> Result<()> {
        if self.bits >= MAX_BITS || self.refinements >= self.max_refinements {
            return Err(Error::Inconclusive(format!(
                "alpha refinement exhausted at 2^-{} after {} refinements",
                self.bits, self.refinements
            )));
        }
        self.bits = (self.bits * 2).min(MAX_BITS);
        self.alpha = self.alpha.refine(&pow2_neg(self.bits))?;
        self.refinements += 1;
        Ok(())
    }

    /// Sign of `a + b alpha`, refining alpha until it is decided.
    fn sign_of(&mut self, c: &AlphaLinear) -> Result<Sign> {
        loop {
            if let Some(s) = pair_sign(c, self.enclosure()) {
                return Ok(s);
            }
            self.refine()?;
        }
    }
}

/// Signs and Descartes count of the transformed coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignReport {
    pub transformed: AlphaLinearPolynomial,
    pub signs: Vec<Sign>,
    pub count: usize,
}

/// Transforms `p` by `(1+y)^d p(1/(1+y))` at its declared degree and
/// certifies the sign of every coefficient.
pub fn certify_sign_changes(
    p: &AlphaLinearPolynomial,
    d: usize,
    schedule: &mut AlphaSchedule,
) -> Result<SignReport> {
    if p.is_zero() {
        return Err(invalid("sign certification of the zero polynomial"));
    }
    let transformed = p.mobius_reversal(d)?;
    let mut signs = Vec::with_capacity(d + 1);
    for i in 0..=d {
        signs.push(schedule.sign_of(&transformed.coeff(i))?);
    }
    let count = descartes_sign_changes(&signs);
    Ok(SignReport {
        transformed,
        signs,
        count,
    })
}

/// Three alternating witnesses and a sharpened bracket around each root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitnesses {
    pub points: [(Rational, Sign); 3],
    pub brackets: [RationalInterval; 2],
}

const DEFAULT_GRID: usize = 64;
const MAX_GRID: usize = 4096;
const BRACKET_BITS: u32 = 20;

/// Root locations reported for `(3, 2)`, used as extra sample points.
pub fn default_hints(k: u64, r: u64) -> Vec<Rational> {
    if (k, r) == (3, 2) {
        vec![rat(204_863, 1_000_000), rat(74_186, 100_000)]
    } else {
        Vec::new()
    }
}

/// Finds `u < v < w` in `(0, 1)` with certified alternating signs of `p`,
/// sampling a uniform grid plus `hints` and doubling the grid up to 4096.
pub fn locate_two_roots(
    p: &AlphaLinearPolynomial,
    hints: &[Rational],
    schedule: &mut AlphaSchedule,
) -> Result<RootWitnesses> {
    let mut n = DEFAULT_GRID;
    while n <= MAX_GRID {
        let mut xs: Vec<Rational> = (1..=n).map(|i| rat(i as i64, n as i64 + 1)).collect();
        xs.extend(
            hints
                .iter()
                .filter(|h| **h > Rational::zero() && **h < Rational::one())
                .cloned(),
        );
        xs.sort();
        xs.dedup();
        let mut samples = Vec::with_capacity(xs.len());
        for x in xs {
            let s = schedule.sign_of(&p.eval(&x))?;
            if s != Sign::Zero {
                samples.push((x, s));
            }
        }
        if let Some(points) = alternation(&samples) {
            let b1 = sharpen(p, &points[0], &points[1], schedule)?;
            let b2 = sharpen(p, &points[1], &points[2], schedule)?;
            return Ok(RootWitnesses {
                points,
                brackets: [b1, b2],
            });
        }
        n *= 2;
    }
    Err(Error::Inconclusive(format!(
        "no sign alternation of p on grids up to {MAX_GRID} points"
    )))
}

fn alternation(samples: &[(Rational, Sign)]) -> Option<[(Rational, Sign); 3]> {
    let first = samples.first()?;
    let second = samples.iter().find(|(_, s)| *s != first.1)?;
    let third = samples
        .iter()
        .find(|(x, s)| *s == first.1 && *x > second.0)?;
    Some([first.clone(), second.clone(), third.clone()])
}

/// Bisects a certified sign change down to width `2^-20`.
fn sharpen(
    p: &AlphaLinearPolynomial,
    left: &(Rational, Sign),
    right: &(Rational, Sign),
    schedule: &mut AlphaSchedule,
) -> Result<RationalInterval> {
    let (mut lo, mut hi) = (left.0.clone(), right.0.clone());
    let target = pow2_neg(BRACKET_BITS);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / int(2);
        match schedule.sign_of(&p.eval(&mid))? {
            Sign::Zero => return Ok(RationalInterval::point(mid)),
            s if s == left.1 => lo = mid,
            _ => hi = mid,
        }
    }
    RationalInterval::new(lo, hi)
}

/// Options for [`verify_exponent`].
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Initial alpha enclosure width `2^-start_bits`.
    pub start_bits: u32,
    pub max_refinements: u32,
    /// Sample points for the witness search; `None` uses [`default_hints`].
    pub hints: Option<Vec<Rational>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            start_bits: START_BITS,
            max_refinements: 64,
            hints: None,
        }
    }
}

/// Runs the full pipeline for the exponent `k/r`. Arithmetic failures give an
/// INCONCLUSIVE certificate with the reason in `notes`.
pub fn verify_exponent(k: u64, r: u64, config: &VerifyConfig) -> Result<Certificate> {
    if !(k >= r && r >= 1) {
        return Err(invalid(format!(
            "verify needs k >= r >= 1, got k={k} r={r}"
        )));
    }
    let g = k.gcd(&r);
    let (k, r) = (k / g, r / g);
    if k == r {
        return Ok(Certificate::trivial());
    }
    let a = AlphaAlgebraic::new(k, r)?;
    let d = p_degree(k, r);
    let p = build_p(k, r)?;
    let divisible = divisibility_check(k, r)?;
    let mut schedule = AlphaSchedule::new(&a, config.start_bits, config.max_refinements)?;
    let mut cert = Certificate::skeleton(&a, d, divisible);
    if !divisible {
        cert.notes.push("p is not divisible by (1-x)^k".into());
    }

    let report = match certify_sign_changes(&p, d, &mut schedule) {
        Ok(rep) => rep,
        Err(e) => {
            cert.transformed_coefficients = p.mobius_reversal(d)?;
            return Ok(cert.finish(Verdict::Inconclusive, &schedule, e.to_string()));
        }
    };
    cert.transformed_coefficients = report.transformed.clone();
    cert.signs = report.signs.iter().map(|s| s.as_char()).collect();
    cert.descartes_count = report.count;
    match report.count {
        0 | 1 => {
            let note = format!(
                "Descartes count {} rules out two roots in (0, 1)",
                report.count
            );
            return Ok(cert.finish(Verdict::Refuted, &schedule, note));
        }
        2 => {}
        c => {
            let note = format!("Descartes count {c} exceeds 2");
            return Ok(cert.finish(Verdict::Inconclusive, &schedule, note));
        }
    }
    let hints = config.hints.clone().unwrap_or_else(|| default_hints(k, r));
    match locate_two_roots(&p, &hints, &mut schedule) {
        Ok(w) => {
            cert.witnesses = w
                .points
                .iter()
                .map(|(x, s)| Witness {
                    x: x.clone(),
                    sign: *s,
                })
                .collect();
            cert.root_brackets = w.brackets.to_vec();
            Ok(cert.finish(Verdict::Certified, &schedule, String::new()))
        }
        Err(e) => Ok(cert.finish(Verdict::Inconclusive, &schedule, e.to_string())),
    }
}
