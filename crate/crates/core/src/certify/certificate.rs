use super::{build_p, divisibility_check, p_degree, pair_sign, AlphaSchedule};
use crate::alpha::AlphaAlgebraic;
use crate::error::{Error, Result};
use crate::exact::{rat, to_frac_string, Rational, RationalInterval, Sign};
use crate::poly::{descartes_sign_changes, AlphaLinearPolynomial, RationalPolynomial};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::Path;

pub const SCHEMA: &str = "entropy-cert/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified,
    Inconclusive,
    Refuted,
}

impl Verdict {
    /// Process exit status for the verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Inconclusive => 2,
            Verdict::Refuted => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Refuted => "REFUTED",
        })
    }
}

mod sign_char {
    use crate::exact::Sign;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Sign, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.as_char().to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sign, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Sign::from_char), chars.next()) {
            (Some(sign), None) => Ok(sign),
            _ => Err(D::Error::custom(format!("bad sign {s:?}"))),
        }
    }
}

mod brackets {
    use crate::exact::{parse_frac, RationalInterval};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[RationalInterval], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<[String; 2]> = v
            .iter()
            .map(|b| {
                let (lo, hi) = b.to_frac_strings();
                [lo, hi]
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<RationalInterval>, D::Error> {
        let rows = Vec::<[String; 2]>::deserialize(d)?;
        rows.iter()
            .map(|[lo, hi]| {
                let lo = parse_frac(lo).map_err(D::Error::custom)?;
                let hi = parse_frac(hi).map_err(D::Error::custom)?;
                RationalInterval::new(lo, hi).map_err(D::Error::custom)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::exact::serde_frac")]
    pub x: Rational,
    #[serde(with = "sign_char")]
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub defining: RationalPolynomial,
    #[serde(with = "crate::exact::serde_frac")]
    pub lo: Rational,
    #[serde(with = "crate::exact::serde_frac")]
    pub hi: Rational,
}

/// Verdict for one exponent together with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub k: u64,
    pub r: u64,
    #[serde(with = "crate::exact::serde_frac")]
    pub exponent: Rational,
    pub alpha: AlphaRecord,
    pub p_degree: usize,
    pub transformed_coefficients: AlphaLinearPolynomial,
    pub signs: String,
    pub descartes_count: usize,
    pub witnesses: Vec<Witness>,
    pub divisible_by_one_minus_x_pow_k: bool,
    pub verdict: Verdict,
    pub refinements: u32,
    #[serde(default, with = "brackets")]
    pub root_brackets: Vec<RationalInterval>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Certificate {
    /// The exponent 1, where the inequality is an identity.
    pub fn trivial() -> Self {
        Certificate {
            schema: SCHEMA.into(),
            k: 1,
            r: 1,
            exponent: Rational::one(),
            alpha: AlphaRecord {
                defining: RationalPolynomial::from_ints(&[-1, 1]),
                lo: Rational::one(),
                hi: Rational::one(),
            },
            p_degree: p_degree(1, 1),
            transformed_coefficients: AlphaLinearPolynomial::default(),
            signs: String::new(),
            descartes_count: 0,
            witnesses: Vec::new(),
            divisible_by_one_minus_x_pow_k: true,
            verdict: Verdict::Certified,
            refinements: 0,
            root_brackets: Vec::new(),
            notes: vec!["exponent 1: both sides coincide".into()],
        }
    }

    pub(super) fn skeleton(a: &AlphaAlgebraic, d: usize, divisible: bool) -> Self {
        Certificate {
            schema: SCHEMA.into(),
            k: a.k(),
            r: a.r(),
            exponent: a.exponent(),
            alpha: AlphaRecord {
                defining: a.defining(),
                lo: a.enclosure().lo().clone(),
                hi: a.enclosure().hi().clone(),
            },
            p_degree: d,
            transformed_coefficients: AlphaLinearPolynomial::default(),
            signs: String::new(),
            descartes_count: 0,
            witnesses: Vec::new(),
            divisible_by_one_minus_x_pow_k: divisible,
            verdict: Verdict::Inconclusive,
            refinements: 0,
            root_brackets: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(super) fn finish(
        mut self,
        verdict: Verdict,
        schedule: &AlphaSchedule,
        note: String,
    ) -> Self {
        let e = schedule.enclosure();
        self.alpha.lo = e.lo().clone();
        self.alpha.hi = e.hi().clone();
        self.refinements = schedule.refinements();
        self.verdict = verdict;
        if !note.is_empty() {
            self.notes.push(note);
        }
        self
    }

    pub fn alpha_enclosure(&self) -> Result<RationalInterval> {
        RationalInterval::new(self.alpha.lo.clone(), self.alpha.hi.clone())
    }

    pub fn parsed_signs(&self) -> Result<Vec<Sign>> {
        self.signs
            .chars()
            .map(|c| {
                Sign::from_char(c)
                    .ok_or_else(|| Error::Validation(format!("bad sign character {c:?}")))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

/// Recomputes every recorded fact from `(k, r)` and the recorded alpha
/// enclosure alone.
pub fn validate_certificate(c: &Certificate) -> Result<()> {
    if c.schema != SCHEMA {
        return Err(fail(format!("unknown schema {:?}", c.schema)));
    }
    if !(c.k >= c.r && c.r >= 1) || c.k.gcd(&c.r) != 1 {
        return Err(fail(format!(
            "exponent {}/{} is not reduced with k >= r >= 1",
            c.k, c.r
        )));
    }
    if c.exponent != rat(c.k as i64, c.r as i64) {
        return Err(fail("exponent does not match k/r"));
    }
    if c.k == c.r {
        return if c.verdict == Verdict::Certified {
            Ok(())
        } else {
            Err(fail("exponent 1 is always certified"))
        };
    }

    let a = AlphaAlgebraic::new(c.k, c.r)?;
    if c.alpha.defining != a.defining() {
        return Err(fail("defining polynomial mismatch"));
    }
    let alpha = c.alpha_enclosure()?;
    if !alpha.lo().is_positive()
        || a.sign_at(alpha.lo())? == Sign::Positive
        || a.sign_at(alpha.hi())? == Sign::Negative
    {
        return Err(fail("recorded interval does not enclose alpha"));
    }
    let d = p_degree(c.k, c.r);
    if c.p_degree != d {
        return Err(fail(format!("p_degree {} differs from {d}", c.p_degree)));
    }
    let p = build_p(c.k, c.r)?;
    if c.transformed_coefficients != p.mobius_reversal(d)? {
        return Err(fail("transformed coefficients differ from recomputation"));
    }
    if c.divisible_by_one_minus_x_pow_k != divisibility_check(c.k, c.r)? {
        return Err(fail("divisibility flag differs from recomputation"));
    }

    let signs = c.parsed_signs()?;
    if !signs.is_empty() {
        if signs.len() != d + 1 {
            return Err(fail(format!(
                "expected {} signs, found {}",
                d + 1,
                signs.len()
            )));
        }
        for (i, s) in signs.iter().enumerate() {
            if pair_sign(&c.transformed_coefficients.coeff(i), &alpha) != Some(*s) {
                return Err(fail(format!(
                    "sign of transformed coefficient {i} not reproduced"
                )));
            }
        }
        if descartes_sign_changes(&signs) != c.descartes_count {
            return Err(fail("Descartes count does not match the signs"));
        }
    }
    for w in &c.witnesses {
        if pair_sign(&p.eval(&w.x), &alpha) != Some(w.sign) || w.sign == Sign::Zero {
            return Err(fail(format!(
                "witness sign at {} not reproduced",
                to_frac_string(&w.x)
            )));
        }
    }
    for b in &c.root_brackets {
        let (lo, hi) = (
            pair_sign(&p.eval(b.lo()), &alpha),
            pair_sign(&p.eval(b.hi()), &alpha),
        );
        if !b.is_point() && (lo.is_none() || lo == hi) {
            return Err(fail("root bracket without a certified sign change"));
        }
    }

    match c.verdict {
        Verdict::Certified => {
            if signs.is_empty() || c.descartes_count != 2 {
                return Err(fail("CERTIFIED needs a certified Descartes count of 2"));
            }
            let w = &c.witnesses;
            let inside = |x: &Rational| x.is_positive() && *x < Rational::one();
            if w.len() != 3
                || !w.iter().all(|w| inside(&w.x))
                || !(w[0].x < w[1].x && w[1].x < w[2].x)
                || w[0].sign != w[2].sign
                || w[0].sign == w[1].sign
            {
                return Err(fail(
                    "CERTIFIED needs three increasing alternating witnesses in (0, 1)",
                ));
            }
        }
        Verdict::Refuted => {
            if signs.is_empty() || c.descartes_count >= 2 {
                return Err(fail("REFUTED needs a certified Descartes count below 2"));
            }
        }
        Verdict::Inconclusive => {}
    }
    Ok(())
}

/// Writes the certificate as JSON through a temporary file in the target
/// directory that is renamed into place.
pub fn emit_certificate(c: &Certificate, path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(c.to_json()?.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Parses a certificate file; structural problems surface as schema errors.
pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = std::fs::read_to_string(path)?;
    Certificate::from_json(&text)
}
