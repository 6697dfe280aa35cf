//! Named batches of exact identity checks with a flat pass/fail report.

use crate::alpha::AlphaAlgebraic;
use crate::combinatorics::{
    bernoulli, classical_stirling2, dobinski_check, eulerian, eulerian_limit_gap, gen_stirling,
    h_coeff, h_coeff_alt, s_binomial, stirling_limit_gap, SBinomialMethod, StirlingMethod,
    StirlingParams,
};
use crate::error::{invalid, Result};
use crate::exact::{big, binomial, factorial, int, parse_rational_or_decimal, rat, Rational};
use crate::forms::{
    cor6_identity, cor7_checks, deriv_rational, deriv_series_to_width, eulerian_transform_check,
    multiplicity_at_zero_check, stir1_checks, stirling_identity_check, termination_check,
};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Stirling,
    Eulerian,
    Bernoulli,
    Cor6,
    Cor7,
    Termination,
    FiniteDiff,
    Stir1,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::FiniteDiff,
        Suite::Stirling,
        Suite::Eulerian,
        Suite::Bernoulli,
        Suite::Cor6,
        Suite::Cor7,
        Suite::Termination,
        Suite::Stir1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Stirling => "stirling",
            Suite::Eulerian => "eulerian",
            Suite::Bernoulli => "bernoulli",
            Suite::Cor6 => "cor6",
            Suite::Cor7 => "cor7",
            Suite::Termination => "termination",
            Suite::FiniteDiff => "finite-diff",
            Suite::Stir1 => "stir1",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

/// One identity evaluated at one parameter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub identity: &'static str,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} {} {}",
            self.suite, self.identity, self.params
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

struct Report {
    suite: Suite,
    out: Vec<CheckOutcome>,
}

impl Report {
    fn new(suite: Suite) -> Self {
        Report {
            suite,
            out: Vec::new(),
        }
    }

    fn check(&mut self, identity: &'static str, params: String, result: Result<bool>) {
        let (passed, detail) = match result {
            Ok(b) => (b, String::new()),
            Err(e) => (false, e.to_string()),
        };
        self.out.push(CheckOutcome {
            suite: self.suite,
            identity,
            params,
            passed,
            detail,
        });
    }
}

/// Runs a suite. `kmax` bounds the main size parameter (`k` or `n`) and
/// `rmax` the secondary one where the suite has one.
pub fn run_suite(suite: Suite, kmax: u64, rmax: u64) -> Result<Vec<CheckOutcome>> {
    if kmax < 1 || rmax < 1 {
        return Err(invalid("suite bounds must be at least 1"));
    }
    if suite == Suite::All {
        let mut all = Vec::new();
        for s in Suite::EACH {
            all.extend(run_suite(s, kmax, rmax)?);
        }
        return Ok(all);
    }
    let mut rep = Report::new(suite);
    match suite {
        Suite::FiniteDiff => finite_diff(&mut rep, kmax),
        Suite::Stirling => stirling(&mut rep, kmax, rmax),
        Suite::Eulerian => eulerian_suite(&mut rep, kmax, rmax),
        Suite::Bernoulli => bernoulli_suite(&mut rep, kmax),
        Suite::Cor6 => {
            for k in 1..=kmax {
                rep.check(
                    "k x h_{k,1}(x) = 1 - (1-x)^k",
                    format!("k={k}"),
                    cor6_identity(k),
                );
            }
        }
        Suite::Cor7 => cor7(&mut rep, kmax),
        Suite::Termination => termination(&mut rep, kmax),
        Suite::Stir1 => {
            for n in 1..=kmax {
                for r in 1..=rmax {
                    for s in r..n + r {
                        rep.check(
                            "cleared transform identities",
                            format!("n={n} r={r} s={s}"),
                            stir1_checks(n, r, s, n + 10),
                        );
                    }
                }
            }
        }
        Suite::All => unreachable!(),
    }
    Ok(rep.out)
}

fn finite_diff(rep: &mut Report, kmax: u64) {
    for k in 1..=kmax {
        for r in 1..=k {
            let vanish = (k..=2 * k).all(|j| h_coeff(k, r, j).is_zero());
            rep.check(
                "h_{k,r,j} = 0 for k <= j <= 2k",
                format!("k={k} r={r}"),
                Ok(vanish),
            );
            let alt = (1..k).try_fold(true, |ok, j| {
                Ok::<_, crate::Error>(ok && h_coeff_alt(k, r, j)? == h_coeff(k, r, j))
            });
            rep.check("companion formula", format!("k={k} r={r}"), alt);
            if k >= 2 {
                let sign = if (k + r) % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                let lead = sign / big(binomial(k as i64, r));
                rep.check(
                    "(-1)^k h_{k,r,k-1} = (-1)^r / binom(k,r)",
                    format!("k={k} r={r}"),
                    Ok(h_coeff(k, r, k - 1) == lead),
                );
            }
        }
    }
    for k in 1..=kmax.min(8) {
        for r in 1..=2 * k {
            let top = big(binomial(r as i64 - 1, k)) / int(k as i64 + 1);
            rep.check(
                "h_{k,r,k} = binom(r-1,k) / (k+1)",
                format!("k={k} r={r}"),
                Ok(h_coeff(k, r, k) == top),
            );
        }
    }
    for (k, r) in [(3, 2), (4, 1)] {
        let res = AlphaAlgebraic::new(k, r)
            .and_then(|a| multiplicity_at_zero_check(&a, 20, &int(1024), 256));
        rep.check(
            "order-k vanishing of f at 0",
            format!("k={k} r={r} h=2^-20"),
            res,
        );
    }
}

fn stirling(rep: &mut Report, kmax: u64, rmax: u64) {
    let mut params = Vec::new();
    for beta in 1..=5 {
        for gamma in -3..=3 {
            params.push(StirlingParams::ints(1, beta, gamma));
        }
    }
    for beta in 1..=3 {
        params.push(StirlingParams::ints(2, beta, 1));
    }
    let results: Vec<(String, Result<bool>)> = params
        .par_iter()
        .map(|p| {
            let ok = (0..=kmax).try_fold(true, |ok, n| {
                let mut all = ok;
                for l in 0..=n {
                    let a = gen_stirling(n, l, p, StirlingMethod::Recurrence)?;
                    let b = gen_stirling(n, l, p, StirlingMethod::ClosedForm)?;
                    all &= a == b;
                }
                all &= gen_stirling(n, n, p, StirlingMethod::Recurrence)?.is_one();
                Ok(all)
            });
            (
                format!("n<={kmax} (a,b,c)=({},{},{})", p.alpha, p.beta, p.gamma),
                ok,
            )
        })
        .collect();
    for (params, ok) in results {
        rep.check("recurrence = closed form", params, ok);
    }
    let classical = StirlingParams::ints(0, 1, 0);
    let ok = (0..=kmax).try_fold(true, |ok, n| {
        let mut all = ok;
        for l in 0..=n {
            all &= gen_stirling(n, l, &classical, StirlingMethod::Recurrence)?
                == big(classical_stirling2(n, l));
        }
        Ok(all)
    });
    rep.check("S(n,l|0,1,0) = S(n,l)", format!("n<={kmax}"), ok);

    let tol = parse_rational_or_decimal("1e-30").expect("literal");
    for n in 0..=kmax.min(6) {
        for r in 1..=rmax.min(4) {
            for s in 0..=4 {
                rep.check(
                    "Dobinski formula",
                    format!("n={n} r={r} s={s} x=1/2 M=60"),
                    dobinski_check(n, r, s, &rat(1, 2), 60, &tol),
                );
            }
        }
    }
    let gaps: Result<Vec<Rational>> = [10, 100, 1000]
        .iter()
        .map(|&b| stirling_limit_gap(3, 2, b))
        .collect();
    rep.check(
        "stirling limit gap decreasing",
        "n=3 l=2 beta=10,100,1000".into(),
        gaps.map(|g| g[0] > g[1] && g[1] > g[2]),
    );
    rep.check(
        "stirling limit gap at l=n",
        format!("n={kmax} beta=7"),
        stirling_limit_gap(kmax, kmax, 7).map(|g| g.is_zero()),
    );
}

fn eulerian_suite(rep: &mut Report, kmax: u64, rmax: u64) {
    for n in 1..=kmax.min(4) {
        for r in 1..=rmax.min(3) {
            for s in r..n + r {
                rep.check(
                    "moment transform",
                    format!("n={n} r={r} s={s}"),
                    eulerian_transform_check(n, r, s, n + 12),
                );
            }
        }
        rep.check(
            "moment transform",
            format!("n={n} r=1 s=0"),
            eulerian_transform_check(n, 1, 0, n + 12),
        );
    }
    for n in 0..=kmax {
        let total: num_bigint::BigInt = (0..=n.saturating_sub(1)).map(|l| eulerian(n, l)).sum();
        let expected = if n == 0 {
            num_bigint::BigInt::one()
        } else {
            factorial(n)
        };
        rep.check(
            "sum_l A_{n,l} = n!",
            format!("n={n}"),
            Ok(n == 0 || total == expected),
        );
    }
    let gaps: Vec<Rational> = [10, 100, 1000]
        .iter()
        .map(|&r| eulerian_limit_gap(2, 1, r))
        .collect();
    rep.check(
        "eulerian limit gap decreasing",
        "n=2 l=1 r=10,100,1000".into(),
        Ok(gaps[0] > gaps[1] && gaps[1] > gaps[2]),
    );
}

fn bernoulli_suite(rep: &mut Report, kmax: u64) {
    rep.check("B_0 = 1", String::new(), Ok(bernoulli(0).is_one()));
    rep.check("B_1 = -1/2", String::new(), Ok(bernoulli(1) == rat(-1, 2)));
    rep.check("B_2 = 1/6", String::new(), Ok(bernoulli(2) == rat(1, 6)));
    for n in 1..=kmax {
        let sum: Rational = (0..=n)
            .map(|j| big(binomial(n as i64 + 1, j)) * bernoulli(j))
            .sum();
        rep.check(
            "sum_j binom(n+1,j) B_j = 0",
            format!("n={n}"),
            Ok(sum.is_zero()),
        );
    }
}

fn cor7(rep: &mut Report, kmax: u64) {
    for k in 1..=kmax {
        rep.check(
            "r=k coefficients and multisection",
            format!("k={k}"),
            cor7_checks(k),
        );
    }
    for k in 1..=kmax.min(8) {
        for s in 0..=5 {
            let agree = (0..=k * s).all(|l| {
                let gf = s_binomial(k, l, s, SBinomialMethod::GeneratingFunction);
                gf == s_binomial(k, l, s, SBinomialMethod::DeMoivre)
                    && gf == s_binomial(k, k * s - l, s, SBinomialMethod::GeneratingFunction)
            });
            rep.check(
                "de Moivre = expansion, symmetric",
                format!("k={k} s={s}"),
                Ok(agree),
            );
        }
    }
}

fn termination(rep: &mut Report, kmax: u64) {
    let points = [rat(1, 10), rat(1, 2), rat(9, 10)];
    let width = parse_rational_or_decimal("1e-25").expect("literal");
    let pairs: Vec<(u64, u64)> = (1..=kmax)
        .flat_map(|k| (1..=k).map(move |r| (k, r)))
        .collect();
    let results: Vec<Vec<(&'static str, String, Result<bool>)>> = pairs
        .par_iter()
        .map(|&(k, r)| {
            let mut v = vec![
                (
                    "series terminates in h_{k,r}",
                    format!("k={k} r={r} M={}", 3 * k + 5),
                    termination_check(k, r, 3 * k + 5),
                ),
                (
                    "Stirling basis form",
                    format!("k={k} r={r}"),
                    stirling_identity_check(k, r),
                ),
            ];
            if k <= 8 {
                for x in &points {
                    let res = deriv_series_to_width(k, r, x, &width)
                        .and_then(|(e, _)| Ok(e.contains(&deriv_rational(k, r, x)?)));
                    v.push((
                        "rational form inside series enclosure",
                        format!("k={k} r={r} x={x}"),
                        res,
                    ));
                }
            }
            v
        })
        .collect();
    for (identity, params, res) in results.into_iter().flatten() {
        rep.check(identity, params, res);
    }
}
