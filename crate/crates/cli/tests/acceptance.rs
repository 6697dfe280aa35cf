//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints a PASS or FAIL line; exits nonzero if any fails.

use entcert_core::alpha::{
    alpha_asymptotic_gap, lagrange_partial_sum, solve_x_plus_xk, x_equality_point, AlphaAlgebraic,
};
use entcert_core::certify::{
    build_p, read_certificate, validate_certificate, verify_exponent, Verdict, VerifyConfig,
};
use entcert_core::combinatorics::{h_coeff, h_coeff_alt, h_poly};
use entcert_core::exact::{
    big, binomial, int, log_point, parse_rational_or_decimal, rat, Rational, RationalInterval,
};
use entcert_core::forms::{
    cor6_identity, cor7_checks, deriv_rational, deriv_series_to_width, inequality_scan,
    stirling_identity_check, GapFunction,
};
use entcert_core::poly::{descartes_sign_changes, signs_of};
use entcert_core::suites::{run_suite, Suite};
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn dec(s: &str) -> Rational {
    parse_rational_or_decimal(s).expect("decimal literal")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Distance from `q` to the interval, zero inside.
fn distance(x: &RationalInterval, q: &Rational) -> Rational {
    if q < x.lo() {
        x.lo() - q
    } else if q > x.hi() {
        q - x.hi()
    } else {
        int(0)
    }
}

fn golden_tables() -> Check {
    let tables: [(u64, u64, &[&str]); 7] = [
        (1, 1, &["1"]),
        (2, 2, &["1", "1"]),
        (3, 3, &["1", "7", "1"]),
        (4, 4, &["1", "31", "31", "1"]),
        (4, 1, &["1", "-3/2", "1", "-1/4"]),
        (4, 2, &["1", "7/2", "-2/3", "1/6"]),
        (4, 3, &["1", "27/2", "6", "-1/4"]),
    ];
    for (k, r, want) in tables {
        let got = h_poly(k, r).map_err(e)?.coefficients;
        let want: Vec<Rational> = want.iter().map(|s| dec(s)).collect();
        ensure(got == want, format!("h_{{{k},{r}}} = {got:?}"))?;
    }
    Ok(())
}

fn vanishing() -> Check {
    for k in 1..=12u64 {
        for r in 1..=k {
            for j in k..=2 * k {
                ensure(
                    h_coeff(k, r, j) == int(0),
                    format!("h_{{{k},{r},{j}}} != 0"),
                )?;
            }
            for j in 1..k {
                ensure(
                    h_coeff(k, r, j) == h_coeff_alt(k, r, j).map_err(e)?,
                    format!("alternate form differs at k={k} r={r} j={j}"),
                )?;
            }
        }
    }
    Ok(())
}

fn leading_and_top() -> Check {
    for k in 1..=12u64 {
        for r in 1..=k {
            let sign = if (k + r) % 2 == 0 { 1 } else { -1 };
            let want = int(sign) / big(binomial(k as i64, r));
            ensure(
                h_coeff(k, r, k - 1) == want,
                format!("leading coefficient at k={k} r={r}"),
            )?;
        }
    }
    for k in 1..=8u64 {
        for r in 1..=2 * k {
            let want = big(binomial(r as i64 - 1, k)) / int(k as i64 + 1);
            ensure(
                h_coeff(k, r, k) == want,
                format!("top coefficient at k={k} r={r}"),
            )?;
        }
    }
    Ok(())
}

fn stirling_forms() -> Check {
    for k in 1..=8u64 {
        for r in 1..=k {
            ensure(
                stirling_identity_check(k, r).map_err(e)?,
                format!("Stirling form k={k} r={r}"),
            )?;
        }
    }
    let width = dec("1e-25");
    for (k, r) in [(2, 1), (3, 2), (3, 3), (5, 2), (6, 6)] {
        for x in [rat(1, 10), rat(1, 2), rat(9, 10)] {
            let (enc, _) = deriv_series_to_width(k, r, &x, &width).map_err(e)?;
            ensure(enc.width() <= width, format!("width at k={k} r={r} x={x}"))?;
            ensure(
                enc.contains(&deriv_rational(k, r, &x).map_err(e)?),
                format!("rational form outside enclosure at k={k} r={r} x={x}"),
            )?;
        }
    }
    for k in 1..=12 {
        ensure(
            cor6_identity(k).map_err(e)?,
            format!("r = 1 identity k={k}"),
        )?;
    }
    for k in 1..=10 {
        ensure(cor7_checks(k).map_err(e)?, format!("r = k checks k={k}"))?;
    }
    Ok(())
}

fn key_values(stdout: &str) -> BTreeMap<String, String> {
    stdout
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn worked_example() -> Check {
    let dir = tempfile::tempdir().map_err(e)?;
    let path = dir.path().join("cert.json");
    let out = Command::new(env!("CARGO_BIN_EXE_entcert"))
        .args(["verify", "--k", "3", "--r", "2", "--out"])
        .arg(&path)
        .env_remove("ENTROPY_CERT_PRECISION")
        .output()
        .map_err(e)?;
    ensure(
        out.status.code() == Some(0),
        format!("exit {:?}", out.status),
    )?;
    let kv = key_values(&String::from_utf8_lossy(&out.stdout));
    ensure(
        kv.get("VERDICT").map(String::as_str) == Some("CERTIFIED"),
        "verdict",
    )?;
    let cert = read_certificate(&path).map_err(e)?;
    validate_certificate(&cert).map_err(e)?;
    ensure(cert.descartes_count == 2, "transformed sign changes")?;
    let alpha = cert.alpha_enclosure().map_err(e)?;
    let p = build_p(3, 2).map_err(e)?.specialize(&alpha.midpoint());
    ensure(
        descartes_sign_changes(&signs_of(&p)) == 7,
        "untransformed sign changes",
    )?;
    ensure(cert.root_brackets.len() == 2, "two root brackets")?;
    let tol = dec("1e-3");
    for (b, want) in cert.root_brackets.iter().zip(["0.204863", "0.74186"]) {
        ensure(
            b.width() <= tol && distance(b, &dec(want)) <= tol,
            format!("root near {want}"),
        )?;
    }
    // 0.754878 is alpha rounded to six places
    ensure(
        alpha.width() <= dec("1e-6") && distance(&alpha, &dec("0.754878")) <= dec("5e-7"),
        "alpha enclosure",
    )
}

fn known_exponents() -> Check {
    let config = VerifyConfig {
        start_bits: 256,
        ..VerifyConfig::default()
    };
    for (k, r) in [(2, 1), (3, 1), (4, 1)] {
        let cert = verify_exponent(k, r, &config).map_err(e)?;
        ensure(
            cert.verdict == Verdict::Certified,
            format!("({k},{r}) gave {}", cert.verdict),
        )?;
        validate_certificate(&cert).map_err(e)?;
    }
    Ok(())
}

fn scan() -> Check {
    let grid = 1000u64;
    let bits = 256;
    for (k, r, xstar) in [(3, 2, "0.754877666"), (2, 1, "0.618033988")] {
        let a = AlphaAlgebraic::new(k, r).map_err(e)?;
        let report = inequality_scan(&a, grid, bits).map_err(e)?;
        ensure(
            report.min_lower_bound >= -dec("1e-9"),
            format!("({k},{r}) lower bound"),
        )?;
        let c = (dec(xstar) * int(grid as i64)).floor().to_integer();
        let c: u64 = c.to_string().parse().map_err(e)?;
        for &i in &report.zero_cells {
            let near = i <= 1 || i + 2 >= grid || (c.saturating_sub(2)..=c + 2).contains(&i);
            ensure(near, format!("({k},{r}) stray zero cell {i}"))?;
        }
        let g = GapFunction::new(&a, bits).map_err(e)?;
        let x = x_equality_point(&a, bits).map_err(e)?;
        let v = g.value_on(&x).map_err(e)?;
        let d = g.derivative_on(&x).map_err(e)?;
        let w = dec("1e-20");
        ensure(
            v.contains_zero() && v.width() <= w,
            format!("({k},{r}) f at the equality point"),
        )?;
        ensure(
            d.contains_zero() && d.width() <= w,
            format!("({k},{r}) f' at the equality point"),
        )?;
    }
    Ok(())
}

fn alpha_properties() -> Check {
    let width = dec("1e-8");
    // increasing exponents
    let ladder = [
        (11, 10),
        (6, 5),
        (5, 4),
        (4, 3),
        (3, 2),
        (5, 3),
        (2, 1),
        (5, 2),
        (3, 1),
        (4, 1),
    ];
    let mut prev: Option<RationalInterval> = None;
    for (k, r) in ladder {
        let a = AlphaAlgebraic::new(k, r)
            .and_then(|a| a.refine(&width))
            .map_err(e)?;
        let enc = a.enclosure().clone();
        ensure(enc.width() <= width, format!("{k}/{r} width"))?;
        ensure(
            a.functional_value().contains(&int(1)),
            format!("{k}/{r} functional equation"),
        )?;
        ensure(
            enc.lo() > &rat(r as i64, k as i64) && enc.hi() < &int(1),
            format!("{k}/{r} bounds"),
        )?;
        ensure(
            enc.lo() * rat(k as i64, r as i64) > int(1),
            format!("{k}/{r} alpha k/r > 1"),
        )?;
        if let Some(p) = &prev {
            ensure(enc.hi() < p.lo(), format!("{k}/{r} ladder order"))?;
        }
        prev = Some(enc);
    }
    Ok(())
}

fn asymptotics() -> Check {
    for k in [1_000u64, 10_000, 100_000] {
        let gap = alpha_asymptotic_gap(k, 128).map_err(e)?;
        let log_k = log_point(&int(k as i64), 128).map_err(e)?;
        let kk = int(k as i64) * int(k as i64);
        let bound = log_k.lo() * log_k.lo() * int(5) / kk;
        ensure(gap.hi() <= &bound, format!("k={k} gap above bound"))?;
    }
    Ok(())
}

fn lagrange() -> Check {
    let tol = dec("1e-12");
    for (k, z) in [(2, rat(1, 8)), (3, rat(1, 4))] {
        let sum = lagrange_partial_sum(k, 1, &z, 60).map_err(e)?;
        let root = solve_x_plus_xk(k, &z, &dec("1e-30")).map_err(e)?;
        ensure(
            distance(&root, &sum.value) + root.width() <= tol,
            format!("k={k} z={z} does not match bisection"),
        )?;
        ensure(!sum.diverging, format!("k={k} z={z} flagged diverging"))?;
    }
    for k in [2, 3, 4] {
        let sum = lagrange_partial_sum(k, 1, &int(1), 40).map_err(e)?;
        ensure(sum.diverging, format!("k={k} z=1 not flagged diverging"))?;
    }
    Ok(())
}

fn identity_suites() -> Check {
    let runs = [
        (Suite::Stirling, 10, 4),
        (Suite::Cor7, 8, 1),
        (Suite::Eulerian, 4, 3),
        (Suite::Bernoulli, 10, 1),
        (Suite::All, 6, 3),
    ];
    for (suite, kmax, rmax) in runs {
        let outcomes = run_suite(suite, kmax, rmax).map_err(e)?;
        ensure(!outcomes.is_empty(), format!("{suite} ran nothing"))?;
        if let Some(bad) = outcomes.iter().find(|o| !o.passed) {
            return Err(bad.to_string());
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("golden h tables", golden_tables, Duration::from_secs(1)),
        (
            "vanishing and alternate form",
            vanishing,
            Duration::from_secs(10),
        ),
        (
            "leading and top coefficients",
            leading_and_top,
            Duration::from_secs(60),
        ),
        (
            "Stirling-basis, r = 1 and r = k identities",
            stirling_forms,
            Duration::from_secs(120),
        ),
        (
            "worked example k=3 r=2",
            worked_example,
            Duration::from_secs(10),
        ),
        (
            "known exponents 2, 3, 4",
            known_exponents,
            Duration::from_secs(60),
        ),
        ("inequality scan", scan, Duration::from_secs(120)),
        (
            "alpha properties",
            alpha_properties,
            Duration::from_secs(60),
        ),
        ("asymptotics", asymptotics, Duration::from_secs(60)),
        ("Lagrange series", lagrange, Duration::from_secs(60)),
        ("identity suites", identity_suites, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()))
            .and_then(|()| {
                let t = start.elapsed();
                ensure(t <= *limit, format!("took {t:.2?}, limit {limit:?}"))
            });
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({t:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
