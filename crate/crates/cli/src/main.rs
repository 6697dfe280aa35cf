use clap::{Parser, Subcommand, ValueEnum};
use entcert_core::alpha::{
    alpha_asymptotic_gap, b_solver, lagrange_partial_sum, solve_x_plus_xk, AlphaAlgebraic,
};
use entcert_core::certify::{
    emit_certificate, verify_exponent, Certificate, Verdict, VerifyConfig,
};
use entcert_core::combinatorics::h_table;
use entcert_core::exact::{
    int, log_point, parse_rational_or_decimal, pow2_neg, rat, to_decimal_string, to_f64,
    to_frac_string, Rational, RationalInterval,
};
use entcert_core::forms::inequality_scan;
use entcert_core::suites::{run_suite, Suite};
use entcert_core::{Error, Result};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const PRECISION_ENV: &str = "ENTROPY_CERT_PRECISION";

#[derive(Parser, Debug)]
#[command(
    name = "entcert",
    version,
    about = "Certified checks of a binary entropy inequality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the two-root property of p_{k,r} for the exponent k/r.
    Verify {
        #[arg(long, required_unless_present = "pairs")]
        k: Option<u64>,
        #[arg(long, required_unless_present = "pairs")]
        r: Option<u64>,
        /// Certificate path; a directory in batch mode.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Initial alpha enclosure width is 2^-bits.
        #[arg(long, env = PRECISION_ENV, default_value_t = 256)]
        precision_bits: u32,
        #[arg(long, default_value_t = 64)]
        max_refinements: u32,
        /// File of `k r` pairs, one per line, verified in parallel.
        #[arg(long, conflicts_with_all = ["k", "r"])]
        pairs: Option<PathBuf>,
    },
    /// Print the coefficients h_{k,r,j}.
    Hpoly {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Number of coefficients; defaults to k.
        #[arg(long)]
        len: Option<usize>,
    },
    /// Enclose alpha_{k/r} to the requested width.
    Alpha {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value = "1e-20")]
        width: String,
    },
    /// Run exact identity suites.
    Identities {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        kmax: u64,
        #[arg(long, default_value_t = 3)]
        rmax: u64,
    },
    /// Compare alpha_k with (log k - b_k)/k.
    Asymptotics {
        #[arg(long)]
        k: u64,
        #[arg(long, env = PRECISION_ENV, default_value_t = 256)]
        precision_bits: u32,
    },
    /// Partial sums of the Lagrange series for x^N where x + x^k = z.
    Lagrange {
        #[arg(long)]
        k: u64,
        #[arg(long = "N", default_value_t = 1)]
        n: u64,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 60)]
        terms: u64,
    },
    /// Interval scan of f(x) = alpha H(x^k) - x^{k-r} H(x^r) over a grid.
    Scan {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 1000)]
        grid: u64,
        #[arg(long, env = PRECISION_ENV, default_value_t = 256)]
        precision_bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok((report, code)) => {
            print!("{report}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<(String, u8)> {
    match cmd {
        Command::Verify {
            k,
            r,
            out,
            precision_bits,
            max_refinements,
            pairs,
        } => {
            let config = VerifyConfig {
                start_bits: precision_bits,
                max_refinements,
                hints: None,
            };
            match pairs {
                Some(file) => verify_batch(&file, out.as_deref(), &config),
                None => {
                    let (k, r) = (k.expect("required by clap"), r.expect("required by clap"));
                    let out = out.unwrap_or_else(|| default_cert_path(Path::new("."), k, r));
                    let (text, verdict) = verify_one(k, r, &out, &config)?;
                    Ok((text, verdict.exit_code() as u8))
                }
            }
        }
        Command::Hpoly { k, r, format, len } => hpoly(k, r, format, len).map(|s| (s, 0)),
        Command::Alpha { k, r, width } => alpha(k, r, &width).map(|s| (s, 0)),
        Command::Identities { suite, kmax, rmax } => identities(&suite, kmax, rmax),
        Command::Asymptotics { k, precision_bits } => {
            asymptotics(k, precision_bits).map(|s| (s, 0))
        }
        Command::Lagrange { k, n, z, terms } => lagrange(k, n, &z, terms).map(|s| (s, 0)),
        Command::Scan {
            k,
            r,
            grid,
            precision_bits,
            out,
        } => scan(k, r, grid, precision_bits, out.as_deref()).map(|s| (s, 0)),
    }
}

fn default_cert_path(dir: &Path, k: u64, r: u64) -> PathBuf {
    dir.join(format!("cert-{k}-{r}.json"))
}

/// Decimal digits enough to resolve `width`.
fn digits_for(width: &Rational) -> usize {
    let w = to_f64(width);
    if w > 0.0 && w.is_finite() {
        ((-w.log10()).ceil().max(0.0) as usize + 4).clamp(12, 400)
    } else {
        60
    }
}

fn push_interval(out: &mut String, key: &str, x: &RationalInterval) {
    let digits = digits_for(&x.width());
    let _ = writeln!(out, "{key}_LO={}", to_frac_string(x.lo()));
    let _ = writeln!(out, "{key}_HI={}", to_frac_string(x.hi()));
    let _ = writeln!(
        out,
        "{key}_LO_DECIMAL={}",
        to_decimal_string(x.lo(), digits)
    );
    let _ = writeln!(
        out,
        "{key}_HI_DECIMAL={}",
        to_decimal_string(x.hi(), digits)
    );
}

fn render_certificate(c: &Certificate, path: &Path) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "VERDICT={}", c.verdict);
    let _ = writeln!(s, "K={}", c.k);
    let _ = writeln!(s, "R={}", c.r);
    push_interval(&mut s, "ALPHA", &c.alpha_enclosure()?);
    let _ = writeln!(s, "P_DEGREE={}", c.p_degree);
    let _ = writeln!(s, "SIGNS={}", c.signs);
    let _ = writeln!(s, "DESCARTES_COUNT={}", c.descartes_count);
    for (i, w) in c.witnesses.iter().enumerate() {
        let _ = writeln!(
            s,
            "WITNESS_{}={} {} {}",
            i + 1,
            to_frac_string(&w.x),
            to_decimal_string(&w.x, 8),
            w.sign.as_char()
        );
    }
    for (i, b) in c.root_brackets.iter().enumerate() {
        let _ = writeln!(
            s,
            "ROOT_{}={} {} {} {}",
            i + 1,
            to_frac_string(b.lo()),
            to_frac_string(b.hi()),
            to_decimal_string(b.lo(), 8),
            to_decimal_string(b.hi(), 8)
        );
    }
    let _ = writeln!(s, "REFINEMENTS={}", c.refinements);
    for note in &c.notes {
        let _ = writeln!(s, "NOTE={note}");
    }
    let _ = writeln!(s, "CERTIFICATE={}", path.display());
    Ok(s)
}

/// The certificate is on disk before anything is printed.
fn verify_one(k: u64, r: u64, out: &Path, config: &VerifyConfig) -> Result<(String, Verdict)> {
    let cert = verify_exponent(k, r, config)?;
    emit_certificate(&cert, out)?;
    Ok((render_certificate(&cert, out)?, cert.verdict))
}

fn parse_pairs(text: &str) -> Result<Vec<(u64, u64)>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let nums: Vec<&str> = l
                .split(|c: char| c == '/' || c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect();
            match nums.as_slice() {
                [k, r] => Ok((
                    k.parse().map_err(|_| Error::Parse(l.to_string()))?,
                    r.parse().map_err(|_| Error::Parse(l.to_string()))?,
                )),
                _ => Err(Error::Parse(l.to_string())),
            }
        })
        .collect()
}

fn verify_batch(file: &Path, out: Option<&Path>, config: &VerifyConfig) -> Result<(String, u8)> {
    let pairs = parse_pairs(&std::fs::read_to_string(file)?)?;
    let dir = out.unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let results: Vec<Result<(String, Verdict)>> = pairs
        .par_iter()
        .map(|&(k, r)| verify_one(k, r, &default_cert_path(dir, k, r), config))
        .collect();
    let mut report = String::new();
    let mut code = 0u8;
    for ((k, r), res) in pairs.iter().zip(results) {
        match res {
            Ok((text, verdict)) => {
                report.push_str(&text);
                code = code.max(verdict.exit_code() as u8);
            }
            Err(e) => {
                let _ = writeln!(report, "K={k}\nR={r}\nERROR={e}");
                code = 1;
            }
        }
        report.push('\n');
    }
    let errored = code == 1;
    let _ = writeln!(report, "PAIRS={}", pairs.len());
    Ok((report, if errored { 1 } else { code }))
}

fn hpoly(k: u64, r: u64, format: Format, len: Option<usize>) -> Result<String> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidParameter(format!(
            "hpoly needs k, r >= 1, got k={k} r={r}"
        )));
    }
    let table = h_table(k, r, len.unwrap_or(k as usize));
    let mut s = String::new();
    match format {
        Format::Text => {
            let row: Vec<String> = table.coefficients.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "K={k}\nR={r}\nCOEFFICIENTS={}", row.join(", "));
        }
        Format::Csv => {
            s.push_str("k,r,j,value\n");
            for (j, c) in table.coefficients.iter().enumerate() {
                let _ = writeln!(s, "{k},{r},{j},{}", to_frac_string(c));
            }
        }
        Format::Json => {
            s = serde_json::to_string_pretty(&table)?;
            s.push('\n');
        }
    }
    Ok(s)
}

fn alpha(k: u64, r: u64, width: &str) -> Result<String> {
    let w = parse_rational_or_decimal(width)?;
    let a = AlphaAlgebraic::new(k, r)?.refine(&w)?;
    let mut s = String::new();
    let _ = writeln!(s, "K={}\nR={}", a.k(), a.r());
    push_interval(&mut s, "ALPHA", a.enclosure());
    let _ = writeln!(s, "WIDTH={}", to_frac_string(&a.width()));
    Ok(s)
}

fn identities(suite: &str, kmax: u64, rmax: u64) -> Result<(String, u8)> {
    let suite: Suite = suite.parse()?;
    if kmax == 0 || rmax == 0 {
        return Err(Error::InvalidParameter("kmax and rmax must be >= 1".into()));
    }
    let outcomes = run_suite(suite, kmax, rmax)?;
    let mut s = String::new();
    for o in &outcomes {
        let _ = writeln!(s, "{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(s, "SUITE={suite}");
    let _ = writeln!(s, "PASSED={}", outcomes.len() - failed);
    let _ = writeln!(s, "FAILED={failed}");
    Ok((s, if failed == 0 { 0 } else { 1 }))
}

fn asymptotics(k: u64, bits: u32) -> Result<String> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "asymptotics needs k >= 3, got {k}"
        )));
    }
    let b = b_solver(k, bits)?;
    let gap = alpha_asymptotic_gap(k, bits)?;
    // 5 log^2 k / k^2 from below, so GAP_HI <= BOUND is a certified comparison.
    let log_k = log_point(&int(k as i64), bits)?;
    let bound = log_k.lo() * log_k.lo() * rat(5, 1) / int(k as i64) / int(k as i64);
    let mut s = String::new();
    let _ = writeln!(s, "K={k}");
    push_interval(&mut s, "B", &b);
    let _ = writeln!(s, "GAP_HI={}", to_frac_string(gap.hi()));
    let _ = writeln!(s, "GAP_HI_DECIMAL={:.6e}", to_f64(gap.hi()));
    let _ = writeln!(s, "BOUND_DECIMAL={:.6e}", to_f64(&bound));
    let _ = writeln!(s, "WITHIN_BOUND={}", gap.hi() <= &bound);
    Ok(s)
}

fn lagrange(k: u64, n: u64, z: &str, terms: u64) -> Result<String> {
    let z = parse_rational_or_decimal(z)?;
    let sum = lagrange_partial_sum(k, n, &z, terms)?;
    let mut s = String::new();
    let _ = writeln!(s, "K={k}\nN={n}\nZ={}\nTERMS={terms}", to_frac_string(&z));
    let _ = writeln!(s, "VALUE={}", to_frac_string(&sum.value));
    let _ = writeln!(s, "VALUE_DECIMAL={}", to_decimal_string(&sum.value, 20));
    let _ = writeln!(
        s,
        "LAST_TERM_MAGNITUDE={:.6e}",
        to_f64(&sum.last_term_magnitude)
    );
    if z > int(0) {
        let root = solve_x_plus_xk(k, &z, &pow2_neg(100))?;
        let target = root.pow(n as u32);
        let mid = target.midpoint();
        let d = &sum.value - &mid;
        let diff = if d < int(0) { -d } else { d } + target.width();
        let _ = writeln!(s, "BISECTION_DECIMAL={}", to_decimal_string(&mid, 20));
        let _ = writeln!(s, "ABS_DIFF={:.6e}", to_f64(&diff));
    }
    let _ = writeln!(s, "DIVERGING={}", sum.diverging);
    Ok(s)
}

fn scan(k: u64, r: u64, grid: u64, bits: u32, out: Option<&Path>) -> Result<String> {
    let a = AlphaAlgebraic::new(k, r)?;
    let report = inequality_scan(&a, grid, bits)?;
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, &json)?;
            Ok(format!(
                "MIN_LOWER_BOUND_DECIMAL={:.6e}\nZERO_CELLS={}\nREPORT={}\n",
                to_f64(&report.min_lower_bound),
                report.zero_cells.len(),
                path.display()
            ))
        }
        None => Ok(json),
    }
}
