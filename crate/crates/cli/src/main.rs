//! `largegaps` command-line front end.
//!
//! Every report goes to stdout as JSON (or a plain table with
//! `--format text`) and embeds the run configuration. Diagnostics go to
//! stderr. Exit codes: 0 success, 2 for `ratio` when `h >= 1`, 1 on error.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use largegaps::constants::{check_identities, euler_product_over, primes_up_to, Constant};
use largegaps::functional::DEFAULT_SERIES_TOL;
use largegaps::optimizer::DEFAULT_TOL_C;
use largegaps::zerostats::{load_zeros, max_counting_residual, max_gap_report};
use largegaps::{h_ratio, max_lambda, Error, MollifierSpec, Rational, SeriesConfig, ThetaParam};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

const IDENTITY_MAX_PRIME: u64 = 10_000;
const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "largegaps", version, about = "Large gaps between zeros of the zeta function")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate h(c) for one shape polynomial.
    Ratio(RatioArgs),
    /// Largest certified c for polynomials of degree at most M.
    Lambda(LambdaArgs),
    /// Euler-product constants and their per-prime identities.
    Constants(ConstantsArgs),
    /// Normalized-gap statistics of a zero table.
    Gaps(GapsArgs),
}

#[derive(Args, Debug, Clone)]
struct SeriesArgs {
    /// 1/ϑ as a rational (ϑ = 1/2 by default).
    #[arg(long, default_value = "2")]
    theta_inv: String,

    /// Relative truncation tolerance for the series in c.
    #[arg(long, default_value_t = DEFAULT_SERIES_TOL)]
    tol_series: f64,

    /// Use the general-ϑ series weights (needed when ϑ ≠ 1/2).
    #[arg(long)]
    generalized_theta: bool,
}

#[derive(Args, Debug)]
struct RatioArgs {
    /// Coefficients a2,a3,...,aM of P(x) = Σ a_k x^k (integers, p/q or decimals).
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,

    /// Gap parameter; accepts a decimal or a multiple of π such as "2.9pi".
    #[arg(long, allow_hyphen_values = true)]
    c: String,

    #[command(flatten)]
    series: SeriesArgs,
}

#[derive(Args, Debug)]
struct LambdaArgs {
    /// Degree bound M (at least 2).
    #[arg(long)]
    degree: usize,

    /// Bisection tolerance in c.
    #[arg(long, default_value_t = DEFAULT_TOL_C)]
    tol_c: f64,

    #[command(flatten)]
    series: SeriesArgs,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    /// Largest prime in the truncated products.
    #[arg(long, default_value_t = DEFAULT_PRIME_CUTOFF)]
    cutoff: u64,
}

#[derive(Args, Debug)]
struct GapsArgs {
    /// Zero table, one ordinate per line ('#' comments allowed).
    #[arg(long)]
    zeros: PathBuf,

    /// Upper end of the range for the N(T) residual (defaults to the last ordinate).
    #[arg(long)]
    t_max: Option<f64>,

    /// Also write the gap histogram as CSV to this path.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

/// Configuration echoed into every report.
#[derive(Serialize)]
struct RunConfig {
    subcommand: &'static str,
    flags: Value,
    tol_series: f64,
    tol_c: f64,
    prime_cutoff: u64,
    output_format: Format,
}

impl RunConfig {
    fn new(subcommand: &'static str, flags: Value, format: Format) -> Self {
        RunConfig {
            subcommand,
            flags,
            tol_series: DEFAULT_SERIES_TOL,
            tol_c: DEFAULT_TOL_C,
            prime_cutoff: DEFAULT_PRIME_CUTOFF,
            output_format: format,
        }
    }
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.command {
        Command::Ratio(a) => cmd_ratio(a, cli.format),
        Command::Lambda(a) => cmd_lambda(a, cli.format),
        Command::Constants(a) => cmd_constants(a, cli.format),
        Command::Gaps(a) => cmd_gaps(a, cli.format),
    }
}

/// Parse an integer, `p/q`, or a finite decimal exactly.
fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let s = s.trim();
    let bad = || invalid(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int = if int.is_empty() || int == "-" || int == "+" {
            BigInt::from(0)
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = int.magnitude().clone();
        let num = BigInt::from(mag) * &scale + frac;
        let num = if neg { -num } else { num };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

fn parse_coeffs(s: &str) -> Result<MollifierSpec, Failure> {
    let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(MollifierSpec::new(coeffs)?)
}

/// A decimal, or a decimal followed by `pi` (e.g. `2.9pi`, `pi`).
fn parse_c(s: &str) -> Result<f64, Failure> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || invalid(format!("not a gap parameter: {s:?}"));
    let c = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some("") => PI,
        Some(m) => m.trim_end_matches('*').parse::<f64>().map_err(|_| bad())? * PI,
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid(format!("gap parameter must be positive, got {s:?}")));
    }
    Ok(c)
}

fn series_config(a: &SeriesArgs) -> Result<(ThetaParam, SeriesConfig), Failure> {
    let theta = ThetaParam::from_inverse(parse_rational(&a.theta_inv)?)?;
    let cfg = SeriesConfig {
        tol: a.tol_series,
        generalized_theta: a.generalized_theta,
        ..SeriesConfig::default()
    };
    Ok((theta, cfg))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_ratio(a: &RatioArgs, format: Format) -> Result<(String, u8), Failure> {
    let p = parse_coeffs(&a.coeffs)?;
    let c = parse_c(&a.c)?;
    let (theta, cfg) = series_config(&a.series)?;
    let report = h_ratio(&p, c, &theta, &cfg)?;
    let mut config = RunConfig::new(
        "ratio",
        json!({
            "coeffs": p,
            "c": c,
            "theta_inv": theta.theta_inv().to_string(),
            "generalized_theta": cfg.generalized_theta,
        }),
        format,
    );
    config.tol_series = cfg.tol;
    let code = if report.h < 1.0 { 0 } else { 2 };
    let out = match format {
        Format::Json => to_json(&json!({ "config": config, "report": report })),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "c\t{}", report.c);
            let _ = writeln!(s, "denominator\t{}", report.denominator);
            let _ = writeln!(s, "j_used\t{}", report.j_used);
            let _ = writeln!(s, "h\t{}", report.h);
            match report.lambda_implied {
                Some(l) => {
                    let _ = writeln!(s, "lambda_implied\t{l}");
                }
                None => s.push_str("lambda_implied\t-\n"),
            }
            s
        }
    };
    Ok((out, code))
}

fn cmd_lambda(a: &LambdaArgs, format: Format) -> Result<(String, u8), Failure> {
    let (theta, cfg) = series_config(&a.series)?;
    let cert = max_lambda(a.degree, &theta, a.tol_c, &cfg)?;
    let mut config = RunConfig::new(
        "lambda",
        json!({
            "degree": a.degree,
            "theta_inv": theta.theta_inv().to_string(),
            "generalized_theta": cfg.generalized_theta,
        }),
        format,
    );
    config.tol_series = cfg.tol;
    config.tol_c = a.tol_c;
    let out = match format {
        Format::Json => to_json(&json!({
            "config": config,
            "certificate": cert,
            "display_coefficients": cert.display_coefficients(),
        })),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "degree\t{}", cert.degree);
            let _ = writeln!(s, "c_star\t{}", cert.c_star);
            let _ = writeln!(s, "lambda\t{}", cert.lambda);
            let _ = writeln!(s, "h_at_witness\t{}", cert.h_at_witness);
            for (k, c) in cert.witness.coeffs().iter().enumerate() {
                let _ = writeln!(s, "a{}\t{}", k + 2, c);
            }
            s
        }
    };
    Ok((out, 0))
}

#[derive(Serialize)]
struct ConstantRow {
    name: Constant,
    value: f64,
    /// Ten significant digits.
    display: String,
    cutoff: u64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct IdentityRow {
    identity: &'static str,
    max_prime: u64,
    primes_checked: usize,
    first_failure: Option<u64>,
    status: &'static str,
}

fn cmd_constants(a: &ConstantsArgs, format: Format) -> Result<(String, u8), Failure> {
    let primes = primes_up_to(a.cutoff);
    let rows = Constant::ALL
        .iter()
        .map(|&name| {
            let r = euler_product_over(name, a.cutoff, &primes)?;
            Ok(ConstantRow {
                name,
                value: r.value,
                display: format!("{:.9e}", r.value),
                cutoff: r.cutoff,
                tail_bound: r.tail_bound,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let identities: Vec<IdentityRow> = check_identities(IDENTITY_MAX_PRIME)
        .into_iter()
        .map(|c| IdentityRow {
            identity: c.identity,
            max_prime: c.max_prime,
            primes_checked: c.primes_checked,
            first_failure: c.first_failure,
            status: if c.passed() { "PASS" } else { "FAIL" },
        })
        .collect();
    let all_pass = identities.iter().all(|c| c.first_failure.is_none());
    let mut config = RunConfig::new("constants", json!({ "cutoff": a.cutoff }), format);
    config.prime_cutoff = a.cutoff;
    let out = match format {
        Format::Json => to_json(&json!({
            "config": config,
            "constants": rows,
            "identities": identities,
        })),
        Format::Csv => {
            let mut s = String::from("name,value,cutoff,tail_bound\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.name, r.display, r.cutoff, r.tail_bound);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{:<3} {}  (tail bound {:.3e})", r.name, r.display, r.tail_bound);
            }
            for c in &identities {
                let _ = writeln!(
                    s,
                    "{} {} for {} primes p <= {}",
                    c.status, c.identity, c.primes_checked, c.max_prime
                );
            }
            s
        }
    };
    if !all_pass {
        for c in identities.iter().filter(|c| c.first_failure.is_some()) {
            eprintln!("identity {} fails at p = {}", c.identity, c.first_failure.unwrap());
        }
        // The report is still printed so the failure can be inspected.
        print!("{out}");
        return Err(invalid("per-prime identity check failed"));
    }
    Ok((out, 0))
}

fn cmd_gaps(a: &GapsArgs, format: Format) -> Result<(String, u8), Failure> {
    let table = load_zeros(&a.zeros)?;
    let stats = max_gap_report(&table)?;
    let t_max = a.t_max.unwrap_or_else(|| table.last());
    let (t_at, residual) = max_counting_residual(&table, t_max)?;
    if let Some(path) = &a.histogram {
        std::fs::write(path, stats.histogram_csv())
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let config = RunConfig::new(
        "gaps",
        json!({
            "zeros": a.zeros.display().to_string(),
            "t_max": t_max,
        }),
        format,
    );
    let out = match format {
        Format::Json => to_json(&json!({
            "config": config,
            "stats": stats,
            "counting_residual": { "t": t_at, "residual": residual, "t_max": t_max },
        })),
        Format::Csv => stats.histogram_csv(),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "count\t{}", stats.count);
            let _ = writeln!(s, "mean_delta\t{}", stats.mean_delta);
            let _ = writeln!(
                s,
                "max_delta\t{}\t({} .. {})",
                stats.max_delta, stats.argmax_gamma, stats.argmax_gamma_prime
            );
            let _ = writeln!(s, "max_counting_residual\t{residual}\tat T = {t_at}");
            s
        }
    };
    Ok((out, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/4").ok(), Some(Rational::new(3.into(), 4.into())));
        assert_eq!(
            parse_rational("-9332").ok(),
            Some(Rational::from_integer((-9332).into()))
        );
        assert_eq!(parse_rational("-0.25").ok(), Some(Rational::new((-1).into(), 4.into())));
        assert_eq!(parse_rational(".5").ok(), Some(Rational::new(1.into(), 2.into())));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn gap_parameter() {
        assert_eq!(parse_c("2.9pi").ok(), Some(2.9 * PI));
        assert_eq!(parse_c("pi").ok(), Some(PI));
        assert_eq!(parse_c("0.001").ok(), Some(0.001));
        assert!(parse_c("-1").is_err());
        assert!(parse_c("0").is_err());
        assert!(parse_c("abc").is_err());
    }
}
