//! The `boolrad` command line.
//!
//! [`run`] parses arguments, dispatches and returns the exit code together
//! with everything that would be printed, so it can be tested without a
//! subprocess. Exit codes: 0 success, 1 verification failure, 2 usage or
//! input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cube::{BooleanFunction, SymmetricSpectrum, MAX_DENSE_N};
use crate::error::{Error, Result};
use crate::families::{self, ThresholdSpec};
use crate::lab::{self, Mode, Suite};
use crate::parallel;
use crate::radius::{self, boolean_radius_symmetric, radius_of, RadiusResult};
use crate::special::SQRT_PI_OVER_2;
use crate::threshold::{self, ThresholdReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Dense tables are used for thresholds up to this size; larger ones go
/// through the exact symmetric spectrum.
const DENSE_THRESHOLD_N: usize = 20;

pub const TN_NOTE: &str = "note: the t_N sum starts at k = 1; a k = 0 term would contain floor(N/0), which is undefined";

#[derive(Debug, Parser)]
#[command(
    name = "boolrad",
    version,
    about = "Boolean radii of real functions on the Boolean cube",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage or input error.\n\
                  The default worker count comes from BOOLRAD_WORKERS, else the number of CPUs."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for scans and suites.
    #[arg(long, global = true, env = parallel::WORKERS_ENV)]
    workers: Option<usize>,

    /// Output format. Scans default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `F = 1 - 2·1_{x = (1,…,1)}`, extremal for the class of all functions.
    Extremal,
    /// `x_i` (coordinate from --coord, default 1).
    Dictator,
    /// Parity of all coordinates.
    Parity,
    /// `sign(x_1 + … + x_n - alpha)`.
    Threshold,
    /// Majority on an odd number of coordinates.
    Majority,
    /// `+1` on a `lambda` fraction of points (or `delta/2` if --delta is given).
    Biased,
    /// Random-sign `m`-homogeneous function with unit coefficients.
    Homogeneous,
    /// Random function of degree at most `d`, rescaled to sup norm 1.
    LowDegree,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Named function family.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Truth-table JSON file (`{"n":…,"values":[…]}` or a bare array); `-` is not supported.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Coordinate of the dictator, 1-based.
    #[arg(long, default_value_t = 1)]
    coord: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boolean radius of one function.
    Radius(FamilyArgs),
    /// Radius of the class of all functions on n variables, optionally by exhaustive search.
    Bn {
        #[arg(long)]
        n: usize,
        /// Enumerate every ±1 function (n ≤ 4).
        #[arg(long)]
        brute: bool,
    },
    /// Radii of threshold functions with ratio, McKay residual and sandwich status.
    ThresholdScan {
        /// Dimensions: comma-separated values and ranges `a..b` or `a..b:step`.
        #[arg(long)]
        n: String,
        /// Threshold: `0`, `sqrt` (floor √n), `half` (floor n/2) or a number.
        #[arg(long, default_value = "0")]
        alpha: String,
    },
    /// Radii of majority functions against γ/√n.
    MajorityScan {
        /// Odd dimensions: values and ranges `a..b` (odd steps by default).
        #[arg(long)]
        n: String,
    },
    /// Fourier-Walsh spectrum of one function.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        /// Emit one exact coefficient per level.
        #[arg(long)]
        symmetric: bool,
    },
    /// Run an inequality suite; exit 1 if any instance fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The majority constant γ.
    Gamma,
    /// The lower-bound root t_N.
    Tn {
        #[arg(long)]
        n: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => Failure::Verify(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Emitted {
    body: String,
    note: Option<String>,
    failed: bool,
}

impl Emitted {
    fn ok(body: String) -> Self {
        Self {
            body,
            note: None,
            failed: false,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let workers = cli.workers.filter(|&w| w > 0).unwrap_or_else(parallel::default_workers);
    let emitted = match dispatch(&cli.command, cli.format, workers) {
        Ok(e) => e,
        Err(Failure::Usage(msg)) => return failure(EXIT_USAGE, msg),
        Err(Failure::Verify(msg)) => return failure(EXIT_VERIFY_FAILED, msg),
    };
    let mut stderr = emitted.note.map(|n| n + "\n").unwrap_or_default();
    let stdout = match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &emitted.body) {
                return failure(EXIT_USAGE, format!("cannot write {}: {e}", path.display()));
            }
            String::new()
        }
        None => emitted.body,
    };
    let code = if emitted.failed {
        stderr.push_str("verification failed\n");
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    };
    Outcome { code, stdout, stderr }
}

fn failure(code: i32, msg: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn dispatch(command: &Command, format: Option<Format>, workers: usize) -> std::result::Result<Emitted, Failure> {
    match command {
        Command::Radius(args) => cmd_radius(args, format.unwrap_or(Format::Json)),
        Command::Bn { n, brute } => json_only(format, cmd_bn(*n, *brute, workers)?),
        Command::ThresholdScan { n, alpha } => cmd_threshold_scan(n, alpha, format.unwrap_or(Format::Csv), workers),
        Command::MajorityScan { n } => cmd_majority_scan(n, format.unwrap_or(Format::Csv), workers),
        Command::Spectrum { family, symmetric } => json_only(format, cmd_spectrum(family, *symmetric)?),
        Command::Verify {
            suite,
            n_max,
            samples,
            seed,
        } => {
            let suite: Suite = suite.parse()?;
            let report = lab::run_suite(suite, *n_max, *samples, *seed, workers)?;
            let mut out = json_only(format, to_json(&report))?;
            out.failed = !report.passed();
            Ok(out)
        }
        Command::Gamma => {
            let gamma = threshold::gamma_constant();
            let body = to_json(&json!({
                "gamma": gamma,
                "integral": threshold::gauss_growth_integral(gamma),
                "target": SQRT_PI_OVER_2,
            }));
            json_only(format, body)
        }
        Command::Tn { n } => {
            let t = threshold::tn_lower_bound(*n)?;
            let body = to_json(&json!({ "n": n, "t_n": t, "note": TN_NOTE }));
            let mut out = json_only(format, body)?;
            out.note = Some(TN_NOTE.to_string());
            Ok(out)
        }
    }
}

fn json_only(format: Option<Format>, body: String) -> std::result::Result<Emitted, Failure> {
    if format == Some(Format::Csv) {
        return Err(Failure::Usage("this command only supports --format json".into()));
    }
    Ok(Emitted::ok(body))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// 17 significant digits, enough for an exact `f64` round trip.
pub fn csv_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn require_n(args: &FamilyArgs) -> Result<usize> {
    args.n.ok_or_else(|| Error::Input("--n is required with --family".into()))
}

enum Built {
    Dense(BooleanFunction),
    Symmetric(SymmetricSpectrum),
}

fn read_table(path: &PathBuf) -> Result<BooleanFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("malformed JSON in {}: {e}", path.display())))?;
    if let Some(values) = value.as_array() {
        let values: Vec<f64> = values
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| Error::Input(format!("non-numeric table entry {v}"))))
            .collect::<Result<_>>()?;
        let len = values.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Input(format!("table length {len} is not 2^n with n >= 1")));
        }
        return BooleanFunction::from_truth_table(len.trailing_zeros() as usize, values);
    }
    serde_json::from_value(value).map_err(|e| Error::Input(format!("invalid truth table: {e}")))
}

fn build(args: &FamilyArgs) -> Result<Built> {
    if let Some(path) = &args.input {
        return read_table(path).map(Built::Dense);
    }
    let family = args
        .family
        .ok_or_else(|| Error::Input("give either --family or --input".into()))?;
    let n = require_n(args)?;
    let dense = |f: Result<BooleanFunction>| f.map(Built::Dense);
    match family {
        Family::Extremal => dense(families::extremal_indicator_flip(n)),
        Family::Dictator => dense(families::dictator(n, args.coord)),
        Family::Parity => {
            if n == 0 || n > MAX_DENSE_N {
                return Err(Error::DimensionOutOfRange {
                    n,
                    min: 1,
                    max: MAX_DENSE_N,
                });
            }
            dense(families::parity(n, (1 << n) - 1))
        }
        Family::Threshold | Family::Majority => {
            if family == Family::Majority && n % 2 == 0 {
                return Err(Error::Input(format!("majority needs odd n, got {n}")));
            }
            let alpha = if family == Family::Majority { 0.0 } else { args.alpha };
            let spec = ThresholdSpec::new(n, alpha)?;
            if n <= DENSE_THRESHOLD_N {
                dense(families::threshold(spec))
            } else {
                let a = families::canonical_alpha(n, alpha)?;
                threshold::threshold_spectrum_exact(n, a).map(Built::Symmetric)
            }
        }
        Family::Biased => {
            let lambda = match (args.lambda, args.delta) {
                (Some(l), None) => l,
                (None, Some(d)) => d / 2.0,
                (None, None) => return Err(Error::Input("biased needs --lambda or --delta".into())),
                (Some(_), Some(_)) => return Err(Error::Input("give only one of --lambda and --delta".into())),
            };
            dense(families::biased_indicator(n, lambda))
        }
        Family::Homogeneous => {
            let m = args.m.ok_or_else(|| Error::Input("homogeneous needs --m".into()))?;
            if m > n {
                return Err(Error::Input(format!("--m {m} exceeds --n {n}")));
            }
            let unit = vec![1.0; families::subsets_of_size(n.min(families::MAX_RANDOM_SIGN_N), m).len()];
            dense(families::random_sign_homogeneous(n, m, &unit, args.seed).map(|(f, _)| f))
        }
        Family::LowDegree => {
            let d = args.d.ok_or_else(|| Error::Input("low-degree needs --d".into()))?;
            dense(lab::random_bounded_function(n, args.seed, Mode::LowDegree(d)))
        }
    }
}

fn cmd_radius(args: &FamilyArgs, format: Format) -> std::result::Result<Emitted, Failure> {
    let result: RadiusResult = match build(args)? {
        Built::Dense(f) => radius_of(&f)?,
        Built::Symmetric(s) => boolean_radius_symmetric(&s, 1.0)?,
    };
    Ok(Emitted::ok(match format {
        Format::Json => to_json(&result),
        Format::Csv => {
            let method = serde_json::to_value(result.method).expect("method serializes");
            format!(
                "radius,residual,iterations,method\n{},{},{},{}\n",
                csv_real(result.radius),
                csv_real(result.residual),
                result.iterations,
                method.as_str().unwrap_or_default()
            )
        }
    }))
}

#[derive(Serialize)]
struct BruteJson {
    radius: RadiusResult,
    index: u64,
    functions: u64,
    minimizer: BooleanFunction,
}

#[derive(Serialize)]
struct BnJson {
    n: usize,
    formula: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<BruteJson>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

/// Agreement required between the formula and the exhaustive minimum.
pub const BN_MATCH_TOL: f64 = 1e-10;

fn cmd_bn(n: usize, brute: bool, workers: usize) -> std::result::Result<String, Failure> {
    let formula = radius::bn_radius_formula(n)?;
    let brute_force = if brute {
        let b = radius::brute_force_bn_radius(n, workers)?;
        Some(BruteJson {
            radius: b.radius,
            index: b.index,
            functions: b.functions,
            minimizer: b.minimizer,
        })
    } else {
        None
    };
    let matches = brute_force
        .as_ref()
        .map(|b| (b.radius.radius - formula).abs() <= BN_MATCH_TOL);
    if matches == Some(false) {
        return Err(Failure::Verify(format!("exhaustive minimum disagrees with 2^(1/{n}) - 1")));
    }
    Ok(to_json(&BnJson {
        n,
        formula,
        brute_force,
        matches,
    }))
}

/// Expands `3,5,9..15,101..201:50`; bare ranges step by `default_step`.
pub fn parse_n_list(spec: &str, default_step: usize) -> Result<Vec<usize>> {
    let bad = |part: &str| Error::Input(format!("bad dimension list entry '{part}'"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.parse::<usize>().map_err(|_| bad(part))?),
                None => (rest, default_step),
            };
            let lo: usize = lo.parse().map_err(|_| bad(part))?;
            let hi: usize = hi.parse().map_err(|_| bad(part))?;
            if step == 0 || hi < lo {
                return Err(bad(part));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if out.is_empty() {
        return Err(Error::Input("empty dimension list".into()));
    }
    Ok(out)
}

/// Resolves an alpha spec (`0`, `sqrt`, `half` or a number) for dimension `n`.
pub fn resolve_alpha(spec: &str, n: usize) -> Result<f64> {
    match spec.trim() {
        "sqrt" => Ok((n as f64).sqrt().floor()),
        "half" => Ok((n / 2) as f64),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::Input(format!("alpha must be sqrt, half or a number, got '{other}'"))),
    }
}

pub const THRESHOLD_CSV_HEADER: &str = "n,alpha,radius,ratio,mckay_c,sandwich_ok,y_value";

fn cmd_threshold_scan(ns: &str, alpha: &str, format: Format, workers: usize) -> std::result::Result<Emitted, Failure> {
    let ns = parse_n_list(ns, 1)?;
    let alphas: Vec<f64> = ns.iter().map(|&n| resolve_alpha(alpha, n)).collect::<Result<_>>()?;
    let reports = parallel::map_indexed(ns.len(), workers, |i| threshold::threshold_radius(ns[i], alphas[i]));
    let reports: Vec<ThresholdReport> = reports.into_iter().collect::<Result<_>>()?;
    let failed = reports.iter().any(|r| !r.sandwich_ok);
    let body = match format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut s = String::from(THRESHOLD_CSV_HEADER);
            s.push('\n');
            for r in &reports {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.alpha,
                    csv_real(r.radius),
                    csv_real(r.ratio),
                    csv_real(r.mckay_c),
                    r.sandwich_ok,
                    csv_real(r.y_value)
                )
                .expect("writing to a String");
            }
            s
        }
    };
    Ok(Emitted {
        body,
        note: None,
        failed,
    })
}

pub const MAJORITY_CSV_HEADER: &str = "n,radius,radius_sqrt_n,ratio_to_gamma,gamma";

fn cmd_majority_scan(ns: &str, format: Format, workers: usize) -> std::result::Result<Emitted, Failure> {
    let ns = parse_n_list(ns, 2)?;
    let scan = threshold::majority_scan(&ns, workers)?;
    Ok(Emitted::ok(match format {
        Format::Json => to_json(&scan),
        Format::Csv => {
            let mut s = String::from(MAJORITY_CSV_HEADER);
            s.push('\n');
            for r in &scan.rows {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.n,
                    csv_real(r.radius),
                    csv_real(r.scaled),
                    csv_real(r.ratio),
                    csv_real(scan.gamma)
                )
                .expect("writing to a String");
            }
            s
        }
    }))
}

fn cmd_spectrum(args: &FamilyArgs, symmetric: bool) -> std::result::Result<String, Failure> {
    Ok(match (build(args)?, symmetric) {
        (Built::Dense(f), false) => to_json(&f.walsh_transform()),
        (Built::Dense(f), true) => to_json(&SymmetricSpectrum::from_dense(&f.walsh_transform())?),
        (Built::Symmetric(s), true) => to_json(&s),
        (Built::Symmetric(_), false) => {
            return Err(Failure::Usage(format!(
                "dense spectra are limited to n <= {DENSE_THRESHOLD_N} for thresholds; pass --symmetric"
            )))
        }
    })
}
