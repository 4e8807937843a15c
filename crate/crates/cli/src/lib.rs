//! Command-line front end: `validate`, `compute`, `decompose` and `series`.

pub mod bundled;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhwb_core::decomposition::{rhs_dims, verify_decomposition, DecompositionError, DecompositionOptions};
use hhwb_core::dgcore::{DgError, GradedDims, Permutation};
use hhwb_core::hochschild::{minimal_level, total_homology, Certificate, HochschildError, StandardComplex, TwistSpec};
use hhwb_core::qlinalg::{Arithmetic, LinalgError, RankMode};
use thiserror::Error;

use crate::input::{load, InputError, LoadedInput};
use crate::report::{cache_key, write_csv, Cache, Destinations, Outcome, Params, Provenance, Report, Row, RunOptions, Timings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("input does not validate:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Argument(_) => EXIT_PARSE,
            _ => EXIT_MISMATCH,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hhwb", version, about = "Twisted Hochschild homology of finite dg categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Modular,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Largest truncation level; the smallest level certifying the degrees is used.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_level: u64,
    /// Drop unit bar entries (default).
    #[arg(long, overrides_with = "full")]
    pub normalized: bool,
    /// Keep unit bar entries.
    #[arg(long, overrides_with = "normalized")]
    pub full: bool,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Comma separated primes in (2^20, 2^32) for modular mode.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Homological degrees `a..b`, inclusive; defaults to `0..max_level-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub degrees: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, env = "HHWB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the dg category axioms and any functors or transformations in the file.
    Validate {
        path: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology of the standard complex.
    Compute {
        path: String,
        /// `id`, `perm:<n>:<cycles>` or `functor:<name>`.
        #[arg(long, default_value = "id")]
        twist: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Both sides of the decomposition of the symmetric power.
    Decompose {
        path: String,
        #[arg(long)]
        n: usize,
        /// Also average over the whole centralizer.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        allow_truncated: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The series side alone from a table `degree:dim,…` of total degrees.
    Series {
        #[arg(long, allow_hyphen_values = true)]
        dims: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_truncated: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

pub fn parse_degrees(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Argument(format!("degrees {text:?}: expected a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
    if a > b {
        return Err(CliError::Argument(format!("degrees {text:?} is empty")));
    }
    Ok((a, b))
}

/// `degree:dim` pairs in total degree; an empty string is the zero table.
pub fn parse_dims(text: &str) -> Result<GradedDims, CliError> {
    let mut out = GradedDims::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::Argument(format!("dims entry {item:?}: expected degree:dim"));
        let (k, d) = item.split_once(':').ok_or_else(bad)?;
        out.add(k.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
    }
    Ok(out)
}

pub fn parse_twist(text: &str, input: &LoadedInput) -> Result<TwistSpec, CliError> {
    if text == "id" {
        return Ok(TwistSpec::Identity);
    }
    if let Some(rest) = text.strip_prefix("perm:") {
        let (n, cycles) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Argument(format!("twist {text:?}: expected perm:<n>:<cycles>")))?;
        let n: usize = n.parse().map_err(|_| CliError::Argument(format!("twist {text:?}: bad n")))?;
        let perm = Permutation::from_cycles(n, cycles).map_err(|e| CliError::Argument(format!("twist {text:?}: {e}")))?;
        return Ok(TwistSpec::Permutation { n, perm });
    }
    let name = text.strip_prefix("functor:").unwrap_or(text);
    input
        .functors
        .get(name)
        .map(|f| TwistSpec::Functor(f.clone()))
        .ok_or_else(|| CliError::Argument(format!("twist {text:?}: no functor of that name in the input")))
}

fn mode_of(run: &RunArgs) -> Result<RankMode, CliError> {
    let mode = match (run.mode, run.primes.is_empty()) {
        (Some(ModeArg::Exact), true) => RankMode::Exact,
        (Some(ModeArg::Exact), false) => return Err(CliError::Argument("--primes needs modular mode".into())),
        (_, false) => RankMode::Modular(run.primes.clone()),
        (_, true) => RankMode::modular_default(),
    };
    mode.validate().map_err(|e| CliError::Argument(e.to_string()))?;
    Ok(mode)
}

fn options(run: &RunArgs, twist: Option<String>, n: Option<usize>, strict: bool, allow: bool) -> Result<RunOptions, CliError> {
    let max_level = run.max_level as usize;
    let degrees = match &run.degrees {
        Some(t) => parse_degrees(t)?,
        None => (0, max_level as i64 - 1),
    };
    let params = Params {
        max_level,
        normalized: !run.full,
        mode: mode_of(run)?,
        degrees: Some(degrees),
        twist,
        n,
        allow_truncated: allow,
        strict,
    };
    let destinations = Destinations { out: run.out.clone(), csv: run.csv.clone(), cache_dir: run.cache_dir.clone() };
    Ok(RunOptions { params, destinations })
}

fn total_range(params: &Params) -> RangeInclusive<i64> {
    let (lo, hi) = params.degrees.expect("resolved degrees");
    -hi..=-lo
}

fn loaded_valid(path: &str) -> Result<LoadedInput, CliError> {
    let input = load(path)?;
    let diags = input.diagnostics();
    if !diags.is_empty() {
        return Err(CliError::Invalid(diags));
    }
    Ok(input)
}

fn finish(command: &str, input: Option<&LoadedInput>, params: Params, result: Outcome, start: Instant) -> Report {
    let provenance = Provenance::of(&result, &params.mode);
    Report {
        tool: report::TOOL.into(),
        version: report::VERSION.into(),
        command: command.into(),
        input: input.map(|i| i.info.clone()),
        options: params,
        result,
        provenance,
        timings: Timings { wall_ms: start.elapsed().as_millis() as u64 },
    }
}

pub fn cmd_validate(path: &str) -> Result<Report, CliError> {
    let start = Instant::now();
    let input = load(path)?;
    let diagnostics = input.diagnostics();
    let params = Params {
        max_level: 0,
        normalized: true,
        mode: RankMode::Exact,
        degrees: None,
        twist: None,
        n: None,
        allow_truncated: false,
        strict: false,
    };
    let result = Outcome::Validation { valid: diagnostics.is_empty(), diagnostics };
    Ok(finish("validate", Some(&input), params, result, start))
}

pub fn cmd_compute(path: &str, params: Params) -> Result<Report, CliError> {
    let start = Instant::now();
    let input = loaded_valid(path)?;
    let spec = parse_twist(params.twist.as_deref().unwrap_or("id"), &input)?;
    let (cat, functor) = spec.resolve(input.category.clone())?;
    let degrees = total_range(&params);
    let level =
        minimal_level(cat.degree_bounds(), *degrees.start(), *degrees.end(), params.max_level).unwrap_or(params.max_level);
    let sc = StandardComplex::new(cat, functor, level, params.normalized)?;
    let summary = total_homology(&sc, degrees, &params.mode)?;
    let mut warnings = Vec::new();
    for (k, d) in &summary.degrees {
        if d.certificate == Certificate::Heuristic {
            warnings.push(format!(
                "degree {} is not certified at level {level}; compare --max-level {level} with {}",
                -k,
                level + 1
            ));
        }
        if let Arithmetic::Modular { agree: false, .. } = d.arithmetic {
            warnings.push(format!("degree {}: primes disagree; rerun with --mode exact", -k));
        }
    }
    let rows = summary
        .degrees
        .iter()
        .rev()
        .map(|(k, d)| Row { degree: -k, dim: d.dim, certificate: d.certificate })
        .collect();
    let result = Outcome::Homology { twist: spec.label(), max_level: level, rows, summary, warnings };
    Ok(finish("compute", Some(&input), params, result, start))
}

pub fn cmd_decompose(path: &str, params: Params) -> Result<Report, CliError> {
    let start = Instant::now();
    let input = loaded_valid(path)?;
    let n = params.n.ok_or_else(|| CliError::Argument("--n is required".into()))?;
    if n == 0 {
        return Err(CliError::Argument("--n must be positive".into()));
    }
    let opts = DecompositionOptions {
        max_level: None,
        level_cap: params.max_level,
        normalized: params.normalized,
        mode: params.mode.clone(),
        strict: params.strict,
        check_rotations: true,
        allow_truncated: params.allow_truncated,
    };
    let r = verify_decomposition(&input.category, n, total_range(&params), &opts)?;
    Ok(finish("decompose", Some(&input), params, Outcome::Decomposition(r), start))
}

pub fn cmd_series(dims: &str, n: usize, allow_truncated: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let input_dims = parse_dims(dims)?;
    let out = rhs_dims(&input_dims, n, allow_truncated)?;
    let truncated = !hhwb_core::decomposition::is_one_signed(&input_dims);
    let params = Params {
        max_level: 0,
        normalized: true,
        mode: RankMode::Exact,
        degrees: None,
        twist: None,
        n: Some(n),
        allow_truncated,
        strict: false,
    };
    let result = Outcome::Series { input_dims, n, dims: out, truncated };
    Ok(finish("series", None, params, result, start))
}

fn summary_lines(report: &Report) -> Vec<String> {
    match &report.result {
        Outcome::Validation { valid, diagnostics } => {
            let mut v = vec![if *valid { "valid".to_string() } else { "invalid".to_string() }];
            v.extend(diagnostics.iter().cloned());
            v
        }
        Outcome::Homology { twist, max_level, rows, warnings, .. } => {
            let mut v = vec![format!("twist {twist}, level {max_level}")];
            v.extend(rows.iter().map(|r| format!("HH_{} = {} ({:?})", r.degree, r.dim, r.certificate)));
            v.extend(warnings.iter().map(|w| format!("warning: {w}")));
            v
        }
        Outcome::Decomposition(r) => {
            let mut v: Vec<String> = r
                .verdicts
                .values()
                .rev()
                .map(|d| format!("degree {}: lhs {} rhs {} {:?}", d.homological, d.lhs, d.rhs, d.verdict))
                .collect();
            v.extend(r.disclaimer.iter().map(|d| format!("note: {d}")));
            v
        }
        Outcome::Series { dims, .. } => dims.iter().map(|(k, d)| format!("total degree {k}: {d}")).collect(),
    }
}

/// Writes the report bytes and CSV; returns the exit code of the report.
fn emit(bytes: &[u8], dest: &Destinations, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let report: Report = serde_json::from_slice(bytes).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    match &dest.out {
        Some(p) => std::fs::write(p, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    if let Some(p) = &dest.csv {
        write_csv(&report, p)?;
    }
    for line in summary_lines(&report) {
        writeln!(stderr, "{line}")?;
    }
    Ok(report.exit_code())
}

fn cached(
    command: &str,
    path: &str,
    opts: RunOptions,
    run: impl FnOnce(Params) -> Result<Report, CliError>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let cache = opts.destinations.cache_dir.clone().map(Cache::new);
    let key = match &cache {
        Some(_) => {
            let (source, text) = input::read_source(path)?;
            let info = input::InputInfo { source, sha256: input::sha256_hex(text.as_bytes()) };
            Some(cache_key(command, Some(&info), &opts.params))
        }
        None => None,
    };
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Some(bytes) = c.get(k) {
            return emit(&bytes, &opts.destinations, stdout, stderr);
        }
    }
    let bytes = run(opts.params)?.to_bytes();
    if let (Some(c), Some(k)) = (&cache, &key) {
        c.put(k, &bytes)?;
    }
    emit(&bytes, &opts.destinations, stdout, stderr)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { path, out } => {
            let bytes = cmd_validate(&path)?.to_bytes();
            emit(&bytes, &Destinations { out, ..Default::default() }, stdout, stderr)
        }
        Command::Compute { path, twist, run } => {
            let opts = options(&run, Some(twist), None, false, false)?;
            cached("compute", &path, opts, |p| cmd_compute(&path, p), stdout, stderr)
        }
        Command::Decompose { path, n, strict, allow_truncated, run } => {
            let opts = options(&run, None, Some(n), strict, allow_truncated)?;
            cached("decompose", &path, opts, |p| cmd_decompose(&path, p), stdout, stderr)
        }
        Command::Series { dims, n, allow_truncated, out, csv } => {
            let bytes = cmd_series(&dims, n, allow_truncated)?.to_bytes();
            emit(&bytes, &Destinations { out, csv, cache_dir: None }, stdout, stderr)
        }
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("0..4").unwrap(), (0, 4));
        assert_eq!(parse_degrees("-2..=1").unwrap(), (-2, 1));
        assert!(parse_degrees("3..1").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn dims_tables() {
        let d = parse_dims("0:2,-1:1,-2:1,-3:1").unwrap();
        assert_eq!(d.window(-3, 0), vec![1, 1, 1, 2]);
        assert!(parse_dims("").unwrap().is_empty());
        assert!(parse_dims("0-1").is_err());
    }

    #[test]
    fn twists() {
        let input = load("dual_numbers").unwrap();
        assert!(matches!(parse_twist("id", &input).unwrap(), TwistSpec::Identity));
        assert!(matches!(parse_twist("perm:2:(1 2)", &input).unwrap(), TwistSpec::Permutation { n: 2, .. }));
        assert!(matches!(parse_twist("functor:negation", &input).unwrap(), TwistSpec::Functor(_)));
        assert!(parse_twist("perm:2:(1 3)", &input).is_err());
        assert!(parse_twist("nope", &input).is_err());
    }

    #[test]
    fn modes() {
        let cli = Cli::try_parse_from(["hhwb", "compute", "x", "--mode", "exact"]).unwrap();
        let Command::Compute { run, .. } = cli.command else { panic!() };
        assert_eq!(mode_of(&run).unwrap(), RankMode::Exact);
        let cli = Cli::try_parse_from(["hhwb", "compute", "x"]).unwrap();
        let Command::Compute { run, .. } = cli.command else { panic!() };
        assert_eq!(mode_of(&run).unwrap(), RankMode::modular_default());
        assert!(!run.full);
        let cli = Cli::try_parse_from(["hhwb", "compute", "x", "--primes", "7"]).unwrap();
        let Command::Compute { run, .. } = cli.command else { panic!() };
        assert!(mode_of(&run).is_err());
    }
}
