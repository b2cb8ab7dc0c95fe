//! The `amscode` experiment driver: one subcommand per verification, each
//! writing a JSON manifest and CSV data into an output directory.
//!
//! Settings come from flags, then from an optional JSON config (`--config`),
//! then from defaults. Exit codes: 0 when every check passes, 1 when a check
//! fails, 2 on usage errors, 3 on internal faults.

mod codes_cmd;
mod energy_cmd;
mod entropy_cmd;
mod manifest;
mod sampling_cmd;
mod specs;
mod suite;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

pub use manifest::{Check, RunManifest};
pub use specs::{CodeChoice, ModelChoice};

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "AMSCODE_OUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::Io(_)
            | E::EstimatorDisagreement { .. }
            | E::NonMonotone(_)
            | E::TableTooSmall(_)
            | E::WindowTooShort { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "amscode", version, about = "Variable-length coding of stationary processes: experiments and checks")]
pub struct Cli {
    /// JSON object of default settings for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $AMSCODE_OUT_DIR, else `amscode-out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Record wall time in the manifest, which then differs between runs.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kraft sum and prefix/suffix/fix-freeness of a code table.
    CodeCheck(codes_cmd::CodeCheckArgs),
    /// Encode source symbols.
    Encode(codes_cmd::EncodeArgs),
    /// Decode a coded string, one- or two-sided.
    Decode(codes_cmd::DecodeArgs),
    /// Sample a source window and its coding.
    Sample(sampling_cmd::SampleArgs),
    /// Estimate the stationary mean of a cylinder of a coded process.
    StationaryMean(sampling_cmd::StationaryMeanArgs),
    /// Transfer bounds and empirical finite-energy scans.
    Energy(energy_cmd::EnergyArgs),
    /// Exact entropy identities and inequalities.
    Entropy(entropy_cmd::EntropyArgs),
    /// Vocabulary growth of the Santa Fe process against its power-law bound.
    Zipf(sampling_cmd::ZipfArgs),
    /// Digit statistics of the Champernowne sequence.
    Champernowne(sampling_cmd::ChampernowneArgs),
    /// Expansion rate, finite energy, predictors and vocabulary of the
    /// coded Santa Fe process.
    ConjSuite(suite::ConjSuiteArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CodeCheck(_) => "code-check",
            Command::Encode(_) => "encode",
            Command::Decode(_) => "decode",
            Command::Sample(_) => "sample",
            Command::StationaryMean(_) => "stationary-mean",
            Command::Energy(_) => "energy",
            Command::Entropy(_) => "entropy",
            Command::Zipf(_) => "zipf",
            Command::Champernowne(_) => "champernowne",
            Command::ConjSuite(_) => "conj-suite",
        }
    }
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 12i32;
    let exp = x.abs().log10().floor() as i32;
    if !(-5..16).contains(&exp) {
        return format!("{:.*e}", (digits - 1) as usize, x);
    }
    let decimals = (digits - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Flags override the config file, which overrides the defaults baked into
/// each subcommand. Unset flags serialize as `null` and are skipped.
pub(crate) fn resolve<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Value>, command: &str) -> CliResult<T> {
    let mut merged = match config {
        None => Map::new(),
        Some(Value::Object(m)) => {
            let mut m = m.clone();
            match m.remove("command") {
                Some(Value::String(c)) if c != command => {
                    return Err(CliError::Usage(format!("config is for `{c}`, not `{command}`")));
                }
                _ => {}
            }
            m
        }
        Some(_) => return Err(CliError::Usage("config must be a JSON object".into())),
    };
    match serde_json::to_value(flags).map_err(|e| CliError::Internal(e.to_string()))? {
        Value::Object(m) => merged.extend(m.into_iter().filter(|(_, v)| !v.is_null())),
        _ => unreachable!("argument structs serialize to objects"),
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("bad config: {e}")))
}

pub(crate) fn require<T>(value: Option<T>, name: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

pub(crate) struct Context {
    pub out: PathBuf,
}

impl Context {
    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::Internal(format!("{}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

fn load_config(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli, ctx: &Context) -> CliResult<RunManifest> {
    let config = cli.config.as_deref().map(load_config).transpose()?;
    let config = config.as_ref();
    let name = cli.command.name();
    match &cli.command {
        Command::CodeCheck(a) => codes_cmd::code_check(&resolve(a, config, name)?, ctx),
        Command::Encode(a) => codes_cmd::encode(&resolve(a, config, name)?, ctx),
        Command::Decode(a) => codes_cmd::decode(&resolve(a, config, name)?, ctx),
        Command::Sample(a) => sampling_cmd::sample(&resolve(a, config, name)?, ctx),
        Command::StationaryMean(a) => sampling_cmd::stationary_mean(&resolve(a, config, name)?, ctx),
        Command::Energy(a) => energy_cmd::energy(&resolve(a, config, name)?, ctx),
        Command::Entropy(a) => entropy_cmd::entropy(&resolve(a, config, name)?, ctx),
        Command::Zipf(a) => sampling_cmd::zipf(&resolve(a, config, name)?, ctx),
        Command::Champernowne(a) => sampling_cmd::champernowne(&resolve(a, config, name)?, ctx),
        Command::ConjSuite(a) => suite::conj_suite(&resolve(a, config, name)?, ctx),
    }
}

/// Runs a parsed command line, writes `manifest.json`, and returns the
/// exit code.
pub fn run(cli: Cli) -> i32 {
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("amscode-out"));
    let ctx = Context { out };
    let started = Instant::now();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &ctx)),
            Err(e) => Err(CliError::Internal(e.to_string())),
        },
        None => dispatch(&cli, &ctx),
    };
    let mut manifest = match result {
        Ok(m) => m,
        Err(e) => {
            eprintln!("amscode: {e}");
            return e.exit_code();
        }
    };
    if cli.timing {
        manifest.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    for check in &manifest.checks {
        println!("{}", check.summary_line());
    }
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = ctx.write("manifest.json", &(json + "\n")) {
        eprintln!("amscode: {e}");
        return e.exit_code();
    }
    if manifest.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}
