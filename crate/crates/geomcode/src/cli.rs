//! Subcommands `construct`, `analyze`, `simulate` and `random-code`.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use geomcode_core::ldpc::{random_regular_h, LdpcCode};
use geomcode_core::IncidenceStructure;

use crate::alist::{from_alist, to_alist, AlistError};
use crate::input::{build_structure, parse_field, FamilyArg, InputError};
use crate::manifest::{write_with_manifest, RunManifest};
use crate::report::analyze;
use crate::sim::{ber_sweep, parse_grid, to_csv, with_threads, ChannelConfig, SimError};

#[derive(Debug, Parser)]
#[command(name = "geomcode", version, about = "LDPC codes from strongly regular partial geometries")]
pub struct Cli {
    /// Worker threads; defaults to all hardware threads.
    #[arg(long, global = true, env = "GEOMCODE_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an incidence matrix and write it as an alist parity-check file.
    Construct(ConstructArgs),
    /// Check axioms, strong regularity, spectrum, ranks, bounds and cycles.
    Analyze(AnalyzeArgs),
    /// Monte Carlo bit error rate over BPSK/AWGN with sum-product decoding.
    Simulate(SimulateArgs),
    /// Random (w_col, w_row)-regular Gallager baseline.
    RandomCode(RandomCodeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct(_) => "construct",
            Command::Analyze(_) => "analyze",
            Command::Simulate(_) => "simulate",
            Command::RandomCode(_) => "random-code",
        }
    }
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Field order as `p^k` or `q`.
    #[arg(long)]
    pub field: Option<String>,
    /// Monic modulus coefficients, constant term first, e.g. `1,0,1`.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub geometry: FieldArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// alist file to analyze instead of a construction.
    #[arg(long, conflicts_with_all = ["family", "field", "modulus"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub geometry: FieldArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// alist parity-check file.
    #[arg(long)]
    pub input: PathBuf,
    /// Eb/N0 grid in dB as `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    pub ebno: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 100)]
    pub min_frame_errors: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_frames: u64,
    /// Code rate used for the noise variance; defaults to the true rate.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandomCodeArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub w_col: usize,
    #[arg(long)]
    pub w_row: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Alist { path: PathBuf, error: AlistError },
    Io { path: PathBuf, error: std::io::Error },
    Sim(SimError),
    Ldpc(geomcode_core::ldpc::LdpcError),
    MissingArgument(&'static str),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => e.fmt(f),
            CliError::Alist { path, error } => write!(f, "{}: {}", path.display(), error),
            CliError::Io { path, error } => write!(f, "{}: {}", path.display(), error),
            CliError::Sim(e) => e.fmt(f),
            CliError::Ldpc(e) => e.fmt(f),
            CliError::MissingArgument(a) => write!(f, "missing required argument {}", a),
        }
    }
}

impl std::error::Error for CliError {}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Sim(e)
    }
}

/// Machine-readable result printed on stdout.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub command: String,
    pub ok: bool,
    pub failures: Vec<String>,
    pub notices: Vec<String>,
    pub outputs: Vec<String>,
}

impl Outcome {
    fn new(command: &str) -> Self {
        Outcome {
            command: command.to_string(),
            ok: true,
            failures: Vec::new(),
            notices: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn fail(command: &str, message: String) -> Self {
        Outcome {
            ok: false,
            failures: vec![message],
            ..Outcome::new(command)
        }
    }
}

fn write_output(out: &Path, contents: &[u8], manifest: &mut RunManifest, outcome: &mut Outcome) -> Result<(), CliError> {
    let mpath = write_with_manifest(out, contents, manifest).map_err(|error| CliError::Io {
        path: out.to_path_buf(),
        error,
    })?;
    outcome.outputs.push(out.display().to_string());
    outcome.outputs.push(mpath.display().to_string());
    Ok(())
}

fn read_alist(path: &Path) -> Result<geomcode_core::BinaryMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })?;
    from_alist(&text).map_err(|error| CliError::Alist {
        path: path.to_path_buf(),
        error,
    })
}

fn construction(args: &FieldArgs, manifest: &mut RunManifest) -> Result<(IncidenceStructure, String), CliError> {
    let family = args.family.ok_or(CliError::MissingArgument("--family"))?;
    let field = args.field.as_deref().ok_or(CliError::MissingArgument("--field"))?;
    let gf = parse_field(field, args.modulus.as_deref())?;
    manifest.param("family", family).param("field", field);
    if let Some(m) = &args.modulus {
        manifest.param("modulus", m);
    }
    let label = gf.to_string();
    manifest.field = Some(label.clone());
    Ok((build_structure(family, &gf)?, label))
}

/// Runs one subcommand. Check failures are reported in the outcome; errors
/// that prevent the command from running are returned.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct(a) => {
            let mut manifest = RunManifest::new("construct");
            let (ic, _) = construction(&a.geometry, &mut manifest)?;
            let mut outcome = Outcome::new("construct");
            write_output(&a.out, to_alist(&ic.matrix).as_bytes(), &mut manifest, &mut outcome)?;
            Ok(outcome)
        }
        Command::Analyze(a) => {
            let mut manifest = RunManifest::new("analyze");
            let (ic, label) = match &a.input {
                Some(path) => {
                    manifest.param("input", path.display());
                    (IncidenceStructure::from_matrix(read_alist(path)?), None)
                }
                None => {
                    let (ic, label) = construction(&a.geometry, &mut manifest)?;
                    (ic, Some(label))
                }
            };
            let report = with_threads(cli.threads, || analyze(&ic, label))?;
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            let mut outcome = Outcome::new("analyze");
            outcome.ok = report.passed();
            outcome.failures = report.failures.clone();
            outcome.notices = report.notices.clone();
            write_output(&a.out, json.as_bytes(), &mut manifest, &mut outcome)?;
            Ok(outcome)
        }
        Command::Simulate(a) => {
            let mut manifest = RunManifest::new("simulate");
            manifest
                .param("input", a.input.display())
                .param("ebno", &a.ebno)
                .param("max_iters", a.max_iters)
                .param("min_frame_errors", a.min_frame_errors)
                .param("max_frames", a.max_frames);
            if let Some(r) = a.rate {
                manifest.param("rate", r);
            }
            if let Some(t) = cli.threads {
                manifest.param("threads", t);
            }
            manifest.seed = Some(a.seed);
            let code = LdpcCode::new(read_alist(&a.input)?);
            if code.dimension() == 0 {
                return Ok(Outcome::fail(
                    "simulate",
                    SimError::TrivialCode {
                        n: code.n(),
                        rank: code.rank(),
                    }
                    .to_string(),
                ));
            }
            let cfg = ChannelConfig {
                ebn0_db: parse_grid(&a.ebno)?,
                rate: a.rate,
                max_iterations: a.max_iters,
                min_frame_errors: a.min_frame_errors,
                max_frames: a.max_frames,
                seed: a.seed,
            };
            let result = with_threads(cli.threads, || ber_sweep(&code, &cfg))??;
            let mut outcome = Outcome::new("simulate");
            write_output(&a.out, to_csv(&result).as_bytes(), &mut manifest, &mut outcome)?;
            Ok(outcome)
        }
        Command::RandomCode(a) => {
            let mut manifest = RunManifest::new("random-code");
            manifest
                .param("m", a.m)
                .param("n", a.n)
                .param("w_col", a.w_col)
                .param("w_row", a.w_row);
            manifest.seed = Some(a.seed);
            let rc = random_regular_h(a.m, a.n, a.w_col, a.w_row, a.seed).map_err(CliError::Ldpc)?;
            let mut outcome = Outcome::new("random-code");
            if rc.four_cycle_warning {
                outcome
                    .notices
                    .push("warning: could not remove every 4-cycle; some columns share two rows".to_string());
            }
            write_output(&a.out, to_alist(rc.code.h()).as_bytes(), &mut manifest, &mut outcome)?;
            Ok(outcome)
        }
    }
}
