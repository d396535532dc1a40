//! The `mrl` command line: compress/decompress token files, compute spectra,
//! evaluate bounds, and drive the experiment suite.
//!
//! Exit codes: 0 success/pass, 1 usage, IO or validation error, 2 a
//! statistical acceptance threshold failed. Diagnostics go to stderr
//! (verbosity via the `MRL_LOG` env var); each run prints one
//! machine-readable document (JSON or CSV) to its output target.

use crate::bounds::BoundsRow;
use crate::codec::{self, Mode};
use crate::error::{Error, Result};
use crate::experiments;
use crate::markov::stationary;
use crate::schema::MatrixDocument;
use crate::spectral;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "mrl", version, about = "Markov redundancy lab: compressor, spectra, bounds and experiments")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress a token file (32-bit little-endian symbols in [1, k])
    Compress {
        /// Input token file
        input: PathBuf,
        /// Alphabet size
        #[arg(long)]
        k: usize,
        /// Coder backend: exact | fast
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Container output path (default: INPUT.mrc)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompress a container back into a token file
    Decompress {
        /// Input container file
        input: PathBuf,
        /// Token output path (default: INPUT.tokens)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral summary (eigenvalues, gamma, gamma_star, tau_rel) of a
    /// reversible chain given as JSON {"k", "kind":"transition", "data"}
    Spectrum {
        /// Chain JSON file
        input: PathBuf,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate all closed-form bounds over a (k, n) grid, as CSV
    Bounds {
        /// State counts, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Sequence lengths, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Slack constant of the relaxation-time cap tau0 = 1 + (2+c)/sqrt(k)
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Constant of the Davisson-style bound (no canonical value exists,
        /// so it must be supplied explicitly)
        #[arg(long = "davisson-C")]
        davisson_c: f64,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one Monte Carlo experiment; exits 2 if its statistical
    /// acceptance threshold fails
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// One of: prior-uniformity, spectrum-concentration, esd-semicircle,
    /// variance, redundancy, phase-transition, verify-tuple-lemmas
    name: String,
    /// Master seed (mandatory: all randomness must be reproducible)
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Slack constant c
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Target redundancy for phase-transition
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Coder backend for redundancy: exact | fast
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Required pass fraction for spectrum-concentration
    #[arg(long, default_value_t = 0.95)]
    pass_fraction: f64,
    /// Mean Kolmogorov-distance threshold for esd-semicircle
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// One-sided confidence level for the variance bound check
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// KS significance level for prior-uniformity
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Residual tolerance for verify-tuple-lemmas
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// State counts for phase-transition, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
    k_list: Vec<usize>,
    /// Trials of measured redundancy at n = n* in phase-transition (0 = skip)
    #[arg(long, default_value_t = 0)]
    redundancy_trials: usize,
    /// Accepted range of the fitted log n* vs log k slope
    #[arg(long, default_value_t = 1.9)]
    slope_lo: f64,
    #[arg(long, default_value_t = 2.1)]
    slope_hi: f64,
    /// Worker threads (default: one per logical CPU)
    #[arg(long)]
    threads: Option<usize>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (including argv[0]) and runs; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reserves exit code 2 for usage errors; our contract uses 1
            // (2 means a statistical-threshold failure)
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_logging() {
    let _ = env_logger::Builder::from_env(
        env_logger::Env::default().filter_or("MRL_LOG", "warn"),
    )
    .try_init();
}

fn read_tokens(path: &Path) -> Result<Vec<u32>> {
    let bytes = std::fs::read(path)?;
    if bytes.len() % 4 != 0 {
        return Err(Error::Invalid(format!(
            "token file length {} is not a multiple of 4 (32-bit little-endian symbols)",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn write_tokens(path: &Path, x: &[u32]) -> Result<()> {
    let mut bytes = Vec::with_capacity(x.len() * 4);
    for &s in x {
        bytes.extend_from_slice(&s.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Compress { input, k, mode, out } => {
            let mode: Mode = mode.parse()?;
            let x = read_tokens(&input)?;
            let (bytes, report) = codec::compress(&x, k, mode)?;
            let out = out.unwrap_or_else(|| input.with_extension("mrc"));
            std::fs::write(&out, &bytes)?;
            log::info!("wrote {} bytes to {}", bytes.len(), out.display());
            println!("{}", serde_json::to_string(&report)?);
            Ok(0)
        }
        Command::Decompress { input, out } => {
            let bytes = std::fs::read(&input)?;
            let (x, _k, report) = codec::decompress(&bytes)?;
            let out = out.unwrap_or_else(|| input.with_extension("tokens"));
            write_tokens(&out, &x)?;
            log::info!("wrote {} tokens to {}", x.len(), out.display());
            println!("{}", serde_json::to_string(&report)?);
            Ok(0)
        }
        Command::Spectrum { input, out } => {
            let doc: MatrixDocument = serde_json::from_str(&std::fs::read_to_string(&input)?)?;
            let kernel = doc.to_transition()?;
            let pi = stationary(&kernel)?;
            let summary = spectral::eigen_reversible(&kernel, &pi)?;
            emit(&out, &format!("{}\n", serde_json::to_string(&summary)?))?;
            Ok(0)
        }
        Command::Bounds { k, n, c, davisson_c, out } => {
            if !(davisson_c > 0.0) {
                return Err(Error::Invalid("--davisson-C must be > 0".into()));
            }
            let mut csv = String::from(BoundsRow::csv_header());
            csv.push('\n');
            for &k in &k {
                if k < 2 {
                    return Err(Error::Invalid(format!("k must be >= 2, got {k}")));
                }
                for &n in &n {
                    if n < 2 {
                        return Err(Error::Invalid(format!("n must be >= 2, got {n}")));
                    }
                    csv.push_str(&BoundsRow::compute(k, n, c, davisson_c).to_csv_line());
                    csv.push('\n');
                }
            }
            emit(&out, &csv)?;
            Ok(0)
        }
        Command::Experiment(args) => run_experiment(args),
    }
}

fn run_experiment(a: ExperimentArgs) -> Result<i32> {
    if let Some(t) = a.threads {
        // the global pool can only be set once per process; later calls are
        // harmless no-ops with a warning
        if rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            log::warn!("thread pool already initialized; --threads ignored");
        }
    }
    let k = |default: usize| a.k.unwrap_or(default);
    let n = |default: usize| a.n.unwrap_or(default);
    let trials = |default: usize| a.trials.unwrap_or(default);
    let result = match a.name.as_str() {
        "prior-uniformity" => {
            experiments::prior_uniformity(k(4), trials(10_000), a.seed, a.alpha)?
        }
        "spectrum-concentration" => experiments::spectrum_concentration(
            k(200),
            trials(50),
            a.c,
            a.seed,
            a.pass_fraction,
        )?,
        "esd-semicircle" => {
            experiments::esd_semicircle(k(500), trials(5), a.seed, a.threshold)?
        }
        "variance" => {
            experiments::variance_experiment(k(8), n(4096), trials(2000), a.seed, a.confidence)?
        }
        "redundancy" => {
            let mode: Mode = a.mode.parse()?;
            experiments::redundancy_experiment(k(8), n(4096), trials(200), a.seed, mode)?
        }
        "phase-transition" => experiments::phase_transition_sweep(
            &a.k_list,
            a.epsilon,
            a.c,
            a.seed,
            a.redundancy_trials,
            a.slope_lo,
            a.slope_hi,
        )?,
        "verify-tuple-lemmas" => {
            experiments::tuple_lemmas_experiment(k(4), trials(100), a.seed, a.tol)?
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown experiment {other:?}; expected one of prior-uniformity, \
                 spectrum-concentration, esd-semicircle, variance, redundancy, \
                 phase-transition, verify-tuple-lemmas"
            )))
        }
    };
    emit(&a.out, &result.to_csv())?;
    if result.pass {
        Ok(0)
    } else {
        log::warn!("experiment {} failed its statistical threshold", result.name);
        Ok(2)
    }
}
