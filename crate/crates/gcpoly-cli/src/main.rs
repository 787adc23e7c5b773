use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gcpoly_cli::commands::{self, EXIT_INPUT};
use gcpoly_cli::config::ConfigOverrides;
use gcpoly_cli::CliError;

/// Building masks to simplified vector polygons, with evaluation metrics
/// and correctness harnesses.
#[derive(Parser)]
#[command(name = "gcpoly", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: ConfigOverrides,
}

#[derive(Subcommand)]
enum Command {
    /// Convert binary PGM masks into simplified GeoJSON polygons.
    Polygonize {
        /// Input mask files (PGM; PNG with the `png` feature).
        #[arg(required = true)]
        masks: Vec<PathBuf>,
        /// Output GeoJSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simplify the geometries of a GeoJSON document.
    Simplify {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare predicted polygons against ground truth.
    Evaluate {
        pred: PathBuf,
        gt: PathBuf,
        /// Skip image ids present on only one side instead of failing.
        #[arg(long)]
        allow_missing: bool,
        /// Output JSON report path (stdout when omitted; with a path the
        /// human-readable table goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the DP simplifier against brute-force enumeration.
    OracleCheck {
        /// Number of random polylines.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Maximum polyline length (capped at 20 by the enumerator).
        #[arg(long, default_value_t = 14)]
        max_len: usize,
        /// Inject a deliberate fault to prove the harness catches it.
        #[arg(long)]
        perturb_dp: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure simplifier wall time over polyline sizes.
    Bench {
        /// Polyline sizes, ascending.
        #[arg(long, value_delimiter = ',', default_value = "128,256,512,1024")]
        sizes: Vec<usize>,
        /// k_max values to time.
        #[arg(long = "kmax-list", value_delimiter = ',', default_value = "64")]
        k_max_list: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("GCPOLY_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Input(format!("GCPOLY_THREADS must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(format!("cannot build worker pool: {e}")))
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    let cfg = cli.overrides.resolve()?;
    match cli.command {
        Command::Polygonize { masks, out } => {
            let pool = build_pool()?;
            pool.install(|| commands::polygonize::run(&masks, &cfg, out.as_deref()))
        }
        Command::Simplify { input, out } => commands::simplify::run(&input, &cfg, out.as_deref()),
        Command::Evaluate { pred, gt, allow_missing, out } => {
            commands::evaluate::run(&pred, &gt, &cfg, allow_missing, out.as_deref())
        }
        Command::OracleCheck { trials, max_len, perturb_dp, out } => {
            commands::oracle::run(trials, max_len, &cfg, perturb_dp, out.as_deref())
        }
        Command::Bench { sizes, k_max_list, repetitions, out } => {
            commands::bench::run(&sizes, &k_max_list, repetitions, &cfg, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
