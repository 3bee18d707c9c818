mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "snapnet", version, about = "Construct and verify snapping four-bar nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML file with default values; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Factor applied to every default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory (or file, for single-output commands).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Threads for the verification sweeps.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Report angles in degrees instead of radians.
    #[arg(long, global = true)]
    pub degrees: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Mesh,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enneper pipeline: Gauss map, Koenigs dual, IID, de-averaging, rolling.
    Enneper {
        /// `lo:hi` or `lo:hi,lo:hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Velocity at the origin vertex, `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<String>,
        /// `scale,rotation,tx,ty[,cx,cy,radius]`.
        #[arg(long, allow_hyphen_values = true)]
        moebius: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Random S-net over a box window and its rotation net.
    Snet {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        dim: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "plus")]
        branch: BranchArg,
        /// Whole-net restarts with consecutive seeds.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// De-average a Koenigs net along the IID from its dual.
    Deaverage {
        /// The net `f` (JSON or mesh).
        #[arg(long)]
        net: PathBuf,
        /// The Koenigs dual `f*` (JSON or mesh).
        #[arg(long)]
        dual: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Roll the diagonal nets of an isometric pair into a snapping net.
    Roll {
        #[arg(long)]
        plus: PathBuf,
        #[arg(long)]
        minus: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a four-bar given by four axes or four poses.
    Classify {
        #[arg(long)]
        axes: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute every residual of the given files.
    Verify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Convert a net between JSON and the quad-mesh format.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Failures mapped to exit codes 2 and 3.
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    Construction(anyhow::Error),
}

pub trait ExitKind<T> {
    fn usage(self) -> Result<T, CliError>;
    fn construction(self) -> Result<T, CliError>;
}

impl<T, E: Into<anyhow::Error>> ExitKind<T> for Result<T, E> {
    fn usage(self) -> Result<T, CliError> {
        self.map_err(|e| CliError::Usage(e.into()))
    }
    fn construction(self) -> Result<T, CliError> {
        self.map_err(|e| CliError::Construction(e.into()))
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Enneper { window, t, q0, moebius, common } => {
            commands::enneper(&common, window, t, q0, moebius)
        }
        Command::Snet { dim, window, seed, branch, restarts, common } => {
            commands::snet(&common, dim.map(|d| d as usize), window, seed, branch, restarts)
        }
        Command::Deaverage { net, dual, t, q0, common } => commands::deaverage(&common, &net, &dual, t, q0),
        Command::Roll { plus, minus, common } => commands::roll(&common, &plus, &minus),
        Command::Classify { axes, seed, common } => commands::classify(&common, &axes, seed),
        Command::Verify { inputs, common } => commands::verify(&common, &inputs),
        Command::Export { input, common } => commands::export(&common, &input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Construction(e)) => {
            eprintln!("construction failed: {e:#}");
            ExitCode::from(3)
        }
    }
}
