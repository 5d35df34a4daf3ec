use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kdq", version, about = "Kirkwood-Dirac quasiprobabilities and quantum conditional expectations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Validation tolerance, and the exact-identity tolerance of `verify`.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Mix the unsupported eigenprojectors of the conditioning observable into the state.
    #[arg(long, global = true, value_name = "EPS")]
    pub regularize: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for kdq_core::frame::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => kdq_core::frame::Side::Left,
            SideArg::Right => kdq_core::frame::Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Left,
    Right,
    Alpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Classical,
    Characterization,
    KdUniqueness,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RandomWhat {
    /// First observable of a seeded pair.
    A,
    /// Second observable of the same seeded pair.
    B,
    /// Full-rank density matrix.
    Density,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kirkwood-Dirac distribution of a state with both marginals.
    Kd {
        a: PathBuf,
        b: PathBuf,
        rho: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Conditional expectation of X given the observable B.
    Condexp {
        x: PathBuf,
        b: PathBuf,
        rho: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Left)]
        kind: KindArg,
        /// Interpolation weight for `--kind alpha`.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also run the least-squares minimizer and report the disagreement.
        #[arg(long)]
        check: bool,
    },
    /// Dual frame of a KD frame (or of a mix of the two) solved through the Gram matrix.
    Dual {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// Use `alpha S_left + (1 - alpha) S_right` instead of a single side.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run the randomized theorem checks.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, short = 'd', default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Interpolation grid for kd-uniqueness, comma separated.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Seeded fixture matrices.
    Random {
        #[arg(value_enum)]
        what: RandomWhat,
        #[arg(long, short = 'd')]
        dim: usize,
    },
}
