use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use xxcrit::hilbert::Boundary;
use xxcrit::superfluid::DEFAULT_THETA;

#[derive(Debug, Parser)]
#[command(name = "xxcrit", version, about = "Superfluidity and entanglement in the XX chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero-temperature state summary: correlators, energy, entropy, concurrence.
    Ground {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gibbs-state summary at `--temp` > 0.
    Thermal {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        temp: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nearest-neighbour correlators and the transverse profile.
    Correlators {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.0)]
        temp: f64,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Superfluid fraction (kinetic and curvature), currents and the f_s > 1/2 witness.
    Superfluid {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.0)]
        temp: f64,
        #[arg(long, default_value_t = DEFAULT_THETA)]
        theta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// All chain witnesses for one state.
    Witness {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.0)]
        temp: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Transverse correlation profile and its decay classification.
    Profile {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.0)]
        temp: f64,
        #[arg(long, default_value_t = 64)]
        r_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Parameter sweep over a grid.
    Sweep(SweepArgs),
    /// Energy density of the anisotropic 2D lattice.
    Dim2 {
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 1.0)]
        j_perp: f64,
        /// Temperature in units of the couplings; omit both this and `--beta` for T = 0.
        #[arg(long, conflicts_with = "beta")]
        temp: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = xxcrit::dim2::DEFAULT_QUADRATURE_POINTS)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cold-atom parameters in SI units to model units and checks.
    Experiment(ExperimentArgs),
    /// GHZ and coherent product states: entanglement without order and order without entanglement.
    Counterexamples {
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        ghz_sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        coherent_sites: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bose-Hubbard with capped occupation against the XX chain.
    Hardcore {
        /// Ring used for the n_max = 1 spectrum comparison.
        #[arg(long, default_value_t = 4)]
        n_sites: usize,
        #[arg(long, default_value_t = 8)]
        bh_sites: usize,
        #[arg(long, default_value_t = 2)]
        particles: usize,
        #[arg(long, default_value_t = 50.0)]
        u: f64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact diagonalization against free fermions on rings 2..=max-sites.
    Oracle {
        #[arg(long, default_value_t = 12)]
        max_sites: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,0.9,1.1", allow_hyphen_values = true)]
        mus: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5")]
        temps: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        r_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Periodic,
    Open,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Open => Boundary::Open,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Omit for the thermodynamic limit.
    #[arg(long)]
    pub n_sites: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    /// auto, exactdiag, freefermion or infinite.
    #[arg(long, default_value = "auto")]
    pub solver: String,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    Mu,
    Temperature,
    Theta,
    JPerp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Observable {
    FsKinetic,
    FsCurvature,
    Entropy,
    Concurrence,
    Correlators,
    Witnesses,
    Current,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// Geometric instead of linear spacing.
    #[arg(long)]
    pub log: bool,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub observables: Vec<Observable>,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = 0.0)]
    pub temp: f64,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub j_perp: f64,
    #[arg(long, default_value_t = xxcrit::dim2::DEFAULT_QUADRATURE_POINTS)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub mass_amu: f64,
    /// Effective lattice spacing (healing length) in metres.
    #[arg(long)]
    pub spacing_m: f64,
    #[arg(long)]
    pub temp_kelvin: f64,
    /// Chemical potential as μ/h in Hz.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_hz: f64,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub scattering_length_m: Option<f64>,
    #[arg(long)]
    pub quoted_lambda_m: Option<f64>,
    #[arg(long)]
    pub quoted_disc_holds: Option<bool>,
    #[arg(long)]
    pub quoted_entropy: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}
