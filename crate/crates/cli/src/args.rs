use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mixedcol::ClosureFamily;

#[derive(Debug, Parser)]
#[command(
    name = "mixedcol",
    version,
    about = "One-dimensional ocean mixed-layer column model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one case with one closure.
    Run {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value = "r224")]
        model: ClosureFamily,
    },
    /// Dump f1(R) and f2(R) for every closure.
    Coeffs {
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        r_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        r_max: f64,
        #[arg(long, default_value_t = 501)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Equilibrium Richardson number, k/h curves and linear steady profiles.
    Equilibrium {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value = "r224")]
        model: ClosureFamily,
        /// Upper end of the sampled k/h curves.
        #[arg(long, default_value_t = 0.5)]
        kh_r_max: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// Diagnostics of a profile (`--init`) or of a case's initial state.
    Diagnose {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Run several closures on one case and tabulate their metrics.
    Compare {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "r213,r23,r224")]
        models: Vec<ClosureFamily>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = "MIXEDCOL_OUT", default_value = "out")]
    pub out: PathBuf,
}

/// Case selection and parameter overrides. Flags win over `--config`,
/// which wins over the case defaults.
#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub case: Option<u8>,
    /// `z,u,v,rho` CSV replacing the synthetic initial state.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dz: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub hours: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub wind_u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub wind_v: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q_flux: Option<f64>,
    #[arg(long)]
    pub rho_a: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub cd: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}
