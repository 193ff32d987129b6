//! One-dimensional ocean mixed-layer column model.
//!
//! The column carries zonal velocity `u`, meridional velocity `v` and density
//! `rho`, each diffused vertically by an eddy coefficient that depends on the
//! local gradient Richardson number. Three closure families are provided
//! (R213, R23, R224), together with an implicit time stepper, the analytic
//! linear equilibrium, comparison diagnostics and synthetic initial states for
//! three reference experiments.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.
//!
//! ```
//! use mixedcol::{CaseConfig, CaseId, ClosureFamily};
//!
//! let config = CaseConfig::for_case(CaseId::StaticInstability).with_model(ClosureFamily::R213);
//! let err = config.setup::<f64>().unwrap().run().unwrap_err();
//! assert!(err.is_model_invalid());
//! ```

// `!(x > 0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closures;
pub mod config;
pub mod diagnostics;
pub mod equilibrium;
pub mod error;
pub mod forcing;
pub mod grid;
pub mod ingest;
pub mod output;
pub mod scalar;
pub mod solver;
pub mod tridiag;

pub use closures::{
    coefficient_table, coefficients_profile, eval_f1, eval_f2, richardson_number, ClosureFamily,
    ClosureSpec, CoefficientTable, EddyCoefficients, RichardsonProfile,
};
pub use config::{CaseConfig, CaseSetup};
pub use diagnostics::{
    linearity_deviation, mixed_layer_depth, pycnocline_sharpness, static_instability_zones,
    surface_current, DiagnosticsReport,
};
pub use equilibrium::{
    analytic_profiles, compute_c, curve_k, solve_equilibrium, solve_equilibrium_richardson,
};
pub use error::{ColumnError, Result};
pub use forcing::{wind_stress, ForcingAndConstants};
pub use grid::{ColumnGrid, StateProfiles};
pub use ingest::{gen_case_init, interpolate_to_grid, read_profile_file, CaseId, ProfileSamples};
pub use scalar::Real;
pub use solver::{integrate, residual, step, RunControl, RunResult};

pub type Grid = ColumnGrid<f64>;
pub type State = StateProfiles<f64>;
pub type Forcing = ForcingAndConstants<f64>;
pub type Closure = ClosureSpec<f64>;
pub type Coefficients = EddyCoefficients<f64>;
pub type Run = RunResult<f64>;
pub type Equilibrium = equilibrium::EquilibriumSolution<f64>;
pub type Diagnostics = DiagnosticsReport<f64>;

pub type GridF32 = ColumnGrid<f32>;
pub type StateF32 = StateProfiles<f32>;
