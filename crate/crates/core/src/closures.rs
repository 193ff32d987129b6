//! Richardson-number closures for the eddy viscosity `nu1 = f1(R)` and eddy
//! diffusivity `nu2 = f2(R)`.
//!
//! All three families share the form `f1 = alpha1 + beta1 / (1 + gamma R)^2`
//! and differ in `f2`:
//!
//! | family | gamma | f2                                 |
//! |--------|-------|------------------------------------|
//! | R213   | 5     | `alpha2 + f1 / (1 + 5R)`           |
//! | R23    | 10    | `alpha2 + beta2 / (1 + 10R)^3`     |
//! | R224   | 5     | `alpha2 + f1 / (1 + 5R)^2`         |
//!
//! Every family is singular at `R = -1/gamma`. R213 and R23 give a negative
//! diffusivity below that point; R224 stays positive everywhere.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{ColumnError, Result};
use crate::forcing::ForcingAndConstants;
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;

/// Default squared-shear floor in the Richardson denominator, s^-2.
pub const DEFAULT_SHEAR_FLOOR: f64 = 1e-12;
/// Coefficient value substituted at (numerically) singular levels, m^2/s.
pub const SINGULAR_CAP: f64 = 1e3;
/// Levels with `|1 + gamma R|` below this are treated as singular.
pub const SINGULAR_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureFamily {
    /// Pacanowski–Philander.
    R213,
    /// Gent.
    R23,
    R224,
}

impl ClosureFamily {
    pub const ALL: [ClosureFamily; 3] =
        [ClosureFamily::R213, ClosureFamily::R23, ClosureFamily::R224];

    pub fn gamma(self) -> f64 {
        match self {
            ClosureFamily::R213 | ClosureFamily::R224 => 5.0,
            ClosureFamily::R23 => 10.0,
        }
    }

    /// Lower-case selector used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            ClosureFamily::R213 => "r213",
            ClosureFamily::R23 => "r23",
            ClosureFamily::R224 => "r224",
        }
    }
}

impl fmt::Display for ClosureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClosureFamily::R213 => "R213",
            ClosureFamily::R23 => "R23",
            ClosureFamily::R224 => "R224",
        };
        f.write_str(name)
    }
}

impl FromStr for ClosureFamily {
    type Err = ColumnError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r213" => Ok(ClosureFamily::R213),
            "r23" => Ok(ClosureFamily::R23),
            "r224" => Ok(ClosureFamily::R224),
            other => Err(ColumnError::InvalidParameter(format!(
                "unknown model '{other}' (expected r213, r23 or r224)"
            ))),
        }
    }
}

/// A closure family together with its coefficients (m^2/s, except `gamma`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureSpec<T> {
    pub family: ClosureFamily,
    pub alpha1: T,
    pub beta1: T,
    pub alpha2: T,
    /// Only read by R23. R224 carries 1e-3 here, which its diffusivity never uses.
    pub beta2: T,
    pub gamma: T,
}

impl<T: Real> ClosureSpec<T> {
    pub fn new(family: ClosureFamily, alpha1: T, beta1: T, alpha2: T, beta2: T) -> Result<Self> {
        let spec = Self {
            family,
            alpha1,
            beta1,
            alpha2,
            beta2,
            gamma: T::lit(family.gamma()),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Published coefficient set for each family.
    pub fn standard(family: ClosureFamily) -> Self {
        let (a1, b1, a2, b2) = match family {
            ClosureFamily::R213 => (1e-4, 1e-2, 1e-5, 0.0),
            ClosureFamily::R23 => (1e-4, 1e-1, 1e-5, 1e-1),
            ClosureFamily::R224 => (1e-4, 1e-2, 1e-5, 1e-3),
        };
        Self {
            family,
            alpha1: T::lit(a1),
            beta1: T::lit(b1),
            alpha2: T::lit(a2),
            beta2: T::lit(b2),
            gamma: T::lit(family.gamma()),
        }
    }

    /// Pacanowski–Philander form with the OPA ocean-model coefficients.
    pub fn opa() -> Self {
        Self {
            alpha1: T::lit(1e-6),
            beta1: T::lit(1e-2),
            alpha2: T::lit(1e-7),
            ..Self::standard(ClosureFamily::R213)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let z = T::zero();
        if !(self.alpha1 > z && self.beta1 > z && self.alpha2 > z) {
            return Err(ColumnError::InvalidParameter(format!(
                "{} coefficients alpha1, beta1, alpha2 must be positive",
                self.family
            )));
        }
        if self.family == ClosureFamily::R23 && !(self.beta2 > z) {
            return Err(ColumnError::InvalidParameter(
                "R23 requires beta2 > 0".into(),
            ));
        }
        if self.gamma != T::lit(self.family.gamma()) {
            return Err(ColumnError::InvalidParameter(format!(
                "{} requires gamma = {}",
                self.family,
                self.family.gamma()
            )));
        }
        Ok(())
    }

    /// The singular Richardson number `-1/gamma`.
    pub fn singular_point(&self) -> T {
        -T::one() / self.gamma
    }

    fn denominator(&self, r: T) -> T {
        T::one() + self.gamma * r
    }

    /// `f1` and `f2` from a known non-zero `1 + gamma R`.
    fn pair_from_denominator(&self, d: T) -> (T, T) {
        let d2 = d * d;
        let f1 = self.alpha1 + self.beta1 / d2;
        let f2 = match self.family {
            ClosureFamily::R213 => self.alpha2 + f1 / d,
            ClosureFamily::R23 => self.alpha2 + self.beta2 / (d2 * d),
            ClosureFamily::R224 => self.alpha2 + f1 / d2,
        };
        (f1, f2)
    }
}

/// Eddy viscosity `f1(R)`.
pub fn eval_f1<T: Real>(spec: &ClosureSpec<T>, r: T) -> Result<T> {
    let d = spec.denominator(r);
    if d == T::zero() {
        return Err(singularity(spec, r));
    }
    Ok(spec.alpha1 + spec.beta1 / (d * d))
}

/// Eddy diffusivity `f2(R)`. May be negative; callers decide whether that is acceptable.
pub fn eval_f2<T: Real>(spec: &ClosureSpec<T>, r: T) -> Result<T> {
    let d = spec.denominator(r);
    if d == T::zero() {
        return Err(singularity(spec, r));
    }
    Ok(spec.pair_from_denominator(d).1)
}

fn singularity<T: Real>(spec: &ClosureSpec<T>, r: T) -> ColumnError {
    ColumnError::Singularity {
        family: spec.family,
        r: r.as_f64(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonProfile<T> {
    pub values: Vec<T>,
    pub shear_floor: T,
}

/// Gradient Richardson number `R = -(g/rho0) rho_z / (u_z^2 + v_z^2)` on every level.
///
/// Level `i` takes its gradients from the cell above it (level `i+1` minus
/// level `i`): the solver applies the coefficient stored at level `i` to the
/// face between `i` and `i+1`, so this keeps `R` on the face it controls.
/// The squared shear is floored at `shear_floor`; the surface level copies
/// the level below it.
pub fn richardson_number<T: Real>(
    state: &StateProfiles<T>,
    grid: &ColumnGrid<T>,
    constants: &ForcingAndConstants<T>,
    shear_floor: T,
) -> Result<RichardsonProfile<T>> {
    state.check_grid(grid)?;
    if !(shear_floor > T::zero()) {
        return Err(ColumnError::InvalidParameter(format!(
            "shear floor must be positive, got {shear_floor}"
        )));
    }
    let n = grid.n_levels();
    let dz = grid.dz();
    let buoyancy = constants.g / constants.rho0;
    let mut values = vec![T::zero(); n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n - 1 {
        let du = (state.u[i + 1] - state.u[i]) / dz;
        let dv = (state.v[i + 1] - state.v[i]) / dz;
        let drho = (state.rho[i + 1] - state.rho[i]) / dz;
        let shear2 = (du * du + dv * dv).max(shear_floor);
        values[i] = -buoyancy * drho / shear2;
    }
    values[n - 1] = values[n - 2];
    Ok(RichardsonProfile {
        values,
        shear_floor,
    })
}

/// Eddy coefficients on every level of a column.
#[derive(Debug, Clone, PartialEq)]
pub struct EddyCoefficients<T> {
    pub nu1: Vec<T>,
    pub nu2: Vec<T>,
    /// Levels where `nu2 < 0`.
    pub negative_nu2_levels: Vec<usize>,
    /// Levels where `|1 + gamma R|` fell inside the singular band and the cap was substituted.
    pub singular_levels: Vec<usize>,
}

impl<T: Real> EddyCoefficients<T> {
    /// Constant coefficients, mostly useful for tests and idealized runs.
    pub fn uniform(n_levels: usize, nu1: T, nu2: T) -> Self {
        Self::from_profiles(vec![nu1; n_levels], vec![nu2; n_levels])
    }

    pub fn from_profiles(nu1: Vec<T>, nu2: Vec<T>) -> Self {
        let negative_nu2_levels = negative_levels(&nu2);
        Self {
            nu1,
            nu2,
            negative_nu2_levels,
            singular_levels: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nu1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu1.is_empty()
    }
}

fn negative_levels<T: Real>(nu2: &[T]) -> Vec<usize> {
    nu2.iter()
        .enumerate()
        .filter(|(_, x)| **x < T::zero())
        .map(|(i, _)| i)
        .collect()
}

/// Applies `f1`/`f2` level by level.
pub fn coefficients_profile<T: Real>(
    spec: &ClosureSpec<T>,
    richardson: &RichardsonProfile<T>,
) -> EddyCoefficients<T> {
    let n = richardson.values.len();
    let mut nu1 = Vec::with_capacity(n);
    let mut nu2 = Vec::with_capacity(n);
    let mut singular_levels = Vec::new();
    let band = T::lit(SINGULAR_BAND);
    let cap = T::lit(SINGULAR_CAP);
    for (i, &r) in richardson.values.iter().enumerate() {
        let d = spec.denominator(r);
        if d.abs() < band {
            nu1.push(cap);
            nu2.push(cap);
            singular_levels.push(i);
        } else {
            let (f1, f2) = spec.pair_from_denominator(d);
            nu1.push(f1);
            nu2.push(f2);
        }
    }
    let negative_nu2_levels = negative_levels(&nu2);
    EddyCoefficients {
        nu1,
        nu2,
        negative_nu2_levels,
        singular_levels,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow<T> {
    pub r: T,
    pub f1: T,
    pub f2: T,
}

/// Uniformly sampled `(R, f1, f2)` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    pub family: ClosureFamily,
    pub rows: Vec<CoefficientRow<T>>,
    /// Sample points dropped because they fell on the singularity.
    pub skipped: Vec<T>,
}

impl<T: Real> CoefficientTable<T> {
    /// CSV with header `R,f1,f2`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["R", "f1", "f2"])?;
        for row in &self.rows {
            w.write_record([row.r.to_string(), row.f1.to_string(), row.f2.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn coefficient_table<T: Real>(
    spec: &ClosureSpec<T>,
    r_min: T,
    r_max: T,
    n_samples: usize,
) -> Result<CoefficientTable<T>> {
    if !(r_min < r_max) || !r_min.is_finite() || !r_max.is_finite() {
        return Err(ColumnError::InvalidParameter(format!(
            "degenerate Richardson range [{r_min}, {r_max}]"
        )));
    }
    if n_samples < 2 {
        return Err(ColumnError::InvalidParameter(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let span = r_max - r_min;
    let last = T::lit((n_samples - 1) as f64);
    let band = T::lit(SINGULAR_BAND);
    let mut rows = Vec::with_capacity(n_samples);
    let mut skipped = Vec::new();
    for k in 0..n_samples {
        let r = r_min + span * T::lit(k as f64) / last;
        let d = spec.denominator(r);
        if d.abs() < band {
            skipped.push(r);
            continue;
        }
        let (f1, f2) = spec.pair_from_denominator(d);
        rows.push(CoefficientRow { r, f1, f2 });
    }
    Ok(CoefficientTable {
        family: spec.family,
        rows,
        skipped,
    })
}
