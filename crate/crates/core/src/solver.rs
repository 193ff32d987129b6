//! Implicit non-conservative time stepping of the column.
//!
//! Each field `x` in `{u, v, rho}` obeys `x_t = (nu x_z)_z`, expanded as
//! `nu_z x_z + nu x_zz` and discretized with a backward difference for
//! first derivatives and a centred difference for `x_zz`. The field is
//! implicit, the coefficients are frozen at the old time level. Interior
//! row `i`:
//!
//! ```text
//! (1/dt - a_i/dz + 2 nu_i/dz^2) x_i + (a_i/dz - nu_i/dz^2) x_{i-1} - (nu_i/dz^2) x_{i+1} = x_i^n / dt
//! a_i = (nu_i - nu_{i-1}) / dz
//! ```
//!
//! The bottom row is Dirichlet; the surface row imposes
//! `nu_s (x_s - x_{s-1}) / dz = flux`.
//!
//! The spatial part collapses to
//! `[nu_i (x_{i+1} - x_i) - nu_{i-1} (x_i - x_{i-1})] / dz^2`, a flux
//! difference with `nu_i` on the face between `i` and `i+1`, so the operator
//! is an M-matrix whenever `nu >= 0`. Because the surface level carries the
//! same coefficient as the face below it, the flux entering the interior is
//! exactly the prescribed surface flux.

use log::{debug, info, warn};

use crate::closures::{
    coefficients_profile, richardson_number, ClosureSpec, EddyCoefficients, DEFAULT_SHEAR_FLOOR,
};
use crate::error::{ColumnError, Result};
use crate::forcing::ForcingAndConstants;
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;
use crate::tridiag::Tridiagonal;

pub const DEFAULT_DT: f64 = 60.0;
pub const DEFAULT_STOP_TOLERANCE: f64 = 1e-8;

/// Time-stepping controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunControl<T> {
    /// Time step, s.
    pub dt: T,
    pub max_steps: usize,
    /// Stop once the step residual drops below this.
    pub stop_tolerance: T,
    pub shear_floor: T,
}

impl<T: Real> RunControl<T> {
    pub fn new(dt: T, max_steps: usize) -> Self {
        Self {
            dt,
            max_steps,
            stop_tolerance: T::lit(DEFAULT_STOP_TOLERANCE),
            shear_floor: T::lit(DEFAULT_SHEAR_FLOOR),
        }
    }

    /// Steps needed to cover `hours` of model time, rounded to the nearest step.
    pub fn for_hours(dt: T, hours: T) -> Self {
        let steps = (hours * T::lit(3600.0) / dt).round();
        Self::new(dt, steps.to_usize().unwrap_or(0))
    }

    pub fn with_stop_tolerance(mut self, tol: T) -> Self {
        self.stop_tolerance = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub final_state: StateProfiles<T>,
    /// `residuals[n]` is the residual of step `n + 1`.
    pub residuals: Vec<T>,
    /// Eddy coefficients evaluated on the final state.
    pub nu_history_final: EddyCoefficients<T>,
    pub steps_taken: usize,
    pub converged: bool,
}

/// Builds the tridiagonal operator for one field.
///
/// `nu` is the frozen coefficient profile; the right-hand side is assembled
/// separately because it depends on the field values.
pub fn assemble_operator<T: Real>(nu: &[T], dz: T, dt: T) -> Tridiagonal<T> {
    let n = nu.len();
    let mut m = Tridiagonal::zeros(n);
    let inv_dt = T::one() / dt;
    let dz2 = dz * dz;
    m.diag[0] = T::one();
    for i in 1..n - 1 {
        let a = (nu[i] - nu[i - 1]) / dz;
        let diffusive = nu[i] / dz2;
        m.lower[i] = a / dz - diffusive;
        m.diag[i] = inv_dt - a / dz + (diffusive + diffusive);
        m.upper[i] = -diffusive;
    }
    let s = n - 1;
    m.lower[s] = -nu[s] / dz;
    m.diag[s] = nu[s] / dz;
    m
}

/// Advances one field. Works on the anomaly from the bottom value so the
/// solve keeps full precision for fields with a large mean such as density.
fn advance_field<T: Real>(
    x: &[T],
    nu: &[T],
    dz: T,
    dt: T,
    bottom: T,
    flux: T,
) -> Result<(Vec<T>, usize)> {
    let n = x.len();
    let op = assemble_operator(nu, dz, dt);
    let inv_dt = T::one() / dt;
    let mut rhs = Vec::with_capacity(n);
    rhs.push(T::zero());
    for &xi in &x[1..n - 1] {
        rhs.push((xi - bottom) * inv_dt);
    }
    rhs.push(flux);
    let violations = op.dominance_violations().len();
    let anomaly = op.solve(&rhs)?;
    Ok((
        anomaly.into_iter().map(|a| a + bottom).collect(),
        violations,
    ))
}

fn check_diffusivity<T: Real>(
    nu: &EddyCoefficients<T>,
    grid: &ColumnGrid<T>,
    step: usize,
) -> Result<()> {
    let negative: Vec<usize> = nu
        .nu2
        .iter()
        .enumerate()
        .filter(|(_, x)| **x < T::zero())
        .map(|(i, _)| i)
        .collect();
    if negative.is_empty() {
        return Ok(());
    }
    let depths = negative.iter().map(|&i| grid.z(i).as_f64()).collect();
    Err(ColumnError::NegativeDiffusivity {
        step,
        levels: negative,
        depths,
    })
}

fn step_counted<T: Real>(
    state: &StateProfiles<T>,
    nu: &EddyCoefficients<T>,
    grid: &ColumnGrid<T>,
    forcing: &ForcingAndConstants<T>,
    dt: T,
    step_index: usize,
) -> Result<(StateProfiles<T>, usize)> {
    state.check_grid(grid)?;
    let n = grid.n_levels();
    if nu.nu1.len() != n || nu.nu2.len() != n {
        return Err(ColumnError::Dimension {
            what: "eddy coefficients",
            expected: n,
            found: nu.nu1.len().min(nu.nu2.len()),
        });
    }
    if !(dt > T::zero()) {
        return Err(ColumnError::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    check_diffusivity(nu, grid, step_index)?;

    let dz = grid.dz();
    let [fu, fv, frho] = forcing.surface_fluxes();
    let [ub, vb, rhob] = forcing.bottom_values();
    let (u, cu) = advance_field(&state.u, &nu.nu1, dz, dt, ub, fu)?;
    let (v, cv) = advance_field(&state.v, &nu.nu1, dz, dt, vb, fv)?;
    let (rho, cr) = advance_field(&state.rho, &nu.nu2, dz, dt, rhob, frho)?;
    Ok((StateProfiles { u, v, rho }, cu + cv + cr))
}

/// One implicit step with the coefficients `nu` frozen.
///
/// Fails with [`ColumnError::NegativeDiffusivity`] if any `nu2` entry is negative.
pub fn step<T: Real>(
    state: &StateProfiles<T>,
    nu: &EddyCoefficients<T>,
    grid: &ColumnGrid<T>,
    forcing: &ForcingAndConstants<T>,
    dt: T,
) -> Result<StateProfiles<T>> {
    let (next, violations) = step_counted(state, nu, grid, forcing, dt, 0)?;
    if violations > 0 {
        debug!("{violations} tridiagonal rows are not weakly diagonally dominant");
    }
    Ok(next)
}

/// Euclidean norm of the change between two states over all fields and levels.
pub fn residual<T: Real>(prev: &StateProfiles<T>, next: &StateProfiles<T>) -> Result<T> {
    let mut sum = T::zero();
    for (a, b) in prev.fields().into_iter().zip(next.fields()) {
        if a.len() != b.len() {
            return Err(ColumnError::Dimension {
                what: "residual operand",
                expected: a.len(),
                found: b.len(),
            });
        }
        for (&x, &y) in a.iter().zip(b) {
            let d = y - x;
            sum = sum + d * d;
        }
    }
    Ok(sum.sqrt())
}

/// Integrates from `init` until the residual falls below the stop tolerance
/// or `max_steps` is reached.
///
/// Each step recomputes the Richardson number and eddy coefficients from the
/// current state. A negative diffusivity aborts the run with the offending
/// levels, including at step 0.
pub fn integrate<T: Real>(
    init: &StateProfiles<T>,
    spec: &ClosureSpec<T>,
    grid: &ColumnGrid<T>,
    forcing: &ForcingAndConstants<T>,
    control: &RunControl<T>,
) -> Result<RunResult<T>> {
    init.check_grid(grid)?;
    spec.validate()?;
    forcing.validate()?;
    if !(control.dt > T::zero()) {
        return Err(ColumnError::InvalidParameter(format!(
            "dt must be positive, got {}",
            control.dt
        )));
    }

    // The loop carries anomalies from the bottom values. R, nu and the
    // residual depend only on differences, and density anomalies keep about
    // ten more digits than absolute values near 1025 kg/m^3, which matters
    // once per-step changes approach 1e-12.
    let bottom = forcing.bottom_values();
    let mut state = init.clone();
    for (field, b) in [&mut state.u, &mut state.v, &mut state.rho]
        .into_iter()
        .zip(bottom)
    {
        if field[0] != b {
            info!(
                "overwriting bottom value {} with Dirichlet value {}",
                field[0], b
            );
        }
        field[0] = T::zero();
        for x in field.iter_mut().skip(1) {
            *x = *x - b;
        }
    }
    let mut shifted = *forcing;
    shifted.u_b = T::zero();
    shifted.v_b = T::zero();
    shifted.rho_b = T::zero();
    let forcing = &shifted;

    let mut residuals = Vec::new();
    let mut converged = false;
    let mut warned = false;
    for n in 0..control.max_steps {
        let r = richardson_number(&state, grid, forcing, control.shear_floor)?;
        let nu = coefficients_profile(spec, &r);
        let (next, violations) = step_counted(&state, &nu, grid, forcing, control.dt, n)?;
        if violations > 0 && !warned {
            warn!("step {n}: {violations} tridiagonal rows are not weakly diagonally dominant");
            warned = true;
        }
        let res = residual(&state, &next)?;
        residuals.push(res);
        state = next;
        if res < control.stop_tolerance {
            converged = true;
            break;
        }
    }

    let r = richardson_number(&state, grid, forcing, control.shear_floor)?;
    let nu_final = coefficients_profile(spec, &r);
    for (field, b) in [&mut state.u, &mut state.v, &mut state.rho]
        .into_iter()
        .zip(bottom)
    {
        for x in field.iter_mut() {
            *x = *x + b;
        }
    }
    Ok(RunResult {
        final_state: state,
        steps_taken: residuals.len(),
        residuals,
        nu_history_final: nu_final,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closures::ClosureFamily;

    fn grid(n: usize) -> ColumnGrid<f64> {
        ColumnGrid::from_levels(n, 5.0).unwrap()
    }

    #[test]
    fn quiescent_column_is_a_fixed_point() {
        let g = grid(21);
        let forcing = ForcingAndConstants {
            q_flux: 0.0,
            u_b: 0.3,
            v_b: -0.1,
            rho_b: 1024.5,
            ..ForcingAndConstants::default()
        };
        let s = StateProfiles::constant(21, 0.3, -0.1, 1024.5);
        let nu = EddyCoefficients::uniform(21, 1e-3, 5e-4);
        let next = step(&s, &nu, &g, &forcing, 60.0).unwrap();
        assert_eq!(residual(&s, &next).unwrap(), 0.0);
    }

    #[test]
    fn negative_diffusivity_is_rejected() {
        let g = grid(5);
        let s = StateProfiles::constant(5, 0.0, 0.0, 1025.0);
        let mut nu = EddyCoefficients::uniform(5, 1e-3, 1e-3);
        nu.nu2[3] = -1e-4;
        match step(&s, &nu, &g, &ForcingAndConstants::default(), 60.0) {
            Err(ColumnError::NegativeDiffusivity { levels, depths, .. }) => {
                assert_eq!(levels, vec![3]);
                assert_eq!(depths, vec![-5.0]);
            }
            other => panic!("expected model-invalid error, got {other:?}"),
        }
    }

    #[test]
    fn residual_examples() {
        let a = StateProfiles::<f64>::constant(4, 0.0, 0.0, 1025.0);
        assert_eq!(residual(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        b.u[2] = 3e-3;
        assert!((residual(&a, &b).unwrap() - 3e-3).abs() < 1e-18);
        let mut c = a.clone();
        c.u[1] = 3e-4;
        c.rho[3] = 1025.0 + 4e-4;
        assert!((residual(&a, &c).unwrap() - 5e-4).abs() < 1e-12);
        let short = StateProfiles::constant(3, 0.0, 0.0, 1025.0);
        assert!(residual(&a, &short).is_err());
    }

    #[test]
    fn surface_row_imposes_flux() {
        let g = grid(6);
        let forcing = ForcingAndConstants::default().with_winds(8.0, 0.0);
        let s = StateProfiles::constant(6, 0.0, 0.0, 1025.0);
        let nu = EddyCoefficients::uniform(6, 2e-3, 1e-3);
        let next = step(&s, &nu, &g, &forcing, 60.0).unwrap();
        let [fu, _, fr] = forcing.surface_fluxes();
        let top = 5;
        assert!((2e-3 * (next.u[top] - next.u[top - 1]) / 5.0 - fu).abs() < 1e-15);
        assert!((1e-3 * (next.rho[top] - next.rho[top - 1]) / 5.0 - fr).abs() < 1e-15);
        assert!(next.u[top] > 0.0);
    }

    #[test]
    fn calm_uniform_run_converges_immediately() {
        let g = grid(21);
        let forcing = ForcingAndConstants {
            q_flux: 0.0,
            ..ForcingAndConstants::default()
        };
        let s = StateProfiles::constant(21, 0.0, 0.0, forcing.rho_b);
        let spec = ClosureSpec::standard(ClosureFamily::R224);
        let run = integrate(&s, &spec, &g, &forcing, &RunControl::new(60.0, 100)).unwrap();
        assert!(run.converged);
        assert_eq!(run.steps_taken, 1);
        assert_eq!(run.residuals, vec![0.0]);
    }

    #[test]
    fn bottom_is_overwritten_with_dirichlet_values() {
        let g = grid(5);
        let forcing = ForcingAndConstants {
            q_flux: 0.0,
            rho_b: 1025.5,
            ..ForcingAndConstants::default()
        };
        let s = StateProfiles::constant(5, 0.0, 0.0, 1025.0);
        let spec = ClosureSpec::standard(ClosureFamily::R224);
        let run = integrate(&s, &spec, &g, &forcing, &RunControl::new(60.0, 1)).unwrap();
        assert_eq!(run.final_state.rho[0], 1025.5);
    }
}
