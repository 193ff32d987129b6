//! Linear steady states of the column and their Richardson number.
//!
//! A steady state with depth-uniform `R` has constant gradients
//! `u_z = (rho_a/rho0) Vx / f1(R)`, `v_z = (rho_a/rho0) Vy / f1(R)` and
//! `rho_z = Q / f2(R)`. Substituting them into the definition of `R` gives
//! `k(R) = f1(R)^2 / f2(R) = C R` with
//! `C = -rho_a^2 (Vx^2 + Vy^2) / (g Q rho0)`.

use std::io::Write;

use crate::closures::{eval_f1, eval_f2, ClosureSpec};
use crate::error::{ColumnError, Result};
use crate::forcing::{wind_stress, ForcingAndConstants};
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;

/// Upper end of the root scan.
pub const DEFAULT_R_MAX: f64 = 1e3;
/// Number of scan points before bisection.
pub const SCAN_POINTS: usize = 10_000;
/// Smallest positive scan point; the scan is geometric from here to `R_max`.
const SCAN_START: f64 = 1e-8;

/// `k(R) = f1(R)^2 / f2(R)`, defined where `f2 > 0`.
pub fn curve_k<T: Real>(spec: &ClosureSpec<T>, r: T) -> Result<T> {
    let f1 = eval_f1(spec, r)?;
    let f2 = eval_f2(spec, r)?;
    if !(f2 > T::zero()) {
        return Err(ColumnError::Domain(format!(
            "k(R) undefined at R = {r}: diffusivity {f2} is not positive"
        )));
    }
    Ok(f1 * f1 / f2)
}

/// Slope `C` of the line `h(R) = C R`.
pub fn compute_c<T: Real>(forcing: &ForcingAndConstants<T>) -> Result<T> {
    if forcing.q_flux == T::zero() {
        return Err(ColumnError::DegenerateForcing);
    }
    let (vx, vy) = wind_stress(forcing);
    let ra2 = forcing.rho_a * forcing.rho_a;
    Ok(-(ra2 * (vx * vx + vy * vy)) / (forcing.g * forcing.q_flux * forcing.rho0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumRoot<T> {
    /// Smallest positive root of `k(R) = C R`.
    pub r_e: T,
    /// Number of sign changes seen by the scan.
    pub crossings: usize,
}

/// Smallest positive solution of `k(R) = C R` on `(0, R_max]`.
pub fn solve_equilibrium_richardson<T: Real>(
    spec: &ClosureSpec<T>,
    c: T,
) -> Result<EquilibriumRoot<T>> {
    solve_equilibrium_richardson_within(spec, c, T::lit(DEFAULT_R_MAX))
}

pub fn solve_equilibrium_richardson_within<T: Real>(
    spec: &ClosureSpec<T>,
    c: T,
    r_max: T,
) -> Result<EquilibriumRoot<T>> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(ColumnError::InvalidParameter(format!(
            "equilibrium slope C must be positive, got {c}"
        )));
    }
    if !(r_max > T::lit(SCAN_START)) {
        return Err(ColumnError::InvalidParameter(format!(
            "R_max too small: {r_max}"
        )));
    }
    let gap = |r: T| -> Result<T> { Ok(curve_k(spec, r)? - c * r) };

    let start = T::lit(SCAN_START);
    let ratio = (r_max / start).ln() / T::lit((SCAN_POINTS - 1) as f64);
    let mut points = Vec::with_capacity(SCAN_POINTS + 1);
    points.push(T::zero());
    for j in 0..SCAN_POINTS {
        points.push(start * (ratio * T::lit(j as f64)).exp());
    }
    if let Some(last) = points.last_mut() {
        *last = r_max;
    }

    let mut bracket = None;
    let mut crossings = 0;
    let mut prev_r = points[0];
    let mut prev_g = gap(prev_r)?;
    for &r in &points[1..] {
        let g = gap(r)?;
        if g == T::zero() || (prev_g > T::zero()) != (g > T::zero()) {
            crossings += 1;
            if bracket.is_none() {
                bracket = Some((prev_r, prev_g, r, g));
            }
        }
        prev_r = r;
        prev_g = g;
    }
    let (mut lo, mut g_lo, mut hi, g_hi) = bracket.ok_or(ColumnError::NoEquilibrium {
        r_max: r_max.as_f64(),
    })?;
    if g_hi == T::zero() {
        return Ok(EquilibriumRoot { r_e: hi, crossings });
    }

    let tol = T::lit(1e-12);
    let two = T::lit(2.0);
    let mut mid = (lo + hi) / two;
    for _ in 0..300 {
        mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let k = curve_k(spec, mid)?;
        let g = k - c * mid;
        if g.abs() < tol * k.max(T::one()) {
            break;
        }
        if (g > T::zero()) == (g_lo > T::zero()) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(EquilibriumRoot {
        r_e: mid,
        crossings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution<T> {
    pub r_e: T,
    pub c: T,
    pub crossings: usize,
    /// m/s per m.
    pub u_slope: T,
    pub v_slope: T,
    /// kg m^-3 per m.
    pub rho_slope: T,
    pub profiles: StateProfiles<T>,
}

/// Gradients `(u_z, v_z, rho_z)` of the linear steady state at `r_e`.
pub fn equilibrium_slopes<T: Real>(
    spec: &ClosureSpec<T>,
    r_e: T,
    forcing: &ForcingAndConstants<T>,
) -> Result<(T, T, T)> {
    let f1 = eval_f1(spec, r_e)?;
    let f2 = eval_f2(spec, r_e)?;
    let (vx, vy) = wind_stress(forcing);
    let momentum = forcing.rho_a / (forcing.rho0 * f1);
    Ok((vx * momentum, vy * momentum, forcing.q_flux / f2))
}

/// Linear profiles anchored at the bottom Dirichlet values.
pub fn analytic_profiles<T: Real>(
    spec: &ClosureSpec<T>,
    r_e: T,
    forcing: &ForcingAndConstants<T>,
    grid: &ColumnGrid<T>,
) -> Result<StateProfiles<T>> {
    spec.validate()?;
    let (su, sv, srho) = equilibrium_slopes(spec, r_e, forcing)?;
    let n = grid.n_levels();
    let height = |i: usize| T::lit(i as f64) * grid.dz();
    Ok(StateProfiles {
        u: (0..n).map(|i| forcing.u_b + su * height(i)).collect(),
        v: (0..n).map(|i| forcing.v_b + sv * height(i)).collect(),
        rho: (0..n).map(|i| forcing.rho_b + srho * height(i)).collect(),
    })
}

/// Solves for `R_e` from the forcing and builds the analytic profiles.
pub fn solve_equilibrium<T: Real>(
    spec: &ClosureSpec<T>,
    forcing: &ForcingAndConstants<T>,
    grid: &ColumnGrid<T>,
) -> Result<EquilibriumSolution<T>> {
    let c = compute_c(forcing)?;
    let root = solve_equilibrium_richardson(spec, c)?;
    let (u_slope, v_slope, rho_slope) = equilibrium_slopes(spec, root.r_e, forcing)?;
    let profiles = analytic_profiles(spec, root.r_e, forcing, grid)?;
    Ok(EquilibriumSolution {
        r_e: root.r_e,
        c,
        crossings: root.crossings,
        u_slope,
        v_slope,
        rho_slope,
        profiles,
    })
}

/// Samples `k(R)` and `h(R) = C R` on `[0, r_max]`, dropping points where `k` is undefined.
pub fn kh_curves<T: Real>(
    spec: &ClosureSpec<T>,
    c: T,
    r_max: T,
    n_samples: usize,
) -> Result<Vec<(T, T, T)>> {
    if !(r_max > T::zero()) || n_samples < 2 {
        return Err(ColumnError::InvalidParameter(
            "k/h curves need r_max > 0 and at least 2 samples".into(),
        ));
    }
    let last = T::lit((n_samples - 1) as f64);
    Ok((0..n_samples)
        .filter_map(|j| {
            let r = r_max * T::lit(j as f64) / last;
            curve_k(spec, r).ok().map(|k| (r, k, c * r))
        })
        .collect())
}

/// CSV with header `R,k,h`.
pub fn write_kh_csv<T: Real, W: Write>(rows: &[(T, T, T)], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["R", "k", "h"])?;
    for (r, k, h) in rows {
        w.write_record([r.to_string(), k.to_string(), h.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
