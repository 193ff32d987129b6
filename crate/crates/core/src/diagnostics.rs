//! Mixed-layer depth, surface current, pycnocline sharpness, static
//! instability and linearity measures used to compare runs.

use std::io::Write;

use crate::error::{ColumnError, Result};
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;

/// Density increase over the surface value that marks the mixed-layer base, kg/m^3.
pub const MLD_DENSITY_DELTA: f64 = 0.01;
/// Backward density gradients above this count as inversions, kg/m^4.
pub const INSTABILITY_TOLERANCE: f64 = 1e-12;

/// Depth (m, positive down) where density first exceeds `rho_surface + delta`,
/// scanning downward and interpolating linearly inside the bracketing cell.
/// Returns the full column depth if the threshold is never exceeded.
pub fn mixed_layer_depth<T: Real>(rho: &[T], grid: &ColumnGrid<T>, delta: T) -> Result<T> {
    check_len(rho, grid)?;
    if !(delta > T::zero()) {
        return Err(ColumnError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let s = grid.surface();
    let target = rho[s] + delta;
    for i in (0..s).rev() {
        if rho[i] > target {
            let above = rho[i + 1];
            let frac = (target - above) / (rho[i] - above);
            let depth = -(grid.z(i + 1)) + frac * grid.dz();
            return Ok(depth);
        }
    }
    Ok(grid.depth())
}

/// Surface `(u, v, speed)`.
pub fn surface_current<T: Real>(state: &StateProfiles<T>) -> (T, T, T) {
    let s = state.len() - 1;
    let (u, v) = (state.u[s], state.v[s]);
    (u, v, u.hypot(v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pycnocline<T> {
    /// Largest `|rho_z|`, kg/m^4.
    pub max_gradient: T,
    /// Height `z` (m, negative down) of the level carrying that gradient.
    pub z: T,
}

/// Largest backward-difference density gradient; ties go to the shallowest level.
pub fn pycnocline_sharpness<T: Real>(rho: &[T], grid: &ColumnGrid<T>) -> Result<Pycnocline<T>> {
    check_len(rho, grid)?;
    let tie = T::lit(INSTABILITY_TOLERANCE);
    let s = grid.surface();
    let mut best = Pycnocline {
        max_gradient: ((rho[s] - rho[s - 1]) / grid.dz()).abs(),
        z: grid.z(s),
    };
    for i in (1..s).rev() {
        let g = ((rho[i] - rho[i - 1]) / grid.dz()).abs();
        if g > best.max_gradient + tie {
            best = Pycnocline {
                max_gradient: g,
                z: grid.z(i),
            };
        }
    }
    Ok(best)
}

/// A depth interval `[bottom, top]` in metres (negative down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub bottom: T,
    pub top: T,
}

/// Maximal runs of cells where density decreases downward.
pub fn static_instability_zones<T: Real>(
    rho: &[T],
    grid: &ColumnGrid<T>,
) -> Result<Vec<Interval<T>>> {
    check_len(rho, grid)?;
    let tol = T::lit(INSTABILITY_TOLERANCE);
    let mut zones: Vec<Interval<T>> = Vec::new();
    let mut open: Option<usize> = None;
    for i in 1..grid.n_levels() {
        let unstable = (rho[i] - rho[i - 1]) / grid.dz() > tol;
        match (unstable, open) {
            (true, None) => open = Some(i - 1),
            (false, Some(start)) => {
                zones.push(Interval {
                    bottom: grid.z(start),
                    top: grid.z(i - 1),
                });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        zones.push(Interval {
            bottom: grid.z(start),
            top: grid.z(grid.surface()),
        });
    }
    Ok(zones)
}

/// Maximum residual of a least-squares line fit, relative to the profile range.
pub fn linearity_deviation<T: Real>(values: &[T], grid: &ColumnGrid<T>) -> Result<T> {
    check_len(values, grid)?;
    if values.len() < 3 {
        return Err(ColumnError::InvalidParameter(
            "linearity needs at least 3 levels".into(),
        ));
    }
    let (lo, hi) = values.iter().fold((values[0], values[0]), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let range = hi - lo;
    if range == T::zero() {
        return Ok(T::zero());
    }
    let n = T::lit(values.len() as f64);
    let z = grid.z_levels();
    let z_mean = z.iter().fold(T::zero(), |a, &b| a + b) / n;
    let y_mean = values.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&zi, &yi) in z.iter().zip(values) {
        sxy = sxy + (zi - z_mean) * (yi - y_mean);
        sxx = sxx + (zi - z_mean) * (zi - z_mean);
    }
    let slope = sxy / sxx;
    let worst = z
        .iter()
        .zip(values)
        .map(|(&zi, &yi)| (yi - y_mean - slope * (zi - z_mean)).abs())
        .fold(T::zero(), T::max);
    Ok(worst / range)
}

fn check_len<T>(values: &[T], grid: &ColumnGrid<T>) -> Result<()>
where
    T: Real,
{
    if values.len() != grid.n_levels() {
        return Err(ColumnError::Dimension {
            what: "profile",
            expected: grid.n_levels(),
            found: values.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport<T> {
    /// Mixed-layer depth, m (positive down).
    pub mld_m: T,
    pub surface_u: T,
    pub surface_v: T,
    pub surface_speed: T,
    pub pycnocline: Pycnocline<T>,
    pub instability_zones: Vec<Interval<T>>,
    pub linearity_dev_u: T,
    pub linearity_dev_v: T,
    pub linearity_dev_rho: T,
}

impl<T: Real> DiagnosticsReport<T> {
    pub fn compute(state: &StateProfiles<T>, grid: &ColumnGrid<T>) -> Result<Self> {
        state.check_grid(grid)?;
        let (surface_u, surface_v, surface_speed) = surface_current(state);
        let (linearity_dev_u, linearity_dev_v, linearity_dev_rho) = if grid.n_levels() >= 3 {
            (
                linearity_deviation(&state.u, grid)?,
                linearity_deviation(&state.v, grid)?,
                linearity_deviation(&state.rho, grid)?,
            )
        } else {
            (T::zero(), T::zero(), T::zero())
        };
        Ok(Self {
            mld_m: mixed_layer_depth(&state.rho, grid, T::lit(MLD_DENSITY_DELTA))?,
            surface_u,
            surface_v,
            surface_speed,
            pycnocline: pycnocline_sharpness(&state.rho, grid)?,
            instability_zones: static_instability_zones(&state.rho, grid)?,
            linearity_dev_u,
            linearity_dev_v,
            linearity_dev_rho,
        })
    }

    /// `(metric, value)` pairs in a fixed order.
    pub fn metrics(&self) -> Vec<(String, T)> {
        let mut rows = vec![
            ("mld_m".to_string(), self.mld_m),
            ("surface_u".to_string(), self.surface_u),
            ("surface_v".to_string(), self.surface_v),
            ("surface_speed".to_string(), self.surface_speed),
            ("pycno_max_grad".to_string(), self.pycnocline.max_gradient),
            ("pycno_z_m".to_string(), self.pycnocline.z),
            ("linearity_dev_u".to_string(), self.linearity_dev_u),
            ("linearity_dev_v".to_string(), self.linearity_dev_v),
            ("linearity_dev_rho".to_string(), self.linearity_dev_rho),
            (
                "instability_zone_count".to_string(),
                T::lit(self.instability_zones.len() as f64),
            ),
        ];
        for (k, zone) in self.instability_zones.iter().enumerate() {
            rows.push((format!("instability_zone_{}_bottom_m", k + 1), zone.bottom));
            rows.push((format!("instability_zone_{}_top_m", k + 1), zone.top));
        }
        rows
    }

    /// CSV with header `metric,value`, one row per metric.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["metric", "value"])?;
        for (name, value) in self.metrics() {
            w.write_record([name, value.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl<T: Real> std::fmt::Display for DiagnosticsReport<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "mixed layer depth     {:.3} m", self.mld_m.as_f64())?;
        writeln!(
            f,
            "surface current       u = {:.5} m/s, v = {:.5} m/s, speed = {:.5} m/s",
            self.surface_u.as_f64(),
            self.surface_v.as_f64(),
            self.surface_speed.as_f64()
        )?;
        writeln!(
            f,
            "pycnocline            max |drho/dz| = {:.6e} kg/m^4 at z = {} m",
            self.pycnocline.max_gradient.as_f64(),
            self.pycnocline.z.as_f64()
        )?;
        if self.instability_zones.is_empty() {
            writeln!(f, "static instability    none")?;
        } else {
            for zone in &self.instability_zones {
                writeln!(
                    f,
                    "static instability    [{}, {}] m",
                    zone.bottom.as_f64(),
                    zone.top.as_f64()
                )?;
            }
        }
        write!(
            f,
            "linearity deviation   u = {:.4e}, v = {:.4e}, rho = {:.4e}",
            self.linearity_dev_u.as_f64(),
            self.linearity_dev_v.as_f64(),
            self.linearity_dev_rho.as_f64()
        )
    }
}
