//! Initial profiles: CSV ingestion, interpolation onto the model grid and
//! synthetic initial conditions for the three reference cases.

use std::io::Read;
use std::path::Path;

use crate::error::{ColumnError, Result};
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;

/// Profile samples at arbitrary depths, sorted from deepest to shallowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples<T> {
    /// m, negative down, strictly increasing.
    pub depths: Vec<T>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub rho: Vec<T>,
}

impl<T: Real> ProfileSamples<T> {
    /// Sorts rows by depth and validates them.
    pub fn new(rows: Vec<[T; 4]>) -> Result<Self> {
        let mut rows = rows;
        if rows.is_empty() {
            return Err(ColumnError::Validation("profile has no samples".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(ColumnError::Validation(
                "profile contains non-finite values".into(),
            ));
        }
        rows.sort_by(|a, b| a[0].partial_cmp(&b[0]).expect("finite depths"));
        if let Some(w) = rows.windows(2).find(|w| w[0][0] == w[1][0]) {
            return Err(ColumnError::Validation(format!(
                "duplicate depth {} m",
                w[0][0]
            )));
        }
        Ok(Self {
            depths: rows.iter().map(|r| r[0]).collect(),
            u: rows.iter().map(|r| r[1]).collect(),
            v: rows.iter().map(|r| r[2]).collect(),
            rho: rows.iter().map(|r| r[3]).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }
}

/// Parses CSV with header `z,u,v,rho`. Blank lines are skipped.
pub fn parse_profile<T: Real, R: Read>(reader: R) -> Result<ProfileSamples<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_ascii_lowercase).collect();
    if header != ["z", "u", "v", "rho"] {
        return Err(ColumnError::Parse {
            line: 1,
            message: format!("expected header z,u,v,rho, found {}", header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| ColumnError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(ColumnError::Parse {
                line,
                message: format!("expected 4 fields, found {}", record.len()),
            });
        }
        let mut row = [T::zero(); 4];
        for (slot, field) in row.iter_mut().zip(record.iter()) {
            let value: f64 = field.parse().map_err(|_| ColumnError::Parse {
                line,
                message: format!("'{field}' is not a number"),
            })?;
            *slot = T::lit(value);
        }
        rows.push(row);
    }
    ProfileSamples::new(rows)
}

pub fn read_profile_file<T: Real>(path: impl AsRef<Path>) -> Result<ProfileSamples<T>> {
    let file = std::fs::File::open(path)?;
    parse_profile(file)
}

/// Piecewise-linear interpolation onto the grid, holding endpoint values
/// outside the sampled depth range.
pub fn interpolate_to_grid<T: Real>(
    samples: &ProfileSamples<T>,
    grid: &ColumnGrid<T>,
) -> Result<StateProfiles<T>> {
    if samples.is_empty() {
        return Err(ColumnError::Validation("profile has no samples".into()));
    }
    let d = &samples.depths;
    let last = d.len() - 1;
    let mut out = StateProfiles::constant(grid.n_levels(), T::zero(), T::zero(), T::zero());
    for i in 0..grid.n_levels() {
        let z = grid.z(i);
        let pick = |values: &[T]| -> T {
            if z <= d[0] {
                return values[0];
            }
            if z >= d[last] {
                return values[last];
            }
            // first sample strictly above z
            let k = d.partition_point(|&x| x <= z);
            let (z0, z1) = (d[k - 1], d[k]);
            if z == z0 {
                return values[k - 1];
            }
            let w = (z - z0) / (z1 - z0);
            values[k - 1] + w * (values[k] - values[k - 1])
        };
        out.u[i] = pick(&samples.u);
        out.v[i] = pick(&samples.v);
        out.rho[i] = pick(&samples.rho);
    }
    Ok(out)
}

/// The three reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// Wind-driven mixed layer.
    WindMixing = 1,
    /// Initial density profile with a static instability.
    StaticInstability = 2,
    /// Long integration towards the linear equilibrium.
    LongTime = 3,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [
        CaseId::WindMixing,
        CaseId::StaticInstability,
        CaseId::LongTime,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for CaseId {
    type Error = ColumnError;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(CaseId::WindMixing),
            2 => Ok(CaseId::StaticInstability),
            3 => Ok(CaseId::LongTime),
            other => Err(ColumnError::InvalidParameter(format!(
                "case id must be 1, 2 or 3, got {other}"
            ))),
        }
    }
}

fn bump(z: f64, center: f64, width: f64) -> f64 {
    let s = (z - center) / width;
    (-0.5 * s * s).exp()
}

/// Smooth step rising from 0 above `center` to 1 below it.
fn deepening_step(z: f64, center: f64, width: f64) -> f64 {
    0.5 * (1.0 + ((center - z) / width).tanh())
}

/// Smoothed peak `-sqrt((z - center)^2 + r^2)`: linear flanks, rounded top.
fn rounded_tent(z: f64, center: f64, r: f64) -> f64 {
    -((z - center).powi(2) + r * r).sqrt()
}

/// Case 1: westward surface current over an eastward undercurrent peaking
/// near 55 m, and a density profile stratified from the surface down.
fn case1(z: f64) -> [f64; 3] {
    let u = 0.10 + 0.0008 * (rounded_tent(z, -52.0, 3.0) + 52.0) + 0.0004 * (z + 52.0)
        - 0.30 * bump(z, -8.0, 8.0);
    let v = 0.02 + 0.0004 * z + 0.06 * bump(z, -6.0, 8.0);
    let rho = 1021.6 - 0.004 * z + 1.6 * deepening_step(z, -38.0, 6.0);
    [u, v, rho]
}

/// Case 2: eastward current peaking near 60 m, southward current near 15 m,
/// a weakly stratified upper 70 m with two stacked density inversions
/// between 30 m and 50 m.
fn case2(z: f64) -> [f64; 3] {
    let u = 0.05 + 0.45 * bump(z, -60.0, 22.0);
    let v = -0.20 * bump(z, -15.0, 12.0);
    let rho = 1021.8 - 0.0004 * z
        + 0.035 * ((z + 46.0) / 1.5).tanh()
        + 0.03 * ((z + 35.0) / 1.5).tanh()
        + 1.2 * deepening_step(z, -80.0, 4.0);
    [u, v, rho]
}

/// Case 3: eastward currents at the surface and near 70 m, westward near
/// 45 m and 90 m; a 35 m mixed layer over an unstratified deep column. The
/// total density contrast stays below the equilibrium contrast of every
/// closure, so the column restratifies monotonically as it spins up.
fn case3(z: f64) -> [f64; 3] {
    let u = 0.15 * bump(z, 0.0, 10.0) - 0.12 * bump(z, -45.0, 8.0) + 0.15 * bump(z, -70.0, 8.0)
        - 0.10 * bump(z, -90.0, 8.0);
    let v = 0.06 * bump(z, 0.0, 10.0) - 0.10 * bump(z, -55.0, 9.0) + 0.06 * bump(z, -90.0, 8.0);
    let rho = 1021.7 + 0.0106 * deepening_step(z, -32.0, 1.5);
    [u, v, rho]
}

/// Deterministic synthetic initial state for `case` on `grid`.
pub fn gen_case_init<T: Real>(case: CaseId, grid: &ColumnGrid<T>) -> StateProfiles<T> {
    let profile = match case {
        CaseId::WindMixing => case1,
        CaseId::StaticInstability => case2,
        CaseId::LongTime => case3,
    };
    let n = grid.n_levels();
    let mut state = StateProfiles::constant(n, T::zero(), T::zero(), T::zero());
    for i in 0..n {
        let [u, v, rho] = profile(grid.z(i).as_f64());
        state.u[i] = T::lit(u);
        state.v[i] = T::lit(v);
        state.rho[i] = T::lit(rho);
    }
    state
}
