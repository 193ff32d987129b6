//! CSV writers for run results. Depth is `z` in metres, negative down, with
//! the surface row last.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::closures::EddyCoefficients;
use crate::error::Result;
use crate::grid::{ColumnGrid, StateProfiles};
use crate::scalar::Real;
use crate::solver::RunResult;

/// `z,u,v,rho`; readable back with [`crate::ingest::parse_profile`].
pub fn write_state_csv<T: Real, W: Write>(
    grid: &ColumnGrid<T>,
    state: &StateProfiles<T>,
    writer: W,
) -> Result<()> {
    state.check_grid(grid)?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["z", "u", "v", "rho"])?;
    for i in 0..grid.n_levels() {
        w.write_record([
            grid.z(i).to_string(),
            state.u[i].to_string(),
            state.v[i].to_string(),
            state.rho[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `step,time_s,r`.
pub fn write_residuals_csv<T: Real, W: Write>(dt: T, residuals: &[T], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["step", "time_s", "r"])?;
    for (n, r) in residuals.iter().enumerate() {
        let step = n + 1;
        let time = T::lit(step as f64) * dt;
        w.write_record([step.to_string(), time.to_string(), r.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `z,nu1,nu2`.
pub fn write_nu_csv<T: Real, W: Write>(
    grid: &ColumnGrid<T>,
    nu: &EddyCoefficients<T>,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["z", "nu1", "nu2"])?;
    for i in 0..nu.len() {
        w.write_record([
            grid.z(i).to_string(),
            nu.nu1[i].to_string(),
            nu.nu2[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `state.csv`, `residuals.csv` and `nu.csv` into `dir`.
pub fn write_run<T: Real>(
    dir: &Path,
    grid: &ColumnGrid<T>,
    dt: T,
    run: &RunResult<T>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_state_csv(
        grid,
        &run.final_state,
        BufWriter::new(File::create(dir.join("state.csv"))?),
    )?;
    write_residuals_csv(
        dt,
        &run.residuals,
        BufWriter::new(File::create(dir.join("residuals.csv"))?),
    )?;
    write_nu_csv(
        grid,
        &run.nu_history_final,
        BufWriter::new(File::create(dir.join("nu.csv"))?),
    )?;
    Ok(())
}
