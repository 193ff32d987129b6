use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;
use mixedcol::config::parse_key_values;
use mixedcol::equilibrium::{kh_curves, write_kh_csv};
use mixedcol::output::{write_run, write_state_csv};
use mixedcol::{
    coefficient_table, interpolate_to_grid, read_profile_file, solve_equilibrium, CaseConfig,
    CaseId, CaseSetup, Closure, ClosureFamily, ColumnError, Diagnostics, Grid, Run,
};

use crate::args::CaseArgs;

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

impl CaseArgs {
    pub fn config(&self, model: ClosureFamily) -> Result<CaseConfig> {
        let file_pairs = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                parse_key_values(&text)?
            }
            None => Vec::new(),
        };
        let is_case_key = |k: &str| matches!(k, "case" | "case_id");
        let case = match self.case {
            Some(id) => CaseId::try_from(id)?,
            None => match file_pairs.iter().find(|(k, _)| is_case_key(k)) {
                Some((_, v)) => {
                    let mut probe = CaseConfig::for_case(CaseId::WindMixing);
                    probe.set("case", v)?;
                    probe.case_id
                }
                None => CaseId::WindMixing,
            },
        };
        let mut cfg = CaseConfig::for_case(case).with_model(model);
        for (k, v) in file_pairs.iter().filter(|(k, _)| !is_case_key(k)) {
            cfg.set(k, v)?;
        }
        let overrides = [
            ("dz", self.dz),
            ("dt", self.dt),
            ("hours", self.hours),
            ("wind_u", self.wind_u),
            ("wind_v", self.wind_v),
            ("q_flux", self.q_flux),
            ("rho_a", self.rho_a),
            ("g", self.g),
            ("cd", self.cd),
            ("tol", self.tol),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v.to_string())?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn setup(&self, cfg: &CaseConfig) -> Result<CaseSetup<f64>> {
        match &self.init {
            Some(path) => {
                let samples = read_profile_file::<f64>(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let grid: Grid = cfg.grid()?;
                let init = interpolate_to_grid(&samples, &grid)?;
                Ok(cfg.setup_with_init(grid, init))
            }
            None => Ok(cfg.setup()?),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn write_diagnostics(dir: &Path, report: &Diagnostics) -> Result<()> {
    report.write_csv(create(&dir.join("diagnostics.csv"))?)?;
    Ok(())
}

fn save_run(dir: &Path, setup: &CaseSetup<f64>, run: &Run) -> Result<Diagnostics> {
    write_run(dir, &setup.grid, setup.control.dt, run)?;
    let report = Diagnostics::compute(&run.final_state, &setup.grid)?;
    write_diagnostics(dir, &report)?;
    Ok(report)
}

pub fn run(case: &CaseArgs, model: ClosureFamily) -> Result<()> {
    let cfg = case.config(model)?;
    let setup = case.setup(&cfg)?;
    info!(
        "case {} with {model}: {} levels",
        cfg.case_id.number(),
        setup.grid.n_levels()
    );
    let run = setup.run()?;
    let report = save_run(&case.out.out, &setup, &run)?;
    say!(
        "{model}: {} steps, final residual {:.3e}{}",
        run.steps_taken,
        run.residuals.last().copied().unwrap_or(0.0),
        if run.converged { " (converged)" } else { "" }
    );
    say!("{report}");
    say!("wrote {}", case.out.out.display());
    Ok(())
}

pub fn coeffs(r_min: f64, r_max: f64, samples: usize, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    for family in ClosureFamily::ALL {
        let table = coefficient_table(&Closure::standard(family), r_min, r_max, samples)?;
        if !table.skipped.is_empty() {
            info!("{family}: skipped singular samples {:?}", table.skipped);
        }
        let path = out.join(format!("coeffs_{}.csv", family.key()));
        table.write_csv(create(&path)?)?;
        say!("{family}: {} rows -> {}", table.rows.len(), path.display());
    }
    Ok(())
}

pub fn equilibrium(
    case: &CaseArgs,
    model: ClosureFamily,
    kh_r_max: f64,
    samples: usize,
) -> Result<()> {
    let cfg = case.config(model)?;
    let setup = case.setup(&cfg)?;
    let eq = solve_equilibrium(&setup.spec, &setup.forcing, &setup.grid)?;
    let out = &case.out.out;
    std::fs::create_dir_all(out)?;
    write_kh_csv(
        &kh_curves(&setup.spec, eq.c, kh_r_max, samples)?,
        create(&out.join("kh_curves.csv"))?,
    )?;
    write_state_csv(
        &setup.grid,
        &eq.profiles,
        create(&out.join("equilibrium_profiles.csv"))?,
    )?;
    say!(
        "{model}: C = {:.6e}, R_e = {:.6} ({} crossing(s))",
        eq.c,
        eq.r_e,
        eq.crossings
    );
    say!(
        "slopes: u_z = {:.6e} s^-1, v_z = {:.6e} s^-1, rho_z = {:.6e} kg m^-4",
        eq.u_slope,
        eq.v_slope,
        eq.rho_slope
    );
    say!("wrote {}", out.display());
    Ok(())
}

pub fn diagnose(case: &CaseArgs) -> Result<()> {
    let cfg = case.config(ClosureFamily::R224)?;
    let setup = case.setup(&cfg)?;
    let report = Diagnostics::compute(&setup.init, &setup.grid)?;
    std::fs::create_dir_all(&case.out.out)?;
    write_diagnostics(&case.out.out, &report)?;
    say!("{report}");
    Ok(())
}

enum Outcome {
    Completed(Box<(Run, Diagnostics)>),
    Rejected(String),
}

pub fn compare(case: &CaseArgs, models: &[ClosureFamily]) -> Result<()> {
    let mut unique: Vec<ClosureFamily> = Vec::new();
    for m in models {
        if !unique.contains(m) {
            unique.push(*m);
        }
    }
    if unique.len() < 2 {
        bail!(
            "compare needs at least two distinct models, got {}",
            unique.len()
        );
    }
    let jobs: Vec<(ClosureFamily, CaseSetup<f64>)> = unique
        .iter()
        .map(|&m| Ok((m, case.setup(&case.config(m)?)?)))
        .collect::<Result<_>>()?;
    let out = &case.out.out;
    let results: Vec<Result<Outcome>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(model, setup)| {
                s.spawn(move || match setup.run() {
                    Ok(run) => {
                        let report = save_run(&out.join(model.key()), setup, &run)?;
                        Ok(Outcome::Completed(Box::new((run, report))))
                    }
                    Err(e @ ColumnError::NegativeDiffusivity { .. }) => {
                        Ok(Outcome::Rejected(e.to_string()))
                    }
                    Err(e) => Err(anyhow::Error::new(e).context(format!("{model}"))),
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("model thread panicked"))
            .collect()
    });

    std::fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_writer(create(&out.join("compare.csv"))?);
    w.write_record([
        "model",
        "status",
        "mld_m",
        "surface_speed",
        "pycnocline_max_gradient",
        "converged",
        "steps",
        "reason",
    ])?;
    say!(
        "{:<6} {:>9} {:>14} {:>16} {:>9} {:>8}",
        "model",
        "mld_m",
        "surface_speed",
        "max_drho_dz",
        "converged",
        "steps"
    );
    for ((model, _), result) in jobs.iter().zip(results) {
        match result? {
            Outcome::Completed(done) => {
                let (run, d) = *done;
                w.write_record([
                    model.key().to_string(),
                    "ok".into(),
                    d.mld_m.to_string(),
                    d.surface_speed.to_string(),
                    d.pycnocline.max_gradient.to_string(),
                    run.converged.to_string(),
                    run.steps_taken.to_string(),
                    String::new(),
                ])?;
                say!(
                    "{:<6} {:>9.3} {:>14.5} {:>16.6e} {:>9} {:>8}",
                    model.to_string(),
                    d.mld_m,
                    d.surface_speed,
                    d.pycnocline.max_gradient,
                    run.converged,
                    run.steps_taken
                );
            }
            Outcome::Rejected(reason) => {
                w.write_record([
                    model.key().to_string(),
                    "rejected".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    reason.clone(),
                ])?;
                say!("{:<6} rejected: {reason}", model.to_string());
            }
        }
    }
    w.flush()?;
    say!("wrote {}", out.display());
    Ok(())
}
