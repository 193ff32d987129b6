//! Case parameters and the flat `key = value` configuration format.

use std::path::Path;

use crate::closures::{ClosureFamily, ClosureSpec};
use crate::error::{ColumnError, Result};
use crate::forcing::{
    ForcingAndConstants, DEFAULT_DRAG, DEFAULT_G, DEFAULT_Q_FLUX, DEFAULT_RHO0, DEFAULT_RHO_AIR,
};
use crate::grid::{ColumnGrid, StateProfiles};
use crate::ingest::{gen_case_init, CaseId};
use crate::scalar::Real;
use crate::solver::{integrate, RunControl, RunResult, DEFAULT_DT, DEFAULT_STOP_TOLERANCE};

/// Column depth used by every case, m.
pub const DEFAULT_DEPTH: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub case_id: CaseId,
    pub model: ClosureFamily,
    /// m
    pub dz: f64,
    /// s
    pub dt: f64,
    pub duration_hours: f64,
    pub depth: f64,
    pub wind_u: f64,
    pub wind_v: f64,
    pub q_flux: f64,
    pub rho_a: f64,
    pub g: f64,
    pub c_d: f64,
    pub rho0: f64,
    pub stop_tolerance: f64,
}

impl CaseConfig {
    pub fn for_case(case_id: CaseId) -> Self {
        let (dz, hours, wind_u, wind_v) = match case_id {
            CaseId::WindMixing => (1.0, 48.0, 8.1, 2.1),
            CaseId::StaticInstability => (5.0, 48.0, 11.7, 0.4),
            CaseId::LongTime => (5.0, 10_000.0, 5.4, 0.9),
        };
        Self {
            case_id,
            model: ClosureFamily::R224,
            dz,
            dt: DEFAULT_DT,
            duration_hours: hours,
            depth: DEFAULT_DEPTH,
            wind_u,
            wind_v,
            q_flux: DEFAULT_Q_FLUX,
            rho_a: DEFAULT_RHO_AIR,
            g: DEFAULT_G,
            c_d: DEFAULT_DRAG,
            rho0: DEFAULT_RHO0,
            stop_tolerance: DEFAULT_STOP_TOLERANCE,
        }
    }

    pub fn with_model(mut self, model: ClosureFamily) -> Self {
        self.model = model;
        self
    }

    /// Sets one parameter by name. Hyphens and underscores are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        let number = || -> Result<f64> {
            value.parse::<f64>().map_err(|_| {
                ColumnError::InvalidParameter(format!("{key}: '{value}' is not a number"))
            })
        };
        match key.as_str() {
            "case" | "case_id" => {
                let id: u8 = value.parse().map_err(|_| {
                    ColumnError::InvalidParameter(format!("case: '{value}' is not 1, 2 or 3"))
                })?;
                self.case_id = CaseId::try_from(id)?;
            }
            "model" => self.model = value.parse()?,
            "dz" => self.dz = number()?,
            "dt" => self.dt = number()?,
            "hours" | "duration" | "duration_hours" => self.duration_hours = number()?,
            "depth" | "h" => self.depth = number()?,
            "wind_u" => self.wind_u = number()?,
            "wind_v" => self.wind_v = number()?,
            "q" | "q_flux" => self.q_flux = number()?,
            "rho_a" => self.rho_a = number()?,
            "g" => self.g = number()?,
            "cd" | "c_d" => self.c_d = number()?,
            "rho0" => self.rho0 = number()?,
            "tol" | "stop_tolerance" => self.stop_tolerance = number()?,
            _ => {
                return Err(ColumnError::InvalidParameter(format!(
                    "unknown configuration key '{key}'"
                )))
            }
        }
        Ok(())
    }

    /// Applies a configuration file on top of `self`.
    ///
    /// A `case` key anywhere in the file selects that case's defaults first;
    /// the remaining keys then override them.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let pairs = parse_key_values(text)?;
        if let Some((_, v)) = pairs
            .iter()
            .find(|(k, _)| matches!(k.as_str(), "case" | "case_id"))
        {
            let mut probe = self.clone();
            probe.set("case", v)?;
            if probe.case_id != self.case_id {
                *self = CaseConfig::for_case(probe.case_id).with_model(self.model);
            }
        }
        for (key, value) in &pairs {
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("dz", self.dz),
            ("dt", self.dt),
            ("hours", self.duration_hours),
            ("depth", self.depth),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ColumnError::InvalidParameter(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(self.stop_tolerance >= 0.0) {
            return Err(ColumnError::InvalidParameter(
                "tol must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn grid<T: Real>(&self) -> Result<ColumnGrid<T>> {
        ColumnGrid::new(T::lit(self.depth), T::lit(self.dz))
    }

    pub fn spec<T: Real>(&self) -> ClosureSpec<T> {
        ClosureSpec::standard(self.model)
    }

    /// Forcing with bottom Dirichlet values taken from `init`.
    pub fn forcing<T: Real>(&self, init: &StateProfiles<T>) -> ForcingAndConstants<T> {
        ForcingAndConstants {
            wind_u_air: T::lit(self.wind_u),
            wind_v_air: T::lit(self.wind_v),
            q_flux: T::lit(self.q_flux),
            g: T::lit(self.g),
            rho0: T::lit(self.rho0),
            rho_a: T::lit(self.rho_a),
            c_d: T::lit(self.c_d),
            ..ForcingAndConstants::default()
        }
        .with_bottom_from(init)
    }

    pub fn control<T: Real>(&self) -> RunControl<T> {
        RunControl::for_hours(T::lit(self.dt), T::lit(self.duration_hours))
            .with_stop_tolerance(T::lit(self.stop_tolerance))
    }

    /// Everything needed to integrate this case from its synthetic initial state.
    pub fn setup<T: Real>(&self) -> Result<CaseSetup<T>> {
        self.validate()?;
        let grid = self.grid()?;
        let init = gen_case_init(self.case_id, &grid);
        Ok(self.setup_with_init(grid, init))
    }

    pub fn setup_with_init<T: Real>(
        &self,
        grid: ColumnGrid<T>,
        init: StateProfiles<T>,
    ) -> CaseSetup<T> {
        CaseSetup {
            forcing: self.forcing(&init),
            spec: self.spec(),
            control: self.control(),
            grid,
            init,
        }
    }
}

/// A fully specified integration.
#[derive(Debug, Clone)]
pub struct CaseSetup<T> {
    pub grid: ColumnGrid<T>,
    pub init: StateProfiles<T>,
    pub forcing: ForcingAndConstants<T>,
    pub spec: ClosureSpec<T>,
    pub control: RunControl<T>,
}

impl<T: Real> CaseSetup<T> {
    pub fn run(&self) -> Result<RunResult<T>> {
        integrate(
            &self.init,
            &self.spec,
            &self.grid,
            &self.forcing,
            &self.control,
        )
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ColumnError::Parse {
            line: n as u64 + 1,
            message: format!("expected 'key = value', found '{line}'"),
        })?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(ColumnError::Parse {
                line: n as u64 + 1,
                message: "empty key".into(),
            });
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_defaults() {
        let c1 = CaseConfig::for_case(CaseId::WindMixing);
        assert_eq!(
            (c1.dz, c1.duration_hours, c1.wind_u, c1.wind_v),
            (1.0, 48.0, 8.1, 2.1)
        );
        let c2 = CaseConfig::for_case(CaseId::StaticInstability);
        assert_eq!((c2.dz, c2.wind_u, c2.wind_v), (5.0, 11.7, 0.4));
        let c3 = CaseConfig::for_case(CaseId::LongTime);
        assert_eq!(c3.duration_hours, 10_000.0);
        assert_eq!(c3.control::<f64>().max_steps, 600_000);
        assert_eq!(c2.control::<f64>().max_steps, 2880);
        assert_eq!(c1.q_flux, -1e-6);
        assert_eq!(c1.dt, 60.0);
    }

    #[test]
    fn config_text_overrides() {
        let mut c = CaseConfig::for_case(CaseId::WindMixing);
        c.apply_text("# test\ncase = 3\nmodel = r23\nwind-u = 4.0  # east\n\nrho_a=1.2\n")
            .unwrap();
        assert_eq!(c.case_id, CaseId::LongTime);
        assert_eq!(c.model, ClosureFamily::R23);
        assert_eq!(c.wind_u, 4.0);
        assert_eq!(c.wind_v, 0.9);
        assert_eq!(c.dz, 5.0);
        assert_eq!(c.rho_a, 1.2);
    }

    #[test]
    fn config_errors() {
        let mut c = CaseConfig::for_case(CaseId::WindMixing);
        assert!(c.apply_text("dz 5").is_err());
        assert!(c.apply_text("bogus = 1").is_err());
        assert!(c.apply_text("dz = five").is_err());
        assert!(c.apply_text("model = r99").is_err());
        c.dz = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn forcing_takes_bottom_from_init() {
        let c = CaseConfig::for_case(CaseId::LongTime);
        let setup = c.setup::<f64>().unwrap();
        assert_eq!(setup.forcing.u_b, setup.init.u[0]);
        assert_eq!(setup.forcing.rho_b, setup.init.rho[0]);
        assert_eq!(setup.grid.n_levels(), 21);
    }
}
