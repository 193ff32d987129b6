//! Surface forcing, bottom boundary values and physical constants.

use crate::error::{ColumnError, Result};
use crate::grid::StateProfiles;
use crate::scalar::Real;

pub const DEFAULT_G: f64 = 9.81;
pub const DEFAULT_RHO0: f64 = 1025.0;
pub const DEFAULT_RHO_AIR: f64 = 1.3;
pub const DEFAULT_DRAG: f64 = 1.2e-3;
/// Surface density flux used by every case, kg m^-2 s^-1 (negative is stabilizing).
pub const DEFAULT_Q_FLUX: f64 = -1.0e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingAndConstants<T> {
    /// Air velocity at the surface, m/s.
    pub wind_u_air: T,
    pub wind_v_air: T,
    /// Surface density flux, kg m^-2 s^-1.
    pub q_flux: T,
    pub g: T,
    pub rho0: T,
    pub rho_a: T,
    pub c_d: T,
    /// Dirichlet values at `z = -h`.
    pub u_b: T,
    pub v_b: T,
    pub rho_b: T,
}

impl<T: Real> Default for ForcingAndConstants<T> {
    fn default() -> Self {
        Self {
            wind_u_air: T::zero(),
            wind_v_air: T::zero(),
            q_flux: T::lit(DEFAULT_Q_FLUX),
            g: T::lit(DEFAULT_G),
            rho0: T::lit(DEFAULT_RHO0),
            rho_a: T::lit(DEFAULT_RHO_AIR),
            c_d: T::lit(DEFAULT_DRAG),
            u_b: T::zero(),
            v_b: T::zero(),
            rho_b: T::lit(DEFAULT_RHO0),
        }
    }
}

impl<T: Real> ForcingAndConstants<T> {
    pub fn with_winds(mut self, u_air: T, v_air: T) -> Self {
        self.wind_u_air = u_air;
        self.wind_v_air = v_air;
        self
    }

    /// Takes the bottom boundary values from the deepest level of `state`.
    pub fn with_bottom_from(mut self, state: &StateProfiles<T>) -> Self {
        if !state.is_empty() {
            self.u_b = state.u[0];
            self.v_b = state.v[0];
            self.rho_b = state.rho[0];
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g", self.g),
            ("rho0", self.rho0),
            ("rho_a", self.rho_a),
            ("c_d", self.c_d),
        ];
        for (name, value) in positive {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(ColumnError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let finite = [
            self.wind_u_air,
            self.wind_v_air,
            self.q_flux,
            self.u_b,
            self.v_b,
            self.rho_b,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(ColumnError::InvalidParameter(
                "forcing and boundary values must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Surface fluxes `(rho_a/rho0 Vx, rho_a/rho0 Vy, Q)` imposed on `nu * d/dz`.
    pub fn surface_fluxes(&self) -> [T; 3] {
        let (vx, vy) = wind_stress(self);
        let ratio = self.rho_a / self.rho0;
        [ratio * vx, ratio * vy, self.q_flux]
    }

    pub fn bottom_values(&self) -> [T; 3] {
        [self.u_b, self.v_b, self.rho_b]
    }
}

/// Quadratic drag law `V = c_d * u_air * |u_air|`, applied per component so the
/// stress keeps the direction of the wind.
pub fn wind_stress<T: Real>(forcing: &ForcingAndConstants<T>) -> (T, T) {
    let signed_square = |w: T| forcing.c_d * w * w.abs();
    (
        signed_square(forcing.wind_u_air),
        signed_square(forcing.wind_v_air),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn case_one_winds() {
        let f = ForcingAndConstants::<f64>::default().with_winds(8.1, 2.1);
        let (vx, vy) = wind_stress(&f);
        assert_relative_eq!(vx, 7.8732e-2, max_relative = 1e-12);
        assert_relative_eq!(vy, 5.292e-3, max_relative = 1e-12);
    }

    #[test]
    fn calm_and_westward() {
        let calm = ForcingAndConstants::<f64>::default();
        assert_eq!(wind_stress(&calm), (0.0, 0.0));
        let west = calm.with_winds(-8.1, 0.0);
        assert_relative_eq!(wind_stress(&west).0, -7.8732e-2, max_relative = 1e-12);
    }

    #[test]
    fn validate_rejects_nonpositive_constants() {
        let mut f = ForcingAndConstants::<f64>::default();
        assert!(f.validate().is_ok());
        f.rho_a = 0.0;
        assert!(f.validate().is_err());
    }
}
