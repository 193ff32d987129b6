//! Vertical discretization and the discrete state carried on it.
//!
//! Arrays are stored bottom-first: index `0` is the Dirichlet level at
//! `z = -h` and index `n_levels - 1` is the surface `z = 0`.

use crate::error::{ColumnError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnGrid<T> {
    n_levels: usize,
    dz: T,
}

impl<T: Real> ColumnGrid<T> {
    /// Uniform grid spanning `depth` metres with spacing `dz`.
    ///
    /// `depth` must be an integer multiple of `dz` (to a relative 1e-9).
    pub fn new(depth: T, dz: T) -> Result<Self> {
        if !(dz > T::zero()) || !dz.is_finite() {
            return Err(ColumnError::InvalidParameter(format!(
                "dz must be positive, got {dz}"
            )));
        }
        if !(depth > T::zero()) || !depth.is_finite() {
            return Err(ColumnError::InvalidParameter(format!(
                "depth must be positive, got {depth}"
            )));
        }
        let cells = (depth / dz).round();
        if ((cells * dz - depth) / depth).abs() > T::lit(1e-9) || cells < T::one() {
            return Err(ColumnError::InvalidParameter(format!(
                "depth {depth} is not a multiple of dz {dz}"
            )));
        }
        let n_cells = cells.to_usize().expect("finite cell count");
        Self::from_levels(n_cells + 1, dz)
    }

    pub fn from_levels(n_levels: usize, dz: T) -> Result<Self> {
        if n_levels < 2 {
            return Err(ColumnError::InvalidParameter(format!(
                "a column needs at least 2 levels, got {n_levels}"
            )));
        }
        if !(dz > T::zero()) {
            return Err(ColumnError::InvalidParameter(format!(
                "dz must be positive, got {dz}"
            )));
        }
        Ok(Self { n_levels, dz })
    }

    #[inline]
    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    #[inline]
    pub fn dz(&self) -> T {
        self.dz
    }

    /// Total depth `h = (n_levels - 1) * dz`.
    #[inline]
    pub fn depth(&self) -> T {
        T::lit((self.n_levels - 1) as f64) * self.dz
    }

    /// Height of level `i` (0 = bottom), negative downward.
    #[inline]
    pub fn z(&self, i: usize) -> T {
        -T::lit((self.n_levels - 1 - i) as f64) * self.dz
    }

    pub fn z_levels(&self) -> Vec<T> {
        (0..self.n_levels).map(|i| self.z(i)).collect()
    }

    #[inline]
    pub fn surface(&self) -> usize {
        self.n_levels - 1
    }
}

/// Discrete `u`, `v`, `rho` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct StateProfiles<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub rho: Vec<T>,
}

impl<T: Real> StateProfiles<T> {
    pub fn new(u: Vec<T>, v: Vec<T>, rho: Vec<T>) -> Result<Self> {
        let state = Self { u, v, rho };
        state.check_finite()?;
        if state.v.len() != state.u.len() {
            return Err(ColumnError::Dimension {
                what: "v profile",
                expected: state.u.len(),
                found: state.v.len(),
            });
        }
        if state.rho.len() != state.u.len() {
            return Err(ColumnError::Dimension {
                what: "rho profile",
                expected: state.u.len(),
                found: state.rho.len(),
            });
        }
        Ok(state)
    }

    /// Uniform column.
    pub fn constant(n_levels: usize, u: T, v: T, rho: T) -> Self {
        Self {
            u: vec![u; n_levels],
            v: vec![v; n_levels],
            rho: vec![rho; n_levels],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Checks that every array matches the grid.
    pub fn check_grid(&self, grid: &ColumnGrid<T>) -> Result<()> {
        let n = grid.n_levels();
        for (what, len) in [
            ("u profile", self.u.len()),
            ("v profile", self.v.len()),
            ("rho profile", self.rho.len()),
        ] {
            if len != n {
                return Err(ColumnError::Dimension {
                    what,
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<()> {
        let bad = self
            .u
            .iter()
            .chain(&self.v)
            .chain(&self.rho)
            .any(|x| !x.is_finite());
        if bad {
            return Err(ColumnError::Validation(
                "state contains non-finite values".into(),
            ));
        }
        Ok(())
    }

    pub fn fields(&self) -> [&[T]; 3] {
        [&self.u, &self.v, &self.rho]
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> StateProfiles<U> {
        let conv = |xs: &[T]| xs.iter().map(|x| U::lit(x.as_f64())).collect();
        StateProfiles {
            u: conv(&self.u),
            v: conv(&self.v),
            rho: conv(&self.rho),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_and_heights() {
        let g = ColumnGrid::new(100.0, 5.0).unwrap();
        assert_eq!(g.n_levels(), 21);
        assert_eq!(g.z(0), -100.0);
        assert_eq!(g.z(20), 0.0);
        assert_eq!(g.z(13), -35.0);
        assert_eq!(g.depth(), 100.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(ColumnGrid::new(100.0, 0.0).is_err());
        assert!(ColumnGrid::new(100.0, 3.0).is_err());
        assert!(ColumnGrid::<f64>::from_levels(1, 1.0).is_err());
    }

    #[test]
    fn state_length_mismatch() {
        let err = StateProfiles::new(vec![0.0; 3], vec![0.0; 2], vec![0.0; 3]).unwrap_err();
        assert!(matches!(err, ColumnError::Dimension { .. }));
        let g = ColumnGrid::new(10.0, 5.0).unwrap();
        let s = StateProfiles::constant(4, 0.0, 0.0, 1025.0);
        assert!(s.check_grid(&g).is_err());
    }
}
