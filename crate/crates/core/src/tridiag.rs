//! Thomas elimination for tridiagonal systems.

use crate::error::{ColumnError, Result};
use crate::scalar::Real;

/// Rows of a tridiagonal system `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            diag: vec![T::zero(); n],
            upper: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Rows where `|diag| < |lower| + |upper|`.
    pub fn dominance_violations(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&i| {
                let lo = if i > 0 {
                    self.lower[i].abs()
                } else {
                    T::zero()
                };
                let up = if i + 1 < n {
                    self.upper[i].abs()
                } else {
                    T::zero()
                };
                self.diag[i].abs() < lo + up
            })
            .collect()
    }

    /// Solves without pivoting. A zero or non-finite pivot is reported as singular.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        if rhs.len() != n || self.lower.len() != n || self.upper.len() != n {
            return Err(ColumnError::Dimension {
                what: "tridiagonal system",
                expected: n,
                found: rhs.len(),
            });
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let mut pivot = self.diag[0];
        if pivot == T::zero() || !pivot.is_finite() {
            return Err(ColumnError::SingularMatrix { row: 0 });
        }
        c[0] = self.upper[0] / pivot;
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            if pivot == T::zero() || !pivot.is_finite() {
                return Err(ColumnError::SingularMatrix { row: i });
            }
            if i + 1 < n {
                c[i] = self.upper[i] / pivot;
            }
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / pivot;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] = x[i] - c[i] * next;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_system() {
        let m = Tridiagonal {
            lower: vec![0.0f64, -1.0, -1.0, -1.0],
            diag: vec![2.0; 4],
            upper: vec![-1.0, -1.0, -1.0, 0.0],
        };
        let x = m.solve(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-14);
        }
        assert!(m.dominance_violations().is_empty());
    }

    #[test]
    fn zero_pivot_is_singular() {
        let m = Tridiagonal {
            lower: vec![0.0, 1.0],
            diag: vec![1.0, 1.0],
            upper: vec![1.0, 0.0],
        };
        assert!(matches!(
            m.solve(&[1.0, 1.0]),
            Err(ColumnError::SingularMatrix { row: 1 })
        ));
    }

    #[test]
    fn flags_non_dominant_rows() {
        let m = Tridiagonal {
            lower: vec![0.0, 3.0, 0.0],
            diag: vec![1.0, 1.0, 1.0],
            upper: vec![0.0, 0.0, 0.0],
        };
        assert_eq!(m.dominance_violations(), vec![1]);
    }
}
