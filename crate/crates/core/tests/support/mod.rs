//! Test oracles shared by the integration tests.
#![allow(dead_code)]

use mixedcol::{Forcing, Grid, State};

/// Gaussian elimination with partial pivoting on a dense copy of the system.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Left-hand side of one row of the implicit scheme applied to `x`, written
/// term by term as in the discretized equation: time derivative, minus the
/// nu-gradient times the backward first difference, minus nu times the
/// centred second difference. Bottom row is Dirichlet, surface row is the
/// Neumann flux condition.
fn row_lhs(i: usize, x: &[f64], nu: &[f64], dz: f64, dt: f64) -> f64 {
    let n = x.len();
    if i == 0 {
        return x[0];
    }
    if i == n - 1 {
        return nu[i] * (x[i] - x[i - 1]) / dz;
    }
    let grad_nu = (nu[i] - nu[i - 1]) / dz;
    let dx = (x[i] - x[i - 1]) / dz;
    let d2x = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dz * dz);
    x[i] / dt - grad_nu * dx - nu[i] * d2x
}

/// Builds the dense matrix by probing the row functional with unit vectors.
pub fn scheme_matrix(nu: &[f64], dz: f64, dt: f64) -> Vec<Vec<f64>> {
    let n = nu.len();
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        for (i, row) in a.iter_mut().enumerate() {
            row[j] = row_lhs(i, &e, nu, dz, dt);
        }
    }
    a
}

pub fn oracle_field(
    x_old: &[f64],
    nu: &[f64],
    dz: f64,
    dt: f64,
    bottom: f64,
    flux: f64,
) -> Vec<f64> {
    let n = x_old.len();
    let mut rhs: Vec<f64> = x_old.iter().map(|x| x / dt).collect();
    rhs[0] = bottom;
    rhs[n - 1] = flux;
    dense_solve(scheme_matrix(nu, dz, dt), rhs)
}

/// One step of all three fields through the dense oracle.
pub fn oracle_step(
    state: &State,
    nu1: &[f64],
    nu2: &[f64],
    dz: f64,
    dt: f64,
    forcing: &Forcing,
) -> State {
    let vx = forcing.c_d * forcing.wind_u_air * forcing.wind_u_air.abs();
    let vy = forcing.c_d * forcing.wind_v_air * forcing.wind_v_air.abs();
    let ratio = forcing.rho_a / forcing.rho0;
    State {
        u: oracle_field(&state.u, nu1, dz, dt, forcing.u_b, ratio * vx),
        v: oracle_field(&state.v, nu1, dz, dt, forcing.v_b, ratio * vy),
        rho: oracle_field(&state.rho, nu2, dz, dt, forcing.rho_b, forcing.q_flux),
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn range(a: &[f64]) -> f64 {
    let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// `max |a - b|` normalized by the range of the reference `b`.
pub fn rel_linf(a: &[f64], b: &[f64]) -> f64 {
    max_abs_diff(a, b) / range(b)
}

pub fn state_from_fn(grid: &Grid, f: impl Fn(f64) -> [f64; 3]) -> State {
    let n = grid.n_levels();
    let mut s = State::constant(n, 0.0, 0.0, 0.0);
    for i in 0..n {
        let [u, v, rho] = f(grid.z(i));
        s.u[i] = u;
        s.v[i] = v;
        s.rho[i] = rho;
    }
    s
}

pub fn std_dev(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}
