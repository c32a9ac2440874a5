//! Independent dense oracle used by the integration tests.
//!
//! Everything here is built from explicit matrices: the change of basis is
//! the literal DFT matrix W with W[m][n] = e^{−2πi·mn/N}/√N, kicks are
//! literal diagonal matrices evaluated from the map formulas, and maps are
//! matrix products of those factors. None of it shares code with the FFT
//! split-operator path it is used to check.

use mapecho_core::C64;
use ndarray::Array2;
use std::f64::consts::PI;

pub fn dft_matrix(n: usize) -> Array2<C64> {
    let scale = 1.0 / (n as f64).sqrt();
    Array2::from_shape_fn((n, n), |(m, j)| {
        C64::from_polar(scale, -2.0 * PI * (m * j) as f64 / n as f64)
    })
}

pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn diagonal_phases(n: usize, theta: impl Fn(f64) -> f64) -> Array2<C64> {
    let mut out = Array2::zeros((n, n));
    for j in 0..n {
        out[(j, j)] = C64::from_polar(1.0, theta(j as f64 / n as f64));
    }
    out
}

/// Position kick as a dense matrix: diagonal in the computational basis.
pub fn position_kick_matrix(n: usize, theta: impl Fn(f64) -> f64) -> Array2<C64> {
    diagonal_phases(n, theta)
}

/// Momentum kick as a dense matrix: W† D W.
pub fn momentum_kick_matrix(n: usize, theta: impl Fn(f64) -> f64) -> Array2<C64> {
    let w = dft_matrix(n);
    adjoint(&w).dot(&diagonal_phases(n, theta)).dot(&w)
}

/// Dense perturbed cat map from its three printed factors.
pub fn pcm_dense(a: f64, kick: f64, n: usize) -> Array2<C64> {
    let nf = n as f64;
    let quad_p = momentum_kick_matrix(n, |p| -PI * nf * a * p * p);
    let quad_q = position_kick_matrix(n, |q| PI * nf * a * q * q);
    let potential = position_kick_matrix(n, |q| {
        PI * nf * kick * (2.0 * (2.0 * PI * q).sin() - (4.0 * PI * q).sin())
    });
    quad_p.dot(&quad_q).dot(&potential)
}

/// Dense kicked Harper map from its two printed factors.
pub fn harper_dense(k: f64, k_prime: f64, n: usize) -> Array2<C64> {
    let nf = n as f64;
    let pos = position_kick_matrix(n, |q| nf * k * (2.0 * PI * q).cos());
    let mom = momentum_kick_matrix(n, |p| nf * k_prime * (2.0 * PI * p).cos());
    pos.dot(&mom)
}

pub fn matrix_power(m: &Array2<C64>, t: usize) -> Array2<C64> {
    let mut out = Array2::eye(m.nrows());
    for _ in 0..t {
        out = m.dot(&out);
    }
    out
}

pub fn matvec(m: &Array2<C64>, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// (1/N)·Tr[B†A].
pub fn normalized_echo_trace(a: &Array2<C64>, b: &Array2<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = C64::ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += b[(j, i)].conj() * a[(j, i)];
        }
    }
    acc / n as f64
}

pub fn max_entry_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
