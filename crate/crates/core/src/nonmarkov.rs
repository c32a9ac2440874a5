//! Non-Markovianity of the reduced qubit dynamics.
//!
//! A qubit conditioned on projectors |0⟩⟨0|, |1⟩⟨1| drives the environment
//! with U₀ or U₁; tracing the environment out leaves a dephasing channel
//! whose coherence factor is the echo amplitude, ρ₀₁(t) = f(t)·ρ₀₁(0).
//! Distinguishability of the optimal state pair ρ± = (I ± (aσx + bσy))/2
//! equals |f(t)|, so the measure reduces to (twice) the positive variation
//! of |⟨f(t)⟩| accumulated over time. This module carries both the fast
//! transcription from an [`EchoSeries`] and a full system⊗environment
//! dense oracle for small dimensions.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::echo::{afa_series, EchoSeries, SeriesMeta};
use crate::maps::MapPair;
use crate::torus::build_dense;
use crate::{C64, Error, Result};

/// Largest environment dimension for the 2N-dimensional dense oracles.
pub const ORACLE_DIM_LIMIT: usize = 64;

/// 2×2 density matrix with Bloch-vector accessors,
/// ρ = (I + xσx + yσy + zσz)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    m: [[C64; 2]; 2],
}

impl QubitState {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let trace = m[0][0] + m[1][1];
        if (trace - C64::ONE).norm() > 1e-12 {
            return Err(Error::invalid(format!("trace {} must be 1", trace)));
        }
        if (m[0][0].im).abs() > 1e-12
            || (m[1][1].im).abs() > 1e-12
            || (m[0][1] - m[1][0].conj()).norm() > 1e-12
        {
            return Err(Error::invalid("density matrix must be Hermitian"));
        }
        // Eigenvalues of a Hermitian 2×2 with unit trace.
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
        let disc = (0.25 - det).max(0.0).sqrt();
        if 0.5 - disc < -1e-10 {
            return Err(Error::invalid("density matrix must be positive"));
        }
        Ok(QubitState { m })
    }

    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 + 1e-10 {
            return Err(Error::invalid(format!(
                "Bloch vector of length {} lies outside the ball",
                r2.sqrt()
            )));
        }
        let h = |re: f64, im: f64| C64::new(re, im);
        Ok(QubitState {
            m: [
                [h(0.5 * (1.0 + z), 0.0), h(0.5 * x, -0.5 * y)],
                [h(0.5 * x, 0.5 * y), h(0.5 * (1.0 - z), 0.0)],
            ],
        })
    }

    /// The pair ρ± = (I ± (aσx + bσy))/2 maximizing the measure, with
    /// |a|² + |b|² = 1.
    pub fn equatorial_pair(a: f64, b: f64) -> Result<(Self, Self)> {
        if (a * a + b * b - 1.0).abs() > 1e-10 {
            return Err(Error::invalid("equatorial pair needs a² + b² = 1"));
        }
        Ok((
            QubitState::from_bloch(a, b, 0.0)?,
            QubitState::from_bloch(-a, -b, 0.0)?,
        ))
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.m
    }

    pub fn bloch(&self) -> (f64, f64, f64) {
        let x = (self.m[0][1] + self.m[1][0]).re;
        let y = (self.m[1][0] - self.m[0][1]).im;
        let z = (self.m[0][0] - self.m[1][1]).re;
        (x, y, z)
    }

    pub fn coherence(&self) -> C64 {
        self.m[0][1]
    }

    pub fn populations(&self) -> (f64, f64) {
        (self.m[0][0].re, self.m[1][1].re)
    }
}

/// 4×4 real transfer matrix in the basis (I, σx, σy, σz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTransferMatrix {
    m: [[f64; 4]; 4],
}

impl PauliTransferMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (j, row) in m.iter_mut().enumerate() {
            row[j] = 1.0;
        }
        PauliTransferMatrix { m }
    }

    pub fn from_elements(m: [[f64; 4]; 4]) -> Self {
        PauliTransferMatrix { m }
    }

    pub fn elements(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.m[j][k]
    }

    /// Acts on the extended Bloch vector (1, x, y, z).
    pub fn apply(&self, state: &QubitState) -> QubitState {
        let (x, y, z) = state.bloch();
        let v = [1.0, x, y, z];
        let mut out = [0.0; 4];
        for (j, row) in self.m.iter().enumerate() {
            out[j] = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        QubitState::from_bloch(out[1], out[2], out[3])
            .expect("transfer matrix produced an unphysical state")
    }

    /// Largest deviation from the dephasing form: unit Λ₀₀ and Λ₃₃, zero
    /// population/coherence coupling, and a scaled-rotation (x, y) block.
    pub fn dephasing_defect(&self) -> f64 {
        let m = &self.m;
        let mut d: f64 = (m[0][0] - 1.0).abs().max((m[3][3] - 1.0).abs());
        for j in 1..4 {
            d = d.max(m[0][j].abs()).max(m[j][0].abs());
        }
        d = d.max(m[1][3].abs()).max(m[2][3].abs());
        d = d.max(m[3][1].abs()).max(m[3][2].abs());
        d = d.max((m[1][1] - m[2][2]).abs());
        d = d.max((m[1][2] + m[2][1]).abs());
        d
    }
}

/// Cumulative non-Markovianity measure derived from an echo series.
#[derive(Debug, Clone)]
pub struct NmSeries {
    pub times: Vec<usize>,
    pub m_values: Vec<f64>,
    /// |f(t)| of the source series, kept for serialization.
    pub abs_f: Vec<f64>,
    pub meta: SeriesMeta,
}

impl NmSeries {
    pub fn final_value(&self) -> f64 {
        *self.m_values.last().unwrap_or(&0.0)
    }
}

/// Cumulative positive variation Σ max(0, Δ|f|) at each time step
/// (the un-doubled sum).
pub fn positive_variation(series: &EchoSeries) -> Vec<f64> {
    let abs = series.abs_values();
    let mut out = Vec::with_capacity(abs.len());
    let mut acc = 0.0;
    out.push(0.0);
    for pair in abs.windows(2) {
        acc += (pair[1] - pair[0]).max(0.0);
        out.push(acc);
    }
    out
}

/// The measure M(T) = 2·Σ_{t≤T} max(0, |f(t)| − |f(t−1)|): twice the
/// positive variation of the average fidelity amplitude, truncated at the
/// series horizon.
pub fn nm_series(series: &EchoSeries) -> NmSeries {
    let m_values = positive_variation(series)
        .into_iter()
        .map(|v| 2.0 * v)
        .collect();
    NmSeries {
        times: series.times.clone(),
        m_values,
        abs_f: series.abs_values(),
        meta: series.meta.clone(),
    }
}

/// Dephasing transfer matrix for a given echo amplitude: populations fixed,
/// coherence multiplied by f, i.e. Bloch (x, y) rotated by −arg f and
/// scaled by |f|.
pub fn channel_from_afa(f: C64) -> Result<PauliTransferMatrix> {
    if f.norm() > 1.0 + 1e-9 {
        return Err(Error::UnphysicalAmplitude(f.norm()));
    }
    let (re, im) = (f.re, f.im);
    Ok(PauliTransferMatrix::from_elements([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, re, im, 0.0],
        [0.0, -im, re, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]))
}

fn pauli(j: usize) -> [[C64; 2]; 2] {
    let o = C64::ONE;
    let i = C64::I;
    let z = C64::ZERO;
    match j {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        3 => [[o, z], [z, -o]],
        _ => unreachable!("Pauli index"),
    }
}

fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

fn matrix_power(m: &Array2<C64>, t: usize) -> Array2<C64> {
    let n = m.nrows();
    let mut out = Array2::eye(n);
    for _ in 0..t {
        out = m.dot(&out);
    }
    out
}

/// σ ⊗ I_N scaled, as a dense 2N×2N matrix.
fn kron_with_identity(sigma: &[[C64; 2]; 2], n: usize, scale: f64) -> Array2<C64> {
    let mut out = Array2::zeros((2 * n, 2 * n));
    for bi in 0..2 {
        for bj in 0..2 {
            let s = sigma[bi][bj] * scale;
            if s != C64::ZERO {
                for d in 0..n {
                    out[(bi * n + d, bj * n + d)] = s;
                }
            }
        }
    }
    out
}

fn trace_product(a: &Array2<C64>, b: &Array2<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = C64::ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// Conditioned evolution U(t) = |0⟩⟨0|⊗U₀ᵗ + |1⟩⟨1|⊗U₁ᵗ as a dense
/// 2N×2N matrix.
fn conditioned_unitary(pair: &MapPair, t: usize) -> Result<Array2<C64>> {
    let n = pair.dim();
    let u0 = matrix_power(&build_dense(&pair.u0)?, t);
    let u1 = matrix_power(&build_dense(&pair.u1)?, t);
    let mut u = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            u[(i, j)] = u0[(i, j)];
            u[(n + i, n + j)] = u1[(i, j)];
        }
    }
    Ok(u)
}

fn check_oracle_dim(pair: &MapPair) -> Result<()> {
    if pair.dim() > ORACLE_DIM_LIMIT {
        return Err(Error::DenseSizeExceeded {
            dim: pair.dim(),
            limit: ORACLE_DIM_LIMIT,
        });
    }
    Ok(())
}

/// Ground-truth channel at step t by direct trace over the environment:
/// Λ_{j,k} = ½ Tr[σ_j U(t) (σ_k ⊗ I/N) U(t)†], with the environment in the
/// maximally mixed state.
pub fn channel_oracle(pair: &MapPair, t: usize) -> Result<PauliTransferMatrix> {
    check_oracle_dim(pair)?;
    let n = pair.dim();
    let u = conditioned_unitary(pair, t)?;
    let u_dag = adjoint(&u);
    let mut m = [[0.0; 4]; 4];
    for k in 0..4 {
        let sk = kron_with_identity(&pauli(k), n, 1.0 / n as f64);
        let evolved = u.dot(&sk).dot(&u_dag);
        for (j, row) in m.iter_mut().enumerate() {
            let sj = kron_with_identity(&pauli(j), n, 1.0);
            row[k] = 0.5 * trace_product(&sj, &evolved).re;
        }
    }
    Ok(PauliTransferMatrix::from_elements(m))
}

/// Evolves ρ_sys ⊗ I/N through the full 2N-dimensional dynamics and traces
/// the environment back out; the dense counterpart of the dephasing form.
pub fn reduced_qubit_oracle(pair: &MapPair, rho: &QubitState, t: usize) -> Result<QubitState> {
    check_oracle_dim(pair)?;
    let n = pair.dim();
    let u = conditioned_unitary(pair, t)?;
    let u_dag = adjoint(&u);
    // ρ ⊗ I/N.
    let mut full = Array2::zeros((2 * n, 2 * n));
    for bi in 0..2 {
        for bj in 0..2 {
            let s = rho.matrix()[bi][bj] / n as f64;
            for d in 0..n {
                full[(bi * n + d, bj * n + d)] = s;
            }
        }
    }
    let evolved = u.dot(&full).dot(&u_dag);
    let mut reduced = [[C64::ZERO; 2]; 2];
    for (bi, row) in reduced.iter_mut().enumerate() {
        for (bj, entry) in row.iter_mut().enumerate() {
            let mut acc = C64::ZERO;
            for d in 0..n {
                acc += evolved[(bi * n + d, bj * n + d)];
            }
            *entry = acc;
        }
    }
    QubitState::new(reduced)
}

/// Trace distance D(ρ₁, ρ₂) = ½ tr|ρ₁ − ρ₂| via the closed-form 2×2
/// eigenvalues.
pub fn trace_distance(r1: &QubitState, r2: &QubitState) -> f64 {
    let a = r1.matrix();
    let b = r2.matrix();
    let d00 = a[0][0] - b[0][0];
    let d01 = a[0][1] - b[0][1];
    let d10 = a[1][0] - b[1][0];
    let d11 = a[1][1] - b[1][1];
    let trace = (d00 + d11).re;
    let det = (d00 * d11 - d01 * d10).re;
    let disc = (trace * trace / 4.0 - det).max(0.0).sqrt();
    let l1 = trace / 2.0 + disc;
    let l2 = trace / 2.0 - disc;
    0.5 * (l1.abs() + l2.abs())
}

/// Outcome of the optimal-pair sampling check.
#[derive(Debug, Clone)]
pub struct OptimalPairReport {
    pub samples: usize,
    pub horizon: usize,
    /// Positive variation of |f| over the horizon — the claimed maximum.
    pub variation_bound: f64,
    /// Largest positive variation of D(t) over all sampled pairs.
    pub max_sampled_variation: f64,
    /// Number of sampled pairs exceeding the bound beyond 1e-8.
    pub exceed_count: usize,
    /// max_t |D(ρ₊(t), ρ₋(t)) − |f(t)|| for the equatorial pair.
    pub optimal_max_deviation: f64,
}

impl OptimalPairReport {
    pub fn passed(&self) -> bool {
        self.exceed_count == 0 && self.optimal_max_deviation <= 1e-9
    }
}

fn sample_bloch_ball(rng: &mut impl Rng) -> (f64, f64, f64) {
    loop {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        let z = rng.random_range(-1.0..1.0);
        if x * x + y * y + z * z <= 1.0 {
            return (x, y, z);
        }
    }
}

/// Samples random qubit state pairs, evolves them through the oracle
/// channel sequence, and checks that no pair accumulates more positive
/// variation of the trace distance than the equatorial pair ρ±, whose
/// distance must track |f(t)| exactly.
pub fn verify_optimal_pair(
    pair: &MapPair,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<OptimalPairReport> {
    check_oracle_dim(pair)?;
    if samples < 1 {
        return Err(Error::invalid("need at least one sampled pair"));
    }
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let channels: Vec<PauliTransferMatrix> = (0..=horizon)
        .map(|t| channel_oracle(pair, t))
        .collect::<Result<_>>()?;
    let series = afa_series(pair, horizon)?;
    let abs_f = series.abs_values();
    let bound = *positive_variation(&series).last().unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_sampled: f64 = 0.0;
    let mut exceed_count = 0;
    for _ in 0..samples {
        let (x1, y1, z1) = sample_bloch_ball(&mut rng);
        let (x2, y2, z2) = sample_bloch_ball(&mut rng);
        let r1 = QubitState::from_bloch(x1, y1, z1)?;
        let r2 = QubitState::from_bloch(x2, y2, z2)?;
        let mut prev = trace_distance(&r1, &r2);
        let mut variation = 0.0;
        for lambda in channels.iter().skip(1) {
            let d = trace_distance(&lambda.apply(&r1), &lambda.apply(&r2));
            variation += (d - prev).max(0.0);
            prev = d;
        }
        if variation > bound + 1e-8 {
            exceed_count += 1;
        }
        max_sampled = max_sampled.max(variation);
    }

    let (plus, minus) = QubitState::equatorial_pair(1.0, 0.0)?;
    let mut optimal_dev: f64 = 0.0;
    for (lambda, expected) in channels.iter().zip(&abs_f) {
        let d = trace_distance(&lambda.apply(&plus), &lambda.apply(&minus));
        optimal_dev = optimal_dev.max((d - expected).abs());
    }

    Ok(OptimalPairReport {
        samples,
        horizon,
        variation_bound: bound,
        max_sampled_variation: max_sampled,
        exceed_count,
        optimal_max_deviation: optimal_dev,
    })
}
