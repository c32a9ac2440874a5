//! Hilbert-space machinery of the quantized torus.
//!
//! Position and momentum are both discretized on the lattice
//! `0, 1/N, …, (N−1)/N`, and the effective Planck constant scales as the
//! inverse dimension. The change of basis is the unitary discrete Fourier
//! transform with kernel ⟨p_m|q_n⟩ = e^{−2πi·mn/N}/√N (periodic boundary
//! conditions, zero Bloch phases). A quantum map is an ordered product of
//! kicks, each diagonal in position or momentum, applied via FFT.

use std::sync::{Arc, Mutex, OnceLock};

use ndarray::Array2;
use rustfft::{Fft, FftPlanner};

use crate::{C64, Error, Result};

/// Largest dimension for which dense matrices may be built.
pub const DENSE_DIM_LIMIT: usize = 4096;

static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan_pair(dim: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .expect("FFT planner lock poisoned");
    (planner.plan_fft_forward(dim), planner.plan_fft_inverse(dim))
}

/// Complex amplitude vector on the position lattice of the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusState {
    amps: Vec<C64>,
}

impl TorusState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("state must have at least one amplitude"));
        }
        let state = TorusState { amps };
        if !state.norm().is_finite() {
            return Err(Error::invalid("state norm is not finite"));
        }
        Ok(state)
    }

    /// Position basis state |n⟩ (amplitude 1 at `site`).
    pub fn basis_state(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::invalid(format!(
                "basis site {site} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::ZERO; dim];
        amps[site] = C64::ONE;
        Ok(TorusState { amps })
    }

    /// Normalized uniform superposition of all position states.
    pub fn uniform(dim: usize) -> Self {
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        TorusState { amps: vec![a; dim] }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ with the left argument conjugated.
    pub fn inner(&self, other: &TorusState) -> C64 {
        inner_product(&self.amps, &other.amps)
    }

    /// Rescaled copy with unit norm.
    pub fn normalized(&self) -> TorusState {
        let n = self.norm();
        TorusState {
            amps: self.amps.iter().map(|a| a / n).collect(),
        }
    }

    pub(crate) fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }
}

/// Fixed-order inner product ⟨bra|ket⟩ over raw amplitude slices.
pub(crate) fn inner_product(bra: &[C64], ket: &[C64]) -> C64 {
    bra.iter()
        .zip(ket)
        .fold(C64::ZERO, |acc, (b, k)| acc + b.conj() * k)
}

/// Which lattice a kick is diagonal in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KickBasis {
    Position,
    Momentum,
}

/// One diagonal unitary factor e^{iθ(x)} of a kicked map.
///
/// The phase function is evaluated once at the lattice points x = j/N and
/// cached as unit-modulus multipliers; maps are reapplied thousands of times
/// per run.
#[derive(Debug, Clone)]
pub struct KickPhase {
    basis: KickBasis,
    multipliers: Vec<C64>,
}

impl KickPhase {
    pub fn new(dim: usize, basis: KickBasis, phase_fn: impl Fn(f64) -> f64) -> Self {
        let multipliers = (0..dim)
            .map(|j| C64::from_polar(1.0, phase_fn(j as f64 / dim as f64)))
            .collect();
        KickPhase { basis, multipliers }
    }

    pub fn position(dim: usize, phase_fn: impl Fn(f64) -> f64) -> Self {
        KickPhase::new(dim, KickBasis::Position, phase_fn)
    }

    pub fn momentum(dim: usize, phase_fn: impl Fn(f64) -> f64) -> Self {
        KickPhase::new(dim, KickBasis::Momentum, phase_fn)
    }

    pub fn basis(&self) -> KickBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.multipliers.len()
    }

    /// Cached unit-modulus multipliers e^{iθ(j/N)}.
    pub fn multipliers(&self) -> &[C64] {
        &self.multipliers
    }
}

/// Unitary position↔momentum change of basis for one dimension.
#[derive(Clone)]
pub(crate) struct Transform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    dim: usize,
}

impl Transform {
    pub(crate) fn new(dim: usize) -> Self {
        let (forward, inverse) = plan_pair(dim);
        Transform { forward, inverse, dim }
    }

    fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    /// Position → momentum: ψ̃_m = Σ_n e^{−2πi·mn/N} ψ_n / √N.
    pub(crate) fn to_momentum_in_place(&self, data: &mut [C64], scratch: &mut Scratch) {
        self.forward.process_with_scratch(data, &mut scratch.buf);
        let s = 1.0 / (self.dim as f64).sqrt();
        for a in data.iter_mut() {
            *a *= s;
        }
    }

    /// Momentum → position, the exact inverse transform.
    pub(crate) fn to_position_in_place(&self, data: &mut [C64], scratch: &mut Scratch) {
        self.inverse.process_with_scratch(data, &mut scratch.buf);
        let s = 1.0 / (self.dim as f64).sqrt();
        for a in data.iter_mut() {
            *a *= s;
        }
    }
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform").field("dim", &self.dim).finish()
    }
}

/// Reusable FFT scratch buffer; one per worker.
pub struct Scratch {
    buf: Vec<C64>,
}

/// Momentum representation of a state under ⟨p_m|q_n⟩ = e^{−2πi·mn/N}/√N.
pub fn to_momentum(state: &TorusState) -> TorusState {
    let transform = Transform::new(state.dim());
    let mut scratch = Scratch {
        buf: vec![C64::ZERO; transform.scratch_len()],
    };
    let mut amps = state.amps.clone();
    transform.to_momentum_in_place(&mut amps, &mut scratch);
    TorusState { amps }
}

/// Inverse of [`to_momentum`]; the round trip is the identity to rounding.
pub fn to_position(state: &TorusState) -> TorusState {
    let transform = Transform::new(state.dim());
    let mut scratch = Scratch {
        buf: vec![C64::ZERO; transform.scratch_len()],
    };
    let mut amps = state.amps.clone();
    transform.to_position_in_place(&mut amps, &mut scratch);
    TorusState { amps }
}

/// A quantum map as an ordered product of diagonal kicks.
///
/// Kicks are stored in operator-product order: the last element of `kicks`
/// is the rightmost factor and acts first. Application inserts one forward
/// and one inverse transform per contiguous block of momentum kicks.
#[derive(Debug, Clone)]
pub struct KickedMap {
    dim: usize,
    kicks: Vec<KickPhase>,
    transform: Transform,
}

impl KickedMap {
    pub fn new(dim: usize, kicks: Vec<KickPhase>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("map dimension must be positive"));
        }
        for kick in &kicks {
            if kick.dim() != dim {
                return Err(Error::DimensionMismatch {
                    map_dim: dim,
                    state_dim: kick.dim(),
                });
            }
        }
        Ok(KickedMap {
            dim,
            kicks,
            transform: Transform::new(dim),
        })
    }

    /// The identity map (empty kick list).
    pub fn identity(dim: usize) -> Result<Self> {
        KickedMap::new(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kicks(&self) -> &[KickPhase] {
        &self.kicks
    }

    pub fn make_scratch(&self) -> Scratch {
        Scratch {
            buf: vec![C64::ZERO; self.transform.scratch_len()],
        }
    }

    /// U·state on a raw buffer. Panics on length mismatch; the checked
    /// entry point is [`apply_map`].
    pub fn apply_in_place(&self, state: &mut [C64], scratch: &mut Scratch) {
        assert_eq!(state.len(), self.dim, "state/map dimension mismatch");
        let mut in_momentum = false;
        for kick in self.kicks.iter().rev() {
            let needs_momentum = kick.basis == KickBasis::Momentum;
            if needs_momentum != in_momentum {
                if needs_momentum {
                    self.transform.to_momentum_in_place(state, scratch);
                } else {
                    self.transform.to_position_in_place(state, scratch);
                }
                in_momentum = needs_momentum;
            }
            for (a, m) in state.iter_mut().zip(&kick.multipliers) {
                *a *= m;
            }
        }
        if in_momentum {
            self.transform.to_position_in_place(state, scratch);
        }
    }
}

/// Applies the map to a state, returning U·state.
pub fn apply_map(map: &KickedMap, state: &TorusState) -> Result<TorusState> {
    if map.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            map_dim: map.dim(),
            state_dim: state.dim(),
        });
    }
    let mut amps = state.amps.clone();
    let mut scratch = map.make_scratch();
    map.apply_in_place(&mut amps, &mut scratch);
    Ok(TorusState { amps })
}

/// Dense matrix of the map, column j = U|j⟩, for small dimensions.
pub fn build_dense(map: &KickedMap) -> Result<Array2<C64>> {
    let n = map.dim();
    if n > DENSE_DIM_LIMIT {
        return Err(Error::DenseSizeExceeded {
            dim: n,
            limit: DENSE_DIM_LIMIT,
        });
    }
    let mut dense = Array2::zeros((n, n));
    let mut col = vec![C64::ZERO; n];
    let mut scratch = map.make_scratch();
    for j in 0..n {
        col.fill(C64::ZERO);
        col[j] = C64::ONE;
        map.apply_in_place(&mut col, &mut scratch);
        for i in 0..n {
            dense[(i, j)] = col[i];
        }
    }
    Ok(dense)
}
