//! The two environment maps, their perturbed pairs, and chaos timescales.
//!
//! Perturbed cat map (PCM):
//!   U_{c,K} = e^{−iπN a p̂²} · e^{iπN a q̂²} · e^{iπN K (2 sin 2πq̂ − sin 4πq̂)}
//! with chaoticity parameter `a` and kick depth `K`; for small K its Lyapunov
//! exponent is λ ≈ ln((2 + a² + √(a²(4 + a²)))/2).
//!
//! Kicked Harper map (HM):
//!   U_{H,k,k′} = e^{iN k cos 2πq̂} · e^{iN k′ cos 2πp̂},
//! regular for k ≲ 0.11 and without visible regular islands for k ≳ 0.63.
//!
//! A perturbed pair has the structure U₁ = U₀·P(ε); ε → 0 implies f(t) → 1.

use std::f64::consts::PI;

use serde_json::json;

use crate::torus::{KickPhase, KickedMap};
use crate::{Error, Result};

/// Parameters of the perturbed cat map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcmParams {
    /// Chaoticity parameter, a > 0.
    pub a: f64,
    /// Depth K of the sinusoidal kicking potential.
    pub kick: f64,
    /// Hilbert-space dimension N.
    pub dim: usize,
}

impl PcmParams {
    pub fn new(a: f64, kick: f64, dim: usize) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::invalid(format!("PCM requires a > 0, got {a}")));
        }
        if dim < 2 {
            return Err(Error::invalid(format!("dimension must be ≥ 2, got {dim}")));
        }
        Ok(PcmParams { a, kick, dim })
    }
}

/// Parameters of the kicked Harper map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarperParams {
    pub k: f64,
    pub k_prime: f64,
    pub dim: usize,
}

impl HarperParams {
    pub fn new(k: f64, k_prime: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("dimension must be ≥ 2, got {dim}")));
        }
        Ok(HarperParams { k, k_prime, dim })
    }

    /// The symmetric point k′ = k used by the unperturbed map.
    pub fn symmetric(k: f64, dim: usize) -> Result<Self> {
        HarperParams::new(k, k, dim)
    }
}

/// Coupling strength given either directly or in units of ħ = 1/N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// δK or δk as-is.
    Raw(f64),
    /// δ/ħ with ħ = 1/N, so the raw value is δ = x/N.
    OverHbar(f64),
}

impl Coupling {
    pub fn resolve(self, dim: usize) -> f64 {
        match self {
            Coupling::Raw(d) => d,
            Coupling::OverHbar(x) => x / dim as f64,
        }
    }
}

/// An unperturbed/perturbed map pair evolving the two qubit branches.
#[derive(Debug, Clone)]
pub struct MapPair {
    pub u0: KickedMap,
    pub u1: KickedMap,
    /// ε of U₁ = U₀P(ε): δK for the PCM, δk for the HM.
    pub coupling: f64,
    pub label: String,
    /// Run parameters for output provenance.
    pub params: serde_json::Value,
}

impl MapPair {
    pub fn dim(&self) -> usize {
        self.u0.dim()
    }
}

fn pcm_kicks(params: &PcmParams) -> Vec<KickPhase> {
    let n = params.dim as f64;
    let a = params.a;
    let depth = params.kick;
    // Operator-product order; the rightmost (potential) kick acts first.
    vec![
        KickPhase::momentum(params.dim, move |p| -PI * n * a * p * p),
        KickPhase::position(params.dim, move |q| PI * n * a * q * q),
        KickPhase::position(params.dim, move |q| {
            PI * n * depth * (2.0 * (2.0 * PI * q).sin() - (4.0 * PI * q).sin())
        }),
    ]
}

/// The quantum perturbed cat map at the given parameters.
pub fn pcm_map(params: &PcmParams) -> KickedMap {
    KickedMap::new(params.dim, pcm_kicks(params)).expect("validated params")
}

/// PCM pair U₀ = U_{c,K}, U₁ = U_{c,K+δK}.
pub fn pcm_pair(params: &PcmParams, delta_kick: f64) -> MapPair {
    let u0 = pcm_map(params);
    let perturbed = PcmParams {
        kick: params.kick + delta_kick,
        ..*params
    };
    let u1 = pcm_map(&perturbed);
    MapPair {
        u0,
        u1,
        coupling: delta_kick,
        label: format!(
            "pcm a={} K={} dK={} N={}",
            params.a, params.kick, delta_kick, params.dim
        ),
        params: json!({
            "family": "pcm",
            "a": params.a,
            "kick": params.kick,
            "delta": delta_kick,
            "dim": params.dim,
        }),
    }
}

fn harper_kicks(params: &HarperParams) -> Vec<KickPhase> {
    let n = params.dim as f64;
    let k = params.k;
    let kp = params.k_prime;
    // Momentum kick is the rightmost factor and acts first.
    vec![
        KickPhase::position(params.dim, move |q| n * k * (2.0 * PI * q).cos()),
        KickPhase::momentum(params.dim, move |p| n * kp * (2.0 * PI * p).cos()),
    ]
}

/// The kicked Harper map at the given parameters.
pub fn harper_map(params: &HarperParams) -> KickedMap {
    KickedMap::new(params.dim, harper_kicks(params)).expect("validated params")
}

/// Harper pair U₀ = U_{H,k,k′}, U₁ = U_{H,k+δk,k′}: only the position kick
/// strength is perturbed.
pub fn harper_pair(params: &HarperParams, delta_k: f64) -> MapPair {
    let u0 = harper_map(params);
    let perturbed = HarperParams {
        k: params.k + delta_k,
        ..*params
    };
    let u1 = harper_map(&perturbed);
    MapPair {
        u0,
        u1,
        coupling: delta_k,
        label: format!(
            "harper k={} k'={} dk={} N={}",
            params.k, params.k_prime, delta_k, params.dim
        ),
        params: json!({
            "family": "harper",
            "k": params.k,
            "k_prime": params.k_prime,
            "delta": delta_k,
            "dim": params.dim,
        }),
    }
}

/// Closed-form Lyapunov exponent of the cat map family (small-K limit):
/// λ = ln((2 + a² + √(a²(4 + a²)))/2).
pub fn pcm_lyapunov(a: f64) -> f64 {
    ((2.0 + a * a + (a * a * (4.0 + a * a)).sqrt()) / 2.0).ln()
}

/// Ehrenfest time t_E = ln(N)/λ, the scale at which a chaotic map's
/// fidelity amplitude saturates.
pub fn ehrenfest_time(dim: usize, lyapunov: f64) -> Result<f64> {
    if lyapunov <= 0.0 {
        return Err(Error::NonChaotic(lyapunov));
    }
    Ok((dim as f64).ln() / lyapunov)
}
