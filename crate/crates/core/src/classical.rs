//! Classical counterparts of the quantum maps on the unit torus.
//!
//! Kick rules follow from the quantum phases by stationary phase: a position
//! kick e^{iθ(q̂)} shifts momentum by θ′(q)/(2πN), a momentum kick e^{iφ(p̂)}
//! shifts position by −φ′(p)/(2πN). Both maps compose shears, so one full
//! step preserves area exactly.

use std::f64::consts::PI;

use rayon::prelude::*;

/// A point on the unit torus, both coordinates in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint {
            q: wrap_unit(q),
            p: wrap_unit(p),
        }
    }
}

/// Reduces mod 1 with floor-based wrapping so negatives land in [0, 1).
pub fn wrap_unit(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// One trajectory: the initial condition followed by every iterate.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub initial: PhasePoint,
    pub points: Vec<PhasePoint>,
}

/// A classical torus map with its tangent map.
pub trait ClassicalMap: Sync {
    fn step(&self, pt: PhasePoint) -> PhasePoint;
    /// Jacobian of one step evaluated at `pt` (row-major [[dq'/dq, dq'/dp], [dp'/dq, dp'/dp]]).
    fn jacobian(&self, pt: PhasePoint) -> [[f64; 2]; 2];
}

/// Classical kicked Harper map.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalHarper {
    pub k: f64,
    pub k_prime: f64,
}

impl ClassicalMap for ClassicalHarper {
    fn step(&self, pt: PhasePoint) -> PhasePoint {
        classical_harper_step(pt, self.k, self.k_prime)
    }

    fn jacobian(&self, pt: PhasePoint) -> [[f64; 2]; 2] {
        let q1 = wrap_unit(pt.q + self.k_prime * (2.0 * PI * pt.p).sin());
        let dq_dp = 2.0 * PI * self.k_prime * (2.0 * PI * pt.p).cos();
        let c = 2.0 * PI * self.k * (2.0 * PI * q1).cos();
        [[1.0, dq_dp], [-c, 1.0 - c * dq_dp]]
    }
}

/// Classical perturbed cat map.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalPcm {
    pub a: f64,
    pub kick: f64,
}

impl ClassicalMap for ClassicalPcm {
    fn step(&self, pt: PhasePoint) -> PhasePoint {
        classical_pcm_step(pt, self.a, self.kick)
    }

    fn jacobian(&self, pt: PhasePoint) -> [[f64; 2]; 2] {
        let dp_dq = self.a
            + 4.0 * PI * PI * self.kick
                * (2.0 * (4.0 * PI * pt.q).sin() - (2.0 * PI * pt.q).sin());
        [[1.0 + self.a * dp_dq, self.a], [dp_dq, 1.0]]
    }
}

/// Kicked-Harper update: q′ = q + k′ sin(2πp), then p′ = p − k sin(2πq′),
/// mirroring the quantum factor order (momentum kick first).
pub fn classical_harper_step(pt: PhasePoint, k: f64, k_prime: f64) -> PhasePoint {
    let q = wrap_unit(pt.q + k_prime * (2.0 * PI * pt.p).sin());
    let p = wrap_unit(pt.p - k * (2.0 * PI * q).sin());
    PhasePoint { q, p }
}

/// Perturbed-cat update: p′ = p + a·q + 2πK(cos 2πq − cos 4πq), then
/// q′ = q + a·p′; at K = 0 and a = 1 this is the [[2,1],[1,1]] cat map.
pub fn classical_pcm_step(pt: PhasePoint, a: f64, kick: f64) -> PhasePoint {
    let p = wrap_unit(
        pt.p + a * pt.q + 2.0 * PI * kick * ((2.0 * PI * pt.q).cos() - (4.0 * PI * pt.q).cos()),
    );
    let q = wrap_unit(pt.q + a * p);
    PhasePoint { q, p }
}

/// Largest Lyapunov exponent by tangent-map iteration with per-step
/// renormalization; a 100-step transient is discarded before accumulating.
pub fn tangent_lyapunov(map: &dyn ClassicalMap, initial: PhasePoint, steps: usize) -> f64 {
    const TRANSIENT: usize = 100;
    let mut pt = initial;
    for _ in 0..TRANSIENT {
        pt = map.step(pt);
    }
    let mut v = [0.6, 0.8];
    let mut acc = 0.0;
    for _ in 0..steps {
        let j = map.jacobian(pt);
        let w = [
            j[0][0] * v[0] + j[0][1] * v[1],
            j[1][0] * v[0] + j[1][1] * v[1],
        ];
        let stretch = (w[0] * w[0] + w[1] * w[1]).sqrt();
        acc += stretch.ln();
        v = [w[0] / stretch, w[1] / stretch];
        pt = map.step(pt);
    }
    acc / steps as f64
}

/// One orbit of `steps` iterates per initial condition (orbits are
/// independent and computed in parallel, returned in grid order).
pub fn phase_portrait(map: &dyn ClassicalMap, grid: &[PhasePoint], steps: usize) -> Vec<Orbit> {
    grid.par_iter()
        .map(|&initial| {
            let mut points = Vec::with_capacity(steps + 1);
            let mut pt = initial;
            points.push(pt);
            for _ in 0..steps {
                pt = map.step(pt);
                points.push(pt);
            }
            Orbit { initial, points }
        })
        .collect()
}
