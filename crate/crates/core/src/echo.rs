//! Fidelity-amplitude echoes between an unperturbed and a perturbed map.
//!
//! The average fidelity amplitude ⟨f(t)⟩ = (1/N) Tr[U₁(t)†U₀(t)] is the echo
//! operator averaged over any complete orthonormal set; it is what the
//! maximally mixed environment feeds into the qubit channel. For a pure
//! initial state the squared modulus of the echo amplitude is the Loschmidt
//! echo. Time is the integer iteration count of the maps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::maps::MapPair;
use crate::torus::{inner_product, TorusState};
use crate::{C64, Error, Result};

/// Provenance attached to every series: where it came from and with
/// which parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub label: String,
    pub dim: usize,
    pub params: serde_json::Value,
}

impl SeriesMeta {
    pub fn synthetic(label: impl Into<String>) -> Self {
        SeriesMeta {
            label: label.into(),
            dim: 0,
            params: serde_json::Value::Null,
        }
    }
}

/// Discrete-time record of the complex echo amplitude f(t), t = 0, 1, …, T.
#[derive(Debug, Clone)]
pub struct EchoSeries {
    pub times: Vec<usize>,
    pub values: Vec<C64>,
    pub meta: SeriesMeta,
}

impl EchoSeries {
    /// Builds a series from raw values f(0), f(1), … (t follows the index).
    pub fn from_values(values: Vec<C64>, meta: SeriesMeta) -> Self {
        EchoSeries {
            times: (0..values.len()).collect(),
            values,
            meta,
        }
    }

    pub fn horizon(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|f| f.norm()).collect()
    }
}

/// Statistics of |f(t)| over a saturation tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationStats {
    pub mean_abs: f64,
    pub variance_abs: f64,
}

fn evolve_columns_series(
    pair: &MapPair,
    initial: Vec<C64>,
    columns: usize,
    horizon: usize,
) -> Vec<C64> {
    let n = pair.dim();
    let mut psi = initial.clone();
    let mut phi = initial;
    let mut values = Vec::with_capacity(horizon + 1);
    values.push(C64::ONE);
    for _ in 1..=horizon {
        // Columns evolve independently; the per-column overlaps are reduced
        // in index order afterwards so the result does not depend on the
        // worker count.
        let partials: Vec<C64> = psi
            .par_chunks_mut(n)
            .zip(phi.par_chunks_mut(n))
            .map_init(
                || (pair.u0.make_scratch(), pair.u1.make_scratch()),
                |(s0, s1), (col0, col1)| {
                    pair.u0.apply_in_place(col0, s0);
                    pair.u1.apply_in_place(col1, s1);
                    inner_product(col1, col0)
                },
            )
            .collect();
        let total = partials.iter().fold(C64::ZERO, |acc, z| acc + z);
        values.push(total / columns as f64);
    }
    values
}

/// Average fidelity amplitude over the full position basis:
/// f(t) = (1/N) Σ_n ⟨U₁ᵗ n|U₀ᵗ n⟩, evolved column by column.
///
/// Cost per step is O(N² log N); memory holds 2·N² amplitudes. The result
/// matches the dense trace (1/N)Tr[(U₁ᵗ)†U₀ᵗ] and f(0) = 1 exactly.
pub fn afa_series(pair: &MapPair, horizon: usize) -> Result<EchoSeries> {
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let n = pair.dim();
    let mut identity = vec![C64::ZERO; n * n];
    for j in 0..n {
        identity[j * n + j] = C64::ONE;
    }
    let values = evolve_columns_series(pair, identity, n, horizon);
    Ok(EchoSeries {
        times: (0..=horizon).collect(),
        values,
        meta: SeriesMeta {
            label: pair.label.clone(),
            dim: n,
            params: pair.params.clone(),
        },
    })
}

/// Echo amplitude f(t) = ⟨ψ|(U₁ᵗ)†U₀ᵗ|ψ⟩ of a single normalized state;
/// |f(t)|² is the Loschmidt echo of that state.
pub fn echo_amplitude_pure(pair: &MapPair, psi: &TorusState, horizon: usize) -> Result<EchoSeries> {
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    if pair.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            map_dim: pair.dim(),
            state_dim: psi.dim(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    let initial = psi.normalized().into_amplitudes();
    let values = evolve_columns_series(pair, initial, 1, horizon);
    Ok(EchoSeries {
        times: (0..=horizon).collect(),
        values,
        meta: SeriesMeta {
            label: format!("{} (pure state)", pair.label),
            dim: pair.dim(),
            params: pair.params.clone(),
        },
    })
}

/// Short-time decay rate Γ: the negated least-squares slope of ln|f(t)|
/// over the window [t_lo, t_hi] (inclusive).
pub fn fit_decay_rate(series: &EchoSeries, window: (usize, usize)) -> Result<f64> {
    let (lo, hi) = window;
    if hi > series.horizon() || lo > hi {
        return Err(Error::invalid(format!(
            "window [{lo}, {hi}] outside series horizon {}",
            series.horizon()
        )));
    }
    if hi - lo + 1 < 3 {
        return Err(Error::invalid("decay-rate window needs at least 3 points"));
    }
    let mut ts = Vec::with_capacity(hi - lo + 1);
    let mut ys = Vec::with_capacity(hi - lo + 1);
    for t in lo..=hi {
        let m = series.values[t].norm();
        if m <= 0.0 {
            return Err(Error::invalid(format!(
                "|f({t})| = 0 in window; log-linear fit undefined"
            )));
        }
        ts.push(t as f64);
        ys.push(m.ln());
    }
    let (slope, _intercept) = least_squares_line(&ts, &ys);
    Ok(-slope)
}

/// Mean and (population) variance of |f(t)| for t ≥ tail_start.
pub fn saturation_stats(series: &EchoSeries, tail_start: usize) -> Result<SaturationStats> {
    if tail_start > series.horizon() {
        return Err(Error::invalid(format!(
            "tail start {tail_start} beyond horizon {}",
            series.horizon()
        )));
    }
    let tail: Vec<f64> = series.values[tail_start..].iter().map(|f| f.norm()).collect();
    let count = tail.len() as f64;
    let mean = tail.iter().sum::<f64>() / count;
    let variance = tail.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / count;
    Ok(SaturationStats {
        mean_abs: mean,
        variance_abs: variance,
    })
}

pub(crate) fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
