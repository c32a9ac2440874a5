//! Figure-level analytics: long-time slope fits of M(t), slope scaling with
//! the environment dimension, and the regular-to-chaotic transition scan.

use rayon::prelude::*;
use serde_json::json;

use crate::echo::{afa_series, least_squares_line, SeriesMeta};
use crate::maps::{harper_pair, pcm_lyapunov, pcm_pair, Coupling, HarperParams, PcmParams};
use crate::nonmarkov::{nm_series, NmSeries};
use crate::{Error, Result};

/// Least-squares line through M(t) on a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    /// Growth per unit step.
    pub slope: f64,
    pub intercept: f64,
    pub window: (usize, usize),
    /// Root-mean-square residual of the fit.
    pub residual_rms: f64,
}

/// How the fit window of [`slope_vs_n`] is chosen per dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowRule {
    /// [ceil(2·t_E), T] with t_E = ln(N)/λ; needs a chaotic closed-form λ,
    /// so it is only available for the PCM family.
    TailAfterTwiceEhrenfest,
    /// Fixed window, required for regular dynamics where t_E is undefined.
    Explicit { lo: usize, hi: usize },
}

/// Map family swept by [`slope_vs_n`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingFamily {
    Pcm { a: f64, kick: f64 },
    Harper { k: f64 },
}

/// One point of a parameter scan; failed points carry their error text.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub k: f64,
    pub m_value: Option<f64>,
    pub error: Option<String>,
}

/// Tabulated M(eval_time) over a parameter grid with full run provenance.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub parameter: String,
    pub points: Vec<ScanPoint>,
    pub meta: SeriesMeta,
    pub eval_time: usize,
}

impl ScanResult {
    pub fn all_failed(&self) -> bool {
        self.points.iter().all(|p| p.m_value.is_none())
    }
}

/// Fits a line to M(t) over [lo, hi]; the window should start after
/// saturation (2·t_E by default upstream).
pub fn fit_tail_slope(series: &NmSeries, window: (usize, usize)) -> Result<SlopeFit> {
    let (lo, hi) = window;
    let horizon = series.times.len().saturating_sub(1);
    if hi > horizon || lo > hi {
        return Err(Error::invalid(format!(
            "window [{lo}, {hi}] outside series horizon {horizon}"
        )));
    }
    if hi - lo + 1 < 3 {
        return Err(Error::invalid("slope window needs at least 3 points"));
    }
    let ts: Vec<f64> = (lo..=hi).map(|t| t as f64).collect();
    let ys: Vec<f64> = series.m_values[lo..=hi].to_vec();
    let (slope, intercept) = least_squares_line(&ts, &ys);
    let residual_sq: f64 = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| {
            let r = y - (slope * t + intercept);
            r * r
        })
        .sum::<f64>()
        / ts.len() as f64;
    Ok(SlopeFit {
        slope,
        intercept,
        window,
        residual_rms: residual_sq.sqrt(),
    })
}

fn scaling_window(
    family: &ScalingFamily,
    rule: WindowRule,
    dim: usize,
    horizon: usize,
) -> Result<(usize, usize)> {
    match rule {
        WindowRule::Explicit { lo, hi } => Ok((lo, hi)),
        WindowRule::TailAfterTwiceEhrenfest => match family {
            ScalingFamily::Pcm { a, .. } => {
                let t_e = crate::maps::ehrenfest_time(dim, pcm_lyapunov(*a))?;
                Ok(((2.0 * t_e).ceil() as usize, horizon))
            }
            ScalingFamily::Harper { .. } => Err(Error::invalid(
                "the Harper family has no closed-form Ehrenfest time; supply an explicit window",
            )),
        },
    }
}

/// Runs the full AFA → M(t) pipeline at each dimension and fits the tail
/// slope, for 1/N scaling analysis. Dimensions must be powers of two ≥ 128.
pub fn slope_vs_n(
    family: &ScalingFamily,
    coupling: Coupling,
    horizon: usize,
    rule: WindowRule,
    n_list: &[usize],
) -> Result<Vec<(usize, SlopeFit)>> {
    for &n in n_list {
        if n < 128 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "scaling dimensions must be powers of two ≥ 128, got {n}"
            )));
        }
    }
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let run = || -> Result<SlopeFit> {
            let delta = coupling.resolve(n);
            let pair = match family {
                ScalingFamily::Pcm { a, kick } => {
                    pcm_pair(&PcmParams::new(*a, *kick, n)?, delta)
                }
                ScalingFamily::Harper { k } => {
                    harper_pair(&HarperParams::symmetric(*k, n)?, delta)
                }
            };
            let series = afa_series(&pair, horizon)?;
            let nm = nm_series(&series);
            let window = scaling_window(family, rule, n, horizon)?;
            fit_tail_slope(&nm, window)
        };
        let fit = run().map_err(|e| Error::invalid(format!("N={n}: {e}")))?;
        out.push((n, fit));
    }
    Ok(out)
}

/// M(eval_time) across a grid of Harper kick strengths at fixed coupling;
/// the points are independent and run in parallel, gathered in grid order.
pub fn m_vs_k_scan(k_grid: &[f64], dim: usize, delta_k: f64, eval_time: usize) -> Result<ScanResult> {
    if k_grid.is_empty() {
        return Err(Error::invalid("scan grid must not be empty"));
    }
    if eval_time < 1 {
        return Err(Error::invalid("evaluation time must be at least 1"));
    }
    let points: Vec<ScanPoint> = k_grid
        .par_iter()
        .map(|&k| {
            let run = || -> Result<f64> {
                let pair = harper_pair(&HarperParams::symmetric(k, dim)?, delta_k);
                let series = afa_series(&pair, eval_time)?;
                Ok(nm_series(&series).final_value())
            };
            match run() {
                Ok(m) => ScanPoint {
                    k,
                    m_value: Some(m),
                    error: None,
                },
                Err(e) => ScanPoint {
                    k,
                    m_value: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(ScanResult {
        parameter: "k".to_string(),
        points,
        meta: SeriesMeta {
            label: format!("harper scan N={dim} dk={delta_k} t={eval_time}"),
            dim,
            params: json!({
                "family": "harper",
                "delta": delta_k,
                "dim": dim,
                "eval_time": eval_time,
            }),
        },
        eval_time,
    })
}
