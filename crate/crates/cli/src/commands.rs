//! The five subcommands: pipeline runs, file output, and the small-N
//! verification report.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use mapecho_core::analysis::m_vs_k_scan;
use mapecho_core::classical::{phase_portrait, ClassicalHarper, ClassicalPcm, PhasePoint};
use mapecho_core::echo::afa_series;
use mapecho_core::io;
use mapecho_core::maps::{harper_pair, pcm_pair, HarperParams, MapPair, PcmParams};
use mapecho_core::nonmarkov::{
    channel_from_afa, channel_oracle, nm_series, reduced_qubit_oracle, verify_optimal_pair,
    QubitState,
};
use mapecho_core::torus::{apply_map, build_dense, TorusState};

use crate::config::{Family, RunConfig};
use crate::CliError;

fn compute_err(e: mapecho_core::Error) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn build_pair(cfg: &RunConfig) -> Result<MapPair, CliError> {
    let delta = cfg.delta();
    match cfg.family {
        Family::Pcm { a, kick } => {
            let params = PcmParams::new(a, kick, cfg.n).map_err(compute_err)?;
            Ok(pcm_pair(&params, delta))
        }
        Family::Harper { k, k_prime } => {
            let params = HarperParams::new(k, k_prime, cfg.n).map_err(compute_err)?;
            Ok(harper_pair(&params, delta))
        }
    }
}

fn coupling_tag(delta: f64) -> String {
    format!("{:.4e}", delta)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Compute(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(path)
}

pub fn cmd_afa(cfg: &RunConfig) -> Result<(), CliError> {
    let pair = build_pair(cfg)?;
    let series = afa_series(&pair, cfg.horizon).map_err(compute_err)?;
    let header = json!({ "command": "afa", "config": cfg.to_json() });
    let name = format!(
        "afa_{}_n{}_d{}.csv",
        cfg.family.name(),
        cfg.n,
        coupling_tag(cfg.delta())
    );
    write_file(&cfg.out_dir, &name, &io::echo_csv(&series, Some(&header)))?;
    Ok(())
}

pub fn cmd_nm(cfg: &RunConfig) -> Result<(), CliError> {
    let pair = build_pair(cfg)?;
    let series = afa_series(&pair, cfg.horizon).map_err(compute_err)?;
    let nm = nm_series(&series);
    let header = json!({ "command": "nm", "config": cfg.to_json() });
    let tag = coupling_tag(cfg.delta());
    let afa_name = format!("afa_{}_n{}_d{}.csv", cfg.family.name(), cfg.n, tag);
    write_file(&cfg.out_dir, &afa_name, &io::echo_csv(&series, Some(&header)))?;
    let nm_name = format!("nm_{}_n{}_d{}.csv", cfg.family.name(), cfg.n, tag);
    write_file(&cfg.out_dir, &nm_name, &io::nm_csv(&nm, Some(&header)))?;
    Ok(())
}

pub struct ScanConfig {
    pub n: usize,
    pub coupling: mapecho_core::maps::Coupling,
    pub eval_time: usize,
    pub k_grid: Vec<f64>,
    pub out_dir: PathBuf,
}

pub fn cmd_scan_k(cfg: &ScanConfig) -> Result<(), CliError> {
    use mapecho_core::maps::Coupling;
    let delta = cfg.coupling.resolve(cfg.n);
    let scan = m_vs_k_scan(&cfg.k_grid, cfg.n, delta, cfg.eval_time).map_err(compute_err)?;
    for point in &scan.points {
        if let Some(err) = &point.error {
            eprintln!("scan point k={} failed: {err}", point.k);
        }
    }
    let coupling_field = match cfg.coupling {
        Coupling::Raw(d) => json!({ "delta": d }),
        Coupling::OverHbar(x) => json!({ "delta_over_hbar": x }),
    };
    let header = json!({
        "command": "scan-k",
        "family": "harper",
        "n": cfg.n,
        "coupling": coupling_field,
        "resolved_delta": delta,
        "eval_time": cfg.eval_time,
        "k_grid": cfg.k_grid,
    });
    let name = format!(
        "scan_k_harper_n{}_d{}_t{}.csv",
        cfg.n,
        coupling_tag(delta),
        cfg.eval_time
    );
    write_file(&cfg.out_dir, &name, &io::scan_csv(&scan, Some(&header)))?;
    if scan.all_failed() {
        return Err(CliError::Compute("every scan point failed".into()));
    }
    Ok(())
}

/// What to draw: one portrait per Harper k value, or a single PCM portrait.
pub enum PortraitSpec {
    Harper { k_grid: Vec<f64>, k_prime: Option<f64> },
    Pcm { a: f64, kick: f64 },
}

pub struct PortraitConfig {
    pub spec: PortraitSpec,
    pub grid_size: usize,
    pub steps: usize,
    pub out_dir: PathBuf,
}

fn uniform_grid(g: usize) -> Vec<PhasePoint> {
    let mut grid = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            grid.push(PhasePoint::new(
                (i as f64 + 0.5) / g as f64,
                (j as f64 + 0.5) / g as f64,
            ));
        }
    }
    grid
}

pub fn cmd_portrait(cfg: &PortraitConfig) -> Result<(), CliError> {
    let grid = uniform_grid(cfg.grid_size);
    match &cfg.spec {
        PortraitSpec::Harper { k_grid, k_prime } => {
            for &k in k_grid {
                let map = ClassicalHarper {
                    k,
                    k_prime: k_prime.unwrap_or(k),
                };
                let orbits = phase_portrait(&map, &grid, cfg.steps);
                let header = json!({
                    "command": "portrait",
                    "family": "harper",
                    "k": k,
                    "k_prime": map.k_prime,
                    "grid_size": cfg.grid_size,
                    "steps": cfg.steps,
                });
                let name = format!(
                    "portrait_harper_k{}_g{}_s{}.csv",
                    coupling_tag(k),
                    cfg.grid_size,
                    cfg.steps
                );
                write_file(&cfg.out_dir, &name, &io::orbit_csv(&orbits, Some(&header)))?;
            }
        }
        PortraitSpec::Pcm { a, kick } => {
            let map = ClassicalPcm { a: *a, kick: *kick };
            let orbits = phase_portrait(&map, &grid, cfg.steps);
            let header = json!({
                "command": "portrait",
                "family": "pcm",
                "a": a,
                "kick": kick,
                "grid_size": cfg.grid_size,
                "steps": cfg.steps,
            });
            let name = format!(
                "portrait_pcm_a{}_K{}_g{}_s{}.csv",
                coupling_tag(*a),
                coupling_tag(*kick),
                cfg.grid_size,
                cfg.steps
            );
            write_file(&cfg.out_dir, &name, &io::orbit_csv(&orbits, Some(&header)))?;
        }
    }
    Ok(())
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Small-N oracle suite: split-operator vs dense consistency, dephasing
/// channel structure, coherence factorization, and the optimal-pair bound.
pub fn cmd_verify(cfg: &RunConfig, samples: usize) -> Result<(), CliError> {
    let pair = build_pair(cfg)?;
    let horizon = cfg.horizon.min(10);
    let mut checks = Vec::new();

    // Split-operator evolution against dense matrix powers.
    let mut dense_dev: f64 = 0.0;
    for map in [&pair.u0, &pair.u1] {
        let dense = build_dense(map).map_err(compute_err)?;
        let mut power = ndarray::Array2::<mapecho_core::C64>::eye(cfg.n);
        let mut states: Vec<TorusState> = (0..cfg.n)
            .map(|j| TorusState::basis_state(cfg.n, j).unwrap())
            .collect();
        for _t in 1..=horizon {
            power = dense.dot(&power);
            for (j, state) in states.iter_mut().enumerate() {
                *state = apply_map(map, state).map_err(compute_err)?;
                for (i, amp) in state.amplitudes().iter().enumerate() {
                    dense_dev = dense_dev.max((amp - power[(i, j)]).norm());
                }
            }
        }
    }
    checks.push(Check {
        name: "dense equivalence",
        passed: dense_dev < 1e-9,
        detail: format!("max deviation {dense_dev:.3e} (limit 1e-9)"),
    });

    // Channel structure and agreement with the amplitude transcription.
    let series = afa_series(&pair, horizon).map_err(compute_err)?;
    let mut structure_dev: f64 = 0.0;
    for t in 0..=horizon {
        let oracle = channel_oracle(&pair, t).map_err(compute_err)?;
        structure_dev = structure_dev.max(oracle.dephasing_defect());
        let fast = channel_from_afa(series.values[t]).map_err(compute_err)?;
        for j in 0..4 {
            for k in 0..4 {
                structure_dev = structure_dev.max((oracle.get(j, k) - fast.get(j, k)).abs());
            }
        }
    }
    checks.push(Check {
        name: "channel structure",
        passed: structure_dev < 1e-9,
        detail: format!("max defect {structure_dev:.3e} (limit 1e-9)"),
    });

    // Full 2N evolution factorizes through the amplitude.
    let rho = QubitState::from_bloch(0.6, -0.1, 0.2).map_err(compute_err)?;
    let mut reduction_dev: f64 = 0.0;
    for t in 0..=horizon {
        let reduced = reduced_qubit_oracle(&pair, &rho, t).map_err(compute_err)?;
        let expect = series.values[t] * rho.coherence();
        reduction_dev = reduction_dev.max((reduced.coherence() - expect).norm());
        let (p0, p1) = reduced.populations();
        let (q0, q1) = rho.populations();
        reduction_dev = reduction_dev.max((p0 - q0).abs()).max((p1 - q1).abs());
    }
    checks.push(Check {
        name: "coherence factorization",
        passed: reduction_dev < 1e-9,
        detail: format!("max defect {reduction_dev:.3e} (limit 1e-9)"),
    });

    // Sampled states never beat the equatorial pair.
    let report = verify_optimal_pair(&pair, horizon, samples, cfg.seed).map_err(compute_err)?;
    checks.push(Check {
        name: "optimal-pair bound",
        passed: report.passed(),
        detail: format!(
            "max sampled variation {:.6} vs bound {:.6} (+1e-8); optimal-pair deviation {:.3e}",
            report.max_sampled_variation, report.variation_bound, report.optimal_max_deviation
        ),
    });

    let mut all_passed = true;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<24} {}", check.name, check.detail);
        all_passed &= check.passed;
    }
    if all_passed {
        println!("verify: all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
