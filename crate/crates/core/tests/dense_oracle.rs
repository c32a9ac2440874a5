//! Cross-checks of the FFT split-operator path against literal dense
//! matrices built from the map formulas.

mod common;

use common::*;
use mapecho_core::echo::afa_series;
use mapecho_core::maps::{harper_map, harper_pair, pcm_map, pcm_pair, HarperParams, PcmParams};
use mapecho_core::torus::{apply_map, build_dense, KickPhase, KickedMap, TorusState};
use mapecho_core::C64;
use ndarray::Array2;
use std::f64::consts::PI;

fn assert_unitary(m: &Array2<C64>, tol: f64) {
    let n = m.nrows();
    let prod = adjoint(m).dot(m);
    let eye: Array2<C64> = Array2::eye(n);
    let dev = max_entry_diff(&prod, &eye);
    assert!(dev < tol, "U†U deviates from identity by {dev}");
}

#[test]
fn momentum_kick_via_transforms_matches_the_dense_construction() {
    let n = 16;
    let theta = |p: f64| 1.7 * (2.0 * PI * p).cos() + 0.4 * p;
    let map = KickedMap::new(n, vec![KickPhase::momentum(n, theta)]).unwrap();
    let split = build_dense(&map).unwrap();
    let dense = momentum_kick_matrix(n, theta);
    let dev = max_entry_diff(&split, &dense);
    assert!(dev < 1e-10, "momentum kick paths disagree by {dev}");
}

#[test]
fn pcm_dense_equals_its_factor_product() {
    let params = PcmParams::new(1.0, 0.0, 8).unwrap();
    let split = build_dense(&pcm_map(&params)).unwrap();
    let factors = pcm_dense(1.0, 0.0, 8);
    assert_unitary(&factors, 1e-10);
    let dev = max_entry_diff(&split, &factors);
    assert!(dev < 1e-10, "PCM factor product deviates by {dev}");
}

#[test]
fn harper_dense_equals_its_factor_product_and_is_unitary() {
    let params = HarperParams::new(0.5, 0.5, 8).unwrap();
    let split = build_dense(&harper_map(&params)).unwrap();
    let factors = harper_dense(0.5, 0.5, 8);
    assert_unitary(&factors, 1e-10);
    let dev = max_entry_diff(&split, &factors);
    assert!(dev < 1e-10, "Harper factor product deviates by {dev}");
}

#[test]
fn cat_map_column_matches_the_oracle() {
    let params = PcmParams::new(1.0, 0.0, 8).unwrap();
    let state = TorusState::basis_state(8, 0).unwrap();
    let evolved = apply_map(&pcm_map(&params), &state).unwrap();
    let oracle = pcm_dense(1.0, 0.0, 8);
    for (i, amp) in evolved.amplitudes().iter().enumerate() {
        assert!((amp - oracle[(i, 0)]).norm() < 1e-10);
    }
}

#[test]
fn split_operator_agrees_with_dense_matrix_vector_products() {
    for n in [4, 8, 16, 32] {
        let pcm = PcmParams::new(1.0, 0.25, n).unwrap();
        let harper = HarperParams::symmetric(0.8, n).unwrap();
        let cases: Vec<(KickedMap, Array2<C64>)> = vec![
            (pcm_map(&pcm), pcm_dense(1.0, 0.25, n)),
            (harper_map(&harper), harper_dense(0.8, 0.8, n)),
        ];
        for (map, dense) in cases {
            for site in 0..n {
                let state = TorusState::basis_state(n, site).unwrap();
                let evolved = apply_map(&map, &state).unwrap();
                let column = matvec(&dense, state.amplitudes());
                for (a, b) in evolved.amplitudes().iter().zip(&column) {
                    assert!((a - b).norm() < 1e-9, "N={n} site={site}");
                }
            }
        }
    }
}

#[test]
fn afa_matches_the_dense_trace_step_by_step() {
    for n in [4, 8, 16] {
        let params = PcmParams::new(1.0, 0.25, n).unwrap();
        let pair = pcm_pair(&params, 0.1);
        let series = afa_series(&pair, 10).unwrap();
        let d0 = pcm_dense(1.0, 0.25, n);
        let d1 = pcm_dense(1.0, 0.35, n);
        for t in 0..=10 {
            let expect = normalized_echo_trace(&matrix_power(&d0, t), &matrix_power(&d1, t));
            assert!(
                (series.values[t] - expect).norm() < 1e-9,
                "N={n} t={t}: {} vs {}",
                series.values[t],
                expect
            );
        }
    }
}

#[test]
fn harper_afa_matches_the_dense_trace() {
    let n = 16;
    let params = HarperParams::symmetric(1.0, n).unwrap();
    let pair = harper_pair(&params, 0.05);
    let series = afa_series(&pair, 8).unwrap();
    let d0 = harper_dense(1.0, 1.0, n);
    let d1 = harper_dense(1.05, 1.0, n);
    for t in 0..=8 {
        let expect = normalized_echo_trace(&matrix_power(&d0, t), &matrix_power(&d1, t));
        assert!((series.values[t] - expect).norm() < 1e-9, "t={t}");
    }
}

#[test]
fn quoted_pcm_operating_point_resolves_to_the_raw_coupling() {
    use mapecho_core::maps::Coupling;
    let delta = Coupling::OverHbar(3.635).resolve(4096);
    assert!((delta - 3.635 / 4096.0).abs() < 1e-18);
    let params = PcmParams::new(1.0, 0.25, 64).unwrap();
    let pair = pcm_pair(&params, Coupling::OverHbar(3.635).resolve(64));
    assert!((pair.coupling - 3.635 / 64.0).abs() < 1e-15);
}
