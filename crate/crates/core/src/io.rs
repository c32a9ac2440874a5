//! CSV serialization with a JSON provenance header.
//!
//! Every file starts with comment lines (`# `) holding a single JSON object
//! that records the series metadata and, when supplied, the exact run
//! configuration, followed by the column header and the data rows. Floats
//! are written with 17 significant digits so downstream fits reproduce
//! bit-for-bit.

use serde_json::{json, Value};

use crate::analysis::ScanResult;
use crate::classical::Orbit;
use crate::echo::EchoSeries;
use crate::nonmarkov::NmSeries;

/// Full-precision float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

fn header_lines(meta: &Value, run: Option<&Value>) -> String {
    let header = match run {
        Some(run) => json!({ "series": meta, "run": run }),
        None => json!({ "series": meta }),
    };
    format!("# {}\n", header)
}

fn meta_value(meta: &crate::echo::SeriesMeta) -> Value {
    serde_json::to_value(meta).expect("metadata serializes")
}

/// Columns: t, re_f, im_f, abs_f.
pub fn echo_csv(series: &EchoSeries, run: Option<&Value>) -> String {
    let mut out = header_lines(&meta_value(&series.meta), run);
    out.push_str("t,re_f,im_f,abs_f\n");
    for (t, f) in series.times.iter().zip(&series.values) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            t,
            fmt_f64(f.re),
            fmt_f64(f.im),
            fmt_f64(f.norm())
        ));
    }
    out
}

/// Columns: t, m_value, abs_f.
pub fn nm_csv(series: &NmSeries, run: Option<&Value>) -> String {
    let mut out = header_lines(&meta_value(&series.meta), run);
    out.push_str("t,m_value,abs_f\n");
    for ((t, m), a) in series.times.iter().zip(&series.m_values).zip(&series.abs_f) {
        out.push_str(&format!("{},{},{}\n", t, fmt_f64(*m), fmt_f64(*a)));
    }
    out
}

/// Columns: k, m_value, error (error text only on failed points).
pub fn scan_csv(scan: &ScanResult, run: Option<&Value>) -> String {
    let mut out = header_lines(&meta_value(&scan.meta), run);
    out.push_str(&format!("{},m_value,error\n", scan.parameter));
    for point in &scan.points {
        let m = point.m_value.map(fmt_f64).unwrap_or_default();
        let err = point.error.clone().unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", fmt_f64(point.k), m, err));
    }
    out
}

/// Columns: orbit_id, step, q, p.
pub fn orbit_csv(orbits: &[Orbit], run: Option<&Value>) -> String {
    let mut out = match run {
        Some(run) => format!("# {}\n", json!({ "run": run })),
        None => String::new(),
    };
    out.push_str("orbit_id,step,q,p\n");
    for (id, orbit) in orbits.iter().enumerate() {
        for (step, pt) in orbit.points.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", id, step, fmt_f64(pt.q), fmt_f64(pt.p)));
        }
    }
    out
}
