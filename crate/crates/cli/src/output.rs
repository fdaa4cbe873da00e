//! CSV, JSON and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mixclust_core::mixture::{SeparabilityIndex, SeparabilityReport};
use mixclust_core::BoundReport;
use serde_json::{json, Value};

use crate::error::{HarnessError, Result};
use crate::experiment::{CellSummary, SweepResult, TrialRecord};
use crate::model_file::ModelFile;

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

fn csv_row(r: &TrialRecord) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.f.to_string(),
        r.k.to_string(),
        r.case.clone(),
        r.trial.to_string(),
        r.trial_seed.to_string(),
        fmt_float(r.d_org),
        opt_float(r.d_org_bound),
        opt_float(r.d_org_bound_emp),
        opt_float(r.d_pca),
        opt_float(r.d_pca_bound),
        opt_float(r.d_pca_bound_emp),
        opt_float(r.d_svd),
        opt_float(r.gamma_pca),
        opt_float(r.gamma_svd),
        opt_float(r.d_rp),
        opt_float(r.gamma_rp),
        opt_float(r.d_rsvd),
        opt_float(r.gamma_rsvd),
        fmt_float(r.t_full_ms),
        opt_float(r.t_reduce_ms),
        opt_float(r.t_reduced_kmeans_ms),
        r.org_bound_applicable.to_string(),
        r.org_bound_emp_applicable.to_string(),
        r.pca_bound_applicable.to_string(),
        r.pca_bound_emp_applicable.to_string(),
        opt_float(r.opt_ratio_emp),
        opt_float(r.opt_ratio_bound),
        opt_bool(r.opt_ratio_premise),
    ]
}

pub fn write_csv<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TrialRecord::COLUMNS)?;
    for r in records {
        w.write_record(csv_row(r))?;
    }
    w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

fn index_json(idx: &SeparabilityIndex) -> Value {
    json!({"value": idx.value, "holds": idx.holds, "reason": idx.reason})
}

pub fn separability_json(r: &SeparabilityReport) -> Value {
    json!({
        "K": r.k,
        "F": r.f,
        "w_min": r.w_min,
        "w_max": r.w_max,
        "lambda_min": r.lambda_min,
        "zeta_wmin": r.zeta_wmin,
        "delta0": index_json(&r.delta0),
        "delta1": index_json(&r.delta1),
        "delta2": index_json(&r.delta2),
        "delta3": index_json(&r.delta3),
        "a": r.a,
        "b": r.b,
    })
}

pub fn bound_json(b: &BoundReport) -> Value {
    json!({
        "delta": b.delta,
        "bound": b.bound,
        "nominal": b.nominal,
        "delta_leq_half_k_minus_1": b.delta_leq_half_k_minus_1,
        "tau_leq_p_min": b.tau_leq_p_min,
        "inputs": format!("{:?}", b.inputs).to_lowercase(),
        "reason": b.reason,
    })
}

fn cell_json(c: &CellSummary) -> Value {
    let means: serde_json::Map<String, Value> = c.means.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "n": c.n,
        "trials": c.trials,
        "mean": means,
        "org_bound_applicable": c.org_bound_applicable,
        "pca_bound_applicable": c.pca_bound_applicable,
    })
}

pub fn summary_json(result: &SweepResult) -> Value {
    let p = &result.prepared;
    json!({
        "model": ModelFile::from_model(&p.model),
        "separability": separability_json(&p.separability),
        "population_bounds": {"org": bound_json(&p.org_bound), "pca": bound_json(&p.pca_bound)},
        "cells": result.cells.iter().map(cell_json).collect::<Vec<_>>(),
    })
}

/// A line chart with one polyline per series.
pub fn line_chart(title: &str, x_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 60.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

    let pts = series
        .iter()
        .flat_map(|(_, p)| p.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{PAD},{PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            sx(fx),
            H - PAD + 18.0,
            tick(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            PAD - 6.0,
            sy(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(x_label)
    );
    for (i, (name, points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
                path.join(" ")
            );
        }
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            W - PAD - 150.0,
            W - PAD - 130.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            W - PAD - 124.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || v == v.trunc() {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn series(cells: &[CellSummary], column: &str) -> Vec<(f64, f64)> {
    cells
        .iter()
        .filter_map(|c| c.mean(column).map(|v| (c.n as f64, v)))
        .collect()
}

/// Distance-vs-N and runtime-vs-N charts.
pub fn sweep_charts(result: &SweepResult) -> (String, String) {
    let c = &result.cells;
    let distances = line_chart(
        "ME distance to the target clustering",
        "N",
        &[
            ("d_org", series(c, "d_org")),
            ("d_org bound", series(c, "d_org_bound")),
            ("d_org bound (emp)", series(c, "d_org_bound_emp")),
            ("d_pca", series(c, "d_pca")),
            ("d_pca bound", series(c, "d_pca_bound")),
            ("d_pca bound (emp)", series(c, "d_pca_bound_emp")),
        ],
    );
    let reduced: Vec<(f64, f64)> = c
        .iter()
        .filter_map(|cell| {
            Some((
                cell.n as f64,
                cell.mean("t_reduce_ms")? + cell.mean("t_reduced_kmeans_ms")?,
            ))
        })
        .collect();
    let runtimes = line_chart(
        "Running time (ms)",
        "N",
        &[("k-means on V", series(c, "t_full_ms")), ("PCA + k-means", reduced)],
    );
    (distances, runtimes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes the rows (`trials.csv` or `trials.json`), `summary.json`, and
/// with `plots` the two SVG charts. Returns the written paths.
pub fn write_outputs(dir: &Path, result: &SweepResult, format: Format, plots: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = Vec::new();
    let rows = match format {
        Format::Csv => {
            let path = dir.join("trials.csv");
            let file = fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
            write_csv(std::io::BufWriter::new(file), &result.records)?;
            path
        }
        Format::Json => {
            let path = dir.join("trials.json");
            let text = serde_json::to_string_pretty(&result.records).map_err(|e| HarnessError::json(&path, e))?;
            fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
            path
        }
    };
    written.push(rows);
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary_json(result)).map_err(|e| HarnessError::json(&path, e))?;
    fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    written.push(path);
    if plots {
        let (d, t) = sweep_charts(result);
        for (name, svg) in [("distances.svg", d), ("runtimes.svg", t)] {
            let path = dir.join(name);
            fs::write(&path, svg).map_err(|e| HarnessError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
