//! Aggregate telemetry CSVs into a machine-readable summary.

use crate::telemetry::read_csv;
use anyhow::{Context, Result};
use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub iterations: usize,
    pub final_gap: f64,
    pub final_general_bound: f64,
    pub worst_cert_residual: f64,
    /// Worst scaled margin of `gap + strong_term` against the general bound.
    pub worst_general_margin: f64,
    /// Worst scaled margin against the closed-form bound (NaN-free rows only).
    pub worst_closed_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub experiments: Vec<ExperimentSummary>,
}

pub fn build_report(dir: &Path) -> Result<Report> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    let mut experiments = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let rows = read_csv(&text).with_context(|| format!("parsing {}", path.display()))?;
        if rows.is_empty() {
            continue;
        }
        let scaled = |lhs: f64, rhs: f64| (lhs - rhs) / 1.0_f64.max(lhs.abs()).max(rhs.abs());
        let mut worst_cert = f64::NEG_INFINITY;
        let mut worst_general = f64::NEG_INFINITY;
        let mut worst_closed = f64::NEG_INFINITY;
        for r in &rows {
            worst_cert = worst_cert.max(r.cert_residual);
            if !r.gap.is_nan() && !r.general_bound.is_nan() {
                worst_general = worst_general.max(scaled(r.gap + r.strong_term, r.general_bound));
            }
            if !r.gap.is_nan() && r.closed_form_bound.is_finite() {
                worst_closed = worst_closed.max(scaled(r.gap + r.strong_term, r.closed_form_bound));
            }
        }
        let last = rows.last().unwrap();
        experiments.push(ExperimentSummary {
            experiment: last.experiment.clone(),
            iterations: rows.len(),
            final_gap: last.gap,
            final_general_bound: last.general_bound,
            worst_cert_residual: worst_cert,
            worst_general_margin: worst_general,
            worst_closed_margin: worst_closed,
        });
    }
    Ok(Report {
        schema: 1,
        experiments,
    })
}
