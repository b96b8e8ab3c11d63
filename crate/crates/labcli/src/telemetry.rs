//! Telemetry CSV: fixed column order, 17 significant digits, locale-free.
//!
//! The `wall_ns` column is pinned to zero so that reruns with the same seed
//! produce byte-identical files; real timings go to stderr and never into
//! output artifacts.

use anyhow::{bail, Context, Result};

pub const CSV_HEADER: &str =
    "experiment,k,f_hat,gap,strong_term,c_k,s_k,beta_k,general_bound,closed_form_bound,cert_residual,wall_ns";

#[derive(Clone, Debug)]
pub struct TelemetryRow {
    pub experiment: String,
    pub k: usize,
    pub f_hat: f64,
    pub gap: f64,
    pub strong_term: f64,
    pub c_k: f64,
    pub s_k: f64,
    pub beta_k: f64,
    pub general_bound: f64,
    pub closed_form_bound: f64,
    pub cert_residual: f64,
    pub wall_ns: u64,
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv(rows: &[TelemetryRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 128 + 64);
    out.push_str("# schema=1\n");
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.k,
            fmt(r.f_hat),
            fmt(r.gap),
            fmt(r.strong_term),
            fmt(r.c_k),
            fmt(r.s_k),
            fmt(r.beta_k),
            fmt(r.general_bound),
            fmt(r.closed_form_bound),
            fmt(r.cert_residual),
            r.wall_ns,
        ));
    }
    out
}

fn parse(v: &str) -> Result<f64> {
    Ok(match v {
        "nan" => f64::NAN,
        "inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => v.parse::<f64>().context("bad float field")?,
    })
}

pub fn read_csv(text: &str) -> Result<Vec<TelemetryRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.starts_with("# schema=1") => {}
        other => bail!("missing schema header, got {other:?}"),
    }
    match lines.next() {
        Some(l) if l == CSV_HEADER => {}
        other => bail!("unexpected column header, got {other:?}"),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 12 {
            bail!("expected 12 fields, got {}", f.len());
        }
        rows.push(TelemetryRow {
            experiment: f[0].to_string(),
            k: f[1].parse()?,
            f_hat: parse(f[2])?,
            gap: parse(f[3])?,
            strong_term: parse(f[4])?,
            c_k: parse(f[5])?,
            s_k: parse(f[6])?,
            beta_k: parse(f[7])?,
            general_bound: parse(f[8])?,
            closed_form_bound: parse(f[9])?,
            cert_residual: parse(f[10])?,
            wall_ns: f[11].parse()?,
        });
    }
    Ok(rows)
}
