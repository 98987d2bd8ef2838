//! Collects earlier runs under an output root into plot-ready tables.
//! Reruns on the same inputs produce identical tables and summary.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::output::RunOutput;
use crate::CliError;

/// Header and rows.
type Table = (Vec<String>, Vec<Vec<String>>);

/// Rows of a numeric CSV keyed by the header, or `None` if the file is absent.
fn read_table(path: &Path) -> Result<Option<Table>, CliError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap_or("").split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != header.len() {
            return Err(CliError::Validation(format!("{}: ragged row {line:?}", path.display())));
        }
        rows.push(row);
    }
    Ok(Some((header, rows)))
}

fn column(header: &[String], name: &str, path: &Path) -> Result<usize, CliError> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Validation(format!("{}: missing column {name}", path.display())))
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Validation(format!("not a number: {s:?}")))
}

fn read_json(path: &Path) -> Result<Option<Value>, CliError> {
    match std::fs::read_to_string(path) {
        Ok(t) => serde_json::from_str(&t)
            .map(Some)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn report(cfg: &RunConfig, dir: Option<&Path>) -> Result<(), CliError> {
    let root = dir.unwrap_or(&cfg.output_dir);
    let mut summary = Map::new();
    let mut gap = Vec::new();
    let mut growth = Vec::new();
    let mut orbit = Vec::new();

    let scan = root.join("groundstate/scan.csv");
    if let Some((h, rows)) = read_table(&scan)? {
        let (w, g, line) = (column(&h, "omega", &scan)?, column(&h, "gap", &scan)?, column(&h, "2pi_m_line", &scan)?);
        let mut max_rel = 0.0_f64;
        for r in &rows {
            let rel = number(&r[g])? / number(&r[line])?;
            max_rel = max_rel.max(rel);
            gap.push(format!("{},{},{rel:.6e}", r[w], r[g]));
        }
        summary.insert("groundstate".into(), json!({ "frequencies": rows.len(), "max_relative_gap": max_rel }));
    }

    let curve = root.join("spectrum/growth.csv");
    if let Some((h, rows)) = read_table(&curve)? {
        let (w, a, l) = (column(&h, "omega", &curve)?, column(&h, "a", &curve)?, column(&h, "lambda0", &curve)?);
        let mut peak = (0.0, 0.0_f64);
        for r in &rows {
            let lambda = number(&r[l])?;
            if lambda > peak.1 {
                peak = (number(&r[a])?, lambda);
            }
            growth.push(format!("spectrum,{},{},{}", r[w], r[a], r[l]));
        }
        summary.insert("spectrum".into(), json!({ "points": rows.len(), "peak_a": peak.0, "peak_lambda0": peak.1 }));
    }

    let tscan = root.join("threshold/threshold_scan.csv");
    if let Some((h, rows)) = read_table(&tscan)? {
        let (w, l) = (column(&h, "omega", &tscan)?, column(&h, "lambda0", &tscan)?);
        for r in &rows {
            growth.push(format!("threshold,{},1,{}", r[w], r[l]));
        }
    }
    if let Some(v) = read_json(&root.join("threshold/threshold.json"))? {
        summary.insert("threshold".into(), v);
    }
    if let Some(v) = read_json(&root.join("omegastar/omegastar.json"))? {
        summary.insert("omegastar".into(), v.get("result").cloned().unwrap_or(Value::Null));
    }

    let traj = root.join("evolve/trajectory.csv");
    if let Some((h, rows)) = read_table(&traj)? {
        let (t, d, m) = (
            column(&h, "t", &traj)?,
            column(&h, "orbital_distance", &traj)?,
            column(&h, "mode1_amplitude", &traj)?,
        );
        for r in &rows {
            let amp = number(&r[m])?;
            orbit.push(format!("{},{},{},{:.6e}", r[t], r[d], r[m], amp.ln()));
        }
    }
    if let Some(v) = read_json(&root.join("evolve/trajectory.json"))? {
        summary.insert("evolve".into(), v);
    }

    if summary.is_empty() && gap.is_empty() && growth.is_empty() && orbit.is_empty() {
        return Err(CliError::Validation(format!("no earlier runs found under {}", root.display())));
    }
    let mut out = RunOutput::create(cfg)?;
    if !gap.is_empty() {
        out.lines("gap.csv", "omega,gap,relative_gap", gap)?;
    }
    if !growth.is_empty() {
        out.lines("growth.csv", "source,omega,a,lambda0", growth)?;
    }
    if !orbit.is_empty() {
        out.lines("orbit.csv", "t,orbital_distance,mode1_amplitude,log_mode1_amplitude", orbit)?;
    }
    let summary = Value::Object(summary);
    out.json("summary.json", &summary)?;
    out.finish(cfg, json!({ "inputs": root.display().to_string() }))
}
