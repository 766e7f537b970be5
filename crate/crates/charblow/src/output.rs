//! Writers for `report.json`, `monitor.csv`, `snapshots.csv` and sweep tables.
//!
//! Floats are written in Rust's shortest round-trip form, so identical runs
//! give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use charblow_core::SystemSpec;

use crate::error::Result;
use crate::experiment::Outcome;

/// Formats an optional float; missing and non-finite values are empty.
pub fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => x.to_string(),
        _ => String::new(),
    }
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Writes every enabled artefact of a run into `dir`.
pub fn write_outcome(dir: &Path, out: &Outcome, sys: &SystemSpec, monitor: bool, snapshots: bool, max_snapshots: usize) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("report.json"), &out.report)?;
    if monitor {
        write_monitor(&dir.join("monitor.csv"), out)?;
    }
    if snapshots {
        write_snapshots(&dir.join("snapshots.csv"), out, sys, max_snapshots)?;
    }
    Ok(())
}

/// `t,W,V,U,G,S,J,calW`, one row per snapshot; `calW` is empty where the
/// distinguished characteristic is not traced.
pub fn write_monitor(path: &Path, out: &Outcome) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "W", "V", "U", "G", "S", "J", "calW"])?;
    if let Some(m) = &out.monitor {
        for q in 0..m.len() {
            let t = m.times[q];
            let calw = out.calw.as_ref().and_then(|(ts, ws)| {
                ts.iter().position(|&s| s == t).map(|p| ws[p])
            });
            w.write_record([
                t.to_string(),
                m.w[q].to_string(),
                m.v[q].to_string(),
                m.u[q].to_string(),
                m.g[q].to_string(),
                m.s[q].to_string(),
                m.j[q].to_string(),
                fmt_opt(calw),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Evenly spaced snapshot indices, always including the first and last.
pub fn pick_snapshots(count: usize, max: usize) -> Vec<usize> {
    if count == 0 || max == 0 {
        return Vec::new();
    }
    if count <= max {
        return (0..count).collect();
    }
    if max == 1 {
        return vec![count - 1];
    }
    let mut idx: Vec<usize> = (0..max).map(|j| (j * (count - 1) + (max - 1) / 2) / (max - 1)).collect();
    idx.dedup();
    idx
}

/// `t,x,u_0..,w_0..` with `w_i = ℓ_i(u)·u_x`; `w_i` is empty where the
/// eigenframe is unavailable.
pub fn write_snapshots(path: &Path, out: &Outcome, sys: &SystemSpec, max: usize) -> Result<()> {
    let n = sys.n();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string(), "x".to_string()];
    header.extend((0..n).map(|i| format!("u{i}")));
    header.extend((0..n).map(|i| format!("w{i}")));
    w.write_record(&header)?;
    if let Some(traj) = &out.trajectory {
        let mut row = Vec::with_capacity(2 + 2 * n);
        for q in pick_snapshots(traj.snapshots.len(), max) {
            let s = &traj.snapshots[q];
            for node in 0..traj.grid.nodes() {
                let u = &s.u[node * n..(node + 1) * n];
                let ux = &s.ux[node * n..(node + 1) * n];
                row.clear();
                row.push(s.t.to_string());
                row.push(traj.grid.x(node).to_string());
                row.extend(u.iter().map(|v| v.to_string()));
                match sys.eigenframe(u) {
                    Ok(f) => row.extend(
                        f.left.iter().map(|l| l.iter().zip(ux).map(|(a, b)| a * b).sum::<f64>().to_string()),
                    ),
                    Err(_) => row.extend((0..n).map(|_| String::new())),
                }
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes a header and rows of pre-formatted fields.
pub fn write_table(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a table to stdout.
pub fn print_table(header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let mut w = csv::Writer::from_writer(&mut lock);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    drop(w);
    lock.flush()?;
    Ok(())
}
