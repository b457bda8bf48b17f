//! CSV and JSON output. Floats use `{:.16e}`, which round-trips every `f64`,
//! so data files from identical configurations are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::RunArtifacts;
use super::ExperimentError;
use crate::topology::PhaseCell;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn entropy_csv(a: &RunArtifacts) -> Option<String> {
    let e = a.entropy.as_ref()?;
    let mut out = String::new();
    match &e.std {
        None => {
            out.push_str("step,entropy_bits\n");
            for (t, s) in e.mean.iter().enumerate() {
                let _ = writeln!(out, "{t},{s:.16e}");
            }
        }
        Some(std) => {
            out.push_str("step,entropy_bits,std\n");
            for (t, (s, d)) in e.mean.iter().zip(std).enumerate() {
                let _ = writeln!(out, "{t},{s:.16e},{d:.16e}");
            }
        }
    }
    Some(out)
}

pub fn distribution_csv(a: &RunArtifacts) -> Option<String> {
    let d = a.distribution.as_ref()?;
    let mut out = String::from("x,probability\n");
    for (x, p) in d.window.positions().zip(&d.probability) {
        let _ = writeln!(out, "{x},{p:.16e}");
    }
    Some(out)
}

pub fn joint_csv(a: &RunArtifacts) -> Option<String> {
    let j = a.joint.as_ref()?;
    let w = j.window();
    let n = w.n_sites();
    let mut out = String::from("i,j,probability\n");
    for (k, p) in j.values().iter().enumerate() {
        let _ = writeln!(out, "{},{},{p:.16e}", w.position(k / n), w.position(k % n));
    }
    Some(out)
}

pub fn phase_csv(a: &RunArtifacts) -> Option<String> {
    let d = a.phase.as_ref()?;
    let n = d.grid_n();
    let mut out = String::from("theta1,theta2,winding,gap\n");
    for (k, cell) in d.cells.iter().enumerate() {
        let (t1, t2) = (d.thetas[k / n], d.thetas[k % n]);
        let w = match cell {
            PhaseCell::Phase(v) => v.winding.to_string(),
            PhaseCell::Boundary { .. } => "boundary".to_string(),
        };
        let _ = writeln!(out, "{t1:.16e},{t2:.16e},{w},{:.16e}", cell.gap());
    }
    Some(out)
}

pub fn heatmap_csv(a: &RunArtifacts) -> Option<String> {
    let h = a.heatmap.as_ref()?;
    let (p1, p2) = (h.axes[0].points(), h.axes[1].points());
    let mut out = format!("{},{},entropy_bits\n", h.axes[0].param, h.axes[1].param);
    for (i, x) in p1.iter().enumerate() {
        for (j, y) in p2.iter().enumerate() {
            let _ = writeln!(out, "{x:.16e},{y:.16e},{:.16e}", h.get(i, j));
        }
    }
    Some(out)
}

/// Writes every available artifact plus `manifest.json` into `out_dir`
/// (created if missing) and returns the paths written.
pub fn write_artifacts(a: &RunArtifacts, out_dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(out_dir).map_err(io_error(out_dir))?;
    let tables = [
        ("entropy.csv", entropy_csv(a)),
        ("distribution.csv", distribution_csv(a)),
        ("joint.csv", joint_csv(a)),
        ("phase.csv", phase_csv(a)),
        ("heatmap.csv", heatmap_csv(a)),
    ];
    let mut written = Vec::new();
    let mut manifest = a.manifest.clone();
    for (name, body) in tables {
        if let Some(body) = body {
            let path = out_dir.join(name);
            fs::write(&path, body).map_err(io_error(&path))?;
            manifest.files.push(name.to_string());
            written.push(path);
        }
    }
    let path = out_dir.join("manifest.json");
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(&path, json).map_err(io_error(&path))?;
    written.push(path);
    Ok(written)
}
