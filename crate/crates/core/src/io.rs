//! Plain-text formats: CSV tables with 17 significant digits and JSON with the
//! same float precision and a fixed key order.

use crate::circle_ot::{AlphaSolution, PeriodicDensity};
use crate::eit::{InversionRun, MeasurementSet};
use crate::fem_disk::DiskMesh;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Name of the marker left in an output directory when a run fails.
pub const FAILURE_MARKER: &str = "FAILED";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}, row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Float with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0.0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Pretty printer that writes floats with 17 significant digits.
struct Precise(serde_json::ser::PrettyFormatter<'static>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + std::io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> std::io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, v: f64) -> std::io::Result<()> {
        w.write_all(fmt_f64(v).as_bytes())
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Pretty JSON with fields in declaration order and 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(Default::default()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// Numeric rows of a CSV file. A first line that does not parse is taken as
/// a header; blank lines are skipped. Row numbers in errors are 1-based file
/// lines.
pub fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>, IoError> {
    let text = read_text(path)?;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if n == 0 => continue,
            Err(e) => {
                return Err(IoError::Parse {
                    path: path.to_path_buf(),
                    row: n + 1,
                    message: format!("{e} in '{line}'"),
                })
            }
        }
    }
    Ok(rows)
}

/// One value per line.
pub fn read_column(path: &Path) -> Result<Vec<f64>, IoError> {
    let rows = read_csv_rows(path)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() == 1 {
                Ok(r[0])
            } else {
                Err(IoError::Parse {
                    path: path.to_path_buf(),
                    row: i + 1,
                    message: format!("expected one column, found {}", r.len()),
                })
            }
        })
        .collect()
}

pub fn write_column(path: &Path, header: Option<&str>, values: &[f64]) -> Result<(), IoError> {
    let mut s = String::with_capacity(values.len() * 24);
    if let Some(h) = header {
        s.push_str(h);
        s.push('\n');
    }
    for v in values {
        s.push_str(&fmt_f64(*v));
        s.push('\n');
    }
    write_text(path, &s)
}

/// Header row followed by rows of floats.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<(), IoError> {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    write_text(path, &s)
}

/// Density samples, one per line, without header.
pub fn write_density(path: &Path, values: &[f64]) -> Result<(), IoError> {
    write_column(path, None, values)
}

pub fn read_density_values(path: &Path) -> Result<Vec<f64>, IoError> {
    read_column(path)
}

/// Reads and validates a density; invalid samples are reported by file row.
pub fn read_density(path: &Path) -> Result<PeriodicDensity, IoError> {
    let values = read_density_values(path)?;
    PeriodicDensity::new(values).map_err(|e| {
        let row = match e {
            crate::OtError::NonPositive { index, .. } | crate::OtError::BelowFloor { index, .. } => index + 1,
            _ => 0,
        };
        IoError::Parse {
            path: path.to_path_buf(),
            row,
            message: e.to_string(),
        }
    })
}

pub fn write_alpha_solution(path: &Path, sol: &AlphaSolution) -> Result<(), IoError> {
    write_json(path, sol)
}

/// `nodes.csv`, `triangles.csv` and `boundary.csv` in `dir`.
pub fn write_mesh(dir: &Path, mesh: &DiskMesh) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_table(&dir.join("nodes.csv"), &["x", "y"], mesh.nodes.iter().map(|p| p.to_vec()))?;
    let mut tri = String::from("i,j,k\n");
    for t in &mesh.triangles {
        let _ = writeln!(tri, "{},{},{}", t[0], t[1], t[2]);
    }
    write_text(&dir.join("triangles.csv"), &tri)?;
    let mut b = String::from("node,theta,weight\n");
    for ((i, t), w) in mesh.boundary.iter().zip(&mesh.boundary_angles).zip(&mesh.boundary_weights) {
        let _ = writeln!(b, "{i},{},{}", fmt_f64(*t), fmt_f64(*w));
    }
    write_text(&dir.join("boundary.csv"), &b)
}

#[derive(Serialize, serde::Deserialize)]
struct MeasurementHeader {
    eps: f64,
    seed: u64,
    noise_std: f64,
    mesh_id: String,
    data_mesh_id: String,
    n_cur: usize,
    rng: String,
}

fn pattern_table(path: &Path, mesh: &DiskMesh, traces: &[Vec<f64>]) -> Result<(), IoError> {
    let mut header = vec!["theta".to_string()];
    for n in 1..=traces.len() / 2 {
        header.push(format!("sin{n}"));
        header.push(format!("cos{n}"));
    }
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..mesh.boundary_len()).map(|i| {
        std::iter::once(mesh.boundary_angles[i])
            .chain(traces.iter().map(|t| t[i]))
            .collect()
    });
    write_table(path, &h, rows)
}

/// `measurements.csv` (noisy), `clean.csv` and `measurements.json` in `dir`.
pub fn write_measurements(dir: &Path, mesh: &DiskMesh, data: &MeasurementSet) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    pattern_table(&dir.join("measurements.csv"), mesh, &data.traces)?;
    pattern_table(&dir.join("clean.csv"), mesh, &data.clean)?;
    write_json(
        &dir.join("measurements.json"),
        &MeasurementHeader {
            eps: data.eps,
            seed: data.seed,
            noise_std: data.noise_std,
            mesh_id: data.mesh_id.clone(),
            data_mesh_id: data.data_mesh_id.clone(),
            n_cur: data.n_cur,
            rng: data.rng.clone(),
        },
    )
}

fn read_pattern_table(path: &Path) -> Result<Vec<Vec<f64>>, IoError> {
    let rows = read_csv_rows(path)?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols < 2 || rows.iter().any(|r| r.len() != cols) {
        return Err(IoError::Parse {
            path: path.to_path_buf(),
            row: 0,
            message: "ragged or empty table".into(),
        });
    }
    Ok((1..cols).map(|c| rows.iter().map(|r| r[c]).collect()).collect())
}

pub fn read_measurements(dir: &Path) -> Result<MeasurementSet, IoError> {
    let header: MeasurementHeader = serde_json::from_str(&read_text(&dir.join("measurements.json"))?)?;
    let traces = read_pattern_table(&dir.join("measurements.csv"))?;
    let clean_path = dir.join("clean.csv");
    let clean = if clean_path.exists() {
        read_pattern_table(&clean_path)?
    } else {
        traces.clone()
    };
    Ok(MeasurementSet {
        traces,
        clean,
        eps: header.eps,
        seed: header.seed,
        noise_std: header.noise_std,
        mesh_id: header.mesh_id,
        data_mesh_id: header.data_mesh_id,
        n_cur: header.n_cur,
        rng: header.rng,
    })
}

#[derive(Serialize)]
struct TraceEntry {
    iteration: usize,
    phi: f64,
    step: f64,
    misfit: crate::eit::Misfit,
    reference: f64,
    h1_step_sq: f64,
    backtracks: usize,
}

/// Writes `sigma_XXXX.csv` per iterate, `trace.json` and `summary.json`.
pub fn write_run(dir: &Path, run: &InversionRun, summary: &impl Serialize) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (k, s) in run.sigmas.iter().enumerate() {
        write_column(&dir.join(format!("sigma_{k:04}.csv")), Some("sigma"), s)?;
    }
    let mut trace = vec![TraceEntry {
        iteration: 0,
        phi: run.initial_value,
        step: run.config.s_max,
        misfit: run.initial_misfit,
        reference: run.initial_value,
        h1_step_sq: 0.0,
        backtracks: 0,
    }];
    trace.extend(run.records.iter().map(|r| TraceEntry {
        iteration: r.iteration,
        phi: r.value,
        step: r.step,
        misfit: r.misfit,
        reference: r.reference,
        h1_step_sq: r.h1_step_sq,
        backtracks: r.backtracks,
    }));
    write_json(&dir.join("trace.json"), &trace)?;
    write_json(&dir.join("summary.json"), summary)
}

/// Leaves a marker so a failed run directory is never mistaken for a result.
pub fn write_failure_marker(dir: &Path, message: &str) {
    let _ = fs::create_dir_all(dir);
    let _ = fs::write(dir.join(FAILURE_MARKER), format!("{message}\n"));
}
