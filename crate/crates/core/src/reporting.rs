//! Stable on-disk formats: sweep CSVs, density-field JSON and run manifests.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{DensityField, PointEstimate, SweepReport, SweepRow};

pub const SWEEP_HEADER: &str = "r,estimate,stderr,reference,abs_error";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a sweep as CSV. Absent references leave their cells empty.
pub fn write_sweep_csv(report: &SweepReport, path: &Path) -> Result<()> {
    fs::write(path, sweep_csv_string(report)).map_err(io_err(path))
}

/// The exact bytes [`write_sweep_csv`] writes.
pub fn sweep_csv_string(report: &SweepReport) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in &report.rows {
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            num(row.r),
            num(row.estimate.value),
            num(row.estimate.stderr),
            opt(row.reference),
            opt(row.abs_error),
        ));
    }
    out
}

/// Inverse of [`write_sweep_csv`]. Metadata and replicate counts are not
/// part of the format and come back empty.
pub fn read_sweep_csv(path: &Path) -> Result<SweepReport> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == SWEEP_HEADER => {}
        Some((_, h)) => return Err(parse_err(1, format!("expected header `{SWEEP_HEADER}`, found `{h}`"))),
        None => return Err(parse_err(1, "missing header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.trim_end().split(',').collect();
        if cells.len() != 5 {
            return Err(parse_err(lineno, format!("expected 5 fields, found {}", cells.len())));
        }
        let req = |k: usize| -> Result<f64> {
            cells[k]
                .parse::<f64>()
                .map_err(|e| parse_err(lineno, format!("column {}: {e}", k + 1)))
        };
        let opt = |k: usize| -> Result<Option<f64>> {
            if cells[k].is_empty() {
                Ok(None)
            } else {
                req(k).map(Some)
            }
        };
        rows.push(SweepRow {
            r: req(0)?,
            estimate: PointEstimate {
                value: req(1)?,
                stderr: req(2)?,
                replicates: 0,
            },
            reference: opt(3)?,
            abs_error: opt(4)?,
        });
    }
    Ok(SweepReport {
        rows,
        meta: Default::default(),
    })
}

/// Write a density field as pretty-printed JSON.
pub fn write_field_json(field: &DensityField, path: &Path) -> Result<()> {
    write_json(field, path)
}

pub fn read_field_json(path: &Path) -> Result<DensityField> {
    read_json(path)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(io_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Everything needed to regenerate a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    /// The command that produced the outputs.
    pub command: String,
    /// The full run configuration as it was parsed.
    pub config: serde_json::Value,
    pub seed: u64,
    /// RFC 3339 wall-clock time of the run; not an input.
    pub timestamp: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn row(r: f64, v: f64, reference: Option<f64>) -> SweepRow {
        SweepRow::new(
            r,
            PointEstimate {
                value: v,
                stderr: 0.1 * v,
                replicates: 0,
            },
            reference,
        )
    }

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_sweep_csv(&SweepReport::default(), &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), format!("{SWEEP_HEADER}\n"));
        assert!(read_sweep_csv(&p).unwrap().rows.is_empty());
    }

    #[test]
    fn rows_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let rep = SweepReport {
            rows: vec![row(0.2, 1.0 / 3.0, Some(1.0)), row(0.1, 0.951_625_819, None)],
            meta: Default::default(),
        };
        write_sweep_csv(&rep, &p).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(2).unwrap().ends_with(",,"));
        assert_eq!(read_sweep_csv(&p).unwrap(), rep);
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        fs::write(&p, format!("{SWEEP_HEADER}\n0.1,1,0,,\n0.05,x,0,,\n")).unwrap();
        match read_sweep_csv(&p).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        fs::write(&p, "r,estimate\n").unwrap();
        assert!(read_sweep_csv(&p).is_err());
    }

    #[test]
    fn field_round_trips_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.json");
        let f = DensityField {
            region: Window::rect(0.0, 0.0, 1.0, 1.0),
            shape: [1, 1],
            r: 0.1,
            replicates: 7,
            values: vec![0.1 + 0.2],
            stderrs: vec![1e-300],
        };
        write_field_json(&f, &p).unwrap();
        assert_eq!(read_field_json(&p).unwrap(), f);
    }

    #[test]
    fn missing_file_reports_path() {
        let e = read_sweep_csv(Path::new("/nonexistent/x.csv")).unwrap_err();
        assert!(e.to_string().contains("/nonexistent/x.csv"), "{e}");
    }
}
