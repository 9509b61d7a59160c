//! Tables in and out.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! CSV this module emits reads back to the identical `f64`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use syn2real::Observation;

use crate::error::{CliError, Result};

/// Reads an observation table with header columns `n`, `s`, `error` and an
/// optional `group`, in any order.
pub fn read_observations(path: &Path) -> Result<Vec<Observation>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let missing: Vec<&str> = ["n", "s", "error"].into_iter().filter(|c| column(c).is_none()).collect();
    if !missing.is_empty() {
        return Err(CliError::table(path, 1, format!("missing column(s) {}", missing.join(", "))));
    }
    let (cn, cs, ce) = (column("n").unwrap(), column("s").unwrap(), column("error").unwrap());
    let cg = column("group");

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize, name: &str| -> Result<&str> {
            record
                .get(i)
                .filter(|v| !v.is_empty())
                .ok_or_else(|| CliError::table(path, line, format!("empty `{name}`")))
        };
        let n = parse_count(cell(cn, "n")?).ok_or_else(|| CliError::table(path, line, format!("`n` is not a positive integer: {:?}", &record[cn])))?;
        let s = parse_count(cell(cs, "s")?).ok_or_else(|| CliError::table(path, line, format!("`s` is not a positive integer: {:?}", &record[cs])))?;
        let raw = cell(ce, "error")?;
        let error: f64 = raw
            .parse()
            .map_err(|_| CliError::table(path, line, format!("`error` is not a number: {raw:?}")))?;
        if !(error > 0.0 && error.is_finite()) {
            return Err(CliError::table(path, line, format!("`error` must be positive and finite, got {raw}")));
        }
        let group = cg.and_then(|i| record.get(i)).unwrap_or("");
        let obs = Observation::new(n, s, error, group).map_err(|e| CliError::table(path, line, e.to_string()))?;
        out.push(obs);
    }
    if out.is_empty() {
        return Err(CliError::table(path, 1, "no observations"));
    }
    Ok(out)
}

/// Accepts `1000` as well as integral floats such as `1e3` or `1000.0`.
fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return (v > 0).then_some(v);
    }
    let v: f64 = s.parse().ok()?;
    (v >= 1.0 && v.fract() == 0.0 && v < u64::MAX as f64).then_some(v as u64)
}

/// Reads a purely numeric matrix. A first row with any non-numeric cell is
/// taken as a header.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let parsed: Vec<Option<f64>> = record.iter().map(|c| c.parse().ok()).collect();
        if k == 0 && parsed.iter().any(Option::is_none) {
            continue;
        }
        let mut row = Vec::with_capacity(parsed.len());
        for (j, v) in parsed.into_iter().enumerate() {
            match v {
                Some(x) if x.is_finite() => row.push(x),
                _ => return Err(CliError::table(path, line, format!("column {} is not a finite number: {:?}", j + 1, &record[j]))),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::table(path, 1, "no data rows"));
    }
    Ok(rows)
}

pub fn observations_csv(obs: &[Observation]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "s", "error", "group"]).map_err(encode("observations"))?;
    for o in obs {
        w.write_record([o.n.to_string(), o.s.to_string(), o.error.to_string(), o.group.clone()])
            .map_err(encode("observations"))?;
    }
    w.into_inner().map_err(|e| CliError::Encode {
        what: "observations".into(),
        message: e.to_string(),
    })
}

/// One row of plot data; `observed` is empty on the dense curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotRow {
    pub x: f64,
    pub observed: Option<f64>,
    pub predicted: f64,
}

/// Merges the observed points with a curve sampled at `dense` log-spaced
/// abscissae between the smallest and largest observed `x`.
pub fn plot_rows<F>(points: &[(f64, f64)], dense: usize, curve: F) -> Result<Vec<PlotRow>>
where
    F: Fn(f64) -> syn2real::Result<f64>,
{
    let mut rows = Vec::with_capacity(points.len() + dense);
    for &(x, y) in points {
        rows.push(PlotRow {
            x,
            observed: Some(y),
            predicted: curve(x)?,
        });
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if dense >= 2 && lo > 0.0 && hi > lo {
        let (a, b) = (lo.ln(), hi.ln());
        for k in 0..dense {
            let x = match k {
                0 => lo,
                k if k == dense - 1 => hi,
                k => (a + (b - a) * k as f64 / (dense - 1) as f64).exp(),
            };
            rows.push(PlotRow {
                x,
                observed: None,
                predicted: curve(x)?,
            });
        }
    }
    rows.sort_by(|p, q| p.x.total_cmp(&q.x).then(q.observed.is_some().cmp(&p.observed.is_some())));
    Ok(rows)
}

pub fn plot_csv(rows: &[PlotRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "observed", "predicted"]).map_err(encode("plot"))?;
    for r in rows {
        let observed = r.observed.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([r.x.to_string(), observed, r.predicted.to_string()]).map_err(encode("plot"))?;
    }
    w.into_inner().map_err(|e| CliError::Encode {
        what: "plot".into(),
        message: e.to_string(),
    })
}

pub fn read_plot(path: &Path) -> Result<Vec<PlotRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "observed", "predicted"] {
        return Err(CliError::table(path, 1, "expected header x,observed,predicted"));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| CliError::table(path, line, format!("not a number: {:?}", &record[i])))
        };
        rows.push(PlotRow {
            x: num(0)?,
            observed: if record[1].is_empty() { None } else { Some(num(1)?) },
            predicted: num(2)?,
        });
    }
    Ok(rows)
}

/// A table of named float columns, used for grids.
pub fn columns_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(encode("table"))?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string)).map_err(encode("table"))?;
    }
    w.into_inner().map_err(|e| CliError::Encode {
        what: "table".into(),
        message: e.to_string(),
    })
}

pub fn json<T: Serialize + ?Sized>(what: &str, value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Encode {
        what: what.into(),
        message: e.to_string(),
    })?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Makes a group label safe to use inside a file name.
pub fn file_stem(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "default".into()
    } else {
        s
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(PathBuf::from(path), io),
        kind => CliError::table(path, line, format!("{kind:?}")),
    }
}

fn encode(what: &'static str) -> impl Fn(csv::Error) -> CliError {
    move |e| CliError::Encode {
        what: what.into(),
        message: e.to_string(),
    }
}
