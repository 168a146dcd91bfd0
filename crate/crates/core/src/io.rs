//! File formats: CSV tables, JSON reports and PPM heatmaps, all written
//! atomically.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classical::{ConvergenceReport, TestFunctional};
use crate::error::{Error, Result};
use crate::wigner::{CurveSample, WignerField};

/// Formats a float with 17 significant digits, enough to round-trip binary64.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and an atomic rename, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

fn ensure_finite(what: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    match values.into_iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::NonFinite(format!("{what} contains {v}"))),
        None => Ok(()),
    }
}

fn csv_table<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        ensure_finite("table row", row)?;
        w.write_record(row.map(format_f64)).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn read_table<const N: usize>(header: [&str; N], data: &[u8]) -> Result<Vec<[f64; N]>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let found = r.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Format(format!("expected header {}, found {}", header.join(","), found.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        if rec.len() != N {
            return Err(Error::Format(format!("row {} has {} fields, expected {N}", k + 1, rec.len())));
        }
        let mut row = [0.0; N];
        for (slot, field) in row.iter_mut().zip(rec.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("row {}: cannot parse {field:?}", k + 1)))?;
        }
        out.push(row);
    }
    Ok(out)
}

/// `X,P,W` table of a field, X-major with P varying fastest.
pub fn field_csv(field: &WignerField) -> Result<Vec<u8>> {
    let g = field.grid;
    let rows = (0..g.nx).flat_map(move |i| (0..g.np).map(move |j| (i, j)));
    csv_table(["X", "P", "W"], rows.map(|(i, j)| [g.x(i), g.p(j), field.value(i, j)]))
}

/// Parses a table written by [`field_csv`] into `(X, P, W)` triples.
pub fn read_field_csv(data: &[u8]) -> Result<Vec<[f64; 3]>> {
    read_table(["X", "P", "W"], data)
}

/// `r,pi_hbar_W` table of a scaled-energy curve.
pub fn curve_csv(samples: &[CurveSample]) -> Result<Vec<u8>> {
    csv_table(["r", "pi_hbar_W"], samples.iter().map(|s| [s.r, s.value]))
}

pub fn read_curve_csv(data: &[u8]) -> Result<Vec<CurveSample>> {
    Ok(read_table(["r", "pi_hbar_W"], data)?.into_iter().map(|[r, value]| CurveSample { r, value }).collect())
}

/// One row of a joint exact/semiclassical evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub x: f64,
    pub p: f64,
    pub w_exact: f64,
    pub w_wkb: f64,
}

impl CompareRow {
    pub fn abs_diff(&self) -> f64 {
        (self.w_exact - self.w_wkb).abs()
    }
}

pub fn compare_csv(rows: &[CompareRow]) -> Result<Vec<u8>> {
    csv_table(
        ["X", "P", "W_exact", "W_wkb", "abs_diff"],
        rows.iter().map(|r| [r.x, r.p, r.w_exact, r.w_wkb, r.abs_diff()]),
    )
}

pub fn read_compare_csv(data: &[u8]) -> Result<Vec<[f64; 5]>> {
    read_table(["X", "P", "W_exact", "W_wkb", "abs_diff"], data)
}

/// Provenance block attached to JSON documents unless suppressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub grid: serde_json::Value,
    pub versions: Versions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub package: String,
    pub format: u32,
}

impl Versions {
    pub fn current() -> Self {
        Self { package: env!("CARGO_PKG_VERSION").to_string(), format: 1 }
    }
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    e_clas: f64,
    rows: &'a [crate::classical::ConvergenceRow],
    cases: &'a [crate::classical::CaseInfo],
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

/// JSON rendering of a convergence report. Aborts on NaN or infinity.
pub fn report_json(report: &ConvergenceReport, with_meta: bool) -> Result<Vec<u8>> {
    ensure_finite("report", std::iter::once(report.e_clas).chain(report.rows.iter().flat_map(|r| {
        [r.hbar, r.quantum, r.classical, r.abs_err, r.boundary_ratio]
    })))?;
    ensure_finite("report", report.cases.iter().map(|c| c.shell_amplitude))?;
    let metadata = with_meta.then(|| Metadata {
        grid: serde_json::Value::Array(
            report
                .cases
                .iter()
                .map(|c| serde_json::json!({ "n": c.n, "window": c.window, "grids": c.grids }))
                .collect(),
        ),
        versions: Versions::current(),
    });
    let doc = ReportDocument { e_clas: report.e_clas, rows: &report.rows, cases: &report.cases, metadata };
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct FieldDocument<'a> {
    method: &'a str,
    state: &'a str,
    grid: crate::wigner::PhaseGrid,
    /// X-major, P fastest.
    values: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

/// JSON rendering of a sampled field. Aborts on NaN or infinity.
pub fn field_json(field: &WignerField, with_meta: bool) -> Result<Vec<u8>> {
    ensure_finite("field", field.values.iter().copied())?;
    let metadata = with_meta.then(|| Metadata {
        grid: serde_json::to_value(field.grid).unwrap_or(serde_json::Value::Null),
        versions: Versions::current(),
    });
    let doc = FieldDocument {
        method: field.method.as_str(),
        state: &field.state,
        grid: field.grid,
        values: &field.values,
        metadata,
    };
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// Parses a JSON array of test functionals.
pub fn read_functionals(data: &[u8]) -> Result<Vec<TestFunctional>> {
    let fs: Vec<TestFunctional> = serde_json::from_slice(data).map_err(|e| Error::Format(e.to_string()))?;
    for f in &fs {
        f.validate()?;
    }
    Ok(fs)
}

/// Diverging colour for `t` in `[-1, 1]`: blue at -1, white at 0, red at +1.
pub fn diverging_rgb(t: f64) -> [u8; 3] {
    let t = t.clamp(-1.0, 1.0);
    let fade = |s: f64| (255.0 * (1.0 - s)).round() as u8;
    if t >= 0.0 {
        [255, fade(t), fade(t)]
    } else {
        [fade(-t), fade(-t), 255]
    }
}

/// Binary PPM (P6) heatmap; X runs left to right, P bottom to top. Colours
/// are scaled to the field's own `max |W|`.
pub fn field_ppm(field: &WignerField) -> Result<Vec<u8>> {
    ensure_finite("field", field.values.iter().copied())?;
    let (nx, np) = (field.grid.nx, field.grid.np);
    let scale = field.max_abs();
    let mut out = format!("P6\n{nx} {np}\n255\n").into_bytes();
    out.reserve(3 * nx * np);
    for row in (0..np).rev() {
        for i in 0..nx {
            let t = if scale > 0.0 { field.value(i, row) / scale } else { 0.0 };
            out.extend_from_slice(&diverging_rgb(t));
        }
    }
    Ok(out)
}
