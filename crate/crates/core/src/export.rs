//! Writes workspace matrices and families as JSON or CSV.
//!
//! Every JSON file carries `schema_version` and `kind`. CSV files are plain
//! RFC 4180 tables; the `manifest.json` written next to them carries the
//! schema version and lists every file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExportKind, Format};
use crate::error::Result;
use crate::families::Family;
use crate::index::{pair_of, Axis};
use crate::matrix::QMatrix;
use crate::poly::BiPoly;
use crate::rational::{format_rational, to_decimal, Rational};
use crate::recurrence::{Band, RecurrenceTruncation};
use crate::report::SCHEMA_VERSION;
use crate::workspace::Workspace;

#[derive(Clone, Copy, Debug, Default)]
pub struct ExportOptions {
    pub format: Format,
    pub render_decimal: bool,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn decimals(v: &[Rational]) -> Vec<String> {
    v.iter().map(to_decimal).collect()
}

fn matrix_strings(m: &QMatrix, f: fn(&Rational) -> String) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(f).collect()).collect()
}

#[derive(Serialize)]
struct VectorJson {
    schema_version: u32,
    kind: &'static str,
    len: usize,
    data: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<Vec<String>>,
}

#[derive(Serialize)]
struct MatrixJson {
    schema_version: u32,
    kind: &'static str,
    rows: usize,
    cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis: Option<usize>,
    data: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    row_bands: Option<Vec<Band>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col_bands: Option<Vec<Band>>,
}

#[derive(Serialize)]
struct ComponentJson {
    coeffs: BiPoly,
    /// `null` for the zero polynomial.
    grlex_pos: Option<usize>,
    grlex_deg: Option<[usize; 2]>,
}

#[derive(Serialize)]
struct MemberJson {
    n: usize,
    components: Vec<ComponentJson>,
}

#[derive(Serialize)]
struct FamiliesJson {
    schema_version: u32,
    kind: &'static str,
    q: usize,
    p: usize,
    len: usize,
    #[serde(rename = "A")]
    a: Vec<MemberJson>,
    #[serde(rename = "B")]
    b: Vec<MemberJson>,
}

#[derive(Serialize)]
struct ManifestJson<'a> {
    schema_version: u32,
    kind: &'static str,
    format: Format,
    files: &'a [String],
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

fn members(fam: &Family, len: usize) -> Vec<MemberJson> {
    (0..len)
        .map(|n| MemberJson {
            n,
            components: fam.polys[n]
                .iter()
                .map(|p| ComponentJson {
                    coeffs: p.clone(),
                    grlex_pos: p.grlex_pos(),
                    grlex_deg: p.grlex_deg().map(|g| [g.i, g.j]),
                })
                .collect(),
        })
        .collect()
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn matrix_csv(m: &QMatrix, f: fn(&Rational) -> String) -> Result<Vec<u8>> {
    let header: Vec<String> = std::iter::once("row".to_string()).chain((0..m.cols()).map(|c| c.to_string())).collect();
    csv_bytes(
        &header,
        (0..m.rows()).map(|r| std::iter::once(r.to_string()).chain(m.row(r).iter().map(f)).collect()),
    )
}

fn bands_csv(t: &RecurrenceTruncation) -> Result<Vec<u8>> {
    let header: Vec<String> = ["n", "row_first", "row_last", "col_first", "col_last"].map(String::from).to_vec();
    csv_bytes(
        &header,
        t.row_bands.iter().zip(&t.col_bands).enumerate().map(|(n, (r, c))| {
            vec![n.to_string(), r.first.to_string(), r.last.to_string(), c.first.to_string(), c.last.to_string()]
        }),
    )
}

fn families_csv(a: &Family, b: &Family, len: usize, render_decimal: bool) -> Result<Vec<u8>> {
    let mut header: Vec<String> = ["family", "n", "component", "position", "x_exp", "y_exp", "coeff"].map(String::from).to_vec();
    if render_decimal {
        header.push("decimal".into());
    }
    let mut rows = Vec::new();
    for (name, fam) in [("A", a), ("B", b)] {
        for n in 0..len {
            for (c, poly) in fam.polys[n].iter().enumerate() {
                for (pos, v) in poly.terms() {
                    let g = pair_of(pos);
                    let mut row = vec![
                        name.to_string(),
                        n.to_string(),
                        (c + 1).to_string(),
                        pos.to_string(),
                        (g.i - g.j).to_string(),
                        g.j.to_string(),
                        format_rational(v),
                    ];
                    if render_decimal {
                        row.push(to_decimal(v));
                    }
                    rows.push(row);
                }
            }
        }
    }
    csv_bytes(&header, rows.into_iter())
}

fn vector_csv(v: &[Rational], render_decimal: bool) -> Result<Vec<u8>> {
    let mut header = vec!["n".to_string(), "value".to_string()];
    if render_decimal {
        header.push("decimal".into());
    }
    csv_bytes(
        &header,
        v.iter().enumerate().map(|(n, x)| {
            let mut row = vec![n.to_string(), format_rational(x)];
            if render_decimal {
                row.push(to_decimal(x));
            }
            row
        }),
    )
}

fn matrix_of(ws: &Workspace, kind: ExportKind) -> Option<QMatrix> {
    let d = ws.depth;
    let f = &ws.factorization;
    match kind {
        ExportKind::S => Some(f.s.leading(d)),
        ExportKind::Sbar => Some(f.sbar.leading(d)),
        ExportKind::Moments => Some(ws.moments.data.leading(d)),
        _ => None,
    }
}

/// A file name and its bytes.
pub type ExportFile = (String, Vec<u8>);

/// File contents for one export, as `(file name, bytes)` pairs. Matrices
/// and families cover the target depth. `None` when the export needs the
/// recurrence matrices and they are unavailable.
pub fn render(ws: &Workspace, kind: ExportKind, opts: ExportOptions) -> Result<Option<Vec<ExportFile>>> {
    let d = ws.depth;
    let name = kind.name();
    let mut files = Vec::new();
    match (kind, opts.format) {
        (ExportKind::H, Format::Json) => {
            let h = &ws.factorization.h[..d];
            files.push((
                format!("{name}.json"),
                to_json(&VectorJson {
                    schema_version: SCHEMA_VERSION,
                    kind: name,
                    len: d,
                    data: strings(h),
                    decimal: opts.render_decimal.then(|| decimals(h)),
                })?,
            ));
        }
        (ExportKind::H, Format::Csv) => {
            files.push((format!("{name}.csv"), vector_csv(&ws.factorization.h[..d], opts.render_decimal)?));
        }
        (ExportKind::T1 | ExportKind::T2, format) => {
            let axis = if kind == ExportKind::T1 { Axis::X1 } else { Axis::X2 };
            let Ok(t) = ws.t(axis) else {
                return Ok(None);
            };
            match format {
                Format::Json => files.push((
                    format!("{name}.json"),
                    to_json(&MatrixJson {
                        schema_version: SCHEMA_VERSION,
                        kind: name,
                        rows: t.size(),
                        cols: t.size(),
                        axis: Some(axis.k()),
                        data: matrix_strings(&t.data, format_rational),
                        decimal: opts.render_decimal.then(|| matrix_strings(&t.data, to_decimal)),
                        row_bands: Some(t.row_bands.clone()),
                        col_bands: Some(t.col_bands.clone()),
                    })?,
                )),
                Format::Csv => {
                    files.push((format!("{name}.csv"), matrix_csv(&t.data, format_rational)?));
                    files.push((format!("{name}.bands.csv"), bands_csv(t)?));
                    if opts.render_decimal {
                        files.push((format!("{name}.decimal.csv"), matrix_csv(&t.data, to_decimal)?));
                    }
                }
            }
        }
        (ExportKind::Families, Format::Json) => {
            files.push((
                format!("{name}.json"),
                to_json(&FamiliesJson {
                    schema_version: SCHEMA_VERSION,
                    kind: name,
                    q: ws.q(),
                    p: ws.p(),
                    len: d,
                    a: members(&ws.a, d),
                    b: members(&ws.b, d),
                })?,
            ));
        }
        (ExportKind::Families, Format::Csv) => {
            files.push((format!("{name}.csv"), families_csv(&ws.a, &ws.b, d, opts.render_decimal)?));
        }
        (_, Format::Json) => {
            let m = matrix_of(ws, kind).expect("matrix export");
            files.push((
                format!("{name}.json"),
                to_json(&MatrixJson {
                    schema_version: SCHEMA_VERSION,
                    kind: name,
                    rows: m.rows(),
                    cols: m.cols(),
                    axis: None,
                    data: matrix_strings(&m, format_rational),
                    decimal: opts.render_decimal.then(|| matrix_strings(&m, to_decimal)),
                    row_bands: None,
                    col_bands: None,
                })?,
            ));
        }
        (_, Format::Csv) => {
            let m = matrix_of(ws, kind).expect("matrix export");
            files.push((format!("{name}.csv"), matrix_csv(&m, format_rational)?));
            if opts.render_decimal {
                files.push((format!("{name}.decimal.csv"), matrix_csv(&m, to_decimal)?));
            }
        }
    }
    Ok(Some(files))
}

/// Writes the requested exports and `manifest.json` into `dir`; returns the
/// written paths, manifest last.
pub fn write_exports(ws: &Workspace, kinds: &[ExportKind], dir: &Path, opts: ExportOptions) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    let mut paths = Vec::new();
    for &kind in kinds {
        for (name, bytes) in render(ws, kind, opts)?.unwrap_or_default() {
            let path = dir.join(&name);
            fs::write(&path, bytes)?;
            names.push(name);
            paths.push(path);
        }
    }
    let manifest = dir.join("manifest.json");
    fs::write(
        &manifest,
        to_json(&ManifestJson {
            schema_version: SCHEMA_VERSION,
            kind: "manifest",
            format: opts.format,
            files: &names,
        })?,
    )?;
    paths.push(manifest);
    Ok(paths)
}
