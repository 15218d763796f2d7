//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Point;
use crate::measure::{MeasureMatrix, MeasureSpec};
use crate::rational::{self, Rational};
use crate::verify::{parse_checks, CheckKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
pub enum ExportKind {
    H,
    S,
    Sbar,
    T1,
    T2,
    #[serde(rename = "families")]
    Families,
    #[serde(rename = "moments")]
    Moments,
}

impl ExportKind {
    pub const ALL: [ExportKind; 7] = [
        ExportKind::H,
        ExportKind::S,
        ExportKind::Sbar,
        ExportKind::T1,
        ExportKind::T2,
        ExportKind::Families,
        ExportKind::Moments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExportKind::H => "H",
            ExportKind::S => "S",
            ExportKind::Sbar => "Sbar",
            ExportKind::T1 => "T1",
            ExportKind::T2 => "T2",
            ExportKind::Families => "families",
            ExportKind::Moments => "moments",
        }
    }
}

#[derive(Deserialize)]
struct PointJson(
    #[serde(with = "rational::serde_str")] Rational,
    #[serde(with = "rational::serde_str")] Rational,
);

/// A deliberate change to one moment entry, for exercising the detectors.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub row: usize,
    pub col: usize,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    q: usize,
    p: usize,
    measures: Vec<Vec<MeasureSpec>>,
    depth: usize,
    #[serde(default)]
    checks: Option<Vec<String>>,
    #[serde(default)]
    eval_points: Vec<PointJson>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    exports: Option<Vec<ExportKind>>,
    #[serde(default)]
    format: Format,
    #[serde(default)]
    perturb: Vec<Perturbation>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub measures: MeasureMatrix,
    pub depth: usize,
    /// `None` when the config leaves the choice to the subcommand.
    pub checks: Option<Vec<CheckKind>>,
    pub eval_points: Vec<Point>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub exports: Vec<ExportKind>,
    pub format: Format,
    pub perturb: Vec<Perturbation>,
}

impl RunConfig {
    pub fn q(&self) -> usize {
        self.measures.q()
    }

    pub fn p(&self) -> usize {
        self.measures.p()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
            Error::config(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        if raw.q == 0 || raw.p == 0 {
            return Err(Error::config("q/p", "must be positive"));
        }
        if raw.depth == 0 {
            return Err(Error::config("depth", "must be at least 1"));
        }
        if raw.measures.len() != raw.q {
            return Err(Error::config(
                "measures",
                format!("expected {} rows, found {}", raw.q, raw.measures.len()),
            ));
        }
        if let Some(i) = raw.measures.iter().position(|row| row.len() != raw.p) {
            return Err(Error::config(
                format!("measures[{i}]"),
                format!("expected {} entries, found {}", raw.p, raw.measures[i].len()),
            ));
        }
        let checks = match raw.checks {
            None => None,
            Some(list) => Some(parse_checks(&list.join(","))?),
        };
        let mut exports = raw.exports.unwrap_or_else(|| ExportKind::ALL.to_vec());
        exports.sort();
        exports.dedup();
        Ok(RunConfig {
            measures: MeasureMatrix::from_grid(raw.measures)?,
            depth: raw.depth,
            checks,
            eval_points: raw.eval_points.into_iter().map(|PointJson(x, y)| (x, y)).collect(),
            seed: raw.seed,
            output: raw.output,
            exports,
            format: raw.format,
            perturb: raw.perturb,
        })
    }

    pub fn perturbations(&self) -> Vec<(usize, usize, Rational)> {
        self.perturb.iter().map(|p| (p.row, p.col, p.delta.clone())).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }
}

/// `"x1,x2"` as a point.
pub fn parse_point(s: &str) -> Result<Point> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::config("point", format!("expected \"x1,x2\", got {s:?}")))?;
    Ok((rational::parse_rational(a)?, rational::parse_rational(b)?))
}
