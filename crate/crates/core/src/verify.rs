//! Named checks over a [`Workspace`], with seeded evaluation points.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::check::{CheckReport, Violation};
use crate::error::{Error, Result};
use crate::families::{check_biorthogonality, check_biorthogonality_matrix, check_orthogonality, validate_degree_structure};
use crate::index::Axis;
use crate::kernel::{check_abc, check_cd_grid, check_projection, check_projection_dual, check_reproduction_integral, Point};
use crate::moments::check_hankel_symmetry;
use crate::random::{monic_poly_matrix, point_pairs, points, rng};
use crate::recurrence::{check_dual_form, check_recurrences, check_recurrences_coefficients, validate_band};
use crate::workspace::Workspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Hankel,
    Degree,
    Orthogonality,
    Biorthogonality,
    Dual,
    Band,
    Recurrence,
    Reproduction,
    Projection,
    Cd,
    Abc,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Hankel,
        CheckKind::Degree,
        CheckKind::Orthogonality,
        CheckKind::Biorthogonality,
        CheckKind::Dual,
        CheckKind::Band,
        CheckKind::Recurrence,
        CheckKind::Reproduction,
        CheckKind::Projection,
        CheckKind::Cd,
        CheckKind::Abc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Hankel => "hankel",
            CheckKind::Degree => "degree",
            CheckKind::Orthogonality => "orthogonality",
            CheckKind::Biorthogonality => "biorthogonality",
            CheckKind::Dual => "dual",
            CheckKind::Band => "band",
            CheckKind::Recurrence => "recurrence",
            CheckKind::Reproduction => "reproduction",
            CheckKind::Projection => "projection",
            CheckKind::Cd => "cd",
            CheckKind::Abc => "abc",
        }
    }

    fn salt(self) -> u64 {
        CheckKind::ALL.iter().position(|&k| k == self).expect("listed") as u64 + 1
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::config("checks", format!("unknown check {s:?}")))
    }
}

impl Serialize for CheckKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Parses a comma-separated list, dropping repeats but keeping first-seen order.
pub fn parse_checks(list: &str) -> Result<Vec<CheckKind>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let k: CheckKind = part.parse()?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Fixed points used alongside the random ones.
    pub eval_points: Vec<Point>,
    /// Largest kernel index for reproduction, projection, CD and ABC.
    /// Defaults to `depth - 1`.
    pub kernel_max_n: Option<usize>,
    /// Largest member index in the recurrence check. Defaults to `depth - 1`.
    pub recurrence_max_n: Option<usize>,
    pub recurrence_points: usize,
    pub abc_pairs: usize,
    pub reproduction_pairs: usize,
    pub projection_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            eval_points: Vec::new(),
            kernel_max_n: None,
            recurrence_max_n: None,
            recurrence_points: 10,
            abc_pairs: 10,
            reproduction_pairs: 3,
            projection_points: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: CheckKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checked: usize,
    pub unchecked: usize,
    pub violation_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    fn from_report(name: CheckKind, r: CheckReport) -> Self {
        let (status, reason) = if !r.passed() {
            (Status::Fail, None)
        } else if r.checked == 0 {
            (Status::Skipped, Some("no condition inside the truncation".into()))
        } else {
            (Status::Pass, None)
        };
        CheckOutcome {
            name,
            status,
            reason,
            checked: r.checked,
            unchecked: r.unchecked,
            violation_count: r.violation_count,
            violations: r.violations,
        }
    }

    fn skipped(name: CheckKind, reason: String) -> Self {
        CheckOutcome {
            name,
            status: Status::Skipped,
            reason: Some(reason),
            checked: 0,
            unchecked: 0,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn with_fixed(mut random: Vec<Point>, fixed: &[Point]) -> Vec<Point> {
    random.extend_from_slice(fixed);
    random
}

fn fixed_pairs(fixed: &[Point]) -> Vec<(Point, Point)> {
    fixed.iter().zip(fixed.iter().cycle().skip(1)).map(|(x, y)| (x.clone(), y.clone())).take(fixed.len()).collect()
}

fn merge_all(parts: Vec<Result<CheckReport>>) -> Result<CheckReport> {
    let mut total = CheckReport::new();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

fn kernel_range(ws: &Workspace, opts: &VerifyOptions) -> std::ops::RangeInclusive<usize> {
    let last = ws.depth - 1;
    0..=opts.kernel_max_n.map_or(last, |m| m.min(last))
}

fn projection_part(ws: &Workspace, n: usize, pts: &[Point], seed: u64) -> Result<CheckReport> {
    let (q, p) = (ws.q(), ws.p());
    let mut r = rng(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut report = CheckReport::new();
    let a = ws.a.truncated(ws.depth);
    let b = ws.b.truncated(ws.depth);
    // largest position I <= 3 meeting the threshold n >= I r + r - 1
    let top = |w: usize| (n + 1).checked_sub(w).map(|s| (s / w).min(3));
    match top(p) {
        Some(i) => report.merge(check_projection(&a, &b, &ws.cache, n, &monic_poly_matrix(&mut r, p, i), pts)?),
        None => report.skip(),
    }
    match top(q) {
        Some(i) => report.merge(check_projection_dual(&a, &b, &ws.cache, n, &monic_poly_matrix(&mut r, q, i), pts)?),
        None => report.skip(),
    }
    Ok(report)
}

fn run_inner(ws: &Workspace, kind: CheckKind, opts: &VerifyOptions) -> Result<CheckReport> {
    let seed = opts.seed.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ kind.salt();
    let mut r = rng(seed);
    let d = ws.depth;
    let f = &ws.factorization;
    match kind {
        CheckKind::Hankel => merge_all(Axis::BOTH.iter().map(|&k| check_hankel_symmetry(&ws.moments, k)).collect()),
        CheckKind::Degree => Ok(validate_degree_structure(&ws.a.truncated(d), &ws.b.truncated(d))),
        CheckKind::Orthogonality => Ok(check_orthogonality(&ws.a.truncated(d), &ws.b.truncated(d), &ws.cache)),
        CheckKind::Biorthogonality => {
            let mut rep = check_biorthogonality(&ws.a, &ws.b, &ws.cache, d);
            rep.merge(check_biorthogonality_matrix(f, &ws.moments.data, d));
            Ok(rep)
        }
        CheckKind::Dual => merge_all(vec![check_dual_form(ws.t(Axis::X1)?, f), check_dual_form(ws.t(Axis::X2)?, f)]),
        CheckKind::Band => Ok([ws.t(Axis::X1)?, ws.t(Axis::X2)?].into_iter().map(validate_band).collect()),
        CheckKind::Recurrence => {
            let pts = with_fixed(points(&mut r, opts.recurrence_points), &opts.eval_points);
            let max_n = opts.recurrence_max_n.unwrap_or(d - 1);
            let parts = [ws.t(Axis::X1)?, ws.t(Axis::X2)?]
                .par_iter()
                .flat_map(|t| {
                    vec![
                        check_recurrences(t, &ws.a, &ws.b, &pts, max_n),
                        check_recurrences_coefficients(t, &ws.a, &ws.b),
                    ]
                })
                .collect();
            merge_all(parts)
        }
        CheckKind::Reproduction => {
            let mut pairs = point_pairs(&mut r, opts.reproduction_pairs);
            pairs.extend(fixed_pairs(&opts.eval_points));
            let a = ws.a.truncated(d);
            let b = ws.b.truncated(d);
            let range = kernel_range(ws, opts);
            let mut rep = check_biorthogonality_matrix(f, &ws.moments.data, range.end() + 1);
            let parts = range
                .into_par_iter()
                .map(|n| Ok(check_reproduction_integral(&a, &b, &ws.cache, n, &pairs)))
                .collect();
            rep.merge(merge_all(parts)?);
            Ok(rep)
        }
        CheckKind::Projection => {
            let pts = with_fixed(points(&mut r, opts.projection_points), &opts.eval_points);
            let parts = kernel_range(ws, opts)
                .into_par_iter()
                .map(|n| projection_part(ws, n, &pts, seed))
                .collect();
            merge_all(parts)
        }
        CheckKind::Cd => {
            let ts = [ws.t(Axis::X1)?, ws.t(Axis::X2)?];
            let jobs: Vec<(usize, usize)> = (0..2).flat_map(|k| kernel_range(ws, opts).map(move |n| (k, n))).collect();
            let parts = jobs
                .into_par_iter()
                .map(|(k, n)| match check_cd_grid(ts[k], &ws.a, &ws.b, n) {
                    // the blocks reach past the recurrence window
                    Err(Error::InsufficientDepth { .. }) => {
                        let mut rep = CheckReport::new();
                        rep.skip();
                        Ok(rep)
                    }
                    other => other,
                })
                .collect();
            merge_all(parts)
        }
        CheckKind::Abc => {
            let mut pairs = point_pairs(&mut r, opts.abc_pairs);
            pairs.extend(fixed_pairs(&opts.eval_points));
            let a = ws.a.truncated(d);
            let b = ws.b.truncated(d);
            let parts = kernel_range(ws, opts)
                .into_par_iter()
                .map(|n| check_abc(&ws.moments.data, &a, &b, n, &pairs))
                .collect();
            merge_all(parts)
        }
    }
}

pub fn run_check(ws: &Workspace, kind: CheckKind, opts: &VerifyOptions) -> CheckOutcome {
    match run_inner(ws, kind, opts) {
        Ok(rep) => CheckOutcome::from_report(kind, rep),
        Err(e) => CheckOutcome::skipped(kind, e.to_string()),
    }
}

/// Runs the checks in parallel; outcomes come back in the requested order.
pub fn run_checks(ws: &Workspace, kinds: &[CheckKind], opts: &VerifyOptions) -> Vec<CheckOutcome> {
    kinds.par_iter().map(|&k| run_check(ws, k, opts)).collect()
}
