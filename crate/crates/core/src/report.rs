//! The machine-readable outcome of a run.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::MeasureMatrix;
use crate::rational::{self, to_decimal, Rational};
use crate::verify::{run_check, CheckKind, CheckOutcome, Status, VerifyOptions};
use crate::workspace::Workspace;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BREAKDOWN: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Pass,
    Fail,
    Breakdown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub q: usize,
    pub p: usize,
    pub depth: usize,
    pub extended_depth: usize,
    pub seed: u64,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown_index: Option<usize>,
    /// Pivot that vanished past the target depth; the recurrence checks
    /// are then skipped but the families are complete.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub late_breakdown_index: Option<usize>,
    /// `H` on the target depth; empty after a breakdown.
    #[serde(with = "rational::serde_vec")]
    pub h: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_decimal: Option<Vec<String>>,
    pub checks: Vec<CheckOutcome>,
    /// Wall-clock milliseconds per check. Off by default so reruns compare
    /// byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            RunStatus::Pass => EXIT_PASS,
            RunStatus::Fail => EXIT_CHECK_FAILED,
            RunStatus::Breakdown => EXIT_BREAKDOWN,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub verify: VerifyOptions,
    pub render_decimal: bool,
    pub timing: bool,
}

/// Builds the workspace and runs `checks`. A breakdown becomes a report
/// status; any other build error is returned.
pub fn run(
    measures: MeasureMatrix,
    depth: usize,
    checks: &[CheckKind],
    opts: &RunOptions,
) -> Result<(Report, Option<Workspace>)> {
    run_perturbed(measures, depth, &[], checks, opts)
}

pub fn run_perturbed(
    measures: MeasureMatrix,
    depth: usize,
    perturb: &[(usize, usize, Rational)],
    checks: &[CheckKind],
    opts: &RunOptions,
) -> Result<(Report, Option<Workspace>)> {
    let (q, p) = (measures.q(), measures.p());
    let extended_depth = crate::recurrence::required_depth(depth, q, p);
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        q,
        p,
        depth,
        extended_depth,
        seed: opts.verify.seed,
        status: RunStatus::Pass,
        breakdown: None,
        breakdown_index: None,
        late_breakdown_index: None,
        h: Vec::new(),
        h_decimal: None,
        checks: Vec::new(),
        timing_ms: None,
    };
    let ws = match Workspace::build_perturbed(measures, depth, perturb) {
        Ok(ws) => ws,
        Err(Error::Breakdown { index }) => {
            let msg = Error::Breakdown { index }.to_string();
            report.status = RunStatus::Breakdown;
            report.breakdown_index = Some(index);
            report.checks = checks
                .iter()
                .map(|&k| CheckOutcome {
                    name: k,
                    status: Status::Skipped,
                    reason: Some(msg.clone()),
                    checked: 0,
                    unchecked: 0,
                    violation_count: 0,
                    violations: Vec::new(),
                })
                .collect();
            report.breakdown = Some(msg);
            return Ok((report, None));
        }
        Err(e) => return Err(e),
    };
    report.extended_depth = ws.factorization.depth();
    report.late_breakdown_index = ws.late_breakdown;
    report.h = ws.factorization.h[..depth].to_vec();
    if opts.render_decimal {
        report.h_decimal = Some(report.h.iter().map(to_decimal).collect());
    }
    let timed: Vec<(CheckOutcome, u128)> = checks
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let out = run_check(&ws, k, &opts.verify);
            (out, start.elapsed().as_millis())
        })
        .collect();
    if opts.timing {
        report.timing_ms = Some(timed.iter().map(|(o, t)| (o.name.to_string(), *t)).collect());
    }
    report.checks = timed.into_iter().map(|(o, _)| o).collect();
    if report.checks.iter().any(CheckOutcome::failed) {
        report.status = RunStatus::Fail;
    }
    Ok((report, Some(ws)))
}
