//! Outcome of an exact identity check.

use serde::Serialize;

/// Detailed violations kept per report; the count is always exact.
pub const MAX_RECORDED: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub at: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    /// Conditions evaluated.
    pub checked: usize,
    /// Conditions skipped because the truncation cannot decide them.
    pub unchecked: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Records one evaluated condition.
    pub fn expect(&mut self, ok: bool, at: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(at(), detail());
        }
    }

    pub fn fail(&mut self, at: String, detail: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation { at, detail });
        }
    }

    pub fn skip(&mut self) {
        self.unchecked += 1;
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.unchecked += other.unchecked;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }
}

impl FromIterator<CheckReport> for CheckReport {
    fn from_iter<I: IntoIterator<Item = CheckReport>>(iter: I) -> Self {
        let mut out = CheckReport::new();
        for r in iter {
            out.merge(r);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_survive_truncation() {
        let mut r = CheckReport::new();
        for i in 0..100 {
            r.expect(i % 2 == 0, || i.to_string(), String::new);
        }
        assert_eq!(r.checked, 100);
        assert_eq!(r.violation_count, 50);
        assert_eq!(r.violations.len(), MAX_RECORDED);
        assert!(!r.passed());
    }

    #[test]
    fn merge_adds() {
        let mut a = CheckReport::new();
        a.expect(true, String::new, String::new);
        let mut b = CheckReport::new();
        b.skip();
        b.expect(false, || "x".into(), String::new);
        let all: CheckReport = [a, b].into_iter().collect();
        assert_eq!((all.checked, all.unchecked, all.violation_count), (2, 1, 1));
    }
}
