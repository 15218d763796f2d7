//! Everything derived from one measure matrix at one target depth.

use crate::error::{Error, Result};
use crate::families::{extract_families, FamilyA, FamilyB};
use crate::gauss_borel::{factorize, Factorization};
use crate::index::Axis;
use crate::measure::{MeasureMatrix, MomentCache};
use crate::moments::{assemble_from_cache, moment_degree, MomentTruncation};
use crate::rational::Rational;
use crate::recurrence::{build_recurrence, required_depth, RecurrenceTruncation};

#[derive(Clone, Debug)]
pub struct Workspace {
    pub measures: MeasureMatrix,
    /// Target depth `D`: families and recurrence windows of this size.
    pub depth: usize,
    /// Depth of the factorization that makes the `D x D` windows exact.
    pub extended_depth: usize,
    pub cache: MomentCache,
    /// Moment truncation matching the factorization.
    pub moments: MomentTruncation,
    pub factorization: Factorization,
    /// Members `0 .. factorization.depth()`.
    pub a: FamilyA,
    pub b: FamilyB,
    /// Absent when the factorization breaks down between the target and
    /// the extended depth.
    pub t1: Option<RecurrenceTruncation>,
    pub t2: Option<RecurrenceTruncation>,
    /// Pivot index of such a late breakdown.
    pub late_breakdown: Option<usize>,
}

impl Workspace {
    pub fn build(measures: MeasureMatrix, depth: usize) -> Result<Self> {
        Self::build_perturbed(measures, depth, &[])
    }

    /// As [`Workspace::build`], with `delta` added to moment entry `(row, col)`
    /// before factorizing. The cache keeps the true moments, so checks that
    /// integrate against the measures detect the fault.
    pub fn build_perturbed(measures: MeasureMatrix, depth: usize, perturb: &[(usize, usize, Rational)]) -> Result<Self> {
        if depth == 0 {
            return Err(Error::config("depth", "must be at least 1"));
        }
        let (q, p) = (measures.q(), measures.p());
        let extended_depth = required_depth(depth, q, p);
        // pairings of two members, or of a member with a cubic test
        // polynomial, stay inside this degree
        let member_deg = moment_degree(extended_depth, q, p);
        let cache = measures.moment_cache(2 * member_deg + 4);
        let mut moments = assemble_from_cache(&measures, &cache, extended_depth)?;
        for (r, c, delta) in perturb {
            if *r >= extended_depth || *c >= extended_depth {
                return Err(Error::config(
                    "perturb",
                    format!("entry ({r},{c}) lies outside the extended depth {extended_depth}"),
                ));
            }
            moments.data[(*r, *c)] += delta;
        }
        let (factorization, late_breakdown) = match factorize(&moments.data) {
            Ok(f) => (f, None),
            // the families up to the target depth are still determined
            Err(Error::Breakdown { index }) if index >= depth => {
                (factorize(&moments.data.leading(index))?, Some(index))
            }
            Err(e) => return Err(e),
        };
        let moments = moments.leading(factorization.depth());
        let (a, b) = extract_families(&factorization, q, p);
        let (t1, t2) = match late_breakdown {
            None => (
                Some(build_recurrence(&factorization, q, p, Axis::X1, depth)?),
                Some(build_recurrence(&factorization, q, p, Axis::X2, depth)?),
            ),
            Some(_) => (None, None),
        };
        Ok(Workspace {
            measures,
            depth,
            extended_depth,
            cache,
            moments,
            factorization,
            a,
            b,
            t1,
            t2,
            late_breakdown,
        })
    }

    pub fn q(&self) -> usize {
        self.measures.q()
    }

    pub fn p(&self) -> usize {
        self.measures.p()
    }

    pub fn t(&self, axis: Axis) -> Result<&RecurrenceTruncation> {
        let t = match axis {
            Axis::X1 => &self.t1,
            Axis::X2 => &self.t2,
        };
        t.as_ref().ok_or_else(|| Error::InsufficientDepth {
            what: "recurrence matrices",
            required: self.extended_depth,
            available: self.factorization.depth(),
        })
    }
}
