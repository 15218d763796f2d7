//! The `q x p` matrix of measures and its exact moment oracle.
//!
//! Only moments of the measures are ever consumed, so a measure is
//! described by whatever lets us compute `∫ x^s y^t dμ` exactly: a finite
//! set of weighted atoms, a polynomial density on a rectangle, or a table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{exponents_of, pair_of, position_of_exponents};
use crate::matrix::QMatrix;
use crate::poly::BiPoly;
use crate::rational::{self, common_denominator, format_rational, parse_rational, pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
    #[serde(with = "rational::serde_str")]
    pub w: Rational,
}

/// One entry of the measure matrix. Weights may be signed.
#[allow(clippy::large_enum_variant)] // built once per config
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureSpec {
    Discrete {
        atoms: Vec<Atom>,
    },
    RectDensity {
        x1_lo: Rational,
        x1_hi: Rational,
        x2_lo: Rational,
        x2_hi: Rational,
        density: BiPoly,
    },
    MomentTable {
        max_total_deg: usize,
        moments: BTreeMap<(usize, usize), Rational>,
    },
}

/// Atom moments over common denominators: with `x = X / dx`,
/// `y = Y / dy`, `w = W / dw` the moment is
/// `sum W X^s Y^t / (dw dx^s dy^t)`, so only the final value is reduced.
fn discrete_moments(atoms: &[Atom], max_deg: usize) -> Vec<Rational> {
    let lcm = |f: &dyn Fn(&Atom) -> &Rational| {
        atoms.iter().fold(BigInt::one(), |acc, a| acc.lcm(f(a).denom()))
    };
    let (dx, dy, dw) = (lcm(&|a| &a.x), lcm(&|a| &a.y), lcm(&|a| &a.w));
    let scaled = |v: &Rational, d: &BigInt| v.numer() * (d / v.denom());
    let powers = |v: BigInt| {
        let mut out = vec![BigInt::one()];
        for e in 0..max_deg {
            let next = &out[e] * &v;
            out.push(next);
        }
        out
    };
    let xs: Vec<Vec<BigInt>> = atoms.iter().map(|a| powers(scaled(&a.x, &dx))).collect();
    let ys: Vec<Vec<BigInt>> = atoms.iter().map(|a| powers(scaled(&a.y, &dy))).collect();
    let ws: Vec<BigInt> = atoms.iter().map(|a| scaled(&a.w, &dw)).collect();
    let dxs = powers(dx);
    let dys = powers(dy);
    let per = (max_deg + 1) * (max_deg + 2) / 2;
    (0..per)
        .map(|pos| {
            let (s, t) = exponents_of(pos);
            let mut num = BigInt::zero();
            for i in 0..atoms.len() {
                num += &ws[i] * &xs[i][s] * &ys[i][t];
            }
            Rational::new(num, &dw * &dxs[s] * &dys[t])
        })
        .collect()
}

fn power_integral(lo: &Rational, hi: &Rational, e: usize) -> Rational {
    (pow(hi, e + 1) - pow(lo, e + 1)) / Rational::from_integer((e as i64 + 1).into())
}

impl MeasureSpec {
    pub fn discrete(atoms: Vec<Atom>) -> Self {
        MeasureSpec::Discrete { atoms }
    }

    pub fn rect(
        x1: (Rational, Rational),
        x2: (Rational, Rational),
        density: BiPoly,
    ) -> Result<Self> {
        if x1.0 >= x1.1 || x2.0 >= x2.1 {
            return Err(Error::InvalidMeasure(
                "rectangle bounds must satisfy lo < hi".into(),
            ));
        }
        Ok(MeasureSpec::RectDensity {
            x1_lo: x1.0,
            x1_hi: x1.1,
            x2_lo: x2.0,
            x2_hi: x2.1,
            density,
        })
    }

    /// Lebesgue measure on `[lo, hi]^2`.
    pub fn lebesgue_square(lo: Rational, hi: Rational) -> Result<Self> {
        MeasureSpec::rect((lo.clone(), hi.clone()), (lo, hi), BiPoly::one())
    }

    /// Tabulates all moments of total degree `<= max_total_deg`.
    pub fn tabulate(&self, max_total_deg: usize) -> Result<MeasureSpec> {
        let mut moments = BTreeMap::new();
        for d in 0..=max_total_deg {
            for t in 0..=d {
                moments.insert((d - t, t), self.moment(d - t, t)?);
            }
        }
        Ok(MeasureSpec::MomentTable {
            max_total_deg,
            moments,
        })
    }

    /// Largest total degree this spec can answer; `None` when unbounded.
    pub fn degree_bound(&self) -> Option<usize> {
        match self {
            MeasureSpec::MomentTable { max_total_deg, .. } => Some(*max_total_deg),
            _ => None,
        }
    }

    /// Exact `∫ x^s y^t dμ`.
    pub fn moment(&self, s: usize, t: usize) -> Result<Rational> {
        match self {
            MeasureSpec::Discrete { atoms } => Ok(atoms
                .iter()
                .map(|a| &a.w * pow(&a.x, s) * pow(&a.y, t))
                .sum()),
            MeasureSpec::RectDensity {
                x1_lo,
                x1_hi,
                x2_lo,
                x2_hi,
                density,
            } => {
                let mut acc = Rational::zero();
                for (k, c) in density.terms() {
                    let (e1, e2) = exponents_of(k);
                    acc += c
                        * power_integral(x1_lo, x1_hi, e1 + s)
                        * power_integral(x2_lo, x2_hi, e2 + t);
                }
                Ok(acc)
            }
            MeasureSpec::MomentTable {
                max_total_deg,
                moments,
            } => {
                if s + t > *max_total_deg {
                    return Err(Error::MomentOutOfRange {
                        s,
                        t,
                        max: *max_total_deg,
                    });
                }
                moments
                    .get(&(s, t))
                    .cloned()
                    .ok_or(Error::MomentOutOfRange {
                        s,
                        t,
                        max: *max_total_deg,
                    })
            }
        }
    }

    /// Every moment of total degree `<= max_deg`, in graded-lex position
    /// order. Same values as [`MeasureSpec::moment`], computed in bulk.
    pub fn moments_upto(&self, max_deg: usize) -> Vec<Option<Rational>> {
        let per = (max_deg + 1) * (max_deg + 2) / 2;
        match self {
            MeasureSpec::Discrete { atoms } => discrete_moments(atoms, max_deg)
                .into_iter()
                .map(Some)
                .collect(),
            MeasureSpec::RectDensity {
                x1_lo,
                x1_hi,
                x2_lo,
                x2_hi,
                density,
            } => {
                let extra = density.terms().map(|(k, _)| {
                    let (a, b) = exponents_of(k);
                    a.max(b)
                });
                let top = max_deg + extra.max().unwrap_or(0) + 1;
                let i1: Vec<Rational> = (0..=top).map(|e| power_integral(x1_lo, x1_hi, e)).collect();
                let i2: Vec<Rational> = (0..=top).map(|e| power_integral(x2_lo, x2_hi, e)).collect();
                (0..per)
                    .map(|pos| {
                        let (s, t) = exponents_of(pos);
                        let mut acc = Rational::zero();
                        for (k, c) in density.terms() {
                            let (e1, e2) = exponents_of(k);
                            acc += c * &i1[e1 + s] * &i2[e2 + t];
                        }
                        Some(acc)
                    })
                    .collect()
            }
            MeasureSpec::MomentTable { .. } => (0..per)
                .map(|pos| {
                    let (s, t) = exponents_of(pos);
                    self.moment(s, t).ok()
                })
                .collect(),
        }
    }
}

/// `q x p` grid of measures, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureMatrix {
    q: usize,
    p: usize,
    entries: Vec<MeasureSpec>,
}

impl MeasureMatrix {
    pub fn new(q: usize, p: usize, entries: Vec<MeasureSpec>) -> Result<Self> {
        if q == 0 || p == 0 {
            return Err(Error::InvalidMeasure("q and p must be positive".into()));
        }
        if entries.len() != q * p {
            return Err(Error::InvalidMeasure(format!(
                "expected {} measures for a {q}x{p} grid, got {}",
                q * p,
                entries.len()
            )));
        }
        Ok(MeasureMatrix { q, p, entries })
    }

    pub fn from_grid(grid: Vec<Vec<MeasureSpec>>) -> Result<Self> {
        let q = grid.len();
        let p = grid.first().map_or(0, Vec::len);
        if grid.iter().any(|row| row.len() != p) {
            return Err(Error::InvalidMeasure("ragged measure grid".into()));
        }
        MeasureMatrix::new(q, p, grid.into_iter().flatten().collect())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Entry `μ_{b+1, a+1}` (zero-based indices).
    pub fn get(&self, b: usize, a: usize) -> &MeasureSpec {
        &self.entries[b * self.p + a]
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.entries.iter().filter_map(MeasureSpec::degree_bound).min()
    }

    /// `q x p` block `∫ x^(i-j) y^j dμ x^(k-l) y^l` for positions `I ~ (i,j)`,
    /// `K ~ (k,l)`.
    pub fn moment_block(&self, i_pos: usize, k_pos: usize) -> Result<QMatrix> {
        let (a1, a2) = pair_of(i_pos).exponents();
        let (b1, b2) = pair_of(k_pos).exponents();
        let mut out = QMatrix::zeros(self.q, self.p);
        for b in 0..self.q {
            for a in 0..self.p {
                out[(b, a)] = self.get(b, a).moment(a1 + b1, a2 + b2)?;
            }
        }
        Ok(out)
    }

    /// Caches every moment of total degree `<= max_deg` that the specs can
    /// answer. Table entries beyond their declared range stay absent.
    pub fn moment_cache(&self, max_deg: usize) -> MomentCache {
        let per = (max_deg + 1) * (max_deg + 2) / 2;
        let mut values = Vec::with_capacity(self.q * self.p * per);
        let mut scaled = Vec::with_capacity(self.q * self.p * per);
        let mut dens = Vec::with_capacity(self.q * self.p);
        for spec in &self.entries {
            let vals = spec.moments_upto(max_deg);
            let (nums, den) = common_denominator(vals.iter().flatten());
            let mut nums = nums.into_iter();
            scaled.extend(vals.iter().map(|v| v.as_ref().and_then(|_| nums.next())));
            dens.push(den);
            values.extend(vals);
        }
        MomentCache {
            q: self.q,
            p: self.p,
            max_deg,
            per,
            values,
            scaled,
            dens,
        }
    }
}

/// Precomputed moments `m_{b,a}(s,t)` up to a total degree.
#[derive(Clone, Debug)]
pub struct MomentCache {
    q: usize,
    p: usize,
    max_deg: usize,
    per: usize,
    values: Vec<Option<Rational>>,
    /// The moments of each entry over one denominator, so pairings
    /// accumulate integers and reduce once.
    scaled: Vec<Option<BigInt>>,
    dens: Vec<BigInt>,
}

impl MomentCache {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn get(&self, b: usize, a: usize, s: usize, t: usize) -> Option<&Rational> {
        if s + t > self.max_deg {
            return None;
        }
        let pos = position_of_exponents(s, t);
        self.values[(b * self.p + a) * self.per + pos].as_ref()
    }

    fn scaled_get(&self, entry: usize, s: usize, t: usize) -> Option<&BigInt> {
        if s + t > self.max_deg {
            return None;
        }
        self.scaled[entry * self.per + position_of_exponents(s, t)].as_ref()
    }

    /// `∫ f dμ_{b,a}`, or `None` when a needed moment is unavailable.
    pub fn integrate(&self, b: usize, a: usize, f: &BiPoly) -> Option<Rational> {
        self.pair(b, a, f, &BiPoly::one())
    }

    /// `∫ f dμ_{b,a} g`, expanded through the moments.
    pub fn pair(&self, b: usize, a: usize, f: &BiPoly, g: &BiPoly) -> Option<Rational> {
        let entry = b * self.p + a;
        let (fnum, df) = common_denominator(f.terms().map(|(_, c)| c));
        let (gnum, dg) = common_denominator(g.terms().map(|(_, c)| c));
        let mut acc = BigInt::zero();
        for ((kf, _), cf) in f.terms().zip(&fnum) {
            let (f1, f2) = exponents_of(kf);
            let mut inner = BigInt::zero();
            for ((kg, _), cg) in g.terms().zip(&gnum) {
                let (g1, g2) = exponents_of(kg);
                inner += cg * self.scaled_get(entry, f1 + g1, f2 + g2)?;
            }
            acc += cf * inner;
        }
        Some(Rational::new(acc, df * dg * &self.dens[entry]))
    }
}

// ---------------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MeasureJson {
    Discrete {
        atoms: Vec<Atom>,
    },
    Rect {
        #[serde(rename = "box", with = "rational::serde_vec")]
        bounds: Vec<Rational>,
        #[serde(default = "BiPoly::one")]
        density: BiPoly,
    },
    Table {
        max_total_deg: usize,
        moments: BTreeMap<String, String>,
    },
}

fn parse_st(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidMeasure(format!("moment key {key:?} is not \"s,t\""));
    let (s, t) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        s.trim().parse().map_err(|_| bad())?,
        t.trim().parse().map_err(|_| bad())?,
    ))
}

impl TryFrom<MeasureJson> for MeasureSpec {
    type Error = Error;
    fn try_from(j: MeasureJson) -> Result<Self> {
        match j {
            MeasureJson::Discrete { atoms } => Ok(MeasureSpec::Discrete { atoms }),
            MeasureJson::Rect { bounds, density } => {
                let [x1_lo, x1_hi, x2_lo, x2_hi]: [Rational; 4] =
                    bounds.try_into().map_err(|_| {
                        Error::InvalidMeasure("box must hold four bounds".into())
                    })?;
                MeasureSpec::rect((x1_lo, x1_hi), (x2_lo, x2_hi), density)
            }
            MeasureJson::Table {
                max_total_deg,
                moments,
            } => {
                let mut table = BTreeMap::new();
                for (k, v) in moments {
                    let (s, t) = parse_st(&k)?;
                    if s + t > max_total_deg {
                        return Err(Error::InvalidMeasure(format!(
                            "moment {k:?} exceeds max_total_deg {max_total_deg}"
                        )));
                    }
                    table.insert((s, t), parse_rational(&v)?);
                }
                for d in 0..=max_total_deg {
                    for t in 0..=d {
                        if !table.contains_key(&(d - t, t)) {
                            return Err(Error::InvalidMeasure(format!(
                                "table is missing moment \"{},{}\"",
                                d - t,
                                t
                            )));
                        }
                    }
                }
                Ok(MeasureSpec::MomentTable {
                    max_total_deg,
                    moments: table,
                })
            }
        }
    }
}

impl From<&MeasureSpec> for MeasureJson {
    fn from(m: &MeasureSpec) -> Self {
        match m {
            MeasureSpec::Discrete { atoms } => MeasureJson::Discrete {
                atoms: atoms.clone(),
            },
            MeasureSpec::RectDensity {
                x1_lo,
                x1_hi,
                x2_lo,
                x2_hi,
                density,
            } => MeasureJson::Rect {
                bounds: vec![x1_lo.clone(), x1_hi.clone(), x2_lo.clone(), x2_hi.clone()],
                density: density.clone(),
            },
            MeasureSpec::MomentTable {
                max_total_deg,
                moments,
            } => MeasureJson::Table {
                max_total_deg: *max_total_deg,
                moments: moments
                    .iter()
                    .map(|((s, t), v)| (format!("{s},{t}"), format_rational(v)))
                    .collect(),
            },
        }
    }
}

impl Serialize for MeasureSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeasureSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MeasureJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}
