//! Point configurations on spheres: moment-curve (Gale-type) points, exact
//! verification of the open-hemisphere covering property, and finite
//! Borsuk graphs built from epsilon-nets.

mod borsuk;

pub use borsuk::{borsuk_graph, borsuk_net, BorsukGraph, BorsukNet};

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{check_cap, Error, Result};
use crate::graph::SetSystem;
use crate::lp::{self, int, Direction, LinearProgram, LpOutcome, Rational, Relation};

/// Points `y_1..y_d` in `R^m`, kept exact and unnormalized (hemisphere
/// membership only depends on the ray through each point).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSystem {
    pub m: usize,
    #[serde(with = "coords")]
    pub points: Vec<Vec<Rational>>,
}

/// Integral coordinates travel as JSON integers, others as `"p/q"`.
mod coords {
    use super::*;
    use serde::{de::Error as _, Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Coord {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(points: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Coord>> = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| match x.to_integer().to_i64() {
                        Some(v) if x.is_integer() => Coord::Int(v),
                        _ => Coord::Text(lp::fmt_rational(x)),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<Coord>>::deserialize(d)?;
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| match c {
                        Coord::Int(v) => Ok(int(v)),
                        Coord::Text(t) => lp::parse_rational(&t).map_err(D::Error::custom),
                    })
                    .collect()
            })
            .collect()
    }
}

impl PointSystem {
    pub fn new(m: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("ambient dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::Malformed(format!(
                    "point {} has dimension {} != {m}",
                    i + 1,
                    p.len()
                )));
            }
            if p.iter().all(Zero::is_zero) {
                return Err(Error::Malformed(format!("point {} is the zero vector", i + 1)));
            }
        }
        Ok(PointSystem { m, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `y_i = (-1)^i (1, i, i^2, ..., i^(d-2s))` for `i = 1..d`.
pub fn gale_points(d: usize, s: usize) -> Result<PointSystem> {
    if s == 0 || d < 2 * s {
        return Err(Error::InvalidParameters(format!(
            "need d >= 2s and s >= 1, got d={d}, s={s}"
        )));
    }
    let m = d - 2 * s + 1;
    let points = (1..=d)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let base = num_bigint::BigInt::from(i);
            (0..m)
                .map(|k| Rational::from_integer(num_traits::pow(base.clone(), k) * sign))
                .collect()
        })
        .collect();
    PointSystem::new(m, points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
    #[serde(rename = "0")]
    Zero,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Pos, Sign::Neg, Sign::Zero];

    pub fn of(x: &Rational) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
            Sign::Zero => '0',
        }
    }
}

/// Renders a prefix of a sign pattern, padded with `*` up to length `d`.
pub fn pattern_string(prefix: &[Sign], d: usize) -> String {
    prefix
        .iter()
        .map(|s| s.symbol())
        .chain(std::iter::repeat_n('*', d - prefix.len()))
        .collect()
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Rank of a list of rational vectors by Gaussian elimination.
fn rank(vectors: &[&Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| (*v).clone()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Sign-pattern oracle. Patterns of `x ↦ (⟨x, y_i⟩)_i` do not change under
/// an invertible change of coordinates, so each `y_i` is rewritten as
/// `c_i` in the basis of the first linearly independent points; `z_k`
/// stands for `⟨x, y_{b_k}⟩`. Basis points become unit vectors and their
/// sign conditions turn into variable bounds, keeping the programs small.
struct Realizer {
    m: usize,
    r: usize,
    coords: Vec<Vec<Rational>>,
}

/// Sign condition on a single coordinate.
#[derive(Clone, PartialEq)]
enum Slot {
    Free,
    Zero,
    /// `z_k >= bound` (`Pos`) or `z_k <= -bound` (`Neg`)
    Pos(Rational),
    Neg(Rational),
}

impl Realizer {
    fn new(points: &PointSystem) -> Self {
        let m = points.m;
        let d = points.len();
        // columns: the points, as an m x d matrix; reduce to RREF
        let mut a: Vec<Vec<Rational>> = (0..m)
            .map(|k| (0..d).map(|i| points.points[i][k].clone()).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..d {
            if row == m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][c].recip();
            a[row].iter_mut().for_each(|x| *x *= &inv);
            let pivot = a[row].clone();
            for (i, other) in a.iter_mut().enumerate() {
                if i != row && !other[c].is_zero() {
                    let f = other[c].clone();
                    for (x, y) in other.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        let r = pivots.len();
        // column i of the RREF holds the coefficients of y_i in the basis
        let coords = (0..d).map(|i| (0..r).map(|k| a[k][i].clone()).collect()).collect();
        Realizer { m, r, coords }
    }

    fn dot(&self, z: &[Rational], i: usize) -> Rational {
        dot(z, &self.coords[i])
    }

    /// A `z` realizing the prefix `sigma`, if any.
    fn realize(&self, sigma: &[Sign]) -> Result<Option<Vec<Rational>>> {
        let (m, r) = (self.m, self.r);
        let cs = &self.coords[..sigma.len()];
        if sigma.iter().all(|&s| s == Sign::Zero) {
            // a nonzero x orthogonal to the prefix exists iff it does not span R^m
            let refs: Vec<&Vec<Rational>> = cs.iter().collect();
            let k = rank(&refs);
            return Ok(if k == m {
                None
            } else if k < r {
                Some(orthogonal_witness(cs, r))
            } else {
                // x orthogonal to every point: z = 0
                Some(vec![int(0); r])
            });
        }
        // homogeneous system: strict solutions exist iff σ_i ⟨z, c_i⟩ >= 1 is feasible
        let mut slots = vec![Slot::Free; r];
        let mut rows = Vec::new();
        for (c, &s) in cs.iter().zip(sigma) {
            let support: Vec<usize> = (0..r).filter(|&k| !c[k].is_zero()).collect();
            if let [k] = support[..] {
                let scaled = if s == Sign::Neg { -&c[k] } else { c[k].clone() };
                let want = match s {
                    Sign::Zero => Slot::Zero,
                    _ if scaled.is_positive() => Slot::Pos(scaled.recip()),
                    _ => Slot::Neg(-scaled.recip()),
                };
                let merged = match (&slots[k], want) {
                    (Slot::Free, w) => Some(w),
                    (Slot::Zero, Slot::Zero) => Some(Slot::Zero),
                    (Slot::Pos(a), Slot::Pos(b)) => Some(Slot::Pos(a.clone().max(b))),
                    (Slot::Neg(a), Slot::Neg(b)) => Some(Slot::Neg(a.clone().max(b))),
                    _ => None,
                };
                match merged {
                    Some(slot) => slots[k] = slot,
                    None => return Ok(None),
                }
            } else {
                rows.push((c, s));
            }
        }
        // program variables: every coordinate not forced to zero, with
        // negative-side coordinates mirrored so that bounds are lower bounds
        let vars: Vec<usize> = (0..r).filter(|&k| slots[k] != Slot::Zero).collect();
        let orient = |k: usize| {
            if matches!(slots[k], Slot::Neg(_)) {
                int(-1)
            } else {
                int(1)
            }
        };
        let assemble = |y: &[Rational]| -> Vec<Rational> {
            let mut z = vec![int(0); r];
            for (&k, v) in vars.iter().zip(y) {
                z[k] = v * orient(k);
            }
            z
        };
        if rows.is_empty() {
            let y: Vec<Rational> = vars
                .iter()
                .map(|&k| match &slots[k] {
                    Slot::Pos(b) | Slot::Neg(b) => b.clone(),
                    _ => int(0),
                })
                .collect();
            return Ok(Some(assemble(&y)));
        }
        let mut program = LinearProgram::new(Direction::Minimize, vec![int(0); vars.len()]);
        for (j, &k) in vars.iter().enumerate() {
            let bound = match &slots[k] {
                Slot::Pos(b) | Slot::Neg(b) => Some(b.clone()),
                _ => None,
            };
            program.set_lower_bound(j, bound);
        }
        for (c, s) in rows {
            let coeffs: Vec<Rational> = vars.iter().map(|&k| &c[k] * orient(k)).collect();
            match s {
                Sign::Zero => program.add_constraint(coeffs, Relation::Eq, int(0)),
                Sign::Pos => program.add_constraint(coeffs, Relation::Ge, int(1)),
                Sign::Neg => program.add_constraint(coeffs.iter().map(|x| -x).collect(), Relation::Ge, int(1)),
            }
        }
        match lp::solve(&program)? {
            LpOutcome::Optimal { point, .. } => Ok(Some(assemble(&point))),
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::Internal("constant objective reported unbounded".into())),
        }
    }
}

/// Nonzero vector orthogonal to all of `ys` in `R^m`, assuming they do not span.
fn orthogonal_witness(ys: &[Vec<Rational>], m: usize) -> Vec<Rational> {
    // reduce to row echelon form and read off a null vector
    let mut rows: Vec<Vec<Rational>> = ys.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..m).find(|c| !pivots.contains(c)).expect("a free column exists");
    let mut x = vec![int(0); m];
    x[free] = Rational::one();
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = -&row[free];
    }
    x
}

/// Whether the full pattern `sigma` is realized by some nonzero `x`.
pub fn sign_pattern_feasible(points: &PointSystem, sigma: &[Sign]) -> Result<bool> {
    if sigma.len() != points.len() {
        return Err(Error::InvalidParameters(
            "pattern length must equal the number of points".into(),
        ));
    }
    Ok(Realizer::new(points).realize(sigma)?.is_some())
}

/// All realizable full sign patterns, in `+ - 0` lexicographic order.
pub fn feasible_sign_patterns(points: &PointSystem) -> Result<Vec<Vec<Sign>>> {
    check_cap(
        "point count (sign enumeration)",
        points.len(),
        Limits::default().hemisphere_max_d,
    )?;
    let realizer = Realizer::new(points);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    enumerate_feasible(&realizer, points.len(), &mut prefix, None, &mut out)?;
    Ok(out)
}

fn enumerate_feasible(
    realizer: &Realizer,
    d: usize,
    prefix: &mut Vec<Sign>,
    witness: Option<&[Rational]>,
    out: &mut Vec<Vec<Sign>>,
) -> Result<()> {
    if prefix.len() == d {
        out.push(prefix.clone());
        return Ok(());
    }
    let i = prefix.len();
    for s in Sign::ALL {
        prefix.push(s);
        let reused = witness
            .filter(|z| Sign::of(&realizer.dot(z, i)) == s)
            .map(<[Rational]>::to_vec);
        let child = match reused {
            Some(z) => Some(z),
            None => realizer.realize(prefix)?,
        };
        if let Some(z) = child {
            enumerate_feasible(realizer, d, prefix, Some(&z), out)?;
        }
        prefix.pop();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// the positive support already contains a member set
    Covered,
    /// no direction realizes the prefix
    Infeasible,
    /// realizable full pattern whose positive support contains no member set
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub pattern: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HemisphereCertificate {
    pub points: PointSystem,
    pub family: SetSystem,
    /// `m + 1`: every open hemisphere of `S^(t-2)` is covered
    pub t: usize,
    pub verified: bool,
    /// failing patterns, if any
    pub violations: Vec<String>,
    pub lp_calls: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcript: Vec<TranscriptEntry>,
}

impl HemisphereCertificate {
    pub fn without_transcript(mut self) -> Self {
        self.transcript.clear();
        self
    }

    /// Re-runs the verification on the stored points and family.
    pub fn recheck(&self) -> bool {
        verify_hemisphere(&self.points, &self.family)
            .map(|c| c.verified == self.verified && c.t == self.t && c.violations == self.violations)
            .unwrap_or(false)
    }
}

struct Walk<'a> {
    realizer: Realizer,
    sets: &'a [u64],
    d: usize,
    transcript: Vec<TranscriptEntry>,
    violations: Vec<String>,
    lp_calls: usize,
    /// realizability of visited prefixes; `σ` is realizable iff `-σ` is
    seen: HashMap<Vec<Sign>, Option<Vec<Rational>>>,
}

impl Walk<'_> {
    fn decide(&mut self, prefix: &[Sign]) -> Result<Option<Vec<Rational>>> {
        let flipped: Vec<Sign> = prefix.iter().map(|s| s.flip()).collect();
        if let Some(known) = self.seen.get(&flipped) {
            return Ok(known.as_ref().map(|x| x.iter().map(|c| -c).collect()));
        }
        self.lp_calls += 1;
        self.realizer.realize(prefix)
    }

    fn covered(&self, positive: u64) -> bool {
        self.sets.iter().any(|&a| a & !positive == 0)
    }

    fn record(&mut self, prefix: &[Sign], verdict: Verdict) {
        let pattern = pattern_string(prefix, self.d);
        if verdict == Verdict::Violation {
            self.violations.push(pattern.clone());
        }
        self.transcript.push(TranscriptEntry { pattern, verdict });
    }

    /// `prefix` is known realizable by `witness`.
    fn visit(&mut self, prefix: &mut Vec<Sign>, positive: u64, witness: &[Rational]) -> Result<()> {
        if prefix.len() == self.d {
            self.record(prefix, Verdict::Violation);
            return Ok(());
        }
        let i = prefix.len();
        let current = Sign::of(&self.realizer.dot(witness, i));
        for s in Sign::ALL {
            prefix.push(s);
            let pos = if s == Sign::Pos { positive | 1 << i } else { positive };
            if self.covered(pos) {
                self.record(prefix, Verdict::Covered);
            } else {
                let child = if s == current {
                    Some(witness.to_vec())
                } else {
                    self.decide(prefix)?
                };
                self.seen.insert(prefix.clone(), child.clone());
                match child {
                    Some(x) => self.visit(prefix, pos, &x)?,
                    None => self.record(prefix, Verdict::Infeasible),
                }
            }
            prefix.pop();
        }
        Ok(())
    }
}

/// Checks that every realizable sign pattern has a member of `family` inside
/// its positive support, i.e. every open hemisphere contains `{y_i : i ∈ A}`
/// for some `A`. Prefixes are pruned once covered or unrealizable.
pub fn verify_hemisphere(points: &PointSystem, family: &SetSystem) -> Result<HemisphereCertificate> {
    verify_hemisphere_capped(points, family, Limits::default().hemisphere_max_d)
}

pub fn verify_hemisphere_capped(points: &PointSystem, family: &SetSystem, cap: usize) -> Result<HemisphereCertificate> {
    let d = points.len();
    check_cap("point count (sign enumeration)", d, cap)?;
    if family.d() != d {
        return Err(Error::InvalidParameters(format!(
            "family ground set [{}] does not match {d} points",
            family.d()
        )));
    }
    let realizer = Realizer::new(points);
    let r = realizer.r;
    let mut walk = Walk {
        realizer,
        sets: family.sets(),
        d,
        transcript: Vec::new(),
        violations: Vec::new(),
        lp_calls: 0,
        seen: HashMap::new(),
    };
    // the empty prefix is realized by any nonzero x
    let mut start = vec![int(0); r];
    if let Some(first) = start.first_mut() {
        *first = Rational::one();
    }
    if walk.covered(0) {
        walk.record(&[], Verdict::Covered);
    } else {
        walk.visit(&mut Vec::new(), 0, &start)?;
    }
    Ok(HemisphereCertificate {
        points: points.clone(),
        family: family.clone(),
        t: points.m + 1,
        verified: walk.violations.is_empty(),
        violations: walk.violations,
        lp_calls: walk.lp_calls,
        transcript: walk.transcript,
    })
}

/// Lower bounds implied by a verified hemisphere certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HemisphereBounds {
    pub t: usize,
    pub xi_real: usize,
    pub xi_complex: usize,
    pub minrank_real: usize,
    pub provenance: String,
}

impl fmt::Display for HemisphereBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t = {}: xi_R >= {}, xi_C >= {}, minrk_R >= {}",
            self.t, self.xi_real, self.xi_complex, self.minrank_real
        )
    }
}

/// Smallest `k >= 1` with `2k^2 >= x`, i.e. `⌈√(x/2)⌉`.
pub fn sqrt_half_ceiling(x: usize) -> usize {
    (1..).find(|&k| 2 * k * k >= x).expect("terminates")
}

pub fn hemisphere_lower_bounds(cert: &HemisphereCertificate) -> Result<HemisphereBounds> {
    if !cert.verified {
        return Err(Error::Rejected(format!(
            "hemisphere property fails on pattern {}",
            cert.violations.first().map_or("?", String::as_str)
        )));
    }
    let t = cert.t;
    Ok(HemisphereBounds {
        t,
        xi_real: t,
        xi_complex: t.div_ceil(2),
        minrank_real: sqrt_half_ceiling(t),
        provenance: "hemisphere covering bound (points in R^(t-1)), ceilings by integrality".into(),
    })
}
