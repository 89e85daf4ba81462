//! The fractional relaxation `f*` of a graph invariant `f` over induced
//! subgraphs, and the randomized covering that rounds it.
//!
//! Primal: maximize `Σ w(x)` subject to `Σ_{x ∈ S} w(x) ≤ f(G[S])` for every
//! nonempty `S`, `w ≥ 0`. Dual: minimize `Σ q(S) f(G[S])` subject to
//! `Σ_{S ∋ x} q(S) ≥ 1`, `q ≥ 0`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::chromatic::clique_cover_number;
use crate::config::Limits;
use crate::error::{check_cap, Error, Result};
use crate::graph::{independence_number, BitIter, Graph};
use crate::lp::{self, int, Direction, LinearProgram, Rational, Relation};

/// A nonnegative graph invariant with value 1 on the single-vertex graph.
pub trait BaseInvariant {
    fn name(&self) -> &str;
    fn eval(&self, g: &Graph) -> Result<Rational>;
}

/// `χ(Ḡ)`, the clique cover number.
#[derive(Clone, Copy, Debug, Default)]
pub struct CliqueCover;

impl BaseInvariant for CliqueCover {
    fn name(&self) -> &str {
        "clique-cover"
    }

    fn eval(&self, g: &Graph) -> Result<Rational> {
        Ok(int(clique_cover_number(g)?.0 as i64))
    }
}

/// `α(G)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Independence;

impl BaseInvariant for Independence {
    fn name(&self) -> &str {
        "independence"
    }

    fn eval(&self, g: &Graph) -> Result<Rational> {
        Ok(int(independence_number(g)? as i64))
    }
}

/// Real minrank where it is pinned down: the common value when `α = χ̄`,
/// and `(n + 1) / 2` on odd cycles of length at least 5. Any other graph
/// is an oracle failure.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinrankRealSandwich;

impl MinrankRealSandwich {
    pub const ODD_CYCLE_PROVENANCE: &'static str = "real minrank of an odd cycle C_n equals (n+1)/2";

    fn odd_cycle_length(g: &Graph) -> Option<usize> {
        let n = g.n();
        if n < 5 || n.is_multiple_of(2) || (0..n).any(|v| g.degree(v) != 2) {
            return None;
        }
        // 2-regular and connected means a single cycle
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s).then_some(n)
    }
}

impl BaseInvariant for MinrankRealSandwich {
    fn name(&self) -> &str {
        "minrank-real-sandwich"
    }

    fn eval(&self, g: &Graph) -> Result<Rational> {
        if let Some(n) = Self::odd_cycle_length(g) {
            return Ok(int((n as i64 + 1) / 2));
        }
        let alpha = independence_number(g)?;
        let chi_bar = clique_cover_number(g)?.0;
        if alpha == chi_bar {
            Ok(int(alpha as i64))
        } else {
            Err(Error::Oracle {
                name: self.name().into(),
                reason: format!("alpha = {alpha} < {chi_bar} = clique cover number; real minrank is not determined"),
            })
        }
    }
}

/// Wraps a closure as a base invariant.
pub struct FnInvariant<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(&Graph) -> Result<Rational>> BaseInvariant for FnInvariant<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, g: &Graph) -> Result<Rational> {
        (self.f)(g)
    }
}

/// Absolute ceiling on the subset enumeration, whatever the configured cap.
pub const SUBSET_HARD_CAP: usize = 24;

/// `f(G[S])` for every vertex mask `S` (index 0, the empty set, holds 0).
pub fn evaluate_subsets(g: &Graph, f: &dyn BaseInvariant, cap: usize) -> Result<Vec<Rational>> {
    check_cap("vertex count (subset enumeration)", g.n(), cap.min(SUBSET_HARD_CAP))?;
    let n = g.n();
    let mut values = Vec::with_capacity(1 << n);
    values.push(Rational::zero());
    for mask in 1u64..1 << n {
        let v = f.eval(&g.induced_mask(mask)?)?;
        if v.is_negative() {
            return Err(Error::Oracle {
                name: f.name().into(),
                reason: format!(
                    "negative value {v} on vertex set {:?}",
                    BitIter(mask).collect::<Vec<_>>()
                ),
            });
        }
        values.push(v);
    }
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    #[serde(with = "crate::serde_util::rational")]
    pub value: Rational,
    /// optimal primal vertex weights
    #[serde(with = "crate::serde_util::rational_vec")]
    pub weights: Vec<Rational>,
    /// support of the optimal dual: vertex masks with their weights
    pub dual: Vec<DualEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualEntry {
    pub set: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub q: Rational,
}

/// Sets `S` with no `v ∉ S` such that `f(S ∪ {v}) ≤ f(S)`. Shifting dual
/// weight from a dominated set to its extension never hurts, and the primal
/// constraint of a dominated set is implied by the extension's (`w ≥ 0`).
fn undominated(n: usize, values: &[Rational]) -> Vec<u64> {
    let full = (1u64 << n) - 1;
    (1u64..=full)
        .filter(|&s| BitIter(full & !s).all(|v| values[(s | 1 << v) as usize] > values[s as usize]))
        .collect()
}

fn solve_dual(n: usize, values: &[Rational], columns: &[u64]) -> Result<(Rational, Vec<DualEntry>)> {
    let objective = columns.iter().map(|&s| values[s as usize].clone()).collect();
    let mut lp = LinearProgram::new(Direction::Minimize, objective);
    for x in 0..n {
        let row = columns.iter().map(|&s| int((s >> x & 1) as i64)).collect();
        lp.add_constraint(row, Relation::Ge, int(1));
    }
    let (value, q) = lp::solve(&lp)?
        .optimal()
        .ok_or_else(|| Error::Internal("dual covering program has no optimum".into()))?;
    let dual = columns
        .iter()
        .zip(q)
        .filter(|(_, q)| !q.is_zero())
        .map(|(&set, q)| DualEntry { set, q })
        .collect();
    Ok((value, dual))
}

/// Primal by constraint generation over the candidate rows.
fn solve_primal(n: usize, values: &[Rational], rows: &[u64]) -> Result<(Rational, Vec<Rational>)> {
    let mut active: Vec<u64> = (0..n).map(|v| 1u64 << v).filter(|s| rows.contains(s)).collect();
    if active.is_empty() {
        active.push(rows[rows.len() - 1]);
    }
    loop {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![int(1); n]);
        for &s in &active {
            let row = (0..n).map(|x| int((s >> x & 1) as i64)).collect();
            lp.add_constraint(row, Relation::Le, values[s as usize].clone());
        }
        let outcome = lp::solve(&lp)?;
        let point = match outcome {
            lp::LpOutcome::Optimal { point, .. } => point,
            lp::LpOutcome::Unbounded => {
                // some vertex is not yet constrained; add the rows covering it
                let missing: u64 = (0..n)
                    .filter(|&x| active.iter().all(|&s| s >> x & 1 == 0))
                    .fold(0, |m, x| m | 1 << x);
                let extra = rows
                    .iter()
                    .copied()
                    .find(|&s| s & missing != 0)
                    .ok_or_else(|| Error::Internal("vertex outside every candidate set".into()))?;
                active.push(extra);
                continue;
            }
            lp::LpOutcome::Infeasible => {
                return Err(Error::Internal("primal packing program infeasible".into()));
            }
        };
        let mut violated: Vec<(Rational, u64)> = rows
            .iter()
            .filter_map(|&s| {
                let load: Rational = BitIter(s).map(|x| &point[x]).sum();
                let excess = load - &values[s as usize];
                excess.is_positive().then_some((excess, s))
            })
            .collect();
        if violated.is_empty() {
            let value = point.iter().sum();
            return Ok((value, point));
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        active.extend(violated.iter().take(16).map(|&(_, s)| s));
    }
}

/// Exact `f*(G)` with a primal and a dual optimum, checked equal.
pub fn fractional_invariant(g: &Graph, f: &dyn BaseInvariant) -> Result<FractionalSolution> {
    fractional_invariant_capped(g, f, Limits::default().fstar_max_n)
}

pub fn fractional_invariant_capped(g: &Graph, f: &dyn BaseInvariant, cap: usize) -> Result<FractionalSolution> {
    let values = evaluate_subsets(g, f, cap)?;
    solve_with_values(g.n(), &values)
}

fn solve_with_values(n: usize, values: &[Rational]) -> Result<FractionalSolution> {
    let candidates = undominated(n, values);
    let (dual_value, dual) = solve_dual(n, values, &candidates)?;
    let (value, weights) = solve_primal(n, values, &candidates)?;
    if value != dual_value {
        return Err(Error::Internal(format!(
            "primal optimum {value} differs from dual optimum {dual_value}"
        )));
    }
    // re-check the primal against every subset, not only the candidates
    for s in 1u64..1 << n {
        let load: Rational = BitIter(s).map(|x| &weights[x]).sum();
        if load > values[s as usize] || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Internal(format!(
                "primal point violates the constraint of set {s:#b}"
            )));
        }
    }
    Ok(FractionalSolution { value, weights, dual })
}

/// Outcome of the randomized rounding: `t` sets drawn from `q / Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub sets: Vec<u64>,
    pub t: usize,
    #[serde(rename = "Q", with = "crate::serde_util::rational")]
    pub q_total: Rational,
    #[serde(with = "crate::serde_util::rational")]
    pub fstar: Rational,
    #[serde(with = "crate::serde_util::rational")]
    pub total: Rational,
    pub seed: u64,
    pub retries: usize,
}

fn ln3n(n: usize) -> f64 {
    (3.0 * n as f64).ln()
}

fn sample_count(q_total: &Rational, n: usize) -> usize {
    (lp::to_f64(q_total) * ln3n(n)).ceil() as usize
}

fn within_bound(total: &Rational, fstar: &Rational, n: usize) -> bool {
    lp::to_f64(total) <= 6.0 * ln3n(n) * lp::to_f64(fstar)
}

pub fn randomized_cover(g: &Graph, f: &dyn BaseInvariant, seed: u64) -> Result<CoverCertificate> {
    let limits = Limits::default();
    randomized_cover_with(g, f, seed, limits.fstar_max_n, limits.cover_retries)
}

pub fn randomized_cover_with(
    g: &Graph,
    f: &dyn BaseInvariant,
    seed: u64,
    cap: usize,
    budget: usize,
) -> Result<CoverCertificate> {
    let n = g.n();
    let values = evaluate_subsets(g, f, cap)?;
    let sol = solve_with_values(n, &values)?;
    let q_total: Rational = sol.dual.iter().map(|e| &e.q).sum();
    if q_total < int(1) {
        return Err(Error::Oracle {
            name: f.name().into(),
            reason: format!("dual weights sum to {q_total} < 1"),
        });
    }
    let t = sample_count(&q_total, n);
    let weights: Vec<f64> = sol.dual.iter().map(|e| lp::to_f64(&e.q)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::Internal(format!("sampling weights: {e}")))?;
    let full = g.full_mask();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        rng.set_stream(attempt as u64);
        rng.set_word_pos(0);
        let sets: Vec<u64> = (0..t).map(|_| sol.dual[dist.sample(&mut rng)].set).collect();
        let covered = sets.iter().fold(0u64, |m, &s| m | s) == full;
        let total: Rational = sets.iter().map(|&s| &values[s as usize]).sum();
        if covered && within_bound(&total, &sol.value, n) {
            return Ok(CoverCertificate {
                sets,
                t,
                q_total,
                fstar: sol.value,
                total,
                seed,
                retries: attempt,
            });
        }
    }
    Err(Error::RetriesExhausted(budget))
}

/// Recomputes `f*`, `Q`, `t`, the per-set values, coverage and the
/// logarithmic bound from scratch.
pub fn verify_cover(g: &Graph, f: &dyn BaseInvariant, cert: &CoverCertificate) -> bool {
    let n = g.n();
    let Ok(values) = evaluate_subsets(g, f, SUBSET_HARD_CAP) else {
        return false;
    };
    let Ok(sol) = solve_with_values(n, &values) else {
        return false;
    };
    let q_total: Rational = sol.dual.iter().map(|e| &e.q).sum();
    let full = g.full_mask();
    let in_range = cert.sets.iter().all(|&s| s != 0 && s & !full == 0);
    if !in_range {
        return false;
    }
    let total: Rational = cert.sets.iter().map(|&s| &values[s as usize]).sum();
    sol.value == cert.fstar
        && q_total == cert.q_total
        && cert.q_total >= int(1)
        && cert.t == sample_count(&cert.q_total, n)
        && cert.sets.len() == cert.t
        && cert.sets.iter().fold(0u64, |m, &s| m | s) == full
        && total == cert.total
        && within_bound(&cert.total, &cert.fstar, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::fractional_chromatic;
    use crate::graph::{generalized_kneser_graph, kneser_family};
    use crate::lp::rat;

    fn random_graph(n: usize, seed: u64) -> Graph {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn sandwich_oracle_values() {
        let f = MinrankRealSandwich;
        assert_eq!(f.eval(&Graph::cycle(5).unwrap()).unwrap(), int(3));
        assert_eq!(f.eval(&Graph::cycle(7).unwrap()).unwrap(), int(4));
        assert_eq!(f.eval(&Graph::empty(1).unwrap()).unwrap(), int(1));
        assert_eq!(f.eval(&Graph::cycle(4).unwrap()).unwrap(), int(2));
        // the Petersen graph has alpha 4 < 5 = clique cover number
        let petersen = generalized_kneser_graph(&kneser_family(5, 2).unwrap()).unwrap();
        assert!(matches!(f.eval(&petersen), Err(Error::Oracle { .. })));
    }

    #[test]
    fn odd_cycles_have_half_integral_fstar() {
        for n in [5usize, 7] {
            let sol = fractional_invariant(&Graph::cycle(n).unwrap(), &MinrankRealSandwich).unwrap();
            assert_eq!(sol.value, rat(n as i64, 2));
        }
    }

    #[test]
    fn trivial_instances() {
        for n in 1..=5 {
            let sol = fractional_invariant(&Graph::complete(n).unwrap(), &CliqueCover).unwrap();
            assert_eq!(sol.value, int(1));
        }
        let sol = fractional_invariant(&Graph::empty(5).unwrap(), &Independence).unwrap();
        assert_eq!(sol.value, int(5));
    }

    #[test]
    fn negative_values_are_rejected() {
        let f = FnInvariant {
            name: "negative".into(),
            f: |g: &Graph| Ok(int(1 - g.n() as i64)),
        };
        assert!(matches!(
            fractional_invariant(&Graph::empty(3).unwrap(), &f),
            Err(Error::Oracle { .. })
        ));
    }

    #[test]
    fn sandwiched_between_alpha_and_f() {
        for seed in 0..8 {
            let g = random_graph(7, seed);
            let sol = fractional_invariant(&g, &CliqueCover).unwrap();
            let alpha = independence_number(&g).unwrap();
            let chi_bar = clique_cover_number(&g).unwrap().0;
            assert!(int(alpha as i64) <= sol.value);
            assert!(sol.value <= int(chi_bar as i64));
            let chi_f = fractional_chromatic(&g.complement()).unwrap().value;
            assert!(sol.value <= chi_f);
        }
    }

    #[test]
    fn single_vertex_cover() {
        let g = Graph::empty(1).unwrap();
        let cert = randomized_cover(&g, &CliqueCover, 3).unwrap();
        assert_eq!(cert.t, 2);
        assert_eq!(cert.sets, vec![1, 1]);
        assert_eq!(cert.total, int(2));
        assert!(verify_cover(&g, &CliqueCover, &cert));
    }

    #[test]
    fn covers_verify_and_tampering_is_caught() {
        let c5 = Graph::cycle(5).unwrap();
        let cert = randomized_cover(&c5, &CliqueCover, 1).unwrap();
        assert!(verify_cover(&c5, &CliqueCover, &cert));
        assert_eq!(cert.fstar, rat(5, 2));

        let mut missing = cert.clone();
        missing.sets = vec![0b00011; cert.t];
        missing.total = int(cert.t as i64);
        assert!(!verify_cover(&c5, &CliqueCover, &missing));

        let mut inflated = cert.clone();
        inflated.total += int(1000);
        assert!(!verify_cover(&c5, &CliqueCover, &inflated));

        let petersen = generalized_kneser_graph(&kneser_family(5, 2).unwrap()).unwrap();
        let cert = randomized_cover(&petersen, &CliqueCover, 7).unwrap();
        assert!(verify_cover(&petersen, &CliqueCover, &cert));
        let chi_bar = clique_cover_number(&petersen).unwrap().0;
        assert!(int(chi_bar as i64) <= cert.total);
    }

    #[test]
    fn cover_is_reproducible() {
        let g = random_graph(8, 11);
        let a = randomized_cover(&g, &CliqueCover, 42).unwrap();
        let b = randomized_cover(&g, &CliqueCover, 42).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        let back: CoverCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::empty(17).unwrap();
        assert!(matches!(
            fractional_invariant(&g, &Independence),
            Err(Error::TooLarge { .. })
        ));
    }
}
