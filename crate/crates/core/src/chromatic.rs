//! Chromatic numbers with coloring certificates, the min-element coloring of
//! Kneser-type families, and the fractional chromatic number.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{check_cap, Error, Result};
use crate::graph::{
    clique_number, generalized_kneser_graph, kneser_family, maximal_independent_sets, BitIter, Graph, SetSystem,
};
use crate::lp::{self, CoveringProgram, Rational};

/// A vertex coloring; `palette` is the number of distinct colors used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub colors: Vec<usize>,
    pub palette: usize,
}

impl ColoringCertificate {
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let palette = colors.iter().collect::<BTreeSet<_>>().len();
        ColoringCertificate { colors, palette }
    }

    /// Colors relabelled to `0..palette` in increasing order of the originals.
    pub fn normalized(&self) -> Vec<usize> {
        let distinct: Vec<usize> = self
            .colors
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.colors
            .iter()
            .map(|c| distinct.binary_search(c).expect("color present"))
            .collect()
    }
}

pub fn verify_coloring(g: &Graph, cert: &ColoringCertificate) -> bool {
    if cert.colors.len() != g.n() {
        return false;
    }
    let distinct = cert.colors.iter().collect::<BTreeSet<_>>().len();
    distinct == cert.palette && g.edges().iter().all(|&(u, v)| cert.colors[u] != cert.colors[v])
}

/// Backtracking state shared by the decision and the certificate searches:
/// `blocked[v * k + c]` counts colored neighbours of `v` holding color `c`.
struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    k: usize,
    color: Vec<usize>,
    blocked: Vec<u32>,
    free: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(adj: &'a [u64], n: usize, k: usize) -> Self {
        Search {
            adj,
            n,
            k,
            color: vec![NONE; n],
            blocked: vec![0; n * k],
            free: vec![k; n],
        }
    }

    /// Colors `v` with `c`; returns false if some uncolored neighbour is
    /// left without options (the assignment is still recorded).
    fn assign(&mut self, v: usize, c: usize) -> bool {
        self.color[v] = c;
        let mut ok = true;
        for u in BitIter(self.adj[v]) {
            let slot = &mut self.blocked[u * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.free[u] -= 1;
                if self.free[u] == 0 && self.color[u] == NONE {
                    ok = false;
                }
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = NONE;
        for u in BitIter(self.adj[v]) {
            let slot = &mut self.blocked[u * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.free[u] += 1;
            }
        }
    }

    fn allowed(&self, v: usize, c: usize) -> bool {
        self.blocked[v * self.k + c] == 0
    }

    /// DSATUR-ordered decision search.
    fn dsatur(&mut self, colored: usize, used: usize) -> bool {
        if colored == self.n {
            return true;
        }
        let v = (0..self.n)
            .filter(|&v| self.color[v] == NONE)
            .min_by_key(|&v| (self.free[v], std::cmp::Reverse(self.adj[v].count_ones())))
            .expect("an uncolored vertex remains");
        for c in 0..self.k.min(used + 1) {
            if !self.allowed(v, c) {
                continue;
            }
            let ok = self.assign(v, c);
            if ok && self.dsatur(colored + 1, used.max(c + 1)) {
                return true;
            }
            self.unassign(v);
        }
        false
    }

    /// Vertex-order search with ascending colors: the first success is the
    /// lexicographically smallest proper coloring.
    fn lexmin(&mut self, v: usize, used: usize) -> bool {
        if v == self.n {
            return true;
        }
        for c in 0..self.k.min(used + 1) {
            if !self.allowed(v, c) {
                continue;
            }
            let ok = self.assign(v, c);
            if ok && self.lexmin(v + 1, used.max(c + 1)) {
                return true;
            }
            self.unassign(v);
        }
        false
    }
}

/// Greedy DSATUR coloring; works for any graph size.
pub fn greedy_coloring(g: &Graph) -> ColoringCertificate {
    let n = g.n();
    let mut colors = vec![NONE; n];
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == NONE)
            .max_by_key(|&v| (seen[v].len(), g.degree(v), std::cmp::Reverse(v)))
            .expect("uncolored vertex");
        let c = (0..).find(|c| !seen[v].contains(c)).expect("some color is free");
        colors[v] = c;
        for u in g.neighbors(v) {
            seen[u].insert(c);
        }
    }
    ColoringCertificate::from_colors(colors)
}

/// Exact chromatic number with the lexicographically smallest optimal
/// coloring (vertex order `0..n`) as certificate.
pub fn chromatic_number(g: &Graph) -> Result<(usize, ColoringCertificate)> {
    chromatic_number_capped(g, Limits::default().chromatic_max_n)
}

pub fn chromatic_number_capped(g: &Graph, cap: usize) -> Result<(usize, ColoringCertificate)> {
    check_cap("vertex count", g.n(), cap.min(64))?;
    let adj = g.small_rows()?;
    let n = g.n();
    let lower = clique_number(g)?.max(1);
    let upper = greedy_coloring(g).palette;
    let mut k = lower;
    while k < upper {
        let mut s = Search::new(&adj, n, k);
        if s.dsatur(0, 0) {
            break;
        }
        k += 1;
    }
    let mut s = Search::new(&adj, n, k);
    if !s.lexmin(0, 0) {
        return Err(Error::Internal(format!("no {k}-coloring found after feasibility")));
    }
    let cert = ColoringCertificate::from_colors(s.color);
    debug_assert!(verify_coloring(g, &cert));
    Ok((k, cert))
}

/// `chi` of the complement.
pub fn clique_cover_number(g: &Graph) -> Result<(usize, ColoringCertificate)> {
    chromatic_number(&g.complement())
}

/// Colors each `s`-subset `A` of `[d]` by `min(A ∪ {d - 2s + 2})`.
pub fn kneser_coloring(d: usize, s: usize) -> Result<ColoringCertificate> {
    let family = kneser_family(d, s)?;
    let cap = d - 2 * s + 2;
    let colors = family
        .sets()
        .iter()
        .map(|&a| (a.trailing_zeros() as usize + 1).min(cap))
        .collect();
    let cert = ColoringCertificate::from_colors(colors);
    let g = generalized_kneser_graph(&family)?;
    if !verify_coloring(&g, &cert) || cert.palette != cap {
        return Err(Error::Internal(format!(
            "min-element coloring of K({d},{s}) is not proper"
        )));
    }
    Ok(cert)
}

/// Min-element coloring of `K(F)` for an arbitrary family: sets with least
/// element below a threshold `c` take that element as color, the rest share
/// color `c`. The smallest `c` whose tail sets pairwise intersect is used.
pub fn min_element_coloring(family: &SetSystem) -> ColoringCertificate {
    let d = family.d();
    let least = |a: u64| a.trailing_zeros() as usize + 1;
    for c in 1..=d + 1 {
        let tail: Vec<u64> = family.sets().iter().copied().filter(|&a| least(a) >= c).collect();
        let intersecting = tail
            .iter()
            .enumerate()
            .all(|(i, &a)| tail[i + 1..].iter().all(|&b| a & b != 0));
        if intersecting {
            let colors = family.sets().iter().map(|&a| least(a).min(c)).collect();
            return ColoringCertificate::from_colors(colors);
        }
    }
    unreachable!("threshold d + 1 leaves an empty tail")
}

/// Optimal solutions of the covering program over maximal independent sets
/// and of its dual, the maximum fractional clique. Only the columns touched
/// by column generation are kept; every other set has weight zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalChromatic {
    #[serde(with = "crate::serde_util::rational")]
    pub value: Rational,
    /// vertex masks of the generated maximal independent sets (the columns)
    pub independent_sets: Vec<u64>,
    #[serde(with = "crate::serde_util::rational_vec")]
    pub set_weights: Vec<Rational>,
    #[serde(with = "crate::serde_util::rational_vec")]
    pub clique_weights: Vec<Rational>,
}

pub fn fractional_chromatic(g: &Graph) -> Result<FractionalChromatic> {
    fractional_chromatic_capped(g, Limits::default().fractional_chromatic_max_n)
}

/// Sets added per pricing round.
const PRICING_BATCH: usize = 8;
/// Cap on maximum independent sets in the initial working family.
const SEED_LIMIT: usize = 64;

fn weight(mask: u64, y: &[Rational]) -> Rational {
    BitIter(mask).map(|v| &y[v]).sum()
}

/// Column generation: the covering program is solved over a working family
/// of maximal independent sets, seeded by maximum independent sets and the
/// color classes of a greedy coloring; its duals price the remaining sets and the heaviest ones with
/// weight above 1 join the family. On exit the duals are re-verified as a
/// fractional clique whose total equals the cover, which certifies both.
pub fn fractional_chromatic_capped(g: &Graph, cap: usize) -> Result<FractionalChromatic> {
    let all = maximal_independent_sets(g, cap)?;
    let n = g.n();
    let one = lp::int(1);
    let zero = lp::int(0);

    // seed: maximum independent sets (these carry the optimum on
    // vertex-transitive graphs) plus a greedy coloring for feasibility
    let alpha = all.iter().map(|m| m.count_ones()).max().unwrap_or(0);
    let mut working: BTreeSet<u64> = all
        .iter()
        .copied()
        .filter(|m| m.count_ones() == alpha)
        .take(SEED_LIMIT.max(2 * n))
        .collect();
    let greedy = greedy_coloring(g);
    for c in 0..=greedy.colors.iter().copied().max().unwrap_or(0) {
        let class: u64 = (0..n).filter(|&v| greedy.colors[v] == c).fold(0, |m, v| m | 1 << v);
        if class != 0 {
            if let Some(&m) = all.iter().find(|&&m| m & class == class) {
                working.insert(m);
            }
        }
    }

    let indicator = |m: u64| -> Vec<Rational> {
        (0..n)
            .map(|v| if m >> v & 1 == 1 { one.clone() } else { zero.clone() })
            .collect()
    };
    let mut sets: Vec<u64> = working.iter().copied().collect();
    let mut cover = CoveringProgram::new(vec![one.clone(); n])?;
    for &m in &sets {
        cover.add_column(one.clone(), indicator(m))?;
    }
    loop {
        let solution = cover
            .solve()?
            .ok_or_else(|| Error::Internal("covering program is infeasible".into()))?;
        let y = &solution.duals;
        let mut violated: Vec<(Rational, u64)> = all
            .iter()
            .map(|&m| (weight(m, y), m))
            .filter(|(w, _)| *w > one)
            .collect();
        if violated.is_empty() {
            let clique_total: Rational = y.iter().sum();
            if y.iter().any(|w| *w < zero) || clique_total != solution.value {
                return Err(Error::Internal(format!(
                    "duality gap in fractional chromatic number: {} vs {clique_total}",
                    solution.value
                )));
            }
            return Ok(FractionalChromatic {
                value: solution.value,
                independent_sets: sets,
                set_weights: solution.point,
                clique_weights: solution.duals,
            });
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, m) in violated.into_iter().take(PRICING_BATCH) {
            if !working.insert(m) {
                return Err(Error::Internal("column generation priced an existing column".into()));
            }
            sets.push(m);
            cover.add_column(one.clone(), indicator(m))?;
        }
    }
}
