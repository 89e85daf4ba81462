use serde::{Deserialize, Serialize};

use super::field::{check_prime, Echelon, FiniteFieldMatrix};
use crate::chromatic::{clique_cover_number, ColoringCertificate};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::graph::{independence_number, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinrankResult {
    pub rank: usize,
    pub lower: usize,
    pub upper: usize,
    /// true when the witness came from exhaustive search rather than from
    /// the bounds meeting
    pub searched: bool,
    pub witness: FiniteFieldMatrix,
}

/// Smallest `t >= 1` with `q^t >= chi_bar`.
pub fn log_ceiling(chi_bar: usize, q: u64) -> usize {
    let mut t = 1;
    let mut power = q as u128;
    while power < chi_bar as u128 {
        power *= q as u128;
        t += 1;
    }
    t
}

/// `⌈log_q χ(Ḡ)⌉`, at least 1.
pub fn minrank_log_lower(g: &Graph, q: u64) -> Result<usize> {
    check_prime(q)?;
    Ok(log_ceiling(clique_cover_number(g)?.0, q))
}

/// Does `M` represent `G`: nonzero diagonal and zeros on distinct
/// non-adjacent pairs?
pub fn represents(g: &Graph, m: &FiniteFieldMatrix) -> bool {
    let n = g.n();
    m.n() == n
        && (0..n).all(|i| m.entries[i][i] != 0 && (0..n).all(|j| i == j || g.has_edge(i, j) || m.entries[i][j] == 0))
}

/// Block matrix of a clique cover: 1 where both vertices share a class.
pub fn clique_cover_matrix(g: &Graph, cover: &ColoringCertificate, q: u64) -> Result<FiniteFieldMatrix> {
    if !crate::chromatic::verify_coloring(&g.complement(), cover) {
        return Err(Error::Rejected(
            "cover is not a proper coloring of the complement".into(),
        ));
    }
    let c = &cover.colors;
    let entries = (0..g.n())
        .map(|i| (0..g.n()).map(|j| u64::from(c[i] == c[j])).collect())
        .collect();
    FiniteFieldMatrix::new(q, entries)
}

struct Search<'a> {
    q: u64,
    n: usize,
    target: usize,
    /// free (adjacent) columns of each row
    free: &'a [Vec<usize>],
    rows: Vec<Vec<u64>>,
    echelon: Echelon,
}

impl Search<'_> {
    fn row(&mut self, i: usize) -> bool {
        if i == self.n {
            return true;
        }
        let k = self.free[i].len();
        let mut digits = vec![0u64; k];
        loop {
            let mut row = vec![0u64; self.n];
            row[i] = 1;
            for (&j, &x) in self.free[i].iter().zip(&digits) {
                row[j] = x;
            }
            let grew = self.echelon.insert(row.clone());
            if self.echelon.rank() <= self.target {
                self.rows.push(row);
                if self.row(i + 1) {
                    return true;
                }
                self.rows.pop();
            }
            if grew {
                self.echelon.pop();
            }
            // odometer with the last free entry fastest, so assignments
            // come out in lexicographic order
            let mut pos = k;
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < self.q {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

/// Exact minrank over `GF(q)` with the lexicographically least optimal
/// matrix (diagonal normalized to 1) as witness.
pub fn minrank_finite(g: &Graph, q: u64) -> Result<MinrankResult> {
    minrank_finite_capped(g, q, Limits::default().minrank_max_free)
}

pub fn minrank_finite_capped(g: &Graph, q: u64, cap: usize) -> Result<MinrankResult> {
    check_prime(q)?;
    let n = g.n();
    let (chi_bar, cover) = clique_cover_number(g)?;
    let alpha = independence_number(g)?;
    let lower = alpha.max(log_ceiling(chi_bar, q));
    let upper = chi_bar;
    if lower > upper {
        return Err(Error::Internal(format!("minrank bounds crossed: {lower} > {upper}")));
    }
    let free_count = 2 * g.edge_count();
    if free_count > cap {
        if lower == upper {
            return Ok(MinrankResult {
                rank: upper,
                lower,
                upper,
                searched: false,
                witness: clique_cover_matrix(g, &cover, q)?,
            });
        }
        return Err(Error::TooLarge {
            what: "free matrix entries",
            size: free_count,
            cap,
        });
    }
    let free: Vec<Vec<usize>> = (0..n).map(|i| g.neighbors(i).collect()).collect();
    for target in lower..=upper {
        let mut search = Search {
            q,
            n,
            target,
            free: &free,
            rows: Vec::with_capacity(n),
            echelon: Echelon::new(q),
        };
        if search.row(0) {
            let witness = FiniteFieldMatrix::new(q, search.rows)?;
            debug_assert!(represents(g, &witness) && witness.rank() == target);
            return Ok(MinrankResult {
                rank: target,
                lower,
                upper,
                searched: true,
                witness,
            });
        }
    }
    Err(Error::Internal(
        "no representing matrix of rank at most the clique cover number".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every matrix with unit diagonal over the free entries, by plain
    /// enumeration.
    fn brute_minrank(g: &Graph, q: u64) -> usize {
        let n = g.n();
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| g.neighbors(i).map(move |j| (i, j))).collect();
        let total = q.pow(slots.len() as u32);
        let mut best = n;
        for mut code in 0..total {
            let mut m = vec![vec![0u64; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            for &(i, j) in &slots {
                m[i][j] = code % q;
                code /= q;
            }
            best = best.min(FiniteFieldMatrix::new(q, m).unwrap().rank());
        }
        best
    }

    #[test]
    fn five_cycle_over_gf2() {
        let c5 = Graph::cycle(5).unwrap();
        let r = minrank_finite(&c5, 2).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(brute_minrank(&c5, 2), 3);
        assert!(represents(&c5, &r.witness));
        assert_eq!(r.witness.rank(), 3);
    }

    #[test]
    fn trivial_graphs() {
        for q in [2, 3, 5] {
            assert_eq!(minrank_finite(&Graph::complete(4).unwrap(), q).unwrap().rank, 1);
            assert_eq!(minrank_finite(&Graph::empty(5).unwrap(), q).unwrap().rank, 5);
        }
        assert_eq!(minrank_log_lower(&Graph::empty(5).unwrap(), 2).unwrap(), 3);
        assert_eq!(minrank_log_lower(&Graph::complete(3).unwrap(), 2).unwrap(), 1);
    }

    #[test]
    fn agrees_with_enumeration_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let n = rng.random_range(2..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            if 2 * g.edge_count() > 14 {
                continue;
            }
            for q in [2, 3] {
                if 2 * g.edge_count() > 9 && q == 3 {
                    continue;
                }
                let r = minrank_finite(&g, q).unwrap();
                assert_eq!(r.rank, brute_minrank(&g, q));
                assert!(r.rank >= minrank_log_lower(&g, q).unwrap());
                assert!(r.rank <= clique_cover_number(&g).unwrap().0);
            }
        }
    }

    #[test]
    fn over_cap() {
        let g = Graph::cycle(7).unwrap().complement();
        assert!(matches!(minrank_finite_capped(&g, 2, 10), Err(Error::TooLarge { .. })));
        // bounds meet on a complete graph: no search needed
        let k = Graph::complete(8).unwrap();
        let r = minrank_finite(&k, 2).unwrap();
        assert!(!r.searched);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn witness_factors_into_bi_representation() {
        let c5 = Graph::cycle(5).unwrap();
        let r = minrank_finite(&c5, 3).unwrap();
        let (u, v) = r.witness.factor();
        assert_eq!(u[0].len(), r.rank);
        let cert = super::super::BiRepCertificate::finite(3, u, v);
        assert!(super::super::verify_bi_representation(&c5, &cert));
    }
}
