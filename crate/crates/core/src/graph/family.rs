use std::collections::HashSet;

use super::{BitIter, Graph};
use crate::error::{check_cap, Error, Result};

/// Largest family the constructors will materialize.
pub const FAMILY_CAP: usize = 200_000;

/// Family of nonempty subsets of the ground set `[d] = {1..d}`; element `i`
/// is bit `i - 1` of a mask.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(into = "super::SetSystemFile", try_from = "super::SetSystemFile")]
pub struct SetSystem {
    d: usize,
    sets: Vec<u64>,
    label: Option<String>,
}

fn ground(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

impl SetSystem {
    /// Validates the masks and drops duplicates, keeping first occurrences.
    pub fn new(d: usize, sets: impl IntoIterator<Item = u64>) -> Result<Self> {
        if d > 64 {
            return Err(Error::TooLarge {
                what: "ground set size",
                size: d,
                cap: 64,
            });
        }
        let full = ground(d);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for mask in sets {
            if mask == 0 {
                return Err(Error::Malformed("the empty set is not allowed in a family".into()));
            }
            if mask & !full != 0 {
                return Err(Error::Malformed(format!("set {mask:#b} leaves the ground set [{d}]")));
            }
            if seen.insert(mask) {
                out.push(mask);
            }
        }
        Ok(SetSystem {
            d,
            sets: out,
            label: None,
        })
    }

    /// Builds a family from 1-based element lists.
    pub fn from_lists(d: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(lists.len());
        for list in lists {
            let mut mask = 0u64;
            for &e in list {
                if e == 0 || e > d || e > 64 {
                    return Err(Error::Malformed(format!("element {e} outside [1, {d}]")));
                }
                mask |= 1 << (e - 1);
            }
            masks.push(mask);
        }
        SetSystem::new(d, masks)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn ground_mask(&self) -> u64 {
        ground(self.d)
    }

    /// Family with the set at `index` removed.
    pub fn without(&self, index: usize) -> SetSystem {
        let mut sets = self.sets.clone();
        sets.remove(index);
        SetSystem {
            d: self.d,
            sets,
            label: None,
        }
    }

    /// True if every set of `self` also belongs to `other`.
    pub fn is_subfamily_of(&self, other: &SetSystem) -> bool {
        let theirs: HashSet<u64> = other.sets.iter().copied().collect();
        self.sets.iter().all(|m| theirs.contains(m))
    }

    /// 1-based elements of a mask, ascending.
    pub fn elements(mask: u64) -> Vec<usize> {
        BitIter(mask).map(|b| b + 1).collect()
    }

    pub fn lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&m| Self::elements(m)).collect()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_params(d: usize, s: usize) -> Result<()> {
    if s == 0 || d < 2 * s {
        return Err(Error::InvalidParameters(format!(
            "need d >= 2s >= 2, got d = {d}, s = {s}"
        )));
    }
    if d > 64 {
        return Err(Error::TooLarge {
            what: "ground set size",
            size: d,
            cap: 64,
        });
    }
    Ok(())
}

/// All `s`-subsets of a `d`-set in increasing mask order (colex).
fn k_subsets(d: usize, s: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << d;
    let mut cur: u128 = (1u128 << s) - 1;
    std::iter::from_fn(move || {
        if cur >= limit {
            return None;
        }
        let out = cur as u64;
        // Gosper's hack
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        cur = (((r ^ cur) >> 2) / c) | r;
        Some(out)
    })
}

/// All `s`-subsets of `[d]`, colex order.
pub fn kneser_family(d: usize, s: usize) -> Result<SetSystem> {
    check_params(d, s)?;
    let count = binomial(d, s);
    check_cap("family size", usize::try_from(count).unwrap_or(usize::MAX), FAMILY_CAP)?;
    Ok(SetSystem {
        d,
        sets: k_subsets(d, s).collect(),
        label: Some(format!("K({d},{s})")),
    })
}

/// Stable `s`-subsets of `[d]`: no two cyclically consecutive elements.
pub fn schrijver_family(d: usize, s: usize) -> Result<SetSystem> {
    check_params(d, s)?;
    let count = binomial(d, s);
    check_cap("family size", usize::try_from(count).unwrap_or(usize::MAX), FAMILY_CAP)?;
    let full = ground(d);
    let stable = move |m: u64| {
        let rotated = ((m << 1) | (m >> (d - 1))) & full;
        m & rotated == 0
    };
    Ok(SetSystem {
        d,
        sets: k_subsets(d, s).filter(|&m| stable(m)).collect(),
        label: Some(format!("S({d},{s})")),
    })
}

/// Disjointness graph `K(F)` with one vertex per set, in family order.
pub fn generalized_kneser_graph(family: &SetSystem) -> Result<Graph> {
    let sets = family.sets();
    let mut edges = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate().skip(i + 1) {
            if a & b == 0 {
                edges.push((i, j));
            }
        }
    }
    if sets.is_empty() {
        return Err(Error::InvalidParameters(
            "K(F) of an empty family has no vertices".into(),
        ));
    }
    let g = Graph::new(sets.len(), &edges)?;
    Ok(match family.label() {
        Some(l) => g.with_label(l),
        None => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_subsets(d: usize, s: usize) -> Vec<u64> {
        (0u64..1 << d).filter(|m| m.count_ones() as usize == s).collect()
    }

    #[test]
    fn kneser_counts() {
        assert_eq!(kneser_family(5, 2).unwrap().len(), 10);
        assert_eq!(kneser_family(4, 2).unwrap().len(), 6);
        let f = kneser_family(6, 3).unwrap();
        assert_eq!(f.len(), 20);
        assert!(f.sets().iter().all(|m| m.count_ones() == 3));
        assert!(kneser_family(3, 2).is_err());
        assert!(kneser_family(4, 0).is_err());
    }

    #[test]
    fn kneser_order_is_colex() {
        for (d, s) in [(5, 2), (7, 3), (8, 1)] {
            assert_eq!(kneser_family(d, s).unwrap().sets(), brute_subsets(d, s).as_slice());
        }
    }

    #[test]
    fn schrijver_small_cases() {
        let f = schrijver_family(4, 2).unwrap();
        assert_eq!(f.lists(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(schrijver_family(5, 2).unwrap().len(), 5);
        assert_eq!(schrijver_family(6, 2).unwrap().len(), 9);
        assert!(schrijver_family(5, 3).is_err());
    }

    #[test]
    fn schrijver_count_formula() {
        for d in 2..=14usize {
            for s in 1..=d / 2 {
                let got = schrijver_family(d, s).unwrap().len() as u128;
                // d/(d-s) * C(d-s, s)
                let expect = d as u128 * binomial(d - s, s) / (d - s) as u128;
                assert_eq!(got, expect, "d={d} s={s}");
                assert!(schrijver_family(d, s)
                    .unwrap()
                    .is_subfamily_of(&kneser_family(d, s).unwrap()));
            }
        }
    }

    #[test]
    fn petersen() {
        let g = generalized_kneser_graph(&kneser_family(5, 2).unwrap()).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn kneser_graphs_are_regular() {
        for (d, s) in [(6, 2), (7, 3), (8, 2), (9, 4)] {
            let g = generalized_kneser_graph(&kneser_family(d, s).unwrap()).unwrap();
            let deg = binomial(d - s, s) as usize;
            assert!((0..g.n()).all(|v| g.degree(v) == deg));
        }
    }

    #[test]
    fn tiny_families() {
        let f = SetSystem::from_lists(1, &[vec![1]]).unwrap();
        let g = generalized_kneser_graph(&f).unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        let g = generalized_kneser_graph(&schrijver_family(4, 2).unwrap()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn schrijver_graph_is_induced_in_kneser() {
        let k = kneser_family(7, 2).unwrap();
        let s = schrijver_family(7, 2).unwrap();
        let kg = generalized_kneser_graph(&k).unwrap();
        let idx: Vec<usize> = s
            .sets()
            .iter()
            .map(|m| k.sets().iter().position(|x| x == m).unwrap())
            .collect();
        assert_eq!(kg.induced(&idx).unwrap(), generalized_kneser_graph(&s).unwrap());
    }

    #[test]
    fn set_system_validation() {
        assert!(SetSystem::new(3, [0]).is_err());
        assert!(SetSystem::new(3, [0b1000]).is_err());
        assert!(SetSystem::from_lists(3, &[vec![4]]).is_err());
        let f = SetSystem::new(3, [1, 2, 1]).unwrap();
        assert_eq!(f.sets(), &[1, 2]);
    }
}
