//! The 2-colorability defect of a set system: the fewest white elements in a
//! red/blue/white colouring of the ground set such that no member set is
//! entirely red or entirely blue.

use serde::{Deserialize, Serialize};

use crate::graph::{BitIter, SetSystem};

/// Red/blue split of a ground set with no monochromatic hyperedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoColoring {
    pub red: u64,
    pub blue: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DefectJson", try_from = "DefectJson")]
pub struct DefectResult {
    pub value: usize,
    pub white: u64,
    pub red: u64,
    pub blue: u64,
}

#[derive(Serialize, Deserialize)]
struct DefectJson {
    value: usize,
    white: Vec<usize>,
    red: Vec<usize>,
    blue: Vec<usize>,
}

impl From<DefectResult> for DefectJson {
    fn from(r: DefectResult) -> Self {
        DefectJson {
            value: r.value,
            white: SetSystem::elements(r.white),
            red: SetSystem::elements(r.red),
            blue: SetSystem::elements(r.blue),
        }
    }
}

impl TryFrom<DefectJson> for DefectResult {
    type Error = String;

    fn try_from(j: DefectJson) -> Result<Self, String> {
        let mask = |xs: &[usize]| -> Result<u64, String> {
            xs.iter().try_fold(0u64, |m, &e| {
                if (1..=64).contains(&e) {
                    Ok(m | 1 << (e - 1))
                } else {
                    Err(format!("element {e} out of range"))
                }
            })
        };
        Ok(DefectResult {
            value: j.value,
            white: mask(&j.white)?,
            red: mask(&j.red)?,
            blue: mask(&j.blue)?,
        })
    }
}

impl DefectResult {
    /// Checks the witness against `family` from scratch.
    pub fn verify(&self, family: &SetSystem) -> bool {
        let ground = family.ground_mask();
        let partitions = self.white | self.red | self.blue == ground
            && self.white & self.red == 0
            && self.white & self.blue == 0
            && self.red & self.blue == 0;
        partitions
            && self.white.count_ones() as usize == self.value
            && family.sets().iter().all(|&a| a & !self.red != 0 && a & !self.blue != 0)
    }
}

/// Unit propagation: a hyperedge with no blue element and a single non-red
/// element forces that element blue, and symmetrically. `None` on conflict.
fn propagate(edges: &[u64], mut red: u64, mut blue: u64) -> Option<(u64, u64)> {
    loop {
        let mut changed = false;
        for &a in edges {
            let not_red = a & !red;
            let not_blue = a & !blue;
            if not_red == 0 || not_blue == 0 {
                return None;
            }
            if a & blue == 0 && not_red.count_ones() == 1 {
                blue |= not_red;
                changed = true;
            }
            if a & red == 0 && not_blue.count_ones() == 1 {
                red |= not_blue;
                changed = true;
            }
            if red & blue != 0 {
                return None;
            }
        }
        if !changed {
            return Some((red, blue));
        }
    }
}

fn search(edges: &[u64], ground: u64, red: u64, blue: u64, top: bool) -> Option<TwoColoring> {
    let (red, blue) = propagate(edges, red, blue)?;
    let open = edges.iter().find(|&&a| a & red == 0 || a & blue == 0);
    let Some(&edge) = open else {
        return Some(TwoColoring {
            red: red | (ground & !(red | blue)),
            blue,
        });
    };
    let v = 1u64 << (edge & !(red | blue)).trailing_zeros();
    if let Some(c) = search(edges, ground, red | v, blue, false) {
        return Some(c);
    }
    // with nothing assigned yet, swapping colours maps one branch onto the other
    if top && red | blue == 0 {
        return None;
    }
    search(edges, ground, red, blue | v, false)
}

/// 2-colouring of the hypergraph on `ground` whose edges are the sets lying
/// inside `ground`.
pub fn two_coloring(sets: &[u64], ground: u64) -> Option<TwoColoring> {
    let edges: Vec<u64> = sets.iter().copied().filter(|&a| a & !ground == 0).collect();
    search(&edges, ground, 0, 0, true)
}

/// `is_two_colorable` on a set system restricted to the ground subset `ground`.
pub fn is_two_colorable(family: &SetSystem, ground: u64) -> Option<TwoColoring> {
    two_coloring(family.sets(), ground & family.ground_mask())
}

/// Exact 2-colorability defect by iterative deepening on the number of white
/// elements. Among optimal white sets the numerically smallest mask wins.
pub fn cd2(family: &SetSystem) -> DefectResult {
    let ground = family.ground_mask();
    let support: u64 = family.sets().iter().fold(0, |acc, &a| acc | a);
    let elems: Vec<usize> = BitIter(support).collect();
    let mut residual = Vec::with_capacity(family.len());
    for k in 0..=elems.len() {
        for pick in subsets_of_size(elems.len(), k) {
            let white = BitIter(pick).fold(0u64, |m, i| m | 1 << elems[i]);
            residual.clear();
            residual.extend(family.sets().iter().copied().filter(|&a| a & white == 0));
            if let Some(c) = two_coloring(&residual, ground & !white) {
                return DefectResult {
                    value: k,
                    white,
                    red: c.red,
                    blue: c.blue,
                };
            }
        }
    }
    unreachable!("whitening the whole support always leaves a colourable residue")
}

/// `k`-subsets of `0..n` as masks in increasing numeric order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut cur: u128 = if k == 0 { 0 } else { (1u128 << k) - 1 };
    let mut done = false;
    std::iter::from_fn(move || {
        if done || cur >= limit {
            return None;
        }
        let out = cur as u64;
        if cur == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
        }
        Some(out)
    })
}
