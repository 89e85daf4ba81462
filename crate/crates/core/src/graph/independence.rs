//! Exact maximum independent sets and maximal independent set enumeration on
//! single-word bitset graphs.

use super::{BitIter, Graph};
use crate::error::{check_cap, Result};

/// Default vertex cap for exact independence computations.
pub const ALPHA_CAP: usize = 64;

/// Greedy colour classes over `cand`; returns vertices ordered by class and
/// the running class count, the usual bound for clique branch-and-bound.
fn colour_sort(adj: &[u64], cand: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !adj[v] & !(1 << v);
            uncoloured &= !(1 << v);
            order.push(v);
            bounds.push(colour);
        }
    }
    (order, bounds)
}

fn expand(adj: &[u64], cand: u64, current: u64, best: &mut u64) {
    let (order, bounds) = colour_sort(adj, cand);
    let size = current.count_ones() as usize;
    let mut cand = cand;
    for i in (0..order.len()).rev() {
        if size + bounds[i] <= best.count_ones() as usize {
            return;
        }
        let v = order[i];
        let next = current | 1 << v;
        let sub = cand & adj[v];
        if sub == 0 {
            if next.count_ones() > best.count_ones() {
                *best = next;
            }
        } else {
            expand(adj, sub, next, best);
        }
        cand &= !(1 << v);
    }
}

fn max_clique_mask(adj: &[u64], all: u64) -> u64 {
    let mut best = 0u64;
    if all != 0 {
        // seed with a single vertex so ties resolve toward low indices
        best = 1 << all.trailing_zeros();
        expand(adj, all, 0, &mut best);
    }
    best
}

fn complement_rows(g: &Graph) -> Result<Vec<u64>> {
    let rows = g.small_rows()?;
    let full = g.full_mask();
    Ok(rows.iter().enumerate().map(|(v, r)| !r & full & !(1 << v)).collect())
}

/// Vertices of a maximum independent set, ascending.
pub fn maximum_independent_set(g: &Graph) -> Result<Vec<usize>> {
    check_cap("vertex count", g.n(), ALPHA_CAP)?;
    let co = complement_rows(g)?;
    Ok(BitIter(max_clique_mask(&co, g.full_mask())).collect())
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    independence_number_capped(g, ALPHA_CAP)
}

pub fn independence_number_capped(g: &Graph, cap: usize) -> Result<usize> {
    check_cap("vertex count", g.n(), cap.min(ALPHA_CAP))?;
    let co = complement_rows(g)?;
    Ok(max_clique_mask(&co, g.full_mask()).count_ones() as usize)
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    check_cap("vertex count", g.n(), ALPHA_CAP)?;
    let rows = g.small_rows()?;
    Ok(max_clique_mask(&rows, g.full_mask()).count_ones() as usize)
}

/// All maximal independent sets as vertex masks, sorted ascending.
/// Bron-Kerbosch with pivoting on the complement.
pub fn maximal_independent_sets(g: &Graph, cap: usize) -> Result<Vec<u64>> {
    check_cap("vertex count", g.n(), cap.min(ALPHA_CAP))?;
    let co = complement_rows(g)?;
    let mut out = Vec::new();
    bron_kerbosch(&co, 0, g.full_mask(), 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = BitIter(p | x)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p is nonempty");
    for v in BitIter(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}
