//! Simple undirected graphs over vertices `0..n` stored as adjacency bit rows.

mod family;
mod independence;
mod io;

pub use family::{generalized_kneser_graph, kneser_family, schrijver_family, SetSystem};
pub use independence::{
    clique_number, independence_number, independence_number_capped, maximal_independent_sets, maximum_independent_set,
    ALPHA_CAP,
};
pub use io::{GraphFile, SetSystemFile};

use std::fmt;

use crate::error::{Error, Result};

/// Simple graph; row `u` of `adj` is the neighbour bitset of `u`, split into
/// 64-bit words.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    label: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .field("label", &self.label)
            .finish()
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("a graph needs at least one vertex".into()));
        }
        let words = words_for(n);
        Ok(Graph {
            n,
            words,
            adj: vec![0; n * words],
            label: None,
        })
    }

    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Malformed(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Malformed(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        Ok(g.with_label(format!("K_{n}")))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("cycle needs n >= 3, got {n}")));
        }
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        Ok(g.with_label(format!("C_{n}")))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Neighbour bitset of `u` as 64-bit words.
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u)
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| BitIter(bits).map(move |b| w * 64 + b))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Single-word adjacency rows; only available for `n <= 64`.
    pub fn small_rows(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::TooLarge {
                what: "vertex count (single-word bitset)",
                size: self.n,
                cap: 64,
            });
        }
        Ok(self.adj.clone())
    }

    /// Mask of all vertices, for `n <= 64`.
    pub fn full_mask(&self) -> u64 {
        debug_assert!(self.n <= 64);
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("n >= 1");
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g.label = self.label.as_ref().map(|l| match l.strip_suffix("-complement") {
            Some(base) => base.to_string(),
            None => format!("{l}-complement"),
        });
        g
    }

    /// Subgraph induced by `vertices` (strictly increasing), relabelled to
    /// `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameters(
                "induced subgraph on an empty vertex set".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) || *vertices.last().unwrap() >= self.n {
            return Err(Error::InvalidParameters(
                "induced vertex list must be strictly increasing and in range".into(),
            ));
        }
        let mut g = Graph::empty(vertices.len())?;
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Induced subgraph for a vertex mask (`n <= 64`).
    pub fn induced_mask(&self, mask: u64) -> Result<Graph> {
        if self.n < 64 && mask >> self.n != 0 {
            return Err(Error::InvalidParameters("vertex mask outside the graph".into()));
        }
        let vertices: Vec<usize> = BitIter(mask).collect();
        self.induced(&vertices)
    }

    /// Strong product; vertex `(a, b)` gets index `a * other.n() + b`.
    pub fn strong_product(&self, other: &Graph) -> Graph {
        let (n1, n2) = (self.n, other.n);
        let mut g = Graph::empty(n1 * n2).expect("n >= 1");
        let close1 = |a: usize, b: usize| a == b || self.has_edge(a, b);
        let close2 = |a: usize, b: usize| a == b || other.has_edge(a, b);
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let x = a1 * n2 + a2;
                for b1 in a1..n1 {
                    if !close1(a1, b1) {
                        continue;
                    }
                    for b2 in 0..n2 {
                        let y = b1 * n2 + b2;
                        if y > x && close2(a2, b2) {
                            g.add_edge(x, y);
                        }
                    }
                }
            }
        }
        if let (Some(l1), Some(l2)) = (&self.label, &other.label) {
            g.label = Some(format!("{l1}.{l2}"));
        }
        g
    }

    /// `k`-fold strong power.
    pub fn power(&self, k: usize) -> Result<Graph> {
        if k == 0 {
            return Err(Error::InvalidParameters("graph power needs k >= 1".into()));
        }
        let mut g = self.clone();
        for _ in 1..k {
            g = g.strong_product(self);
        }
        g.label = self
            .label
            .as_ref()
            .map(|l| if k == 1 { l.clone() } else { format!("{l}^{k}") });
        Ok(g)
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}
