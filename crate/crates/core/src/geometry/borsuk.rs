//! Finite Borsuk graphs. This is the only floating-point part of the crate;
//! the tolerances below are fixed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Consecutive rejected samples before the packing is declared maximal.
pub const MAX_REJECTIONS: usize = 10_000;
/// Uniform probes per covering check round.
pub const PROBES: usize = 10_000;
/// Slack on the adjacency threshold `2 - 2 eps`.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorsukNet {
    pub d: usize,
    pub eps: f64,
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
    /// probe points that were uncovered and joined the net
    pub probe_additions: usize,
    /// covering check rounds, the last of which saw every probe covered
    pub probe_rounds: usize,
}

fn sphere_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn nearest(points: &[Vec<f64>], x: &[f64]) -> f64 {
    points.iter().map(|p| distance(p, x)).fold(f64::INFINITY, f64::min)
}

/// Greedy `eps`-packing of `S^(d-1)` by rejection sampling, followed by
/// sampled covering checks: uncovered probes are added (they keep the
/// packing property) until a full round of probes is covered.
pub fn borsuk_net(d: usize, eps: f64, seed: u64) -> Result<BorsukNet> {
    if d < 2 {
        return Err(Error::InvalidParameters("sphere dimension d must be at least 2".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameters(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut rejections = 0;
    while rejections < MAX_REJECTIONS {
        let x = sphere_point(&mut rng, d);
        if nearest(&points, &x) >= eps {
            points.push(x);
            rejections = 0;
        } else {
            rejections += 1;
        }
    }
    let mut probe_additions = 0;
    let mut probe_rounds = 0;
    loop {
        probe_rounds += 1;
        let mut added = false;
        for _ in 0..PROBES {
            let x = sphere_point(&mut rng, d);
            if nearest(&points, &x) >= eps {
                points.push(x);
                probe_additions += 1;
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(BorsukNet {
        d,
        eps,
        seed,
        points,
        probe_additions,
        probe_rounds,
    })
}

impl BorsukNet {
    /// Minimum pairwise distance is at least `eps - TOLERANCE`.
    pub fn is_packing(&self) -> bool {
        self.points.iter().enumerate().all(|(i, p)| {
            self.points[i + 1..]
                .iter()
                .all(|q| distance(p, q) >= self.eps - TOLERANCE)
        })
    }

    /// Covering spot check with fresh probes.
    pub fn probes_covered(&self, probes: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..probes).all(|_| nearest(&self.points, &sphere_point(&mut rng, self.d)) < self.eps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorsukGraph {
    #[serde(with = "graph_json")]
    pub graph: Graph,
    pub eps: f64,
    /// the complement has orthogonality dimension over the reals at least `d + 1`
    pub xi_real_lower: usize,
    pub provenance: String,
}

mod graph_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::graph::{Graph, GraphFile};

    pub fn serialize<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
        GraphFile::from(g).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        Graph::try_from(GraphFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Points adjacent when at distance at least `2 - 2 eps` (minus tolerance).
pub fn borsuk_graph(net: &BorsukNet, eps: f64) -> Result<BorsukGraph> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameters(format!("eps must lie in (0, 1), got {eps}")));
    }
    let n = net.points.len();
    let threshold = 2.0 - 2.0 * eps - TOLERANCE;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if distance(&net.points[i], &net.points[j]) >= threshold {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::new(n, &edges)?.with_label(format!("B({},{eps})", net.d));
    Ok(BorsukGraph {
        graph,
        eps,
        xi_real_lower: net.d + 1,
        provenance: "finite Borsuk graph from an eps-net of S^(d-1): its complement has real orthogonality dimension at least d+1".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_net() {
        let net = borsuk_net(2, 0.9, 1).unwrap();
        assert!(net.points.len() >= 4);
        assert!(net.is_packing());
        assert!(net.probes_covered(10_000, 99));
        let g = borsuk_graph(&net, 0.9).unwrap();
        assert!(g.graph.edge_count() > 0);
        assert_eq!(g.xi_real_lower, 3);
    }

    #[test]
    fn antipodal_points_are_adjacent() {
        let net = BorsukNet {
            d: 3,
            eps: 0.2,
            seed: 0,
            points: vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0], vec![1.0, 0.0, 0.0]],
            probe_additions: 0,
            probe_rounds: 0,
        };
        // threshold 1.6: antipodes (distance 2) are adjacent, orthogonal points (sqrt 2) are not
        let g = borsuk_graph(&net, 0.2).unwrap().graph;
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn parameter_checks() {
        assert!(borsuk_net(2, 1.0, 0).is_err());
        assert!(borsuk_net(2, 0.0, 0).is_err());
        assert!(borsuk_net(1, 0.5, 0).is_err());
    }

    #[test]
    fn reproducible() {
        assert_eq!(borsuk_net(3, 0.8, 5).unwrap(), borsuk_net(3, 0.8, 5).unwrap());
    }
}
