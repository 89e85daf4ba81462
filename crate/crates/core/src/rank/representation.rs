use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chromatic::{verify_coloring, ColoringCertificate};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{int, Rational};

/// Field the vectors live over. Finite-field entries are stored as
/// integers in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "lowercase")]
pub enum Field {
    Rational,
    Finite { q: u64 },
}

impl Field {
    /// Bilinear form `Σ a_k b_k`, reduced mod `q` for finite fields. `None`
    /// if an entry is not a valid field element or lengths differ.
    fn dot(&self, a: &[Rational], b: &[Rational]) -> Option<Rational> {
        if a.len() != b.len() {
            return None;
        }
        let sum: Rational = a.iter().zip(b).map(|(x, y)| x * y).sum();
        match *self {
            Field::Rational => Some(sum),
            Field::Finite { q } => {
                let valid = |x: &Rational| x.is_integer() && !x.is_negative() && *x.numer() < BigInt::from(q);
                if !a.iter().chain(b).all(valid) {
                    return None;
                }
                Some(Rational::from_integer(sum.to_integer().mod_floor(&BigInt::from(q))))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthRepCertificate {
    #[serde(flatten)]
    pub field: Field,
    #[serde(with = "crate::serde_util::rational_matrix")]
    pub vectors: Vec<Vec<Rational>>,
}

impl OrthRepCertificate {
    pub fn finite(q: u64, vectors: Vec<Vec<u64>>) -> Self {
        OrthRepCertificate {
            field: Field::Finite { q },
            vectors: lift(vectors),
        }
    }

    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiRepCertificate {
    #[serde(flatten)]
    pub field: Field,
    #[serde(with = "crate::serde_util::rational_matrix")]
    pub left: Vec<Vec<Rational>>,
    #[serde(with = "crate::serde_util::rational_matrix")]
    pub right: Vec<Vec<Rational>>,
}

impl BiRepCertificate {
    pub fn finite(q: u64, left: Vec<Vec<u64>>, right: Vec<Vec<u64>>) -> Self {
        BiRepCertificate {
            field: Field::Finite { q },
            left: lift(left),
            right: lift(right),
        }
    }

    pub fn dimension(&self) -> usize {
        self.left.first().map_or(0, Vec::len)
    }
}

fn lift(vectors: Vec<Vec<u64>>) -> Vec<Vec<Rational>> {
    vectors
        .into_iter()
        .map(|v| v.into_iter().map(|x| Rational::from_integer(x.into())).collect())
        .collect()
}

fn common_dimension(vectors: &[Vec<Rational>]) -> bool {
    vectors.windows(2).all(|w| w[0].len() == w[1].len())
}

/// `⟨u_i, u_i⟩ ≠ 0` and `⟨u_i, u_j⟩ = 0` for distinct non-adjacent `i, j`.
pub fn verify_orthogonal_representation(g: &Graph, cert: &OrthRepCertificate) -> bool {
    let u = &cert.vectors;
    let n = g.n();
    if u.len() != n || !common_dimension(u) {
        return false;
    }
    let nonzero = |a: &[Rational], b: &[Rational]| cert.field.dot(a, b).map(|x| !x.is_zero());
    (0..n).all(|i| {
        nonzero(&u[i], &u[i]) == Some(true)
            && (i + 1..n).all(|j| g.has_edge(i, j) || nonzero(&u[i], &u[j]) == Some(false))
    })
}

/// `⟨u_i, v_i⟩ ≠ 0` and `⟨u_i, v_j⟩ = ⟨u_j, v_i⟩ = 0` for distinct
/// non-adjacent `i, j`.
pub fn verify_bi_representation(g: &Graph, cert: &BiRepCertificate) -> bool {
    let (u, v) = (&cert.left, &cert.right);
    let n = g.n();
    if u.len() != n || v.len() != n || !common_dimension(u) || !common_dimension(v) {
        return false;
    }
    let nonzero = |a: &[Rational], b: &[Rational]| cert.field.dot(a, b).map(|x| !x.is_zero());
    (0..n).all(|i| {
        nonzero(&u[i], &v[i]) == Some(true)
            && (0..n).all(|j| i == j || g.has_edge(i, j) || nonzero(&u[i], &v[j]) == Some(false))
    })
}

/// Vertex in clique class `c` gets the standard basis vector `e_c`.
pub fn clique_cover_representation(g: &Graph, cover: &ColoringCertificate) -> Result<OrthRepCertificate> {
    if !verify_coloring(&g.complement(), cover) {
        return Err(Error::Rejected(
            "cover is not a proper coloring of the complement".into(),
        ));
    }
    let classes = cover.normalized();
    let dim = cover.palette;
    let vectors = classes
        .iter()
        .map(|&c| (0..dim).map(|k| int(i64::from(k == c))).collect())
        .collect();
    let cert = OrthRepCertificate {
        field: Field::Rational,
        vectors,
    };
    debug_assert!(verify_orthogonal_representation(g, &cert));
    Ok(cert)
}
