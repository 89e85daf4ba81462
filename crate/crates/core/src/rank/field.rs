use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p))
}

pub(crate) fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) && q < 1 << 31 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "field order {q} must be a prime below 2^31"
        )))
    }
}

pub(crate) fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % q, q - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Square matrix over the prime field `GF(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFieldMatrix {
    pub q: u64,
    pub entries: Vec<Vec<u64>>,
}

impl FiniteFieldMatrix {
    pub fn new(q: u64, entries: Vec<Vec<u64>>) -> Result<Self> {
        check_prime(q)?;
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("matrix must be square".into()));
        }
        if entries.iter().flatten().any(|&x| x >= q) {
            return Err(Error::Malformed(format!("entries must lie in [0, {q})")));
        }
        Ok(FiniteFieldMatrix { q, entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        let mut echelon = Echelon::new(self.q);
        for row in &self.entries {
            echelon.insert(row.clone());
        }
        echelon.rank()
    }

    /// `M = U V^T` with `U, V` of width `rank(M)`; row `i` of `U` and of `V`
    /// form an orthogonal bi-representation when `M` represents a graph.
    pub fn factor(&self) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
        let q = self.q;
        let mut echelon = Echelon::new(q);
        for row in &self.entries {
            echelon.insert(row.clone());
        }
        let basis = echelon.reduced_basis();
        let n = self.n();
        // in reduced row echelon form, the coefficient of basis row k in a
        // row of M is that row's entry at the k-th pivot column
        let u = self
            .entries
            .iter()
            .map(|row| basis.iter().map(|(p, _)| row[*p]).collect())
            .collect();
        let v = (0..n).map(|j| basis.iter().map(|(_, b)| b[j]).collect()).collect();
        (u, v)
    }
}

/// Incremental row echelon form over `GF(q)`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    q: u64,
    /// (pivot column, row normalized to 1 at the pivot)
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(q: u64) -> Self {
        Echelon { q, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: Vec<u64>) -> Vec<u64> {
        let q = self.q;
        for (p, b) in &self.rows {
            let f = row[*p];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(b) {
                    *x = (*x + (q - f) * y) % q;
                }
            }
        }
        row
    }

    /// Adds `row`; true iff the rank grew.
    pub fn insert(&mut self, row: Vec<u64>) -> bool {
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(row[p], self.q);
        for x in row.iter_mut() {
            *x = *x * inv % self.q;
        }
        self.rows.push((p, row));
        true
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }

    /// Fully reduced basis, sorted by pivot column.
    pub fn reduced_basis(&self) -> Vec<(usize, Vec<u64>)> {
        let q = self.q;
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        for i in 0..rows.len() {
            let (p, pivot_row) = rows[i].clone();
            for (j, (_, other)) in rows.iter_mut().enumerate() {
                if j != i && other[p] != 0 {
                    let f = other[p];
                    for (x, y) in other.iter_mut().zip(&pivot_row) {
                        *x = (*x + (q - f) * y) % q;
                    }
                }
            }
        }
        rows
    }
}
