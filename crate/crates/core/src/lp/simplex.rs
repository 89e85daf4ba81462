//! Dense two-phase tableau simplex. Entering columns follow the most
//! negative reduced cost until a long run of degenerate pivots, after which
//! Bland's rule takes over and guarantees termination.

use std::ops::Range;

use num_traits::{Signed, Zero};

use super::{Direction, LinearProgram, LpOutcome, Rational, Relation};
use crate::error::{Error, Result};

/// How an original variable maps onto nonnegative tableau columns.
enum Column {
    /// `x = lower + y`
    Shifted(usize, Rational),
    /// `x = y+ - y-`
    Split(usize, usize),
}

const DEGENERATE_LIMIT: usize = 50;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
    /// reduced costs for the current phase
    reduced: Vec<Rational>,
    /// negated objective value for the current phase
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, p: usize, q: usize) {
        let inv = self.rows[p][q].recip();
        if inv != Rational::from_integer(1.into()) {
            for x in self.rows[p].iter_mut().filter(|x| !x.is_zero()) {
                *x *= &inv;
            }
            self.rhs[p] *= &inv;
        }
        let support: Vec<usize> = (0..self.cols).filter(|&j| !self.rows[p][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.rows[p].clone(), self.rhs[p].clone());
        for i in 0..self.rows.len() {
            if i == p || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.reduced[q].is_zero() {
            let f = self.reduced[q].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.reduced[j] -= delta;
            }
            self.value -= &f * &pivot_rhs;
        }
        self.basis[p] = q;
    }

    fn price(&mut self, cost: &[Rational]) {
        self.reduced = cost.to_vec();
        self.value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if !self.rows[i][j].is_zero() {
                    let delta = cb * &self.rows[i][j];
                    self.reduced[j] -= delta;
                }
            }
            self.value -= cb * &self.rhs[i];
        }
    }

    /// Minimizes the priced objective over columns outside `skip`.
    /// Returns false if unbounded.
    fn optimize(&mut self, skip: Range<usize>) -> bool {
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let mut eligible = (0..self.cols).filter(|j| !skip.contains(j) && self.reduced[*j].is_negative());
            let entering = if bland {
                eligible.next()
            } else {
                eligible.min_by(|&a, &b| self.reduced[a].cmp(&self.reduced[b]).then(a.cmp(&b)))
            };
            let Some(q) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, ratio)) => {
                    if ratio.is_zero() {
                        degenerate_run += 1;
                        // Dantzig's rule can cycle; Bland's rule from here on cannot
                        bland |= degenerate_run > DEGENERATE_LIMIT;
                    } else {
                        degenerate_run = 0;
                    }
                    self.pivot(p, q)
                }
                None => return false,
            }
        }
    }
}

/// Solves `lp`; on optimality also returns one dual value per constraint.
pub(super) fn run(lp: &LinearProgram) -> (LpOutcome, Option<Vec<Rational>>) {
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());

    let mut columns = Vec::with_capacity(lp.num_vars());
    let mut ny = 0;
    for lb in &lp.lower_bounds {
        match lb {
            Some(l) => {
                columns.push(Column::Shifted(ny, l.clone()));
                ny += 1;
            }
            None => {
                columns.push(Column::Split(ny, ny + 1));
                ny += 2;
            }
        }
    }

    // rows over y with rhs >= 0
    let mut structural: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(lp.constraints.len());
    let mut flipped = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let mut row = vec![zero.clone(); ny];
        let mut rhs = c.rhs.clone();
        for (a, col) in c.coeffs.iter().zip(&columns) {
            if a.is_zero() {
                continue;
            }
            match col {
                Column::Shifted(j, l) => {
                    row[*j] = a.clone();
                    rhs -= a * l;
                }
                Column::Split(p, n) => {
                    row[*p] = a.clone();
                    row[*n] = -a;
                }
            }
        }
        let mut rel = c.relation;
        flipped.push(rhs.is_negative());
        if rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        structural.push((row, rel, rhs));
    }

    let m = structural.len();
    let n_slack = structural.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let n_art = structural.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let art_start = ny + n_slack;
    let cols = art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (ny, art_start);
    // per row: a column equal to `coef * e_row` in the initial tableau
    let mut markers: Vec<(usize, Rational)> = Vec::with_capacity(m);
    for (row, rel, b) in structural {
        let mut full = row;
        full.resize(cols, zero.clone());
        match rel {
            Relation::Le => {
                full[next_slack] = one.clone();
                markers.push((next_slack, one.clone()));
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                full[next_slack] = -one.clone();
                markers.push((next_slack, -one.clone()));
                next_slack += 1;
                full[next_art] = one.clone();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                full[next_art] = one.clone();
                markers.push((next_art, one.clone()));
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(full);
        rhs.push(b);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cols,
        reduced: Vec::new(),
        value: Rational::zero(),
    };

    if n_art > 0 {
        let mut cost = vec![zero.clone(); cols];
        for c in cost.iter_mut().skip(art_start) {
            *c = one.clone();
        }
        t.price(&cost);
        t.optimize(0..0);
        if !t.value.is_zero() {
            return (LpOutcome::Infeasible, None);
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(q) => {
                        t.pivot(i, q);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let sign = match lp.direction {
        Direction::Minimize => one.clone(),
        Direction::Maximize => -one.clone(),
    };
    let mut cost = vec![zero.clone(); cols];
    for (c, col) in lp.objective.iter().zip(&columns) {
        let c = &sign * c;
        match col {
            Column::Shifted(j, _) => cost[*j] = c,
            Column::Split(p, n) => {
                cost[*n] = -&c;
                cost[*p] = c;
            }
        }
    }
    t.price(&cost);
    if !t.optimize(art_start..cols) {
        return (LpOutcome::Unbounded, None);
    }

    let mut y = vec![zero.clone(); ny];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ny {
            y[b] = t.rhs[i].clone();
        }
    }
    let point: Vec<Rational> = columns
        .iter()
        .map(|col| match col {
            Column::Shifted(j, l) => l + &y[*j],
            Column::Split(p, n) => &y[*p] - &y[*n],
        })
        .collect();
    let value = lp.evaluate(&point);
    // reduced cost of `coef * e_i` is `-coef * pi_i` for the internal minimum;
    // undo the row flip and the direction sign
    let duals = markers
        .iter()
        .zip(&flipped)
        .map(|((col, coef), &flip)| {
            let pi = -(coef * &t.reduced[*col]);
            let pi = if flip { -pi } else { pi };
            &sign * pi
        })
        .collect();
    (LpOutcome::Optimal { value, point }, Some(duals))
}

/// Optimum of a covering program together with its dual values.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringSolution {
    pub value: Rational,
    /// one entry per column, in insertion order
    pub point: Vec<Rational>,
    /// one entry per row
    pub duals: Vec<Rational>,
}

/// `min c.x  s.t.  A x >= b, x >= 0` with `b >= 0`, kept as a live tableau
/// so that columns can be added between solves (column generation). The
/// basis of the previous optimum stays feasible, so each re-solve starts
/// from it.
///
/// Tableau layout: `m` surplus columns, `m` artificial columns, then the
/// structural columns in insertion order.
pub struct CoveringProgram {
    t: Tableau,
    m: usize,
    rhs: Vec<Rational>,
    costs: Vec<Rational>,
    original: Vec<Vec<Rational>>,
    feasible: bool,
}

impl CoveringProgram {
    pub fn new(rhs: Vec<Rational>) -> Result<Self> {
        if rhs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidParameters(
                "covering program needs a nonnegative right-hand side".into(),
            ));
        }
        let m = rhs.len();
        let one = Rational::from_integer(1.into());
        let rows = (0..m)
            .map(|i| {
                let mut row = vec![Rational::zero(); 2 * m];
                row[i] = -one.clone();
                row[m + i] = one.clone();
                row
            })
            .collect();
        Ok(CoveringProgram {
            t: Tableau {
                rows,
                rhs: rhs.clone(),
                basis: (m..2 * m).collect(),
                cols: 2 * m,
                reduced: Vec::new(),
                value: Rational::zero(),
            },
            m,
            rhs,
            costs: Vec::new(),
            original: Vec::new(),
            feasible: false,
        })
    }

    pub fn columns(&self) -> usize {
        self.costs.len()
    }

    pub fn add_column(&mut self, cost: Rational, coeffs: Vec<Rational>) -> Result<()> {
        if coeffs.len() != self.m {
            return Err(Error::InvalidParameters(format!(
                "column has {} entries, program has {} rows",
                coeffs.len(),
                self.m
            )));
        }
        // B^-1 a, read off the artificial columns (initially the identity)
        for r in 0..self.t.rows.len() {
            let entry: Rational = coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| a * &self.t.rows[r][self.m + i])
                .sum();
            self.t.rows[r].push(entry);
        }
        self.t.cols += 1;
        self.costs.push(cost);
        self.original.push(coeffs);
        Ok(())
    }

    /// `None` when no combination of the current columns is feasible.
    pub fn solve(&mut self) -> Result<Option<CoveringSolution>> {
        let m = self.m;
        let zero = Rational::zero();
        let one = Rational::from_integer(1.into());
        if !self.feasible {
            let mut cost = vec![zero.clone(); self.t.cols];
            for c in &mut cost[m..2 * m] {
                *c = one.clone();
            }
            self.t.price(&cost);
            self.t.optimize(0..0);
            if !self.t.value.is_zero() {
                return Ok(None);
            }
            // [A | -I] has full row rank, so a zero-level artificial can
            // always leave through a surplus or structural column
            for i in 0..self.t.rows.len() {
                if (m..2 * m).contains(&self.t.basis[i]) {
                    let q = (0..self.t.cols)
                        .find(|&j| !(m..2 * m).contains(&j) && !self.t.rows[i][j].is_zero())
                        .ok_or_else(|| Error::Internal("covering tableau lost full rank".into()))?;
                    self.t.pivot(i, q);
                }
            }
            self.feasible = true;
        }
        let mut cost = vec![zero.clone(); 2 * m];
        cost.extend(self.costs.iter().cloned());
        self.t.price(&cost);
        if !self.t.optimize(m..2 * m) {
            return Err(Error::Internal("covering program is unbounded".into()));
        }

        let mut point = vec![zero.clone(); self.costs.len()];
        for (i, &b) in self.t.basis.iter().enumerate() {
            if b >= 2 * m {
                point[b - 2 * m] = self.t.rhs[i].clone();
            }
        }
        // reduced cost of the artificial column e_i is -pi_i
        let duals: Vec<Rational> = (0..m).map(|i| -&self.t.reduced[m + i]).collect();
        let value: Rational = self.costs.iter().zip(&point).map(|(c, x)| c * x).sum();
        let covered = (0..m).all(|i| {
            let lhs: Rational = self.original.iter().zip(&point).map(|(col, x)| &col[i] * x).sum();
            lhs >= self.rhs[i]
        });
        if !covered || point.iter().any(Signed::is_negative) {
            return Err(Error::Internal("covering tableau returned an infeasible point".into()));
        }
        Ok(Some(CoveringSolution { value, point, duals }))
    }
}
