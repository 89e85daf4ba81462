//! Exact linear programming over arbitrary-precision rationals.

mod simplex;

pub use simplex::{CoveringProgram, CoveringSolution};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn holds(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self
            .coeffs
            .iter()
            .zip(point)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, x)| a * x)
            .sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// `direction objective . x` subject to the constraints and `x_j >= lower_j`
/// (a `None` lower bound makes the variable free).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Option<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Rational, Vec<Rational>)> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// Program with all variables bounded below by zero and no constraints.
    pub fn new(direction: Direction, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            direction,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![Some(Rational::zero()); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<Rational>) {
        self.lower_bounds[var] = bound;
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower_bounds.len() != n {
            return Err(Error::Malformed(format!(
                "{} lower bounds for {n} variables",
                self.lower_bounds.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Malformed(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum()
    }
}

/// Solves exactly with a two-phase dense-tableau simplex.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    Ok(solve_with_duals(lp)?.0)
}

/// Like [`solve`], also returning dual values (one per constraint) at an
/// optimum. The duals come straight from the final tableau and are not
/// checked here; callers that rely on them should certify them.
pub fn solve_with_duals(lp: &LinearProgram) -> Result<(LpOutcome, Option<Vec<Rational>>)> {
    lp.validate()?;
    let (outcome, duals) = simplex::run(lp);
    if let LpOutcome::Optimal { point, .. } = &outcome {
        if !verify_solution(lp, point) {
            return Err(Error::Internal("simplex returned an infeasible point".into()));
        }
    }
    Ok((outcome, duals))
}

/// True iff `point` satisfies every constraint and bound exactly.
pub fn verify_solution(lp: &LinearProgram, point: &[Rational]) -> bool {
    if point.len() != lp.num_vars() || lp.validate().is_err() {
        return false;
    }
    let bounds_ok = lp
        .lower_bounds
        .iter()
        .zip(point)
        .all(|(lb, x)| lb.as_ref().is_none_or(|l| x >= l));
    bounds_ok && lp.constraints.iter().all(|c| c.holds(point))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64()
        .unwrap_or_else(|| if r.is_negative() { f64::MIN } else { f64::MAX })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        int(v)
    }

    #[test]
    fn single_variable_max() {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1)]);
        lp.add_constraint(vec![r(1)], Relation::Le, rat(3, 2));
        let (value, point) = solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(value, rat(3, 2));
        assert_eq!(point, vec![rat(3, 2)]);
        assert!(verify_solution(&lp, &point));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Direction::Minimize, vec![r(0)]);
        lp.add_constraint(vec![r(1)], Relation::Ge, r(1));
        lp.add_constraint(vec![r(1)], Relation::Le, r(0));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1), r(1)]);
        lp.add_constraint(vec![r(1), r(-1)], Relation::Le, r(1));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn fractional_chromatic_of_triangle() {
        // independent sets of K_3 are the singletons
        let mut lp = LinearProgram::new(Direction::Minimize, vec![r(1); 3]);
        for v in 0..3 {
            let row = (0..3).map(|i| if i == v { r(1) } else { r(0) }).collect();
            lp.add_constraint(row, Relation::Ge, r(1));
        }
        assert_eq!(solve(&lp).unwrap().optimal().unwrap().0, r(3));
    }

    #[test]
    fn free_and_shifted_variables() {
        // min x + y, x free, y >= -2, x - y >= 1, x + 2y = 0
        let mut lp = LinearProgram::new(Direction::Minimize, vec![r(1), r(1)]);
        lp.set_lower_bound(0, None);
        lp.set_lower_bound(1, Some(r(-2)));
        lp.add_constraint(vec![r(1), r(-1)], Relation::Ge, r(1));
        lp.add_constraint(vec![r(1), r(2)], Relation::Eq, r(0));
        let (value, point) = solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(point, vec![rat(2, 3), rat(-1, 3)]);
        assert_eq!(value, rat(1, 3));
    }

    /// Dual values of nonnegative programs against the explicitly written
    /// dual: feasible there and with the same objective.
    #[test]
    fn duals_match_the_dual_program() {
        // min 2a + 3b + c  s.t.  a + b >= 2,  b + c >= 1,  a - c <= 1 (flipped: -a + c >= -1)
        let mut lp = LinearProgram::new(Direction::Minimize, vec![r(2), r(3), r(1)]);
        lp.add_constraint(vec![r(1), r(1), r(0)], Relation::Ge, r(2));
        lp.add_constraint(vec![r(0), r(1), r(1)], Relation::Ge, r(1));
        lp.add_constraint(vec![r(-1), r(0), r(1)], Relation::Ge, r(-1));
        let (outcome, duals) = solve_with_duals(&lp).unwrap();
        let (value, _) = outcome.optimal().unwrap();
        let pi = duals.unwrap();
        let rhs = [r(2), r(1), r(-1)];
        let dual_value: Rational = pi.iter().zip(&rhs).map(|(p, b)| p * b).sum();
        assert_eq!(dual_value, value);
        assert!(pi.iter().all(|p| !p.is_negative()));
        for j in 0..3 {
            let used: Rational = lp.constraints.iter().zip(&pi).map(|(c, p)| &c.coeffs[j] * p).sum();
            assert!(used <= lp.objective[j]);
        }

        // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6,  x + y <= 3
        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1), r(1)]);
        lp.add_constraint(vec![r(1), r(2)], Relation::Le, r(4));
        lp.add_constraint(vec![r(3), r(1)], Relation::Le, r(6));
        lp.add_constraint(vec![r(1), r(1)], Relation::Le, r(3));
        let (outcome, duals) = solve_with_duals(&lp).unwrap();
        let (value, _) = outcome.optimal().unwrap();
        let pi = duals.unwrap();
        let dual_value: Rational = pi.iter().zip([r(4), r(6), r(3)]).map(|(p, b)| p * b).sum();
        assert_eq!(value, rat(14, 5));
        assert_eq!(dual_value, value);
        assert!(pi.iter().all(|p| !p.is_negative()));
    }

    #[test]
    fn covering_program_matches_the_plain_solver() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let m = rng.random_range(1..=5);
            let k = rng.random_range(1..=7);
            let rhs: Vec<Rational> = (0..m).map(|_| r(rng.random_range(0..=3))).collect();
            let cols: Vec<(Rational, Vec<Rational>)> = (0..k)
                .map(|_| {
                    (
                        r(rng.random_range(1..=4)),
                        (0..m).map(|_| r(rng.random_range(0..=2))).collect(),
                    )
                })
                .collect();
            let mut cover = CoveringProgram::new(rhs.clone()).unwrap();
            for (j, (c, a)) in cols.iter().enumerate() {
                cover.add_column(c.clone(), a.clone()).unwrap();
                // re-solve after every addition, like column generation
                let got = cover.solve().unwrap();
                let mut lp =
                    LinearProgram::new(Direction::Minimize, cols[..=j].iter().map(|(c, _)| c.clone()).collect());
                for i in 0..m {
                    lp.add_constraint(
                        cols[..=j].iter().map(|(_, a)| a[i].clone()).collect(),
                        Relation::Ge,
                        rhs[i].clone(),
                    );
                }
                let plain_optimum = solve(&lp).unwrap().optimal().map(|(v, _)| v);
                match (&got, &plain_optimum) {
                    (Some(sol), Some(v)) => {
                        assert_eq!(&sol.value, v);
                        let dual_value: Rational = sol.duals.iter().zip(&rhs).map(|(p, b)| p * b).sum();
                        assert_eq!(&dual_value, v);
                        assert!(sol.duals.iter().all(|p| !p.is_negative()));
                        for (c, a) in &cols[..=j] {
                            let used: Rational = a.iter().zip(&sol.duals).map(|(x, p)| x * p).sum();
                            assert!(used <= *c);
                        }
                    }
                    (None, None) => {}
                    _ => panic!("feasibility disagrees"),
                }
            }
        }
        assert!(CoveringProgram::new(vec![r(-1)]).is_err());
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1), r(2)]);
        lp.add_constraint(vec![r(1), r(1)], Relation::Eq, r(2));
        lp.add_constraint(vec![r(2), r(2)], Relation::Eq, r(4));
        lp.add_constraint(vec![r(0), r(1)], Relation::Le, rat(1, 3));
        let (value, _) = solve(&lp).unwrap().optimal().unwrap();
        assert_eq!(value, rat(7, 3));
    }

    #[test]
    fn verify_rejects() {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1)]);
        lp.add_constraint(vec![r(1)], Relation::Le, r(1));
        assert!(!verify_solution(&lp, &[r(2)]));
        assert!(!verify_solution(&lp, &[r(-1)]));
        assert!(!verify_solution(&lp, &[]));
    }

    #[test]
    fn malformed_dimensions() {
        let mut lp = LinearProgram::new(Direction::Maximize, vec![r(1)]);
        lp.add_constraint(vec![r(1), r(1)], Relation::Le, r(1));
        assert!(matches!(solve(&lp), Err(Error::Malformed(_))));
    }

    #[test]
    fn rational_text() {
        assert_eq!(fmt_rational(&rat(10, 4)), "5/2");
        assert_eq!(fmt_rational(&r(-3)), "-3");
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7));
        assert!(parse_rational("1/0").is_err());
    }

    mod random {
        use super::*;
        use proptest::prelude::*;

        /// Maximizes over a bounded 2-D polygon by checking every pairwise
        /// intersection of constraint lines (including the axes).
        fn vertex_oracle(obj: (i64, i64), rows: &[(i64, i64, i64)]) -> Option<Rational> {
            let mut lines: Vec<(i64, i64, i64)> = rows.to_vec();
            lines.push((-1, 0, 0));
            lines.push((0, -1, 0));
            let feasible = |x: &Rational, y: &Rational| {
                rows.iter().all(|&(a, b, c)| r(a) * x + r(b) * y <= r(c)) && !x.is_negative() && !y.is_negative()
            };
            let mut best: Option<Rational> = None;
            for i in 0..lines.len() {
                for j in i + 1..lines.len() {
                    let (a1, b1, c1) = lines[i];
                    let (a2, b2, c2) = lines[j];
                    let det = a1 * b2 - a2 * b1;
                    if det == 0 {
                        continue;
                    }
                    let x = rat(c1 * b2 - c2 * b1, det);
                    let y = rat(a1 * c2 - a2 * c1, det);
                    if feasible(&x, &y) {
                        let v = r(obj.0) * &x + r(obj.1) * &y;
                        if best.as_ref().is_none_or(|b| &v > b) {
                            best = Some(v);
                        }
                    }
                }
            }
            best
        }

        proptest! {
            #[test]
            fn matches_vertex_enumeration(
                obj in (-5i64..6, -5i64..6),
                rows in proptest::collection::vec((-4i64..5, -4i64..5, -3i64..8), 1..6),
            ) {
                let mut rows = rows;
                // bounding box keeps the polygon compact
                rows.push((1, 0, 9));
                rows.push((0, 1, 9));
                let mut lp = LinearProgram::new(Direction::Maximize, vec![r(obj.0), r(obj.1)]);
                for &(a, b, c) in &rows {
                    lp.add_constraint(vec![r(a), r(b)], Relation::Le, r(c));
                }
                let got = solve(&lp).unwrap();
                match vertex_oracle(obj, &rows) {
                    Some(v) => {
                        let (value, point) = got.optimal().expect("feasible");
                        prop_assert_eq!(value, v);
                        prop_assert!(verify_solution(&lp, &point));
                    }
                    None => prop_assert_eq!(got, LpOutcome::Infeasible),
                }
            }

            #[test]
            fn row_permutation_invariant(
                rows in proptest::collection::vec((0i64..5, 0i64..5, 0i64..5, 1i64..9), 2..7),
                rot in 0usize..7,
            ) {
                let build = |rows: &[(i64, i64, i64, i64)]| {
                    let mut lp = LinearProgram::new(Direction::Maximize, vec![r(2), r(3), r(1)]);
                    for &(a, b, c, d) in rows {
                        lp.add_constraint(vec![r(a), r(b), r(c)], Relation::Le, r(d));
                    }
                    for v in 0..3 {
                        let row = (0..3).map(|i| if i == v { r(1) } else { r(0) }).collect();
                        lp.add_constraint(row, Relation::Le, r(10));
                    }
                    solve(&lp).unwrap().optimal().unwrap().0
                };
                let mut permuted = rows.clone();
                let k = rot % permuted.len();
                permuted.rotate_left(k);
                permuted.reverse();
                prop_assert_eq!(build(&rows), build(&permuted));
            }
        }
    }
}
