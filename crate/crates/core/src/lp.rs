//! Exact rational simplex for `max { c^T x : A x = rhs, lower <= x <= upper }`.
//!
//! Dense bounded-variable tableau with a two-phase method: phase one drives
//! one artificial variable per row to zero, phase two optimizes the real
//! objective. Nonbasic variables always sit at one of their bounds, so every
//! returned point is a vertex. Entering and leaving variables are chosen by
//! Bland's rule (lowest eligible index), so degenerate problems terminate.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::instance::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Linear program with equality rows and box bounds. Lower bounds are finite,
/// `None` upper bounds are `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    objective: Vec<Rational>,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

impl LpProblem {
    pub fn new(
        a: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
        objective: Vec<Rational>,
        lower: Vec<Rational>,
        upper: Vec<Option<Rational>>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        let check = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(LpError::DimensionMismatch {
                    what,
                    expected,
                    found,
                })
            }
        };
        check("rhs", a.len(), rhs.len())?;
        for row in &a {
            check("constraint row", n, row.len())?;
        }
        check("lower", n, lower.len())?;
        check("upper", n, upper.len())?;
        Ok(Self {
            a,
            rhs,
            objective,
            lower,
            upper,
        })
    }

    /// Nonnegative variables with optional finite upper bounds.
    pub fn nonnegative(
        a: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
        objective: Vec<Rational>,
        upper: Vec<Option<Rational>>,
    ) -> Result<Self, LpError> {
        let lower = vec![Rational::zero(); objective.len()];
        Self::new(a, rhs, objective, lower, upper)
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.objective.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<Rational>] {
        &self.upper
    }

    /// Exact check of the equality rows and bounds.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.cols()
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && x.iter()
                .zip(&self.upper)
                .all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
            && self
                .a
                .iter()
                .zip(&self.rhs)
                .all(|(row, r)| &dot(row, x) == r)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpVertex {
    pub point: Vec<Rational>,
    /// Basic structural columns, ascending.
    pub basis: Vec<usize>,
    pub objective_value: Rational,
}

impl LpVertex {
    /// Coordinates strictly between their bounds.
    pub fn interior_count(&self, p: &LpProblem) -> usize {
        self.point
            .iter()
            .enumerate()
            .filter(|(j, v)| {
                *v > &p.lower[*j] && p.upper[*j].as_ref().is_none_or(|u| *v < u)
            })
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(LpVertex),
}

impl LpOutcome {
    pub fn vertex(&self) -> Option<&LpVertex> {
        match self {
            LpOutcome::Optimal(v) => Some(v),
            _ => None,
        }
    }
}

/// Maximizes the objective of `p` exactly.
pub fn solve_lp(p: &LpProblem) -> LpOutcome {
    let Some(mut tab) = Tableau::phase_one(p) else {
        return LpOutcome::Infeasible;
    };
    let cost: Vec<Rational> = p
        .objective
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(Rational::zero(), p.rows()))
        .collect();
    if tab.optimize(&cost).is_err() {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal(tab.vertex(p))
}

/// Returns some vertex of the feasible region, ignoring the objective.
pub fn feasible_vertex(p: &LpProblem) -> LpOutcome {
    match Tableau::phase_one(p) {
        Some(tab) => LpOutcome::Optimal(tab.vertex(p)),
        None => LpOutcome::Infeasible,
    }
}

struct Unbounded;

/// Tableau in shifted coordinates `x' = x - lower`, so every variable has lower
/// bound zero. Columns `n..n + rows` are the artificials.
struct Tableau {
    n: usize,
    /// `B^{-1} A` for the current basis.
    t: Vec<Vec<Rational>>,
    /// Values of the basic variables.
    beta: Vec<Rational>,
    basis: Vec<usize>,
    range: Vec<Option<Rational>>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
}

impl Tableau {
    /// Runs phase one. `None` when the problem is infeasible.
    fn phase_one(p: &LpProblem) -> Option<Self> {
        let (rows, n) = (p.rows(), p.cols());
        let mut range = Vec::with_capacity(n + rows);
        for (l, u) in p.lower.iter().zip(&p.upper) {
            match u {
                Some(u) if u < l => return None,
                Some(u) => range.push(Some(u - l)),
                None => range.push(None),
            }
        }
        range.extend(std::iter::repeat_n(None, rows));

        let mut t = Vec::with_capacity(rows);
        let mut beta = Vec::with_capacity(rows);
        for (i, (row, r)) in p.a.iter().zip(&p.rhs).enumerate() {
            let shifted = r - dot(row, &p.lower);
            let sign = if shifted.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut trow: Vec<Rational> = row.iter().map(|v| v * &sign).collect();
            trow.extend((0..rows).map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            t.push(trow);
            beta.push(shifted * sign);
        }
        let mut is_basic = vec![false; n + rows];
        is_basic[n..].iter_mut().for_each(|b| *b = true);
        let mut tab = Self {
            n,
            t,
            beta,
            basis: (n..n + rows).collect(),
            range,
            at_upper: vec![false; n + rows],
            is_basic,
        };

        let cost: Vec<Rational> = (0..n + rows)
            .map(|j| {
                if j < n {
                    Rational::zero()
                } else {
                    -Rational::one()
                }
            })
            .collect();
        // Phase one is bounded below by zero.
        tab.optimize(&cost).ok()?;
        let residual = tab
            .basis
            .iter()
            .zip(&tab.beta)
            .filter(|(&j, _)| j >= n)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if residual.is_positive() {
            return None;
        }
        // Artificials are pinned at zero from here on; basic ones left in
        // redundant rows stay at zero through the ratio test.
        for j in n..n + rows {
            tab.range[j] = Some(Rational::zero());
        }
        Some(tab)
    }

    fn value(&self, j: usize) -> Rational {
        if self.at_upper[j] {
            self.range[j].clone().expect("at upper bound without one")
        } else {
            Rational::zero()
        }
    }

    fn optimize(&mut self, cost: &[Rational]) -> Result<(), Unbounded> {
        let cols = cost.len();
        loop {
            let mut entering = None;
            for j in 0..cols {
                if self.is_basic[j] || self.range[j].as_ref().is_some_and(Zero::is_zero) {
                    continue;
                }
                let reduced = self
                    .basis
                    .iter()
                    .zip(&self.t)
                    .fold(cost[j].clone(), |acc, (&b, row)| acc - &cost[b] * &row[j]);
                let improving = if self.at_upper[j] {
                    reduced.is_negative()
                } else {
                    reduced.is_positive()
                };
                if improving {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            let increasing = !self.at_upper[j];
            let dir = |v: &Rational| if increasing { v.clone() } else { -v };

            // (step, row, leaving to upper); row None means a bound flip.
            let mut best: Option<(Rational, Option<usize>, bool)> = self.range[j]
                .clone()
                .map(|r| (r, None, false));
            for i in 0..self.t.len() {
                let alpha = dir(&self.t[i][j]);
                let (step, to_upper) = if alpha.is_positive() {
                    (&self.beta[i] / &alpha, false)
                } else if alpha.is_negative() {
                    match &self.range[self.basis[i]] {
                        Some(u) => ((u - &self.beta[i]) / -alpha, true),
                        None => continue,
                    }
                } else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((s, row, _)) => {
                        step < *s
                            || (step == *s
                                && row.is_none_or(|r| self.basis[i] < self.basis[r]))
                    }
                };
                if better {
                    best = Some((step, Some(i), to_upper));
                }
            }
            let Some((step, row, to_upper)) = best else {
                return Err(Unbounded);
            };

            let delta = dir(&step);
            for i in 0..self.t.len() {
                let change = &delta * &self.t[i][j];
                self.beta[i] -= change;
            }
            match row {
                None => self.at_upper[j] = !self.at_upper[j],
                Some(r) => {
                    let entering_value = self.value(j) + &delta;
                    let leaving = self.basis[r];
                    self.is_basic[leaving] = false;
                    self.at_upper[leaving] = to_upper;
                    self.pivot(r, j);
                    self.beta[r] = entering_value;
                    self.basis[r] = j;
                    self.is_basic[j] = true;
                    self.at_upper[j] = false;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.t[r][j].recip();
        for v in self.t[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
    }

    fn vertex(&self, p: &LpProblem) -> LpVertex {
        let mut point: Vec<Rational> = (0..self.n).map(|j| self.value(j)).collect();
        let mut basis = Vec::new();
        for (&j, v) in self.basis.iter().zip(&self.beta) {
            if j < self.n {
                point[j] = v.clone();
                basis.push(j);
            }
        }
        for (x, l) in point.iter_mut().zip(&p.lower) {
            *x += l;
        }
        basis.sort_unstable();
        let objective_value = p.objective_value(&point);
        LpVertex {
            point,
            basis,
            objective_value,
        }
    }
}

#[cfg(test)]
pub(crate) fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| r(x)).collect()
    }

    fn frac(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn problem(a: &[&[i64]], rhs: &[i64], c: &[i64], upper: &[Option<i64>]) -> LpProblem {
        LpProblem::nonnegative(
            a.iter().map(|row| rs(row)).collect(),
            rs(rhs),
            rs(c),
            upper.iter().map(|u| u.map(r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn box_constrained_maximizer() {
        let p = problem(&[&[1, 1]], &[1], &[1, 0], &[Some(1), Some(1)]);
        let v = solve_lp(&p).vertex().cloned().unwrap();
        assert_eq!(v.point, rs(&[1, 0]));
        assert_eq!(v.objective_value, r(1));
    }

    #[test]
    fn ratio_choice_on_single_row() {
        // 3/2 per unit of weight beats 2/3; the two axis vertices give 9 and 4.
        let p = problem(&[&[2, 3]], &[6], &[3, 2], &[None, None]);
        let v = solve_lp(&p).vertex().cloned().unwrap();
        assert_eq!(v.point, rs(&[3, 0]));
        assert_eq!(v.objective_value, r(9));
        assert_eq!(v.basis, vec![0]);
    }

    #[test]
    fn contradiction_with_bound_is_infeasible() {
        let p = problem(&[&[1]], &[-1], &[1], &[None]);
        assert_eq!(solve_lp(&p), LpOutcome::Infeasible);
        let p = problem(&[&[1]], &[2], &[0], &[Some(1)]);
        assert_eq!(feasible_vertex(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn inverted_bounds_are_infeasible_not_rejected() {
        let p = LpProblem::new(vec![rs(&[1])], rs(&[1]), rs(&[1]), rs(&[2]), vec![Some(r(1))])
            .unwrap();
        assert_eq!(solve_lp(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let p = problem(&[&[1, -1]], &[1], &[1, 1], &[None, None]);
        assert_eq!(solve_lp(&p), LpOutcome::Unbounded);
    }

    #[test]
    fn feasible_vertex_endpoint() {
        let p = problem(&[&[1, 1]], &[1], &[0, 0], &[Some(1), Some(1)]);
        let v = feasible_vertex(&p).vertex().cloned().unwrap();
        assert!(v.point == rs(&[1, 0]) || v.point == rs(&[0, 1]));
    }

    #[test]
    fn feasible_vertex_unique_degenerate_point() {
        // lambda1 - lambda2 = 0, lambda1 + lambda2 = 1
        let p = problem(&[&[1, -1], &[1, 1]], &[0, 1], &[0, 0], &[Some(1), Some(1)]);
        let v = feasible_vertex(&p).vertex().cloned().unwrap();
        assert_eq!(v.point, vec![frac(1, 2), frac(1, 2)]);
        assert!(v.interior_count(&p) <= p.rows());
    }

    #[test]
    fn shifted_lower_bounds() {
        // max -x s.t. x + y = 5, 2 <= x <= 4, 1 <= y <= 2
        let p = LpProblem::new(
            vec![rs(&[1, 1])],
            rs(&[5]),
            rs(&[-1, 0]),
            rs(&[2, 1]),
            vec![Some(r(4)), Some(r(2))],
        )
        .unwrap();
        let v = solve_lp(&p).vertex().cloned().unwrap();
        assert_eq!(v.point, rs(&[3, 2]));
    }

    #[test]
    fn redundant_rows() {
        let p = problem(&[&[1, 1], &[2, 2]], &[2, 4], &[1, 2], &[None, None]);
        let v = solve_lp(&p).vertex().cloned().unwrap();
        assert_eq!(v.point, rs(&[0, 2]));
        assert!(p.is_feasible_point(&v.point));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(LpProblem::nonnegative(vec![rs(&[1, 1])], rs(&[1]), rs(&[1]), vec![None]).is_err());
    }
}
