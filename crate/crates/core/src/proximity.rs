//! LP/IP proximity and the bounded-variable solver built on it.
//!
//! For `max { c^T x : A x = b, 0 <= x <= u }` with an optimal LP vertex `x*`
//! some optimal integer solution lies within l1 distance
//! `m (2 m delta + 1)^m` of `x*`. [`solve_bounded`] substitutes
//! `z = floor(x*) + y`, restricts every `y_i` to a window of that size and
//! finds the best `y` as a longest path through a layered DAG whose layers are
//! the binary digits of the `y_i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SolveError;
use crate::instance::{linf_norm, IPInstance, Rational, SolveOutcome, SolveReport, SolveStats};
use crate::lp::{solve_lp, LpOutcome, LpProblem, LpVertex};

/// `m (2 m delta + 1)^m`.
pub fn l1_bound(m: usize, delta: &BigInt) -> BigInt {
    let base: BigInt = BigInt::from(2 * m) * delta + 1;
    BigInt::from(m) * num_traits::pow(base, m)
}

/// The classical bound `n^2 ceil(m^(m/2)) delta^m`, for comparison.
pub fn cook_l1_bound(n: usize, m: usize, delta: &BigInt) -> BigInt {
    let mm = num_traits::pow(BigInt::from(m), m);
    let mut root = mm.sqrt();
    if &root * &root < mm {
        root += 1;
    }
    BigInt::from(n * n) * root * num_traits::pow(delta.clone(), m)
}

/// Bound on `c^T x* - c^T z*`: `2 ||c||_inf delta` for a single row,
/// `||c||_inf m (2 m delta + 1)^m` otherwise.
pub fn gap_bound(c_inf_norm: &BigInt, m: usize, delta: &BigInt) -> BigInt {
    if m == 1 {
        BigInt::from(2) * c_inf_norm * delta
    } else {
        c_inf_norm * l1_bound(m, delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityBudget {
    pub m: usize,
    pub delta: BigInt,
    pub l1_budget: BigInt,
}

impl ProximityBudget {
    pub fn new(m: usize, delta: BigInt) -> Self {
        let l1_budget = l1_bound(m, &delta);
        Self { m, delta, l1_budget }
    }
}

/// The instance around `floor(x*)`: find `y` with `A y = rhs_shift`,
/// `-lower_star <= y <= upper_star`, then `z = floor(x*) + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub base: IPInstance,
    pub floor: Vec<BigInt>,
    /// `b - A floor(x*)`.
    pub rhs_shift: Vec<BigInt>,
    pub lower_star: Vec<BigInt>,
    pub upper_star: Vec<BigInt>,
    /// Working l1 budget: the proximity bound plus `m`, which covers the
    /// distance between `x*` and its floor (a vertex has at most `m`
    /// fractional coordinates).
    pub l1_budget: BigInt,
    /// `c^T floor(x*)`.
    pub objective_offset: BigInt,
}

impl ReducedInstance {
    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.floor.iter().zip(y).map(|(f, v)| f + v).collect()
    }
}

fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn reduce(inst: &IPInstance, vertex: &LpVertex) -> Result<ReducedInstance, SolveError> {
    let upper = inst.upper().ok_or(SolveError::MissingUpperBounds)?;
    if vertex.point.len() != inst.n() {
        return Err(SolveError::Internal("vertex dimension".into()));
    }
    let budget = l1_bound(inst.m(), inst.delta()) + BigInt::from(inst.m());
    let floor: Vec<BigInt> = vertex.point.iter().map(floor).collect();
    let ax = inst.a().mul_vec(&floor);
    let rhs_shift: Vec<BigInt> = inst.b().iter().zip(&ax).map(|(b, v)| b - v).collect();
    let lower_star: Vec<BigInt> = floor.iter().map(|f| f.clone().min(budget.clone())).collect();
    let upper_star: Vec<BigInt> = upper
        .iter()
        .zip(&floor)
        .map(|(u, f)| (u - f).min(budget.clone()))
        .collect();
    if lower_star.iter().chain(&upper_star).any(Signed::is_negative)
        || linf_norm(&lower_star) > budget
        || linf_norm(&upper_star) > budget
    {
        return Err(SolveError::Internal("reduced bounds out of range".into()));
    }
    let objective_offset = inst.objective(&floor);
    Ok(ReducedInstance {
        base: inst.clone(),
        floor,
        rhs_shift,
        lower_star,
        upper_star,
        l1_budget: budget,
        objective_offset,
    })
}

/// `value = shift + sum_j d_j b_j` with `b_j` in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryExpansion {
    pub shift: BigInt,
    pub coefficients: Vec<BigInt>,
}

impl BinaryExpansion {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Expansion whose 0/1 choices reach exactly the integers in `[-l, u]`:
/// coefficients `1, 2, ..., 2^(k-1)` for the largest `k` with `2^k - 1 <= l + u`,
/// plus the remainder when nonzero.
pub fn binary_expand(l: &BigInt, u: &BigInt) -> BinaryExpansion {
    assert!(!l.is_negative() && !u.is_negative(), "binary_expand needs l, u >= 0");
    let range = l + u;
    let mut coefficients = Vec::new();
    let mut power = BigInt::one();
    let mut covered = BigInt::zero();
    while &covered + &power <= range {
        covered += &power;
        coefficients.push(power.clone());
        power <<= 1;
    }
    let rest = range - covered;
    if !rest.is_zero() {
        coefficients.push(rest);
    }
    BinaryExpansion {
        shift: -l,
        coefficients,
    }
}

/// Shape of the layered graph built by [`solve_bounded_detailed`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DagStats {
    pub layers: usize,
    pub max_out_degree: usize,
}

pub fn solve_bounded(inst: &IPInstance) -> Result<SolveReport, SolveError> {
    Ok(solve_bounded_detailed(inst)?.0)
}

pub fn lp_relaxation(inst: &IPInstance) -> Result<LpProblem, SolveError> {
    let q = |v: &BigInt| Rational::from_integer(v.clone());
    let a = inst.a().to_rows().iter().map(|row| row.iter().map(q).collect()).collect();
    let upper = match inst.upper() {
        Some(u) => u.iter().map(|v| Some(q(v))).collect(),
        None => vec![None; inst.n()],
    };
    LpProblem::nonnegative(a, inst.b().iter().map(q).collect(), inst.c().iter().map(q).collect(), upper)
        .map_err(|e| SolveError::Internal(e.to_string()))
}

struct DagNode {
    point: Vec<i64>,
    value: BigInt,
    /// Predecessor and the change of the current variable along the arc.
    parent: Option<(usize, usize, i64)>,
}

/// One step of the layered graph: every node may either stay or move by
/// `step * a_var`; mandatory steps have no "stay" arc.
struct Layer {
    var: usize,
    step: i64,
    mandatory: bool,
}

/// Solves a bounded-variable instance through the LP vertex, the reduction
/// around its floor and a longest path in the binary-expanded layered DAG.
pub fn solve_bounded_detailed(inst: &IPInstance) -> Result<(SolveReport, DagStats), SolveError> {
    let lp = lp_relaxation(inst)?;
    if inst.upper().is_none() {
        return Err(SolveError::MissingUpperBounds);
    }
    let vertex = match solve_lp(&lp) {
        LpOutcome::Optimal(v) => v,
        LpOutcome::Infeasible => {
            return Ok((
                SolveReport {
                    outcome: SolveOutcome::Infeasible,
                    stats: SolveStats::default(),
                },
                DagStats::default(),
            ))
        }
        LpOutcome::Unbounded => {
            return Err(SolveError::Internal("bounded LP relaxation reported unbounded".into()))
        }
    };
    let reduced = reduce(inst, &vertex)?;

    let too_large = || SolveError::TooLarge("proximity window exceeds the lattice range".into());
    let small = |v: &BigInt| v.to_i64().ok_or_else(too_large);
    let m = inst.m();
    let delta = small(inst.delta())?;
    let budget = small(&reduced.l1_budget)?;
    // Partial sums along the path of an optimal y stay within
    // delta * 2 * budget, which delta * (3 L1 + m + 1) covers.
    let radius = (budget - m as i64)
        .checked_mul(3)
        .and_then(|v| v.checked_add(m as i64 + 1))
        .and_then(|v| delta.checked_mul(v))
        .filter(|r| *r < 1 << 60)
        .ok_or_else(too_large)?;
    let columns: Vec<Vec<i64>> = (0..inst.n())
        .map(|j| inst.a().column(j).iter().map(&small).collect())
        .collect::<Result<_, _>>()?;
    let target = reduced.rhs_shift.iter().map(&small).collect::<Result<Vec<_>, _>>()?;

    let mut layers = Vec::new();
    for i in 0..inst.n() {
        let expansion = binary_expand(&reduced.lower_star[i], &reduced.upper_star[i]);
        let shift = small(&expansion.shift)?;
        if shift != 0 {
            layers.push(Layer { var: i, step: shift, mandatory: true });
        }
        let mut steps = expansion
            .coefficients
            .iter()
            .map(&small)
            .collect::<Result<Vec<_>, _>>()?;
        steps.sort_unstable_by(|a, b| b.cmp(a));
        layers.extend(steps.into_iter().map(|step| Layer { var: i, step, mandatory: false }));
    }

    let mut arena = vec![DagNode {
        point: vec![0; m],
        value: BigInt::zero(),
        parent: None,
    }];
    let mut current: Vec<usize> = vec![0];
    let mut stats = SolveStats::default();
    let mut dag = DagStats {
        layers: layers.len(),
        max_out_degree: 0,
    };
    for layer in &layers {
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut next: Vec<usize> = Vec::new();
        let column = &columns[layer.var];
        let cost = &inst.c()[layer.var];
        let moves: &[i64] = if layer.mandatory { &[1] } else { &[0, 1] };
        for &id in &current {
            let mut degree = 0;
            for &take in moves {
                let step = take * layer.step;
                let point: Vec<i64> = arena[id]
                    .point
                    .iter()
                    .zip(column)
                    .map(|(p, a)| p + step * a)
                    .collect();
                if point.iter().any(|v| v.abs() > radius) {
                    continue;
                }
                degree += 1;
                stats.arcs_relaxed += 1;
                let value = &arena[id].value + cost * step;
                match index.get(&point) {
                    Some(&existing) if arena[existing].value >= value => {}
                    Some(&existing) => {
                        arena[existing].value = value;
                        arena[existing].parent = Some((id, layer.var, step));
                    }
                    None => {
                        index.insert(point.clone(), arena.len());
                        next.push(arena.len());
                        arena.push(DagNode {
                            point,
                            value,
                            parent: Some((id, layer.var, step)),
                        });
                    }
                }
            }
            dag.max_out_degree = dag.max_out_degree.max(degree);
        }
        current = next;
    }
    stats.nodes_explored = arena.len();

    let Some(&end) = current.iter().find(|&&id| arena[id].point == target) else {
        return Ok((
            SolveReport {
                outcome: SolveOutcome::Infeasible,
                stats,
            },
            dag,
        ));
    };
    let mut y = vec![0i64; inst.n()];
    let mut id = end;
    while let Some((parent, var, step)) = arena[id].parent {
        y[var] += step;
        id = parent;
    }
    let y: Vec<BigInt> = y.into_iter().map(BigInt::from).collect();
    let solution = reduced.lift(&y);
    let value = inst.objective(&solution);
    if value != &arena[end].value + &reduced.objective_offset || !inst.is_feasible_point(&solution) {
        return Err(SolveError::Internal("layered path does not map back to a solution".into()));
    }
    Ok((
        SolveReport {
            outcome: SolveOutcome::Optimal { solution, value },
            stats,
        },
        dag,
    ))
}
