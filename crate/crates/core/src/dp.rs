//! Dynamic programs over the lattice points of a tube around `[0, b]`.
//!
//! A solution `z` of `A z = b, z >= 0` is a multiset of columns summing to
//! `b`. By the Steinitz rearrangement those columns can be ordered so that
//! every partial sum stays within infinity distance `2 m delta` of the segment
//! from `0` to `b`. The search therefore only visits lattice points in
//!
//! ```text
//!     { x : exists lambda in [0, 1] with ||x - lambda b||_inf < 2 m delta }
//! ```
//!
//! and moves along arcs `x -> x + a_j`. Feasibility is a breadth-first search
//! from the origin; optimization is a longest path with arc weights `c_j`,
//! where a positive cycle reachable from the origin means the (feasible)
//! program is unbounded.
//!
//! The inequality is strict: each shifted column `a_j - b/t` of a walk of
//! length `t` has norm strictly below `2 delta`, so the prefix sums never reach
//! the boundary, and dropping it keeps the tube within
//! [`node_count_bound`].

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::SolveError;
use crate::instance::{IPInstance, SolveOutcome, SolveReport, SolveStats};

/// The tube of radius `2 m delta` around the segment `[0, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeSpec {
    b: Vec<i64>,
    radius: i64,
}

impl TubeSpec {
    pub fn new(b: Vec<i64>, delta: i64) -> Self {
        let radius = 2 * b.len() as i64 * delta;
        Self { b, radius }
    }

    pub fn for_instance(inst: &IPInstance) -> Result<Self, SolveError> {
        Ok(Prepared::new(inst)?.tube)
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        tube_contains(x, self)
    }
}

/// Fraction with positive denominator.
#[derive(Clone, Copy)]
struct Frac(i128, i128);

impl Frac {
    fn lt(self, other: Frac) -> bool {
        self.0 * other.1 < other.0 * self.1
    }
}

/// True iff some `lambda in [0, 1]` has `|x_i - lambda b_i| < radius` for
/// every coordinate.
pub fn tube_contains(x: &[i64], spec: &TubeSpec) -> bool {
    assert_eq!(x.len(), spec.b.len(), "tube dimension");
    let r = spec.radius as i128;
    let mut lo = Frac(0, 1);
    let mut hi = Frac(1, 1);
    for (&xi, &bi) in x.iter().zip(&spec.b) {
        let (xi, bi) = (xi as i128, bi as i128);
        if bi == 0 {
            if xi.abs() >= r {
                return false;
            }
            continue;
        }
        // lambda * b_i in the open interval (x_i - r, x_i + r)
        let (l, h) = if bi > 0 {
            (Frac(xi - r, bi), Frac(xi + r, bi))
        } else {
            (Frac(-(xi + r), -bi), Frac(r - xi, -bi))
        };
        if lo.lt(l) {
            lo = l;
        }
        if h.lt(hi) {
            hi = h;
        }
    }
    // Closed ends only ever come from [0, 1], which cannot meet each other,
    // so the intersection is nonempty iff lo < hi.
    lo.lt(hi)
}

/// `(4 m delta + 1)^m * max(||b||_1, 1)`, the size bound for the tube.
pub fn node_count_bound(m: usize, delta: &BigInt, b: &[BigInt]) -> BigInt {
    let side: BigInt = BigInt::from(4 * m) * delta + 1;
    let l1 = crate::instance::l1_norm(b).max(BigInt::from(1));
    num_traits::pow(side, m) * l1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub point: Vec<i64>,
    pub parent: Option<usize>,
    /// Column index (into the solver's working column list) of the arc from
    /// `parent`.
    pub arc: Option<usize>,
}

/// Lattice points discovered so far, indexed by point; ids are assigned in
/// discovery order, the origin is id 0.
#[derive(Debug, Clone, Default)]
pub struct NodeStore {
    index: HashMap<Vec<i64>, usize>,
    nodes: Vec<Node>,
}

impl NodeStore {
    fn with_origin(m: usize) -> Self {
        let mut store = Self::default();
        store.insert(vec![0; m], None, None);
        store
    }

    fn insert(&mut self, point: Vec<i64>, parent: Option<usize>, arc: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.index.insert(point.clone(), id);
        self.nodes.push(Node { point, parent, arc });
        id
    }

    pub fn get(&self, point: &[i64]) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Instance data in machine integers, with zero columns split off.
struct Prepared {
    tube: TubeSpec,
    /// Nonzero columns.
    columns: Vec<Vec<i64>>,
    costs: Vec<BigInt>,
    /// Original index of each working column.
    original: Vec<usize>,
    /// Some zero column has a positive cost.
    positive_zero_column: bool,
    n: usize,
}

const COORD_LIMIT: i64 = 1 << 60;

impl Prepared {
    fn new(inst: &IPInstance) -> Result<Self, SolveError> {
        if inst.upper().is_some() {
            return Err(SolveError::UpperBoundsPresent);
        }
        let m = inst.m();
        let too_large = || SolveError::TooLarge("entries of A or b exceed the lattice range".into());
        let small = |v: &BigInt| v.to_i64().filter(|x| x.abs() < COORD_LIMIT).ok_or_else(too_large);
        let delta = small(inst.delta())?;
        let radius = delta
            .checked_mul(2 * m as i64)
            .filter(|r| *r < COORD_LIMIT)
            .ok_or_else(too_large)?;
        let b = inst.b().iter().map(&small).collect::<Result<Vec<_>, _>>()?;
        if b.iter().any(|x| x.abs() + radius + delta >= COORD_LIMIT) {
            return Err(too_large());
        }
        let mut prepared = Self {
            tube: TubeSpec::new(b, delta),
            columns: Vec::new(),
            costs: Vec::new(),
            original: Vec::new(),
            positive_zero_column: false,
            n: inst.n(),
        };
        for j in 0..inst.n() {
            let column = inst.a().column(j).iter().map(&small).collect::<Result<Vec<_>, _>>()?;
            let cost = &inst.c()[j];
            if column.iter().all(|&v| v == 0) {
                prepared.positive_zero_column |= cost.is_positive();
            } else {
                prepared.columns.push(column);
                prepared.costs.push(cost.clone());
                prepared.original.push(j);
            }
        }
        Ok(prepared)
    }

    fn target_is_origin(&self) -> bool {
        self.tube.b.iter().all(|&v| v == 0)
    }

    /// Breadth-first discovery of the tube points reachable from the origin.
    /// With `stop_at_target` the search ends as soon as `b` is found. `cap`
    /// discards points exceeding it in some coordinate.
    fn explore(&self, stop_at_target: bool, cap: Option<&[i64]>) -> Exploration {
        let m = self.tube.b.len();
        let mut store = NodeStore::with_origin(m);
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        let mut next = vec![0i64; m];
        while let Some(id) = queue.pop_front() {
            for (j, column) in self.columns.iter().enumerate() {
                let point = &store.nodes[id].point;
                for ((t, p), a) in next.iter_mut().zip(point).zip(column) {
                    *t = p + a;
                }
                if cap.is_some_and(|cap| next.iter().zip(cap).any(|(x, c)| x > c)) {
                    continue;
                }
                let target = match store.get(&next) {
                    Some(t) => t,
                    None if self.tube.contains(&next) => {
                        let t = store.insert(next.clone(), Some(id), Some(j));
                        adjacency.push(Vec::new());
                        queue.push_back(t);
                        if stop_at_target && next == self.tube.b {
                            return Exploration { store, adjacency };
                        }
                        t
                    }
                    None => continue,
                };
                adjacency[id].push((target, j));
            }
        }
        Exploration { store, adjacency }
    }

    /// Multiplicities of the original columns along a parent chain.
    fn walk_counts(&self, parents: &[Option<(usize, usize)>], mut id: usize) -> Result<Vec<BigInt>, SolveError> {
        let mut counts = vec![0u64; self.n];
        let mut steps = 0usize;
        while let Some((parent, arc)) = parents[id] {
            counts[self.original[arc]] += 1;
            id = parent;
            steps += 1;
            if steps > parents.len() {
                return Err(SolveError::Internal("parent chain does not reach the origin".into()));
            }
        }
        if id != 0 {
            return Err(SolveError::Internal("parent chain ends away from the origin".into()));
        }
        Ok(counts.into_iter().map(BigInt::from).collect())
    }

    fn target(&self, store: &NodeStore) -> Option<usize> {
        store.get(&self.tube.b)
    }
}

struct Exploration {
    store: NodeStore,
    /// Per node: (target node, working column).
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Exploration {
    fn parents(&self) -> Vec<Option<(usize, usize)>> {
        self.store
            .nodes
            .iter()
            .map(|n| n.parent.zip(n.arc))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub solution: Option<Vec<BigInt>>,
    pub stats: SolveStats,
}

/// Finds `z >= 0` integral with `A z = b`, or reports that none exists.
pub fn feasible(inst: &IPInstance) -> Result<Option<Vec<BigInt>>, SolveError> {
    Ok(feasible_report(inst)?.solution)
}

pub fn feasible_report(inst: &IPInstance) -> Result<FeasibilityReport, SolveError> {
    let prep = Prepared::new(inst)?;
    if prep.target_is_origin() {
        return Ok(FeasibilityReport {
            solution: Some(vec![BigInt::zero(); inst.n()]),
            stats: SolveStats {
                nodes_explored: 1,
                arcs_relaxed: 0,
            },
        });
    }
    let exploration = prep.explore(true, None);
    let stats = SolveStats {
        nodes_explored: exploration.store.len(),
        arcs_relaxed: exploration.adjacency.iter().map(Vec::len).sum(),
    };
    let solution = match prep.target(&exploration.store) {
        Some(t) => Some(prep.walk_counts(&exploration.parents(), t)?),
        None => None,
    };
    Ok(FeasibilityReport { solution, stats })
}

/// Solves `max { c^T x : A x = b, x >= 0 integral }`: feasibility first, then
/// Bellman-Ford longest paths over the reachable tube points.
///
/// `arcs_relaxed` counts arc evaluations of the longest-path phase.
pub fn solve_standard_form(inst: &IPInstance) -> Result<SolveReport, SolveError> {
    let prep = Prepared::new(inst)?;
    let exploration = prep.explore(false, None);
    let mut stats = SolveStats {
        nodes_explored: exploration.store.len(),
        arcs_relaxed: 0,
    };
    let Some(target) = prep.target(&exploration.store) else {
        return Ok(SolveReport {
            outcome: SolveOutcome::Infeasible,
            stats,
        });
    };
    if prep.positive_zero_column {
        return Ok(SolveReport {
            outcome: SolveOutcome::Unbounded,
            stats,
        });
    }

    let count = exploration.store.len();
    let mut dist: Vec<Option<BigInt>> = vec![None; count];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None; count];
    dist[0] = Some(BigInt::zero());
    let mut converged = false;
    // Longest simple paths have fewer than `count` arcs; a change in round
    // `count` can only come from a positive cycle.
    for _ in 0..=count {
        let mut changed = false;
        for u in 0..count {
            let Some(du) = dist[u].clone() else { continue };
            for &(v, j) in &exploration.adjacency[u] {
                stats.arcs_relaxed += 1;
                let candidate = &du + &prep.costs[j];
                if dist[v].as_ref().is_none_or(|dv| candidate > *dv) {
                    dist[v] = Some(candidate);
                    parents[v] = Some((u, j));
                    changed = true;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(SolveReport {
            outcome: SolveOutcome::Unbounded,
            stats,
        });
    }
    let outcome = optimal(inst, prep.walk_counts(&parents, target)?, dist[target].clone())?;
    Ok(SolveReport { outcome, stats })
}

/// Longest path for nonnegative `A`, where every arc strictly increases the
/// coordinate sum and one pass in that order suffices. Points exceeding `b`
/// in some coordinate cannot reach `b` and are never stored.
pub fn solve_acyclic(inst: &IPInstance) -> Result<SolveReport, SolveError> {
    if !inst.is_nonnegative() {
        return Err(SolveError::PreconditionViolated(
            "acyclic solver needs a nonnegative constraint matrix".into(),
        ));
    }
    let prep = Prepared::new(inst)?;
    let cap = prep.tube.b.clone();
    let exploration = prep.explore(false, Some(&cap));
    let mut stats = SolveStats {
        nodes_explored: exploration.store.len(),
        arcs_relaxed: 0,
    };
    let Some(target) = prep.target(&exploration.store) else {
        return Ok(SolveReport {
            outcome: SolveOutcome::Infeasible,
            stats,
        });
    };
    if prep.positive_zero_column {
        return Ok(SolveReport {
            outcome: SolveOutcome::Unbounded,
            stats,
        });
    }
    let count = exploration.store.len();
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&id| (exploration.store.nodes[id].point.iter().sum::<i64>(), id));

    let mut dist: Vec<Option<BigInt>> = vec![None; count];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None; count];
    dist[0] = Some(BigInt::zero());
    for u in order {
        let Some(du) = dist[u].clone() else { continue };
        for &(v, j) in &exploration.adjacency[u] {
            stats.arcs_relaxed += 1;
            let candidate = &du + &prep.costs[j];
            if dist[v].as_ref().is_none_or(|dv| candidate > *dv) {
                dist[v] = Some(candidate);
                parents[v] = Some((u, j));
            }
        }
    }
    let outcome = optimal(inst, prep.walk_counts(&parents, target)?, dist[target].clone())?;
    Ok(SolveReport { outcome, stats })
}

fn optimal(inst: &IPInstance, solution: Vec<BigInt>, length: Option<BigInt>) -> Result<SolveOutcome, SolveError> {
    let value = inst.objective(&solution);
    if length.as_ref() != Some(&value) || !inst.is_feasible_point(&solution) {
        return Err(SolveError::Internal("reconstructed walk disagrees with its length".into()));
    }
    Ok(SolveOutcome::Optimal { solution, value })
}
