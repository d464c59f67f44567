//! Single-row solvers: `max { c^T x : a^T x = beta, 0 <= x (<= u) }` with
//! positive integer weights `a`.
//!
//! Both solvers shrink the capacity with the proximity bound before running a
//! table DP indexed by the remaining capacity. With `delta_a = max a_i`, some
//! optimal solution lies within l1 distance `2 delta_a + 1` of the LP vertex,
//! so for the unbounded problem all but `O(delta_a)` copies of the best-ratio
//! item can be fixed up front and the table has `O(delta_a^2)` entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::SolveError;
use crate::instance::{ints, IPInstance, InstanceError, IntMatrix, SolveOutcome, SolveReport, SolveStats};
use crate::proximity::binary_expand;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnapsackError {
    #[error("knapsack instances have exactly one constraint row, found {0}")]
    NotSingleRow(usize),
    #[error("weight of item {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("capacity must be positive")]
    NonPositiveCapacity,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    weights: Vec<BigInt>,
    profits: Vec<BigInt>,
    capacity: BigInt,
    upper: Option<Vec<BigInt>>,
    delta_a: BigInt,
}

impl KnapsackInstance {
    pub fn new(
        weights: Vec<BigInt>,
        profits: Vec<BigInt>,
        capacity: BigInt,
        upper: Option<Vec<BigInt>>,
    ) -> Result<Self, KnapsackError> {
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(KnapsackError::NonPositiveWeight(i));
        }
        if !capacity.is_positive() {
            return Err(KnapsackError::NonPositiveCapacity);
        }
        // Reuse the general validation for dimensions and bounds.
        let a = IntMatrix::from_rows(vec![weights.clone()])?;
        IPInstance::new(a, vec![capacity.clone()], profits.clone(), upper.clone())?;
        let delta_a = weights.iter().max().cloned().unwrap_or_default();
        Ok(Self {
            weights,
            profits,
            capacity,
            upper,
            delta_a,
        })
    }

    pub fn from_i64(a: &[i64], c: &[i64], beta: i64, upper: Option<&[i64]>) -> Result<Self, KnapsackError> {
        Self::new(ints(a), ints(c), beta.into(), upper.map(ints))
    }

    pub fn from_instance(inst: &IPInstance) -> Result<Self, KnapsackError> {
        if inst.m() != 1 {
            return Err(KnapsackError::NotSingleRow(inst.m()));
        }
        Self::new(
            inst.a().row(0).to_vec(),
            inst.c().to_vec(),
            inst.b()[0].clone(),
            inst.upper().map(<[BigInt]>::to_vec),
        )
    }

    pub fn to_instance(&self) -> IPInstance {
        let a = IntMatrix::from_rows(vec![self.weights.clone()]).expect("single row");
        IPInstance::new(a, vec![self.capacity.clone()], self.profits.clone(), self.upper.clone())
            .expect("validated on construction")
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn profits(&self) -> &[BigInt] {
        &self.profits
    }

    pub fn capacity(&self) -> &BigInt {
        &self.capacity
    }

    pub fn upper(&self) -> Option<&[BigInt]> {
        self.upper.as_deref()
    }

    pub fn delta_a(&self) -> &BigInt {
        &self.delta_a
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The `a^T x <= beta` variant: appends a unit-weight, zero-profit slack
    /// item.
    pub fn with_capacity_slack(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.push(BigInt::from(1));
        let mut profits = self.profits.clone();
        profits.push(BigInt::zero());
        let upper = self.upper.clone().map(|mut u| {
            u.push(self.capacity.clone());
            u
        });
        Self::new(weights, profits, self.capacity.clone(), upper).expect("slack keeps validity")
    }

    /// Index of the best profit-to-weight ratio, lowest index on ties.
    fn best_ratio_item(&self) -> usize {
        let mut best = 0;
        for i in 1..self.len() {
            if &self.profits[i] * &self.weights[best] > &self.profits[best] * &self.weights[i] {
                best = i;
            }
        }
        best
    }

    /// Items in decreasing ratio order, ties by index.
    fn ratio_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| {
            (&self.profits[j] * &self.weights[i])
                .cmp(&(&self.profits[i] * &self.weights[j]))
                .then(i.cmp(&j))
        });
        order
    }

    fn small_weights(&self) -> Result<Vec<usize>, SolveError> {
        self.weights
            .iter()
            .map(|w| w.to_u32().map(|w| w as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| SolveError::TooLarge("knapsack weights must fit in 32 bits".into()))
    }
}

fn table_size(rhs: &BigInt) -> Result<usize, SolveError> {
    rhs.to_usize()
        .filter(|&r| r < usize::MAX / 2)
        .ok_or_else(|| SolveError::TooLarge("reduced capacity does not fit a table".into()))
}

/// Unbounded knapsack (no upper bounds): fixes all but `2 delta_a + 1` copies
/// of the best-ratio item, then fills the residual capacity by a table DP.
/// `stats.nodes_explored` is the table size.
pub fn solve_unbounded_knapsack(inst: &KnapsackInstance) -> Result<SolveReport, SolveError> {
    if inst.upper.is_some() {
        return Err(SolveError::UpperBoundsPresent);
    }
    let weights = inst.small_weights()?;
    let lead = inst.best_ratio_item();
    let window: BigInt = BigInt::from(2) * &inst.delta_a + 1;
    let copies = &inst.capacity / &inst.weights[lead];
    let fixed = if copies >= window {
        copies - &window
    } else {
        BigInt::zero()
    };
    let residual = &inst.capacity - &fixed * &inst.weights[lead];
    let size = table_size(&residual)?;

    let n = inst.len();
    // Only the most profitable item of each weight can be worth taking.
    let mut by_weight: Vec<Option<usize>> = vec![None; weights.iter().max().map_or(0, |w| w + 1)];
    for (i, &w) in weights.iter().enumerate() {
        let slot = &mut by_weight[w];
        if slot.is_none_or(|j| inst.profits[i] > inst.profits[j]) {
            *slot = Some(i);
        }
    }
    let items: Vec<(usize, usize)> = by_weight
        .iter()
        .enumerate()
        .filter_map(|(w, i)| i.map(|i| (i, w)))
        .collect();
    let mut best: Vec<Option<BigInt>> = vec![None; size + 1];
    let mut choice = vec![usize::MAX; size + 1];
    best[0] = Some(BigInt::zero());
    let mut stats = SolveStats {
        nodes_explored: size + 1,
        arcs_relaxed: 0,
    };
    for r in 1..=size {
        let mut top: Option<BigInt> = None;
        let mut pick = usize::MAX;
        for &(i, w) in &items {
            if w > r {
                continue;
            }
            let Some(prev) = &best[r - w] else { continue };
            stats.arcs_relaxed += 1;
            let candidate = prev + &inst.profits[i];
            if top.as_ref().is_none_or(|t| candidate > *t) {
                top = Some(candidate);
                pick = i;
            }
        }
        best[r] = top;
        choice[r] = pick;
    }
    if best[size].is_none() {
        return Ok(SolveReport {
            outcome: SolveOutcome::Infeasible,
            stats,
        });
    }
    let mut counts = vec![0u64; n];
    let mut r = size;
    while r > 0 {
        counts[choice[r]] += 1;
        r -= weights[choice[r]];
    }
    let mut solution: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
    solution[lead] += fixed;
    Ok(SolveReport {
        outcome: finish(inst, solution)?,
        stats,
    })
}

fn finish(inst: &KnapsackInstance, solution: Vec<BigInt>) -> Result<SolveOutcome, SolveError> {
    let full = inst.to_instance();
    if !full.is_feasible_point(&solution) {
        return Err(SolveError::Internal("knapsack solution violates the instance".into()));
    }
    let value = full.objective(&solution);
    Ok(SolveOutcome::Optimal { solution, value })
}

/// Exact LP optimum of a bounded instance: fill by decreasing ratio. Returns
/// the integral floor and the capacity left for the single fractional item, or
/// `None` when even `a^T u < beta`.
fn lp_floor(inst: &KnapsackInstance, upper: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut floor = vec![BigInt::zero(); inst.len()];
    let mut remaining = inst.capacity.clone();
    for i in inst.ratio_order() {
        let full = &inst.weights[i] * &upper[i];
        if full <= remaining {
            remaining -= full;
            floor[i] = upper[i].clone();
        } else {
            floor[i] = remaining.div_floor(&inst.weights[i]);
            remaining = BigInt::zero();
            break;
        }
    }
    remaining.is_zero().then_some(floor)
}

/// Bounded knapsack: LP vertex, a window of `2 delta_a + 2` around its floor
/// for every variable, then a 0/1 table DP over binary-split item copies.
pub fn solve_bounded_knapsack(inst: &KnapsackInstance) -> Result<SolveReport, SolveError> {
    let upper = inst.upper.as_deref().ok_or(SolveError::MissingUpperBounds)?;
    let weights = inst.small_weights()?;
    let Some(floor) = lp_floor(inst, upper) else {
        return Ok(SolveReport {
            outcome: SolveOutcome::Infeasible,
            stats: SolveStats::default(),
        });
    };
    // Proximity bound 2 delta_a + 1 plus one for the fractional coordinate.
    let window: BigInt = BigInt::from(2) * &inst.delta_a + 2;
    let lower_star: Vec<BigInt> = floor.iter().map(|f| f.clone().min(window.clone())).collect();
    let upper_star: Vec<BigInt> = upper
        .iter()
        .zip(&floor)
        .map(|(u, f)| (u - f).min(window.clone()))
        .collect();
    let used: BigInt = inst.weights.iter().zip(&floor).map(|(a, f)| a * f).sum();
    let shifted: BigInt = inst.weights.iter().zip(&lower_star).map(|(a, l)| a * l).sum();
    let rhs = &inst.capacity - used + shifted;
    let size = table_size(&rhs)?;

    // (item, multiplicity) copies
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for i in 0..inst.len() {
        let span = binary_expand(&BigInt::zero(), &(&lower_star[i] + &upper_star[i]));
        for d in span.coefficients {
            copies.push((i, d.to_usize().expect("window is small")));
        }
    }
    let mut best: Vec<Option<BigInt>> = vec![None; size + 1];
    best[0] = Some(BigInt::zero());
    let mut taken = vec![false; copies.len() * (size + 1)];
    let mut stats = SolveStats {
        nodes_explored: size + 1,
        arcs_relaxed: 0,
    };
    for (k, &(i, d)) in copies.iter().enumerate() {
        let w = weights[i] * d;
        if w > size {
            continue;
        }
        let gain = &inst.profits[i] * BigInt::from(d);
        for r in (w..=size).rev() {
            let Some(prev) = &best[r - w] else { continue };
            stats.arcs_relaxed += 1;
            let candidate = prev + &gain;
            if best[r].as_ref().is_none_or(|b| candidate > *b) {
                best[r] = Some(candidate);
                taken[k * (size + 1) + r] = true;
            }
        }
    }
    if best[size].is_none() {
        return Ok(SolveReport {
            outcome: SolveOutcome::Infeasible,
            stats,
        });
    }
    let mut solution: Vec<BigInt> = floor.iter().zip(&lower_star).map(|(f, l)| f - l).collect();
    let mut r = size;
    for (k, &(i, d)) in copies.iter().enumerate().rev() {
        if taken[k * (size + 1) + r] {
            solution[i] += d;
            r -= weights[i] * d;
        }
    }
    Ok(SolveReport {
        outcome: finish(inst, solution)?,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opt(x: &[i64], v: i64) -> SolveOutcome {
        SolveOutcome::Optimal {
            solution: ints(x),
            value: v.into(),
        }
    }

    #[test]
    fn unbounded_examples() {
        let k = KnapsackInstance::from_i64(&[1], &[5], 4, None).unwrap();
        assert_eq!(solve_unbounded_knapsack(&k).unwrap().outcome, opt(&[4], 20));
        let k = KnapsackInstance::from_i64(&[2, 3], &[1, 1], 7, None).unwrap();
        assert_eq!(solve_unbounded_knapsack(&k).unwrap().outcome, opt(&[2, 1], 3));
        let k = KnapsackInstance::from_i64(&[2], &[1], 3, None).unwrap();
        assert_eq!(solve_unbounded_knapsack(&k).unwrap().outcome, SolveOutcome::Infeasible);
    }

    #[test]
    fn unbounded_large_capacity_uses_small_table() {
        let k = KnapsackInstance::from_i64(&[3, 5, 7], &[4, 7, 9], 1_000_003, None).unwrap();
        let report = solve_unbounded_knapsack(&k).unwrap();
        assert!(report.stats.nodes_explored <= 4 * 15 * 7);
        // 5 has the best ratio (7/5); 1_000_003 = 5 * 200_000 + 3
        assert_eq!(report.outcome, opt(&[1, 200_000, 0], 1_400_004));
    }

    #[test]
    fn bounded_examples() {
        let k = KnapsackInstance::from_i64(&[2, 3], &[1, 1], 7, Some(&[3, 2])).unwrap();
        assert_eq!(solve_bounded_knapsack(&k).unwrap().outcome, opt(&[2, 1], 3));
        let k = KnapsackInstance::from_i64(&[1], &[1], 5, Some(&[4])).unwrap();
        assert_eq!(solve_bounded_knapsack(&k).unwrap().outcome, SolveOutcome::Infeasible);
        let k = KnapsackInstance::from_i64(&[5], &[7], 5, Some(&[1])).unwrap();
        assert_eq!(solve_bounded_knapsack(&k).unwrap().outcome, opt(&[1], 7));
    }

    #[test]
    fn bounded_large_bounds() {
        // LP fills item 0 (ratio 3/2) up to 50 and then item 1 fractionally
        let k = KnapsackInstance::from_i64(&[2, 3, 4], &[3, 4, 1], 250, Some(&[50, 100, 100])).unwrap();
        let report = solve_bounded_knapsack(&k).unwrap();
        assert_eq!(report.outcome, opt(&[50, 50, 0], 350));
    }

    #[test]
    fn validation() {
        assert_eq!(
            KnapsackInstance::from_i64(&[0, 1], &[1, 1], 3, None),
            Err(KnapsackError::NonPositiveWeight(0))
        );
        assert_eq!(
            KnapsackInstance::from_i64(&[1], &[1], 0, None),
            Err(KnapsackError::NonPositiveCapacity)
        );
        let inst = IPInstance::from_i64(&[vec![1], vec![1]], &[1, 1], &[1], None).unwrap();
        assert_eq!(KnapsackInstance::from_instance(&inst), Err(KnapsackError::NotSingleRow(2)));
    }

    #[test]
    fn slack_turns_equality_into_inequality() {
        let k = KnapsackInstance::from_i64(&[4, 6], &[5, 8], 9, None).unwrap();
        assert_eq!(solve_unbounded_knapsack(&k).unwrap().outcome, SolveOutcome::Infeasible);
        let report = solve_unbounded_knapsack(&k.with_capacity_slack()).unwrap();
        assert_eq!(report.outcome.value(), Some(&BigInt::from(10)));
    }
}
