//! Rearranging zero-sum vectors so that every prefix sum stays small.
//!
//! Given `x_1, ..., x_n` in dimension `m` with `sum x_i = 0` and
//! `||x_i||_inf <= r`, [`steinitz_reorder`] returns an order in which every
//! prefix sum has infinity norm at most `m * r`.
//!
//! The order is built back to front. Start with `S = {1..n}`; while
//! `|S| = k > m`, find a vertex of
//!
//! ```text
//!     sum_{i in S} lambda_i x_i = 0
//!     sum_{i in S} lambda_i     = k - 1 - m
//!     0 <= lambda_i <= 1
//! ```
//!
//! A vertex has at most `m + 1` fractional entries, which forces some
//! `lambda_i = 0`; that index goes to position `k` and leaves `S`. For every
//! `k >= m` the first `k` vectors then sum to `sum_{i in S} (1 - lambda_i) x_i`
//! whose norm is at most `m * r`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::instance::Rational;
use crate::lp::{feasible_vertex, LpOutcome, LpProblem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteinitzError {
    #[error("no vectors given")]
    Empty,
    #[error("vector {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vectors do not sum to zero")]
    NonZeroSum,
    #[error("vector {index} exceeds the norm bound")]
    NormExceeded { index: usize },
    #[error("shrink system infeasible at k = {k}")]
    ShrinkInfeasible { k: usize },
    #[error("vertex at k = {k} has no zero coordinate")]
    NoZeroCoordinate { k: usize },
    #[error("invalid permutation")]
    InvalidPermutation,
}

/// Zero-sum vector family with a common infinity-norm bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RearrangementInput {
    vectors: Vec<Vec<Rational>>,
    dim: usize,
    norm_bound: Rational,
}

impl RearrangementInput {
    /// Uses the largest infinity norm among the vectors as the bound.
    pub fn new(vectors: Vec<Vec<Rational>>) -> Result<Self, SteinitzError> {
        let bound = vectors
            .iter()
            .map(|v| linf(v))
            .max()
            .unwrap_or_else(Rational::zero);
        Self::with_norm_bound(vectors, bound)
    }

    pub fn with_norm_bound(
        vectors: Vec<Vec<Rational>>,
        norm_bound: Rational,
    ) -> Result<Self, SteinitzError> {
        let dim = vectors.first().ok_or(SteinitzError::Empty)?.len();
        let mut sum = vec![Rational::zero(); dim];
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(SteinitzError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
            if linf(v) > norm_bound {
                return Err(SteinitzError::NormExceeded { index });
            }
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
        }
        if sum.iter().any(|s| !s.is_zero()) {
            return Err(SteinitzError::NonZeroSum);
        }
        Ok(Self {
            vectors,
            dim,
            norm_bound,
        })
    }

    pub fn from_i64(vectors: &[Vec<i64>]) -> Result<Self, SteinitzError> {
        Self::new(
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_bound(&self) -> &Rational {
        &self.norm_bound
    }

    /// The guaranteed prefix bound `m * norm_bound`.
    pub fn guarantee(&self) -> Rational {
        &self.norm_bound * Rational::from_integer(BigInt::from(self.dim))
    }
}

/// A bijection on `0..n`; `order[k]` is the index placed at position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, SteinitzError> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(SteinitzError::InvalidPermutation);
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    L1,
    #[default]
    LInf,
}

fn linf(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}

fn norm(v: &[Rational], kind: Norm) -> Rational {
    match kind {
        Norm::LInf => linf(v),
        Norm::L1 => v.iter().fold(Rational::zero(), |acc, x| acc + x.abs()),
    }
}

/// Largest infinity norm of a prefix sum in the given order.
pub fn max_prefix_norm(vectors: &[Vec<Rational>], perm: &Permutation) -> Rational {
    max_prefix_norm_with(vectors, perm, Norm::LInf)
}

pub fn max_prefix_norm_with(vectors: &[Vec<Rational>], perm: &Permutation, kind: Norm) -> Rational {
    assert_eq!(vectors.len(), perm.len(), "permutation length");
    let dim = vectors.first().map_or(0, Vec::len);
    let mut sum = vec![Rational::zero(); dim];
    let mut best = Rational::zero();
    for &i in perm.order() {
        for (s, x) in sum.iter_mut().zip(&vectors[i]) {
            *s += x;
        }
        best = best.max(norm(&sum, kind));
    }
    best
}

/// Orders the vectors so that every prefix sum has infinity norm at most
/// `m * norm_bound`.
pub fn steinitz_reorder(input: &RearrangementInput) -> Result<Permutation, SteinitzError> {
    let n = input.vectors.len();
    let m = input.dim;
    if n <= m {
        return Ok(Permutation::identity(n));
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut order = vec![usize::MAX; n];
    for k in (m + 1..=n).rev() {
        let removed = shrink_step(input, &active, k)?;
        order[k - 1] = active.remove(removed);
    }
    order[..m].copy_from_slice(&active);
    Permutation::new(order)
}

/// Solves the shrink system over `active` (|active| = k) with right-hand side
/// `k - 1 - m` and returns the position in `active` of the lowest-index zero
/// coordinate of the vertex found.
fn shrink_step(input: &RearrangementInput, active: &[usize], k: usize) -> Result<usize, SteinitzError> {
    let m = input.dim;
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|row| active.iter().map(|&i| input.vectors[i][row].clone()).collect())
        .collect();
    a.push(vec![Rational::from_integer(1.into()); active.len()]);
    let mut rhs = vec![Rational::zero(); m];
    rhs.push(Rational::from_integer(BigInt::from(k - 1 - m)));
    let zero = vec![Rational::zero(); active.len()];
    let one = vec![Some(Rational::from_integer(1.into())); active.len()];
    let p = LpProblem::new(a, rhs, zero.clone(), zero, one).expect("shrink system dimensions");
    let LpOutcome::Optimal(vertex) = feasible_vertex(&p) else {
        return Err(SteinitzError::ShrinkInfeasible { k });
    };
    vertex
        .point
        .iter()
        .position(Zero::is_zero)
        .ok_or(SteinitzError::NoZeroCoordinate { k })
}
