//! Problem and solution data model.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("upper bound of variable {index} is negative")]
    NegativeUpperBound { index: usize },
    #[error("instance must have at least one row and one column")]
    EmptyInstance,
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, InstanceError> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(InstanceError::DimensionMismatch {
                    what: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(BigInt::zero(), |acc, (a, v)| acc + a * v)
            })
            .collect()
    }

    /// Largest absolute entry, zero for an all-zero matrix.
    pub fn max_abs(&self) -> BigInt {
        linf_norm(&self.data)
    }
}

/// Unchecked instance data as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
    pub m: usize,
    pub n: usize,
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
    pub upper: Option<Vec<BigInt>>,
}

impl RawInstance {
    /// Convenience constructor from machine integers; dimensions are taken
    /// from `a`.
    pub fn from_i64(a: &[Vec<i64>], b: &[i64], c: &[i64], upper: Option<&[i64]>) -> Self {
        Self {
            m: a.len(),
            n: a.first().map_or(0, Vec::len),
            a: a.iter().map(|row| ints(row)).collect(),
            b: ints(b),
            c: ints(c),
            upper: upper.map(ints),
        }
    }
}

pub(crate) fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// An integer program `max { c^T x : A x = b, 0 <= x <= u, x integral }`
/// with optional upper bounds `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IPInstance {
    a: IntMatrix,
    b: Vec<BigInt>,
    c: Vec<BigInt>,
    upper: Option<Vec<BigInt>>,
    delta: BigInt,
}

impl IPInstance {
    pub fn new(
        a: IntMatrix,
        b: Vec<BigInt>,
        c: Vec<BigInt>,
        upper: Option<Vec<BigInt>>,
    ) -> Result<Self, InstanceError> {
        let (m, n) = (a.rows(), a.cols());
        if m == 0 || n == 0 {
            return Err(InstanceError::EmptyInstance);
        }
        check_len("b", m, b.len())?;
        check_len("c", n, c.len())?;
        if let Some(u) = &upper {
            check_len("u", n, u.len())?;
            if let Some(index) = u.iter().position(Signed::is_negative) {
                return Err(InstanceError::NegativeUpperBound { index });
            }
        }
        let delta = a.max_abs();
        Ok(Self {
            a,
            b,
            c,
            upper,
            delta,
        })
    }

    /// Shorthand for tests and examples.
    pub fn from_i64(
        a: &[Vec<i64>],
        b: &[i64],
        c: &[i64],
        upper: Option<&[i64]>,
    ) -> Result<Self, InstanceError> {
        validate(&RawInstance::from_i64(a, b, c, upper))
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    pub fn c(&self) -> &[BigInt] {
        &self.c
    }

    pub fn upper(&self) -> Option<&[BigInt]> {
        self.upper.as_deref()
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn with_upper(&self, upper: Option<Vec<BigInt>>) -> Result<Self, InstanceError> {
        Self::new(self.a.clone(), self.b.clone(), self.c.clone(), upper)
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            m: self.m(),
            n: self.n(),
            a: self.a.to_rows(),
            b: self.b.clone(),
            c: self.c.clone(),
            upper: self.upper.clone(),
        }
    }

    pub fn objective(&self, x: &[BigInt]) -> BigInt {
        dot(&self.c, x)
    }

    /// Exact feasibility check of an integer point.
    pub fn is_feasible_point(&self, x: &[BigInt]) -> bool {
        if x.len() != self.n() || x.iter().any(Signed::is_negative) {
            return false;
        }
        if let Some(u) = &self.upper {
            if x.iter().zip(u).any(|(v, ub)| v > ub) {
                return false;
            }
        }
        self.a.mul_vec(x) == self.b
    }

    /// True when every entry of `A` is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.a.entries().all(|v| !v.is_negative())
    }

    /// Checks that `outcome` is internally consistent with this instance: an
    /// optimal solution must be feasible and carry its own objective value.
    pub fn certifies(&self, outcome: &SolveOutcome) -> bool {
        match outcome {
            SolveOutcome::Optimal { solution, value } => {
                self.is_feasible_point(solution) && &self.objective(solution) == value
            }
            _ => true,
        }
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected == found {
        Ok(())
    } else {
        Err(InstanceError::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

/// Checks raw data and builds the canonical instance, recomputing `delta`.
pub fn validate(raw: &RawInstance) -> Result<IPInstance, InstanceError> {
    if raw.m == 0 || raw.n == 0 {
        return Err(InstanceError::EmptyInstance);
    }
    check_len("A rows", raw.m, raw.a.len())?;
    for row in &raw.a {
        check_len("A row", raw.n, row.len())?;
    }
    let a = IntMatrix::from_rows(raw.a.clone())?;
    IPInstance::new(a, raw.b.clone(), raw.c.clone(), raw.upper.clone())
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn l1_norm(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc + x.abs())
}

pub fn linf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).max().unwrap_or_default()
}

/// Result of a solve. `Optimal` carries a solution and its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Infeasible,
    Unbounded,
    Optimal { solution: Vec<BigInt>, value: BigInt },
}

impl SolveOutcome {
    pub fn status(&self) -> &'static str {
        match self {
            SolveOutcome::Infeasible => "infeasible",
            SolveOutcome::Unbounded => "unbounded",
            SolveOutcome::Optimal { .. } => "optimal",
        }
    }

    pub fn value(&self) -> Option<&BigInt> {
        match self {
            SolveOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[BigInt]> {
        match self {
            SolveOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

/// Search effort counters reported by the solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes_explored: usize,
    pub arcs_relaxed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}
