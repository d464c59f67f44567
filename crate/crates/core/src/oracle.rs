//! Brute-force ground truth: enumerate every integer point of a box.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::instance::{IPInstance, Rational, SolveOutcome};
use crate::lp::{solve_lp, LpOutcome, LpProblem};

pub const DEFAULT_POINT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration box has {points} points, above the cap of {cap}")]
    BoxTooLarge { points: u128, cap: u128 },
    #[error("box has {found} limits for {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("instance data too large for enumeration")]
    TooLarge,
}

/// Inclusive per-variable limits `0 <= x_i <= limits[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBox {
    limits: Vec<u64>,
    cap: u128,
}

impl EnumerationBox {
    pub fn new(limits: Vec<u64>) -> Self {
        Self {
            limits,
            cap: DEFAULT_POINT_CAP,
        }
    }

    pub fn uniform(n: usize, limit: u64) -> Self {
        Self::new(vec![limit; n])
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    /// The instance's own upper bounds.
    pub fn from_upper(inst: &IPInstance) -> Option<Self> {
        let u = inst.upper()?;
        u.iter().map(|v| v.to_u64()).collect::<Option<Vec<_>>>().map(Self::new)
    }

    /// For nonnegative `A`: no variable can exceed
    /// `ceil(||b||_1 / min nonzero |a_ij|)` without overshooting `b`.
    /// Zero columns get limit 0, so callers must treat them separately.
    pub fn for_nonnegative(inst: &IPInstance) -> Option<Self> {
        if !inst.is_nonnegative() {
            return None;
        }
        let min = inst.a().entries().filter(|v| !v.is_zero()).min()?.clone();
        let limit = crate::instance::l1_norm(inst.b()).div_ceil(&min).to_u64()?;
        let limits = (0..inst.n())
            .map(|j| {
                if inst.a().column(j).iter().all(Zero::is_zero) {
                    0
                } else {
                    limit
                }
            })
            .collect();
        Some(Self::new(limits))
    }

    pub fn limits(&self) -> &[u64] {
        &self.limits
    }

    pub fn points(&self) -> u128 {
        self.limits
            .iter()
            .fold(1u128, |acc, &l| acc.saturating_mul(l as u128 + 1))
    }
}

/// Small integer copy of an instance for the enumeration loop.
struct Dense {
    a: Vec<Vec<i128>>,
    b: Vec<i128>,
    c: Vec<i128>,
}

fn dense(inst: &IPInstance) -> Result<Dense, OracleError> {
    let small = |v: &BigInt| v.to_i64().map(i128::from).ok_or(OracleError::TooLarge);
    let a = inst
        .a()
        .to_rows()
        .iter()
        .map(|row| row.iter().map(small).collect())
        .collect::<Result<_, _>>()?;
    Ok(Dense {
        a,
        b: inst.b().iter().map(small).collect::<Result<_, _>>()?,
        c: inst.c().iter().map(small).collect::<Result<_, _>>()?,
    })
}

/// Visits every feasible point of the box (and of the instance's own upper
/// bounds), passing it with its objective value.
fn for_each_feasible(
    inst: &IPInstance,
    bx: &EnumerationBox,
    mut visit: impl FnMut(&[u64], i128),
) -> Result<(), OracleError> {
    let n = inst.n();
    if bx.limits.len() != n {
        return Err(OracleError::DimensionMismatch {
            expected: n,
            found: bx.limits.len(),
        });
    }
    let points = bx.points();
    if points > bx.cap {
        return Err(OracleError::BoxTooLarge { points, cap: bx.cap });
    }
    let mut limits = bx.limits.clone();
    if let Some(u) = inst.upper() {
        for (l, u) in limits.iter_mut().zip(u) {
            *l = (*l).min(u.to_u64().unwrap_or(u64::MAX));
        }
    }
    if limits.iter().any(|&l| l > i64::MAX as u64) {
        return Err(OracleError::TooLarge);
    }
    let d = dense(inst)?;
    let mut x = vec![0u64; n];
    loop {
        let feasible = d.a.iter().zip(&d.b).all(|(row, &b)| {
            row.iter().zip(&x).map(|(&a, &v)| a * v as i128).sum::<i128>() == b
        });
        if feasible {
            let value = d.c.iter().zip(&x).map(|(&c, &v)| c * v as i128).sum();
            visit(&x, value);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return Ok(());
            }
            if x[k] < limits[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn to_big(x: &[u64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

/// Best point of the box, `Infeasible` when the box has no feasible point.
/// Ties keep the first point in odometer order (first coordinate fastest).
pub fn brute_force_solve(inst: &IPInstance, bx: &EnumerationBox) -> Result<SolveOutcome, OracleError> {
    let mut best: Option<(Vec<u64>, i128)> = None;
    for_each_feasible(inst, bx, |x, v| {
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((x.to_vec(), v));
        }
    })?;
    Ok(match best {
        None => SolveOutcome::Infeasible,
        Some((x, v)) => SolveOutcome::Optimal {
            solution: to_big(&x),
            value: BigInt::from(v),
        },
    })
}

/// Every optimal point of the box.
pub fn enumerate_optima(inst: &IPInstance, bx: &EnumerationBox) -> Result<Vec<Vec<BigInt>>, OracleError> {
    let mut best: Option<i128> = None;
    let mut all: Vec<Vec<u64>> = Vec::new();
    for_each_feasible(inst, bx, |x, v| match best {
        Some(b) if v < b => {}
        Some(b) if v == b => all.push(x.to_vec()),
        _ => {
            best = Some(v);
            all.clear();
            all.push(x.to_vec());
        }
    })?;
    Ok(all.iter().map(|x| to_big(x)).collect())
}

/// Whether some rational `r >= 0` has `A r = 0` and `c^T r > 0`, decided by
/// maximizing `c^T r` over `A r = 0, 0 <= r <= 1`.
pub fn lp_ray_exists(inst: &IPInstance) -> bool {
    let q = |v: &BigInt| Rational::from_integer(v.clone());
    let a = inst.a().to_rows().iter().map(|row| row.iter().map(q).collect()).collect();
    let one = Rational::from_integer(1.into());
    let p = LpProblem::nonnegative(
        a,
        vec![Rational::zero(); inst.m()],
        inst.c().iter().map(q).collect(),
        vec![Some(one); inst.n()],
    )
    .expect("dimensions come from a validated instance");
    match solve_lp(&p) {
        LpOutcome::Optimal(v) => v.objective_value.is_positive(),
        // r = 0 is always feasible and the box keeps the LP bounded
        _ => unreachable!("ray LP is feasible and bounded"),
    }
}
