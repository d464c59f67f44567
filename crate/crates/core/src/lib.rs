//! Pseudo-polynomial algorithms for integer programs in standard form
//!
//! ```text
//!     max { c^T x : A x = b, 0 <= x (<= u), x integral }
//! ```
//!
//! where every entry of `A` is bounded by `delta` in absolute value. The crate
//! provides:
//!
//! - [`steinitz`]: an LP-based rearrangement of zero-sum vectors whose prefix
//!   sums stay within `m` times the largest vector norm.
//! - [`dp`]: the feasibility search and longest-path optimization over the
//!   lattice points of a narrow tube around the segment `[0, b]`, including
//!   positive-cycle (unboundedness) detection and the acyclic fast path for
//!   nonnegative matrices.
//! - [`proximity`]: the `m (2 m delta + 1)^m` distance bound between LP and
//!   integer optima, and the layered-DAG solver for bounded variables that it
//!   enables.
//! - [`knapsack`]: specialized single-row solvers.
//! - [`oracle`]: brute-force enumeration used as ground truth in tests.
//! - [`lp`]: an exact rational bounded-variable simplex.
//!
//! All arithmetic on instance data is exact.

pub mod dispatch;
pub mod dp;
pub mod generate;
pub mod instance;
pub mod knapsack;
pub mod lp;
pub mod oracle;
pub mod proximity;
pub mod steinitz;

mod error;

pub use error::SolveError;
pub use instance::{
    l1_norm, linf_norm, validate, IPInstance, InstanceError, IntMatrix, RawInstance, Rational,
    SolveOutcome, SolveReport, SolveStats,
};
