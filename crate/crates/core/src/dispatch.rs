//! Picks a solver for an instance.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::dp::{solve_acyclic, solve_standard_form};
use crate::knapsack::{solve_bounded_knapsack, solve_unbounded_knapsack, KnapsackInstance};
use crate::proximity::solve_bounded;
use crate::{IPInstance, SolveError, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Auto,
    Dp,
    Proximity,
    Knapsack,
    Acyclic,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Auto,
        Algorithm::Dp,
        Algorithm::Proximity,
        Algorithm::Knapsack,
        Algorithm::Acyclic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Dp => "dp",
            Algorithm::Proximity => "proximity",
            Algorithm::Knapsack => "knapsack",
            Algorithm::Acyclic => "acyclic",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Single row with positive weights and capacity: knapsack. Otherwise upper
/// bounds select the bounded solver, a nonnegative matrix the acyclic pass,
/// and everything else the general dynamic program.
pub fn route(inst: &IPInstance) -> Algorithm {
    let knapsack =
        inst.m() == 1 && inst.a().entries().all(Signed::is_positive) && inst.b()[0].is_positive();
    if knapsack {
        Algorithm::Knapsack
    } else if inst.upper().is_some() {
        Algorithm::Proximity
    } else if inst.is_nonnegative() {
        Algorithm::Acyclic
    } else {
        Algorithm::Dp
    }
}

/// Runs the requested algorithm (routing `Auto` first) and returns the
/// algorithm that actually ran.
pub fn solve_with(inst: &IPInstance, algorithm: Algorithm) -> Result<(SolveReport, Algorithm), SolveError> {
    let algorithm = match algorithm {
        Algorithm::Auto => route(inst),
        a => a,
    };
    let report = match algorithm {
        Algorithm::Auto => unreachable!(),
        Algorithm::Dp => solve_standard_form(inst)?,
        Algorithm::Acyclic => solve_acyclic(inst)?,
        Algorithm::Proximity => solve_bounded(inst)?,
        Algorithm::Knapsack => {
            let ks = KnapsackInstance::from_instance(inst)
                .map_err(|e| SolveError::PreconditionViolated(e.to_string()))?;
            if ks.upper().is_some() {
                solve_bounded_knapsack(&ks)?
            } else {
                solve_unbounded_knapsack(&ks)?
            }
        }
    };
    Ok((report, algorithm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(a: &[Vec<i64>], b: &[i64], upper: Option<&[i64]>) -> IPInstance {
        let c = vec![1; a[0].len()];
        IPInstance::from_i64(a, b, &c, upper).unwrap()
    }

    #[test]
    fn routes() {
        assert_eq!(route(&inst(&[vec![2, 3]], &[7], None)), Algorithm::Knapsack);
        assert_eq!(route(&inst(&[vec![2, 3]], &[0], None)), Algorithm::Acyclic);
        assert_eq!(route(&inst(&[vec![2, 0]], &[4], None)), Algorithm::Acyclic);
        assert_eq!(route(&inst(&[vec![2, -3]], &[7], Some(&[5, 5]))), Algorithm::Proximity);
        assert_eq!(route(&inst(&[vec![2, -3]], &[7], None)), Algorithm::Dp);
        assert_eq!(route(&inst(&[vec![1, 1], vec![1, 2]], &[2, 3], None)), Algorithm::Acyclic);
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn knapsack_precondition() {
        let signed = inst(&[vec![1, -1]], &[1], None);
        assert!(matches!(
            solve_with(&signed, Algorithm::Knapsack),
            Err(SolveError::PreconditionViolated(_))
        ));
        let (report, ran) = solve_with(&inst(&[vec![2, 3]], &[7], None), Algorithm::Auto).unwrap();
        assert_eq!(ran, Algorithm::Knapsack);
        assert_eq!(report.outcome.value(), Some(&3.into()));
    }
}
