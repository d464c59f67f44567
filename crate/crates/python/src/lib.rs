//! Python bindings for the `steinitz_ip` solvers.
//!
//! Integers cross the boundary as Python `int` of any size; rationals as
//! `fractions.Fraction` (any object with `numerator` and `denominator`
//! attributes is accepted on input). Vector indices are 0-based.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use steinitz_ip::dispatch::{solve_with, Algorithm};
use steinitz_ip::generate::{generate as gen_instance, GenConfig};
use steinitz_ip::knapsack::{solve_bounded_knapsack, solve_unbounded_knapsack, KnapsackInstance};
use steinitz_ip::oracle::{self, EnumerationBox};
use steinitz_ip::steinitz::{self, Permutation, RearrangementInput};
use steinitz_ip::{dp, proximity, validate, IPInstance, Rational, RawInstance, SolveError, SolveOutcome, SolveReport};

create_exception!(steinitz_ip, PreconditionError, PyValueError);

fn solve_err(e: SolveError) -> PyErr {
    match e {
        SolveError::UpperBoundsPresent
        | SolveError::MissingUpperBounds
        | SolveError::PreconditionViolated(_) => PreconditionError::new_err(e.to_string()),
        SolveError::TooLarge(_) | SolveError::Internal(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An integer program `max c^T x, A x = b, 0 <= x (<= upper)`.
#[pyclass(name = "Instance", module = "steinitz_ip", frozen)]
struct PyInstance {
    inner: IPInstance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (a, b, c, upper=None))]
    fn new(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, c: Vec<BigInt>, upper: Option<Vec<BigInt>>) -> PyResult<Self> {
        let raw = RawInstance {
            m: a.len(),
            n: a.first().map_or(0, Vec::len),
            a,
            b,
            c,
            upper,
        };
        validate(&raw).map(|inner| Self { inner }).map_err(value_err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn delta(&self) -> BigInt {
        self.inner.delta().clone()
    }

    #[getter]
    fn a(&self) -> Vec<Vec<BigInt>> {
        self.inner.a().to_rows()
    }

    #[getter]
    fn b(&self) -> Vec<BigInt> {
        self.inner.b().to_vec()
    }

    #[getter]
    fn c(&self) -> Vec<BigInt> {
        self.inner.c().to_vec()
    }

    #[getter]
    fn upper(&self) -> Option<Vec<BigInt>> {
        self.inner.upper().map(<[_]>::to_vec)
    }

    fn objective(&self, x: Vec<BigInt>) -> PyResult<BigInt> {
        if x.len() != self.inner.n() {
            return Err(value_err("point has the wrong length"));
        }
        Ok(self.inner.objective(&x))
    }

    fn is_feasible(&self, x: Vec<BigInt>) -> bool {
        self.inner.is_feasible_point(&x)
    }

    #[pyo3(signature = (algorithm="auto"))]
    fn solve(&self, algorithm: &str) -> PyResult<PySolveResult> {
        solve(self, algorithm)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(m={}, n={}, delta={}, bounded={})",
            self.inner.m(),
            self.inner.n(),
            self.inner.delta(),
            if self.inner.upper().is_some() { "True" } else { "False" }
        )
    }
}

#[pyclass(name = "SolveResult", module = "steinitz_ip", frozen, get_all)]
struct PySolveResult {
    /// "optimal", "infeasible" or "unbounded".
    status: String,
    x: Option<Vec<BigInt>>,
    value: Option<BigInt>,
    nodes_explored: usize,
    arcs_relaxed: usize,
    algorithm: String,
}

impl PySolveResult {
    fn new(outcome: &SolveOutcome, report: Option<&SolveReport>, algorithm: &str) -> Self {
        let stats = report.map(|r| r.stats).unwrap_or_default();
        Self {
            status: outcome.status().to_owned(),
            x: outcome.solution().map(<[_]>::to_vec),
            value: outcome.value().cloned(),
            nodes_explored: stats.nodes_explored,
            arcs_relaxed: stats.arcs_relaxed,
            algorithm: algorithm.to_owned(),
        }
    }
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        match (&self.x, &self.value) {
            (Some(x), Some(v)) => {
                let x: Vec<String> = x.iter().map(BigInt::to_string).collect();
                format!("SolveResult(status='{}', x=[{}], value={v})", self.status, x.join(", "))
            }
            _ => format!("SolveResult(status='{}')", self.status),
        }
    }
}

/// Solves with `algorithm` in {"auto", "dp", "proximity", "knapsack", "acyclic"}.
#[pyfunction]
#[pyo3(signature = (instance, algorithm="auto"))]
fn solve(instance: &PyInstance, algorithm: &str) -> PyResult<PySolveResult> {
    let algorithm: Algorithm = algorithm.parse().map_err(value_err)?;
    let (report, ran) = solve_with(&instance.inner, algorithm).map_err(solve_err)?;
    Ok(PySolveResult::new(&report.outcome, Some(&report), ran.name()))
}

/// Some feasible point of an instance without upper bounds, or `None`.
#[pyfunction]
fn feasible(instance: &PyInstance) -> PyResult<Option<Vec<BigInt>>> {
    dp::feasible(&instance.inner).map_err(solve_err)
}

/// Brute force over `[0, limit]^n`, or over the instance's own bounds.
/// Does not detect unboundedness; see `lp_ray_exists`.
#[pyfunction]
#[pyo3(signature = (instance, limit=None))]
fn brute_force(instance: &PyInstance, limit: Option<u64>) -> PyResult<PySolveResult> {
    let inst = &instance.inner;
    let bx = match limit {
        Some(l) => EnumerationBox::uniform(inst.n(), l),
        None => EnumerationBox::from_upper(inst)
            .or_else(|| EnumerationBox::for_nonnegative(inst))
            .ok_or_else(|| value_err("instance needs upper bounds, a nonnegative matrix or a limit"))?,
    };
    let outcome = oracle::brute_force_solve(inst, &bx).map_err(value_err)?;
    Ok(PySolveResult::new(&outcome, None, "oracle"))
}

/// Whether some rational `r >= 0` has `A r = 0` and `c^T r > 0`.
#[pyfunction]
fn lp_ray_exists(instance: &PyInstance) -> bool {
    oracle::lp_ray_exists(&instance.inner)
}

#[pyfunction]
#[pyo3(signature = (weights, profits, capacity, upper=None))]
fn solve_knapsack(
    weights: Vec<BigInt>,
    profits: Vec<BigInt>,
    capacity: BigInt,
    upper: Option<Vec<BigInt>>,
) -> PyResult<PySolveResult> {
    let ks = KnapsackInstance::new(weights, profits, capacity, upper).map_err(value_err)?;
    let report = if ks.upper().is_some() {
        solve_bounded_knapsack(&ks)
    } else {
        solve_unbounded_knapsack(&ks)
    }
    .map_err(solve_err)?;
    Ok(PySolveResult::new(&report.outcome, Some(&report), "knapsack"))
}

#[pyfunction]
#[pyo3(signature = (m, n, delta, seed=0, bounded=false))]
fn generate(m: usize, n: usize, delta: i64, seed: u64, bounded: bool) -> PyResult<PyInstance> {
    if m == 0 || n == 0 || delta < 0 {
        return Err(value_err("need m >= 1, n >= 1 and delta >= 0"));
    }
    Ok(PyInstance {
        inner: gen_instance(&GenConfig { m, n, delta, seed, bounded }),
    })
}

#[pyfunction]
fn l1_bound(m: usize, delta: BigInt) -> BigInt {
    proximity::l1_bound(m, &delta)
}

#[pyfunction]
fn cook_l1_bound(n: usize, m: usize, delta: BigInt) -> BigInt {
    proximity::cook_l1_bound(n, m, &delta)
}

#[pyfunction]
fn gap_bound(c_inf_norm: BigInt, m: usize, delta: BigInt) -> BigInt {
    proximity::gap_bound(&c_inf_norm, m, &delta)
}

#[pyfunction]
fn node_count_bound(m: usize, delta: BigInt, b: Vec<BigInt>) -> BigInt {
    dp::node_count_bound(m, &delta, &b)
}

/// `(shift, coefficients)` whose 0/1 combinations reach exactly `[-l, u]`.
#[pyfunction]
fn binary_expand(l: BigInt, u: BigInt) -> PyResult<(BigInt, Vec<BigInt>)> {
    if l.sign() == num_bigint::Sign::Minus || u.sign() == num_bigint::Sign::Minus {
        return Err(value_err("l and u must be nonnegative"));
    }
    let e = proximity::binary_expand(&l, &u);
    Ok((e.shift, e.coefficients))
}

fn to_rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let num: BigInt = v.getattr("numerator")?.extract()?;
    let den: BigInt = v.getattr("denominator")?.extract()?;
    if den.sign() == num_bigint::Sign::NoSign {
        return Err(value_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn to_vectors(vectors: &[Vec<Bound<'_, PyAny>>]) -> PyResult<Vec<Vec<Rational>>> {
    vectors.iter().map(|v| v.iter().map(to_rational).collect()).collect()
}

fn to_fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

/// Order (0-based) whose prefix sums have infinity norm at most `m` times
/// `norm_bound` (default: the largest vector norm).
#[pyfunction]
#[pyo3(signature = (vectors, norm_bound=None))]
fn steinitz_reorder(vectors: Vec<Vec<Bound<'_, PyAny>>>, norm_bound: Option<Bound<'_, PyAny>>) -> PyResult<Vec<usize>> {
    let vectors = to_vectors(&vectors)?;
    let input = match norm_bound {
        Some(b) => RearrangementInput::with_norm_bound(vectors, to_rational(&b)?),
        None => RearrangementInput::new(vectors),
    }
    .map_err(value_err)?;
    let perm = steinitz::steinitz_reorder(&input).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(perm.order().to_vec())
}

/// Largest infinity norm of a prefix sum when taken in `order` (0-based).
#[pyfunction]
fn max_prefix_norm<'py>(
    py: Python<'py>,
    vectors: Vec<Vec<Bound<'py, PyAny>>>,
    order: Vec<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let vectors = to_vectors(&vectors)?;
    if order.len() != vectors.len() {
        return Err(value_err("order must list every vector once"));
    }
    let perm = Permutation::new(order).map_err(value_err)?;
    to_fraction(py, &steinitz::max_prefix_norm(&vectors, &perm))
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveResult>()?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(feasible, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(lp_ray_exists, m)?)?;
    m.add_function(wrap_pyfunction!(solve_knapsack, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(l1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cook_l1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gap_bound, m)?)?;
    m.add_function(wrap_pyfunction!(node_count_bound, m)?)?;
    m.add_function(wrap_pyfunction!(binary_expand, m)?)?;
    m.add_function(wrap_pyfunction!(steinitz_reorder, m)?)?;
    m.add_function(wrap_pyfunction!(max_prefix_norm, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "steinitz_ip")]
fn steinitz_ip_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
