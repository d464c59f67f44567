use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use steinitz_ip::dp::{node_count_bound, solve_acyclic, solve_standard_form};
use steinitz_ip::generate::Sampler;
use steinitz_ip::knapsack::{solve_unbounded_knapsack, KnapsackInstance};
use steinitz_ip::lp::{solve_lp, LpOutcome, LpProblem};
use steinitz_ip::oracle::{brute_force_solve, enumerate_optima, lp_ray_exists, EnumerationBox};
use steinitz_ip::proximity::{binary_expand, l1_bound, lp_relaxation, solve_bounded};
use steinitz_ip::steinitz::{max_prefix_norm, steinitz_reorder, RearrangementInput};
use steinitz_ip::{IPInstance, Rational, SolveOutcome};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn random_matrix(rng: &mut Sampler, m: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..m).map(|_| (0..n).map(|_| rng.range(lo, hi)).collect()).collect()
}

fn random_vec(rng: &mut Sampler, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.range(lo, hi)).collect()
}

fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, x)| a * x).sum()).collect()
}

/// Sets one random entry to `+-delta` so the instance has exactly that delta.
fn pin_delta(rng: &mut Sampler, a: &mut [Vec<i64>], delta: i64, signed: bool) {
    let (m, n) = (a.len(), a[0].len());
    let p = rng.index(m * n);
    let negative = signed && rng.range(0, 1) == 1;
    a[p / n][p % n] = if negative { -delta } else { delta };
}

fn same_outcome(got: &SolveOutcome, want: &SolveOutcome) -> bool {
    got.status() == want.status() && got.value() == want.value()
}

// 1 -----------------------------------------------------------------------

fn zero_sum_family(rng: &mut Sampler, m: usize, n: usize) -> Vec<Vec<i64>> {
    let mut v = random_matrix(rng, n, m, -5, 5);
    for k in 0..m {
        let mut sum: i64 = v.iter().map(|x| x[k]).sum();
        while sum != 0 {
            let step = -sum.signum();
            let movable: Vec<usize> = (0..n).filter(|&i| (v[i][k] + step).abs() <= 5).collect();
            let i = movable[rng.index(movable.len())];
            v[i][k] += step;
            sum += step;
        }
    }
    v
}

fn steinitz_guarantee() -> Verdict {
    let start = Instant::now();
    let mut rng = Sampler::new(1);
    let mut ok = 0;
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let m = rng.range(1, 3) as usize;
        let n = rng.range(1, 24) as usize;
        let family = zero_sum_family(&mut rng, m, n);
        let input = RearrangementInput::from_i64(&family).expect("zero-sum family");
        let Ok(perm) = steinitz_reorder(&input) else { continue };
        let reached = max_prefix_norm(input.vectors(), &perm);
        let limit = input.guarantee();
        if reached <= limit {
            ok += 1;
        }
        if !limit.is_zero() {
            worst = worst.max((reached / limit).to_f64().unwrap_or(f64::INFINITY));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        ok == 500 && elapsed < Duration::from_secs(60),
        format!("{ok}/500 within m*bound, worst prefix/guarantee {worst:.3}, {:.1}s", elapsed.as_secs_f64()),
    )
}

// 2, 3 --------------------------------------------------------------------

fn small_standard_instance(rng: &mut Sampler) -> IPInstance {
    let m = rng.range(1, 2) as usize;
    let n = rng.range(1, 4) as usize;
    let a = random_matrix(rng, m, n, -2, 2);
    let b = random_vec(rng, m, -4, 4);
    let c = random_vec(rng, n, -3, 3);
    IPInstance::from_i64(&a, &b, &c, None).unwrap()
}

/// Brute force over a box, with unboundedness decided by feasibility plus
/// the LP ray test.
fn standard_form_oracle(inst: &IPInstance) -> SolveOutcome {
    let limit = match inst.n() {
        4 => 20,
        3 => 40,
        _ => 200,
    };
    match brute_force_solve(inst, &EnumerationBox::uniform(inst.n(), limit)).unwrap() {
        SolveOutcome::Optimal { .. } if lp_ray_exists(inst) => SolveOutcome::Unbounded,
        other => other,
    }
}

fn dp_vs_oracle() -> (Verdict, Verdict) {
    let start = Instant::now();
    let mut rng = Sampler::new(2);
    let (mut matched, mut within, mut certified) = (0, 0, 0);
    let mut tally = [0usize; 3];
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let inst = small_standard_instance(&mut rng);
        let want = standard_form_oracle(&inst);
        let report = solve_standard_form(&inst).unwrap();
        tally[match want {
            SolveOutcome::Infeasible => 0,
            SolveOutcome::Unbounded => 1,
            SolveOutcome::Optimal { .. } => 2,
        }] += 1;
        if same_outcome(&report.outcome, &want) {
            matched += 1;
        }
        if inst.certifies(&report.outcome) {
            certified += 1;
        }
        let bound = node_count_bound(inst.m(), inst.delta(), inst.b());
        if BigInt::from(report.stats.nodes_explored) <= bound {
            within += 1;
        }
        worst = worst.max(report.stats.nodes_explored as f64 / bound.to_f64().unwrap());
    }
    let elapsed = start.elapsed();
    (
        verdict(
            matched == 1000 && certified == 1000 && elapsed < Duration::from_secs(300),
            format!(
                "{matched}/1000 match brute force ({} infeasible, {} unbounded, {} optimal), {certified}/1000 certified, {:.1}s",
                tally[0],
                tally[1],
                tally[2],
                elapsed.as_secs_f64()
            ),
        ),
        verdict(
            within == 1000,
            format!("{within}/1000 within node bound, worst nodes/bound {worst:.3}"),
        ),
    )
}

// 4, 6 --------------------------------------------------------------------

fn bounded_instance(rng: &mut Sampler, mixed_sign_c: bool) -> IPInstance {
    let m = rng.range(1, 2) as usize;
    let n = rng.range(1, 4) as usize;
    let delta = rng.range(1, 2);
    let mut a = random_matrix(rng, m, n, -delta, delta);
    pin_delta(rng, &mut a, delta, true);
    let u = random_vec(rng, n, 0, 3);
    let x0: Vec<i64> = u.iter().map(|&u| rng.range(0, u)).collect();
    let b = mat_vec(&a, &x0);
    let c = if mixed_sign_c {
        random_vec(rng, n, -5, 5)
    } else {
        random_vec(rng, n, 0, 5)
    };
    IPInstance::from_i64(&a, &b, &c, Some(&u)).unwrap()
}

fn proximity_family() -> Vec<IPInstance> {
    let mut rng = Sampler::new(4);
    (0..300).map(|_| bounded_instance(&mut rng, false)).collect()
}

fn l1_distance(z: &[BigInt], x: &[Rational]) -> Rational {
    z.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (z, x)| acc + (Rational::from_integer(z.clone()) - x).abs())
}

fn proximity_bound(family: &[IPInstance]) -> Verdict {
    let mut ok = 0;
    let mut worst = 0.0f64;
    for inst in family {
        let LpOutcome::Optimal(vertex) = solve_lp(&lp_relaxation(inst).unwrap()) else {
            continue;
        };
        let optima = enumerate_optima(inst, &EnumerationBox::from_upper(inst).unwrap()).unwrap();
        let Some(closest) = optima.iter().map(|z| l1_distance(z, &vertex.point)).min() else {
            continue;
        };
        let bound = Rational::from_integer(l1_bound(inst.m(), inst.delta()));
        if closest <= bound {
            ok += 1;
        }
        worst = worst.max((closest / bound).to_f64().unwrap());
    }
    verdict(ok == 300, format!("{ok}/300 within m(2m*delta+1)^m, empirical max/bound {worst:.4}"))
}

fn bounded_solver(family: &[IPInstance]) -> Verdict {
    let mut rng = Sampler::new(6);
    let extra: Vec<IPInstance> = (0..200).map(|_| bounded_instance(&mut rng, true)).collect();
    let total = family.len() + extra.len();
    let mut ok = 0;
    for inst in family.iter().chain(&extra) {
        let want = brute_force_solve(inst, &EnumerationBox::from_upper(inst).unwrap()).unwrap();
        let got = solve_bounded(inst).unwrap().outcome;
        if same_outcome(&got, &want) && inst.certifies(&got) {
            ok += 1;
        }
    }
    verdict(ok == total, format!("{ok}/{total} match brute force"))
}

// 5 -----------------------------------------------------------------------

fn knapsack_box(weights: &[i64], beta: i64) -> EnumerationBox {
    EnumerationBox::new(weights.iter().map(|&a| (beta / a) as u64).collect())
}

fn knapsack_gap() -> Verdict {
    let mut rng = Sampler::new(5);
    let mut ok = 0;
    let mut solver_ok = 0;
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 300 {
        let n = rng.range(1, 4) as usize;
        let a = random_vec(&mut rng, n, 1, 6);
        let c = random_vec(&mut rng, n, 0, 9);
        let beta = rng.range(1, 40);
        let inst = IPInstance::from_i64(std::slice::from_ref(&a), &[beta], &c, None).unwrap();
        let SolveOutcome::Optimal { value, .. } = brute_force_solve(&inst, &knapsack_box(&a, beta)).unwrap() else {
            continue;
        };
        done += 1;
        // LP optimum: all capacity on the best profit/weight ratio.
        let lp = a
            .iter()
            .zip(&c)
            .map(|(&a, &c)| Rational::new(BigInt::from(c * beta), BigInt::from(a)))
            .max()
            .unwrap();
        let gap = lp - Rational::from_integer(value.clone());
        let c_inf = c.iter().map(|v| v.abs()).max().unwrap();
        let delta_a = *a.iter().max().unwrap();
        let bound = q(2 * c_inf * delta_a);
        if gap <= bound {
            ok += 1;
        }
        if !bound.is_zero() {
            worst = worst.max((gap / bound).to_f64().unwrap());
        }
        let got = solve_unbounded_knapsack(&KnapsackInstance::from_i64(&a, &c, beta, None).unwrap()).unwrap();
        if got.outcome.value() == Some(&value) {
            solver_ok += 1;
        }
    }
    verdict(
        ok == 300,
        format!("{ok}/300 gaps within 2*|c|inf*delta_a, worst gap/bound {worst:.3}; solver agreed {solver_ok}/300"),
    )
}

// 7 -----------------------------------------------------------------------

fn binary_exactness() -> Verdict {
    let (mut ok, mut total) = (0, 0);
    for l in 0..=128i64 {
        for u in 0..=128 - l {
            total += 1;
            let e = binary_expand(&l.into(), &u.into());
            let shift = e.shift.to_i64().unwrap();
            let coeffs: Vec<i64> = e.coefficients.iter().map(|c| c.to_i64().unwrap()).collect();
            let sums: BTreeSet<i64> = (0u32..1 << coeffs.len())
                .map(|mask| {
                    shift
                        + coeffs
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| mask >> k & 1 == 1)
                            .map(|(_, c)| c)
                            .sum::<i64>()
                })
                .collect();
            if sums == (-l..=u).collect::<BTreeSet<_>>() {
                ok += 1;
            }
        }
    }
    verdict(ok == total, format!("{ok}/{total} pairs reach exactly [-l, u]"))
}

// 8 -----------------------------------------------------------------------

fn knapsack_grid() -> (usize, usize) {
    let mut rng = Sampler::new(8);
    let (mut ok, mut total) = (0, 0);
    for n in 1..=3u32 {
        for code in 0..6usize.pow(n) {
            let a: Vec<i64> = (0..n).map(|k| (code / 6usize.pow(k) % 6) as i64 + 1).collect();
            for beta in 1..=40 {
                let c = random_vec(&mut rng, n as usize, -3, 9);
                let inst = IPInstance::from_i64(std::slice::from_ref(&a), &[beta], &c, None).unwrap();
                let want = brute_force_solve(&inst, &knapsack_box(&a, beta)).unwrap();
                let got = solve_unbounded_knapsack(&KnapsackInstance::from_i64(&a, &c, beta, None).unwrap())
                    .unwrap()
                    .outcome;
                total += 1;
                if same_outcome(&got, &want) && inst.certifies(&got) {
                    ok += 1;
                }
            }
        }
    }
    (ok, total)
}

fn median_solve_time(n: usize, seed: u64) -> Duration {
    let mut rng = Sampler::new(seed);
    let mut a = random_vec(&mut rng, n, 1, 10);
    a[rng.index(n)] = 10;
    let c = random_vec(&mut rng, n, 1, 1000);
    let inst = KnapsackInstance::from_i64(&a, &c, 1_000_000, None).unwrap();
    // untimed warm-up
    solve_unbounded_knapsack(&inst).unwrap();
    let mut times: Vec<Duration> = (0..5)
        .map(|_| {
            let start = Instant::now();
            let report = solve_unbounded_knapsack(&inst).unwrap();
            let t = start.elapsed();
            assert!(report.outcome.value().is_some());
            t
        })
        .collect();
    times.sort();
    times[2]
}

fn knapsack_correctness_and_scaling() -> Verdict {
    let (ok, total) = knapsack_grid();
    let t1 = median_solve_time(1000, 81);
    let t2 = median_solve_time(2000, 82);
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    verdict(
        ok == total && ratio <= 2.5,
        format!(
            "{ok}/{total} grid instances match brute force; median n=1000 {:.2}ms, n=2000 {:.2}ms, ratio {ratio:.2}",
            t1.as_secs_f64() * 1e3,
            t2.as_secs_f64() * 1e3
        ),
    )
}

// 9 -----------------------------------------------------------------------

fn small_rhs_regime() -> Verdict {
    let mut rng = Sampler::new(9);
    let (mut ok, mut agree) = (0, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.range(1, 2) as usize;
        let n = rng.range(1, 4) as usize;
        let delta = rng.range(1, 3);
        let mut a = random_matrix(&mut rng, m, n, 0, delta);
        pin_delta(&mut rng, &mut a, delta, false);
        let b = random_vec(&mut rng, m, 0, delta);
        let c = random_vec(&mut rng, n, -3, 3);
        let inst = IPInstance::from_i64(&a, &b, &c, None).unwrap();
        let report = solve_standard_form(&inst).unwrap();
        let bound = (4 * m as i64 * delta + 1).pow(m as u32) as usize;
        if report.stats.nodes_explored <= bound {
            ok += 1;
        }
        worst = worst.max(report.stats.nodes_explored as f64 / bound as f64);
        if same_outcome(&solve_acyclic(&inst).unwrap().outcome, &report.outcome) {
            agree += 1;
        }
    }
    verdict(
        ok == 100 && agree == 100,
        format!("{ok}/100 within (4m*delta+1)^m, worst nodes/bound {worst:.3}; acyclic pass agreed {agree}/100"),
    )
}

// 10 ----------------------------------------------------------------------

fn lattice_points(upper: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &u in upper {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=u).map(move |v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn lp_exactness() -> Verdict {
    let mut rng = Sampler::new(10);
    let mut ok = 0;
    let mut tally = [0usize; 2];
    for _ in 0..1000 {
        let rows = rng.range(1, 3) as usize;
        let cols = rng.range(1, 5) as usize;
        let a = random_matrix(&mut rng, rows, cols, -3, 3);
        let upper = random_vec(&mut rng, cols, 0, 4);
        let rhs = if rng.range(0, 3) == 0 {
            random_vec(&mut rng, rows, -6, 6)
        } else {
            let x0: Vec<i64> = upper.iter().map(|&u| rng.range(0, u)).collect();
            mat_vec(&a, &x0)
        };
        let obj = random_vec(&mut rng, cols, -4, 4);
        let p = LpProblem::nonnegative(
            a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
            rhs.iter().map(|&v| q(v)).collect(),
            obj.iter().map(|&v| q(v)).collect(),
            upper.iter().map(|&u| Some(q(u))).collect(),
        )
        .unwrap();
        let lattice: Vec<Vec<i64>> = lattice_points(&upper)
            .into_iter()
            .filter(|x| mat_vec(&a, x) == rhs)
            .collect();
        let good = match solve_lp(&p) {
            LpOutcome::Optimal(v) => {
                tally[0] += 1;
                let x = &v.point;
                let rows_hold = a.iter().zip(&rhs).all(|(row, &r)| {
                    row.iter().zip(x).fold(Rational::zero(), |acc, (&a, x)| acc + q(a) * x) == q(r)
                });
                let in_box = x.iter().zip(&upper).all(|(x, &u)| !x.is_negative() && *x <= q(u));
                let value = obj.iter().zip(x).fold(Rational::zero(), |acc, (&c, x)| acc + q(c) * x);
                let dominates = lattice
                    .iter()
                    .all(|z| value >= q(obj.iter().zip(z).map(|(c, z)| c * z).sum()));
                rows_hold && in_box && value == v.objective_value && dominates && v.interior_count(&p) <= rows
            }
            LpOutcome::Infeasible => {
                tally[1] += 1;
                lattice.is_empty()
            }
            LpOutcome::Unbounded => false,
        };
        if good {
            ok += 1;
        }
    }
    verdict(
        ok == 1000,
        format!("{ok}/1000 exact and dominant ({} optimal, {} infeasible)", tally[0], tally[1]),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    let mut run = |k: usize, name: &'static str, v: Verdict| {
        println!(
            "{} criterion {k:>2} ({name}): {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((k, name, v));
    };
    run(1, "steinitz guarantee", steinitz_guarantee());
    let (dp, nodes) = dp_vs_oracle();
    run(2, "dp vs oracle", dp);
    run(3, "node-count bound", nodes);
    let family = proximity_family();
    run(4, "proximity bound", proximity_bound(&family));
    run(5, "knapsack integrality gap", knapsack_gap());
    run(6, "bounded solver vs oracle", bounded_solver(&family));
    run(7, "binary expansion", binary_exactness());
    run(8, "knapsack correctness and scaling", knapsack_correctness_and_scaling());
    run(9, "small right-hand side", small_rhs_regime());
    run(10, "lp exactness", lp_exactness());
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
