//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Run with `cargo test --release -p optb-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as CNum;
use rayon::prelude::*;

use optb_core::charvariety::{build_representation, BundleParam, Mat2};
use optb_core::chebyshev::cheb;
use optb_core::exactalg::field::rat;
use optb_core::exactalg::roots::DEFAULT_TOL;
use optb_core::exactalg::{TriPoly, UniPoly};
use optb_core::monodromy::{torsion_polynomial, MonodromyWord};
use optb_core::torsion::{extra_torsion, slope_fns, torsion_lambda, SlopeParam};
use optb_core::verifier::{
    cross_check, default_slopes, extra_closed_form, fiber_sum_all, generic_fiber_sums, identity_suite,
    jacobi_selftest, GenericDraws,
};
use optb_core::Error;

const NS: [i64; 12] = [3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8];

struct Outcome {
    passed: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new(summary: String, failures: Vec<String>) -> Self {
        Outcome {
            passed: failures.is_empty(),
            summary,
            failures,
        }
    }
}

fn grid() -> Vec<(i64, SlopeParam)> {
    NS.iter().flat_map(|&n| default_slopes().into_iter().map(move |s| (n, s))).collect()
}

fn cell_seed(n: i64, s: SlopeParam) -> u64 {
    ((n + 100) * 10_000 + (s.p + 50) * 100 + s.q) as u64
}

fn identities() -> Outcome {
    let slopes = default_slopes();
    let reports: Vec<_> = NS.par_iter().map(|&n| (n, identity_suite(BundleParam::new(n), &slopes))).collect();
    let mut failures = Vec::new();
    let mut total = 0;
    for (n, rep) in reports {
        match rep {
            Ok(rep) => {
                total += rep.checks.len();
                failures.extend(
                    rep.checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| format!("n={n} {}: {}", c.name, c.detail)),
                );
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    Outcome::new(format!("{total} exact checks over 12 bundles"), failures)
}

fn vanishing() -> Outcome {
    let cells: Vec<_> = grid()
        .into_par_iter()
        .map(|(n, s)| {
            let worst = slope_fns(BundleParam::new(n), s)
                .and_then(|sf| generic_fiber_sums(&sf, cell_seed(n, s), 20, DEFAULT_TOL))
                .map(|fibers| {
                    fibers
                        .iter()
                        .map(|f| f.normalized_residual)
                        .fold(0.0, f64::max)
                });
            (n, s, worst)
        })
        .collect();
    let mut failures = Vec::new();
    let mut max_ok = 0.0f64;
    for (n, s, worst) in cells {
        match worst {
            Ok(w) if w < 1e-8 => max_ok = max_ok.max(w),
            Ok(w) => failures.push(format!("n={n} {s}: normalized residual {w:.3e}")),
            Err(e) => failures.push(format!("n={n} {s}: {e}")),
        }
    }
    Outcome::new(
        format!("72 cells x 20 fibers, worst passing cell {max_ok:.2e}"),
        failures,
    )
}

fn counterexample() -> Outcome {
    let jobs: Vec<(i64, i64)> = [6, 10, -6].iter().flat_map(|&n| (0..=2).map(move |q| (n, q))).collect();
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(n, q)| {
            let slope = SlopeParam::new(4 * q + 1, q).unwrap();
            let run = || -> Result<Vec<(CNum, f64, f64)>, Error> {
                let sf = slope_fns(BundleParam::new(n), slope)?;
                let mut draws = GenericDraws::new(cell_seed(n, slope));
                (0..10)
                    .map(|_| {
                        let all = draws.until_generic(|c| fiber_sum_all(&sf, c, DEFAULT_TOL))?;
                        let extra = all.extra.as_ref().expect("extra component present");
                        let want = extra_closed_form(n, extra.c);
                        let dev = (extra.sum - want).norm() / want.norm();
                        Ok((extra.c, dev, all.total.norm() / all.max_inv_torsion))
                    })
                    .collect()
            };
            (n, slope, run())
        })
        .collect();
    let mut failures = Vec::new();
    let (mut worst_dev, mut smallest_total) = (0.0f64, f64::INFINITY);
    for (n, slope, rows) in results {
        match rows {
            Ok(rows) => {
                for (c, dev, total) in rows {
                    worst_dev = worst_dev.max(dev);
                    smallest_total = smallest_total.min(total);
                    if !(dev < 1e-10) {
                        failures.push(format!("n={n} {slope} c={c:.4}: closed form off by {dev:.2e}"));
                    }
                    if !(total > 1e-3) {
                        failures.push(format!("n={n} {slope} c={c:.4}: |total|/max|1/T| = {total:.2e}"));
                    }
                }
            }
            Err(e) => failures.push(format!("n={n} {slope}: {e}")),
        }
    }
    Outcome::new(
        format!("closed form worst {worst_dev:.2e}, smallest |total|/max {smallest_total:.2e}"),
        failures,
    )
}

fn cross_pathway() -> Outcome {
    let cells: Vec<_> = grid()
        .into_par_iter()
        .map(|(n, s)| {
            let rep = slope_fns(BundleParam::new(n), s)
                .and_then(|sf| cross_check(&sf, None, cell_seed(n, s), 10, DEFAULT_TOL));
            (n, s, rep)
        })
        .collect();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (n, s, rep) in cells {
        match rep {
            Ok(rep) => {
                worst = worst.max(rep.max_relative_deviation);
                if rep.rows.len() < 10 {
                    failures.push(format!("n={n} {s}: only {} points ({:?})", rep.rows.len(), rep.skipped));
                }
                if !(rep.max_relative_deviation < 1e-8) {
                    failures.push(format!("n={n} {s}: deviation {:.3e}", rep.max_relative_deviation));
                }
            }
            Err(e) => failures.push(format!("n={n} {s}: {e}")),
        }
    }
    Outcome::new(format!("72 cells x 10 points, worst deviation {worst:.2e}"), failures)
}

/// `3 + f_{n+1}(x₃) + x₂ f_n'(x₃) − x₁ f_{n+1}'(x₃)` assembled from the recurrence.
fn displayed_torsion_polynomial(n: i64) -> TriPoly {
    let at_x3 = |p: &UniPoly| TriPoly::from_unipoly(p, 2);
    let (x1, x2) = (TriPoly::var(0), TriPoly::var(1));
    let sum = &TriPoly::constant(rat(3)) + &at_x3(&cheb(n + 1));
    let sum = &sum + &(&x2 * &at_x3(&cheb(n).derivative()));
    &sum - &(&x1 * &at_x3(&cheb(n + 1).derivative()))
}

fn point_values() -> Outcome {
    let mut failures = Vec::new();
    match torsion_lambda(BundleParam::new(4)).and_then(|t| t.eval_c(CNum::new(0.0, 0.0))) {
        Ok(v) if v == CNum::new(4.0, 0.0) => {}
        other => failures.push(format!("T_lambda(M_4, y=0) = {other:?}, want 4")),
    }
    match extra_torsion(BundleParam::new(6), SlopeParam::new(1, 0).unwrap(), CNum::i()) {
        Ok(t) if (t.value - 1.0).norm() < 1e-12 => {}
        other => failures.push(format!("extra T(n=6, (1,0), m=i) = {other:?}, want 1")),
    }
    for n in -8..=8 {
        if torsion_polynomial(&MonodromyWord::bundle(n)) != displayed_torsion_polynomial(n) {
            failures.push(format!("torsion polynomial of L R^-(n+2) differs at n={n}"));
        }
    }
    Outcome::new("T_lambda(0)=4, extra T(i)=1, 17 torsion polynomials".into(), failures)
}

fn jacobi() -> Outcome {
    match jacobi_selftest(20_251_016, 200) {
        Ok(rep) => {
            let failures = rep
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            Outcome::new(
                format!(
                    "200 trials, positive residual {:.2e}, negative control deviation {:.2e}",
                    rep.max_positive_residual, rep.max_negative_residual
                ),
                failures,
            )
        }
        Err(e) => Outcome::new("no report".into(), vec![e.to_string()]),
    }
}

fn relative(lhs: Mat2, rhs: Mat2) -> f64 {
    (lhs - rhs).max_norm() / lhs.max_norm().max(1.0)
}

fn reconstruction() -> Outcome {
    let slope = SlopeParam::new(1, 0).unwrap();
    let per_n: Vec<_> = NS
        .par_iter()
        .map(|&n| {
            let bp = BundleParam::new(n);
            let mut worst = 0.0f64;
            let mut failures = Vec::new();
            let mut built = 0;
            let sf = match slope_fns(bp, slope) {
                Ok(sf) => sf,
                Err(e) => return (n, 0, worst, vec![e.to_string()]),
            };
            let mut seed = 7;
            while built < 50 && seed < 40 {
                let fibers = match generic_fiber_sums(&sf, cell_seed(n, slope) + seed, 1, DEFAULT_TOL) {
                    Ok(f) => f,
                    Err(e) => return (n, built, worst, vec![e.to_string()]),
                };
                seed += 1;
                for row in &fibers[0].roots {
                    for eps in [1i8, -1] {
                        if built == 50 {
                            break;
                        }
                        match build_representation(bp, row.y, eps, 1, 1e-6) {
                            Ok((_, rep)) => {
                                let (a, b, mu) = (rep.alpha(), rep.beta, rep.mu);
                                let lam = rep.lambda();
                                let relation = relative(b.pow(-n), a.inverse() * b * a * a * b * a.inverse());
                                let commutator = relative(mu * lam, lam * mu);
                                worst = worst.max(relation).max(commutator);
                                if !(relation < 1e-6 && commutator < 1e-6) {
                                    failures.push(format!(
                                        "y={:.4} eps={eps}: relation {relation:.2e}, commutator {commutator:.2e}",
                                        row.y
                                    ));
                                }
                                built += 1;
                            }
                            Err(e @ Error::Reconstruction { .. }) => {
                                failures.push(format!("y={:.4} eps={eps}: {e}", row.y));
                                built += 1;
                            }
                            Err(_) => {}
                        }
                    }
                }
            }
            if built < 50 {
                failures.push(format!("only {built} points reconstructed"));
            }
            (n, built, worst, failures)
        })
        .collect();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (n, _, w, f) in per_n {
        worst = worst.max(w);
        failures.extend(f.into_iter().map(|f| format!("n={n} {f}")));
    }
    Outcome::new(format!("50 points x 12 bundles, worst residual {worst:.2e}"), failures)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("exact identity suite", identities),
        ("vanishing on the geometric component", vanishing),
        ("extra-component counterexample", counterexample),
        ("cross-pathway torsion", cross_pathway),
        ("point values", point_values),
        ("Jacobi residue self-test", jacobi),
        ("representation reconstruction", reconstruction),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        all &= out.passed;
        println!(
            "criterion {}: {} {name}: {} ({:.1}s)",
            i + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.summary,
            start.elapsed().as_secs_f64()
        );
        for f in out.failures.iter().take(8) {
            println!("    {f}");
        }
        if out.failures.len() > 8 {
            println!("    ... {} more", out.failures.len() - 8);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
