//! Verification drivers: the exact identity suite, numeric sums of `1/𝕋`
//! over trace fibers on both components, the Jacobian cross-check, and a
//! residue-theorem self-test of the summation machinery itself.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::charvariety::{
    boundary_checks, boundary_functions_unchecked, build_representation, BundleParam, Component,
};
use crate::chebyshev::cheb;
use crate::error::{Error, Result};
use crate::exactalg::field::{gauss_from_cnum, gauss_from_rat, is_finite, rat};
use crate::exactalg::roots::{eval, eval_with_derivative, refine_simultaneous};
use crate::exactalg::{find_roots_c, CNum, GaussRat, Rat, RatFunc, UniPoly};
use crate::monodromy::{apply_word, bundle_torsion_polynomial, closed_form_lr, torsion_polynomial};
use crate::monodromy::{MonodromyWord, TraceTriple};
use crate::torsion::{
    extra_torsion, extra_trace, lambda_derivative_identity, slope_checks, slope_fns_unchecked,
    torsion_gamma_jacobian, Parity, SlopeFns, SlopeParam,
};

/// Slopes exercised by default.
pub const DEFAULT_SLOPES: [(i64, i64); 6] = [(1, 0), (0, 1), (2, 1), (3, 1), (5, 1), (7, 2)];
/// Minimum distance between fiber roots, and between `c` and `{±2, 0}`.
pub const MIN_SEPARATION: f64 = 1e-4;
/// Draws of `c` allowed per requested sample before giving up.
pub const MAX_REDRAWS: usize = 32;
/// Generic `c` are rounded to this grid so they are exact dyadic rationals.
pub const C_GRID: f64 = 4096.0;
/// Tolerance for the group relation of reconstructed representations.
pub const REPRESENTATION_TOL: f64 = 1e-6;

/// Traces where case-(2) characters sit; never generic.
const FIBERED_TRACE_VALUES: [f64; 3] = [2.0, -2.0, 0.0];

pub fn ser_cnum<S: Serializer>(c: &CNum, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

pub fn ser_opt_cnum<S: Serializer>(c: &Option<CNum>, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.map(|c| [c.re, c.im]).serialize(s)
}

/// Screen results for a fiber polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Genericity {
    pub squarefree: bool,
    pub const_nonzero: bool,
    pub min_separation: f64,
}

/// One named pass/fail entry of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    /// A check whose failure detail is only rendered when needed.
    pub fn compare(name: impl Into<String>, passed: bool, detail: impl FnOnce() -> String) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: if passed { String::new() } else { detail() },
        }
    }

    pub fn threshold(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let passed = value < bound;
        Check {
            name: name.into(),
            passed,
            detail: format!("{value:.3e} {} {bound:.0e}", if passed { "<" } else { ">=" }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberQuery {
    pub bp: BundleParam,
    pub slope: SlopeParam,
    pub c: CNum,
    pub tol: f64,
    pub seed: u64,
}

/// One root of a trace fiber.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootRow {
    #[serde(serialize_with = "ser_cnum")]
    pub y: CNum,
    #[serde(serialize_with = "ser_cnum")]
    pub torsion: CNum,
    #[serde(serialize_with = "ser_cnum")]
    pub inv_torsion: CNum,
    pub component: Component,
    #[serde(serialize_with = "ser_opt_cnum", skip_serializing_if = "Option::is_none")]
    pub m: Option<CNum>,
    /// Number of characters this row stands for in the sum.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberReport {
    pub component: Component,
    #[serde(serialize_with = "ser_cnum")]
    pub c: CNum,
    pub fiber_degree: usize,
    pub roots: Vec<RootRow>,
    /// `Σ weight · 1/𝕋` over the characters of the fiber.
    #[serde(serialize_with = "ser_cnum")]
    pub sum: CNum,
    pub max_inv_torsion: f64,
    /// `|sum| / max |1/𝕋|`.
    pub normalized_residual: f64,
    pub genericity: Genericity,
}

fn finish_report(component: Component, c: CNum, fiber_degree: usize, roots: Vec<RootRow>, genericity: Genericity) -> FiberReport {
    let sum: CNum = roots.iter().map(|r| r.inv_torsion * r.weight).sum();
    let max_inv = roots.iter().map(|r| r.inv_torsion.norm()).fold(0.0, f64::max);
    FiberReport {
        component,
        c,
        fiber_degree,
        roots,
        sum,
        max_inv_torsion: max_inv,
        normalized_residual: sum.norm() / max_inv,
        genericity,
    }
}

fn non_generic(reason: impl Into<String>, diagnostics: Option<Genericity>) -> Error {
    Error::NonGeneric {
        reason: reason.into(),
        diagnostics,
    }
}

fn screen_c(c: CNum) -> Result<()> {
    if !is_finite(c) {
        return Err(Error::domain("trace value c must be finite"));
    }
    if let Some(t) = FIBERED_TRACE_VALUES
        .iter()
        .find(|&&t| (c - CNum::new(t, 0.0)).norm() <= MIN_SEPARATION)
    {
        return Err(non_generic(
            format!("c = {c} is at the fibered-case trace {t}"),
            None,
        ));
    }
    Ok(())
}

fn min_separation(roots: &[CNum]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// The cleared fiber polynomial `num − target · den` over `ℚ(i)`, where the
/// trace function is `num/den` and `target` is `c` (even `p`) or `c² − 2`
/// (odd `p`).
pub fn geometric_fiber_poly(sf: &SlopeFns, c: CNum) -> Result<UniPoly<GaussRat>> {
    let cg = gauss_from_cnum(c).ok_or_else(|| Error::domain("trace value c must be finite"))?;
    let target = match sf.parity {
        Parity::Even => cg,
        Parity::Odd => cg.clone() * cg - gauss_from_rat(rat(2)),
    };
    let lift = |p: &UniPoly| p.map_coeffs(|a| gauss_from_rat(a.clone()));
    let num = lift(sf.trace_fn.num());
    let den = lift(sf.trace_fn.den());
    Ok(&num - &den.scale(&target))
}

fn check_roots(roots: Vec<CNum>, degree: usize, mut diag: Genericity) -> Result<(Vec<CNum>, Genericity)> {
    if roots.len() != degree {
        return Err(Error::Consistency(format!(
            "found {} roots of a degree-{degree} fiber polynomial",
            roots.len()
        )));
    }
    diag.min_separation = min_separation(&roots);
    if !(diag.min_separation > MIN_SEPARATION) {
        return Err(non_generic(
            format!("fiber roots only {:.2e} apart", diag.min_separation),
            Some(diag),
        ));
    }
    Ok((roots, diag))
}

fn enumerate_roots(coeffs: &[CNum], tol: f64, diag: Genericity) -> Result<(Vec<CNum>, Genericity)> {
    check_roots(find_roots_c(coeffs, tol)?, coeffs.len() - 1, diag)
}

/// Simultaneous iteration on `(trace(y) − target)·den(y)` evaluated through
/// the recurrences. The expanded fiber polynomial only locates the roots;
/// clustered roots near `|y| = 2` need the unexpanded function to separate.
fn refine_roots(sf: &SlopeFns, target: CNum, roots: &mut [CNum]) {
    let den = sf.trace_fn.den().to_cnum_coeffs();
    let cleared = |y: CNum| {
        let e = sf.eval_at(y);
        let (d, dd) = eval_with_derivative(&den, y);
        let f = e.trace.val - target;
        (f * d, e.trace.der * d + f * dd)
    };
    refine_simultaneous(cleared, roots, 200);
}

/// `Σ 1/𝕋` over the geometric-component characters with
/// `tr ρ(μ^p λ^q) = c`.
///
/// Each root `y` of the cleared fiber polynomial carries the two characters
/// `ε = ±1`. For even `p` both lie in the fiber and share
/// `1/𝕋 = G/P'`. For odd `p` the fiber of `Q = c²` contains both and
/// exactly one of them has trace `c`, so the sum is half the `Q`-fiber sum,
/// one `2G/(Q − 2)'` per `y`.
pub fn fiber_sum_geometric_with(sf: &SlopeFns, c: CNum, tol: f64) -> Result<FiberReport> {
    if !sf.slope.is_primitive() {
        return Err(Error::domain(format!("slope {} is not primitive", sf.slope)));
    }
    screen_c(c)?;
    let f = geometric_fiber_poly(sf, c)?;
    let diag = Genericity {
        squarefree: f.is_squarefree()?,
        const_nonzero: !f.coeff(0).is_zero(),
        min_separation: f64::NAN,
    };
    if !diag.squarefree || !diag.const_nonzero {
        return Err(non_generic("fiber polynomial fails the screen", Some(diag)));
    }
    let target = match sf.parity {
        Parity::Even => c,
        Parity::Odd => c * c - 2.0,
    };
    let mut roots = find_roots_c(&f.to_cnum_coeffs(), tol)?;
    refine_roots(sf, target, &mut roots);
    let (roots, diag) = check_roots(roots, f.degree().unwrap_or(0), diag)?;
    let weight = match sf.parity {
        Parity::Even => 2.0,
        Parity::Odd => 1.0,
    };
    let rows = roots
        .iter()
        .map(|&y| {
            let inv = sf.inv_torsion_at(y)?;
            Ok(RootRow {
                y,
                torsion: inv.inv(),
                inv_torsion: inv,
                component: Component::Geometric,
                m: None,
                weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_report(Component::Geometric, c, roots.len(), rows, diag))
}

pub fn fiber_sum_geometric(q: &FiberQuery) -> Result<FiberReport> {
    let sf = crate::torsion::slope_fns(q.bp, q.slope)?;
    fiber_sum_geometric_with(&sf, q.c, q.tol)
}

/// `Σ 1/𝕋` over the extra-component characters with trace `c`. The
/// `m`-roots of `m^{2k} − c m^k + 1`, `k = |p − 4q|`, pair up as `m, 1/m`
/// and each pair is one character.
pub fn fiber_sum_extra(bp: BundleParam, slope: SlopeParam, c: CNum, tol: f64) -> Result<FiberReport> {
    if !bp.has_extra_component() {
        return Err(Error::domain(format!("M_{} has no extra component", bp.n)));
    }
    let k = (slope.p - 4 * slope.q).unsigned_abs() as usize;
    if k == 0 {
        return Err(Error::DegenerateSlope {
            p: slope.p,
            q: slope.q,
        });
    }
    screen_c(c)?;
    let cg = gauss_from_cnum(c).ok_or_else(|| Error::domain("trace value c must be finite"))?;
    let four = gauss_from_rat(rat(4));
    let diag = Genericity {
        squarefree: cg.clone() * cg != four,
        const_nonzero: true,
        min_separation: f64::NAN,
    };
    if !diag.squarefree {
        return Err(non_generic("c² = 4", Some(diag)));
    }
    let mut coeffs = vec![CNum::zero(); 2 * k + 1];
    coeffs[0] = CNum::new(1.0, 0.0);
    coeffs[k] = -c;
    coeffs[2 * k] = CNum::new(1.0, 0.0);
    let (roots, diag) = enumerate_roots(&coeffs, tol, diag)?;
    let rows = roots
        .iter()
        .map(|&m| {
            let t = extra_torsion(bp, slope, m)?.value;
            if t.norm() == 0.0 {
                return Err(Error::Vanishing("extra-component torsion".into()));
            }
            let tr = extra_trace(slope, m);
            if (tr - c).norm() > 1e-8 * (1.0 + c.norm()) {
                return Err(Error::Consistency(format!("extra root m = {m} has trace {tr}, not {c}")));
            }
            Ok(RootRow {
                y: CNum::zero(),
                torsion: t,
                inv_torsion: t.inv(),
                component: Component::Extra,
                m: Some(m),
                weight: 0.5,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_report(Component::Extra, c, roots.len(), rows, diag))
}

/// `−4 / (2 + (c² − 2) n/2)`, the extra-component sum for `p = 4q + 1`.
pub fn extra_closed_form(n: i64, c: CNum) -> CNum {
    -4.0 / (2.0 + (c * c - 2.0) * (n as f64 / 2.0))
}

/// Geometric and (when present) extra fibers over the same `c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinedFiber {
    pub geometric: FiberReport,
    pub extra: Option<FiberReport>,
    #[serde(serialize_with = "ser_cnum")]
    pub total: CNum,
    pub max_inv_torsion: f64,
    pub normalized_total: f64,
}

pub fn fiber_sum_all(sf: &SlopeFns, c: CNum, tol: f64) -> Result<CombinedFiber> {
    let geometric = fiber_sum_geometric_with(sf, c, tol)?;
    let extra = if sf.bp.has_extra_component() && sf.slope.p != 4 * sf.slope.q {
        Some(fiber_sum_extra(sf.bp, sf.slope, c, tol)?)
    } else {
        None
    };
    let total = geometric.sum + extra.as_ref().map_or(CNum::zero(), |e| e.sum);
    let max_inv = extra
        .as_ref()
        .map_or(geometric.max_inv_torsion, |e| e.max_inv_torsion.max(geometric.max_inv_torsion));
    Ok(CombinedFiber {
        geometric,
        extra,
        total,
        max_inv_torsion: max_inv,
        normalized_total: total.norm() / max_inv,
    })
}

/// Seeded stream of trace values, uniform on the annulus `1 ≤ |c| ≤ 3` and
/// rounded to a `2⁻¹²` grid.
#[derive(Clone, Debug)]
pub struct GenericDraws {
    rng: ChaCha8Rng,
}

impl GenericDraws {
    pub fn new(seed: u64) -> Self {
        GenericDraws {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_c(&mut self) -> CNum {
        let r = (1.0 + 8.0 * self.rng.random::<f64>()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.rng.random::<f64>();
        let c = CNum::from_polar(r, theta);
        CNum::new((c.re * C_GRID).round() / C_GRID, (c.im * C_GRID).round() / C_GRID)
    }

    /// Runs `attempt` on fresh draws until it stops reporting a non-generic
    /// input, at most [`MAX_REDRAWS`] times.
    pub fn until_generic<T>(&mut self, mut attempt: impl FnMut(CNum) -> Result<T>) -> Result<T> {
        let mut last = None;
        for _ in 0..MAX_REDRAWS {
            match attempt(self.next_c()) {
                Err(e @ Error::NonGeneric { .. }) => last = Some(e),
                other => return other,
            }
        }
        Err(match last {
            Some(Error::NonGeneric { reason, diagnostics }) => non_generic(
                format!("no generic c in {MAX_REDRAWS} draws (last: {reason})"),
                diagnostics,
            ),
            _ => non_generic("no generic c drawn", None),
        })
    }
}

/// `count` geometric fiber sums at seeded generic `c`.
pub fn generic_fiber_sums(sf: &SlopeFns, seed: u64, count: usize, tol: f64) -> Result<Vec<FiberReport>> {
    let mut draws = GenericDraws::new(seed);
    (0..count)
        .map(|_| draws.until_generic(|c| fiber_sum_geometric_with(sf, c, tol)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossRow {
    #[serde(serialize_with = "ser_cnum")]
    pub c: CNum,
    #[serde(serialize_with = "ser_cnum")]
    pub y: CNum,
    pub eps: i8,
    #[serde(serialize_with = "ser_cnum")]
    pub trace_derivative: CNum,
    #[serde(serialize_with = "ser_cnum")]
    pub jacobian: CNum,
    pub relative_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub rows: Vec<CrossRow>,
    pub skipped: Vec<String>,
    pub max_relative_deviation: f64,
}

fn cross_fiber(sf: &SlopeFns, c: CNum, tol: f64, want: usize, report: &mut CrossCheckReport) -> Result<()> {
    let fiber = fiber_sum_geometric_with(sf, c, tol)?;
    for row in &fiber.roots {
        for eps in [1i8, -1] {
            if report.rows.len() >= want {
                return Ok(());
            }
            let y = row.y;
            let built = build_representation(sf.bp, y, eps, 1, REPRESENTATION_TOL);
            let (point, rep) = match built {
                Ok(v) => v,
                Err(e) => {
                    report.skipped.push(format!("y = {y}, ε = {eps}: {e}"));
                    continue;
                }
            };
            let jac = match torsion_gamma_jacobian(sf.slope, &point, rep.fiber_traces()) {
                Ok(t) => t.value,
                Err(e @ Error::BranchPoint(_)) => {
                    report.skipped.push(format!("y = {y}, ε = {eps}: {e}"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let tr = sf.torsion_at(y)?.value;
            let dev = (jac - tr).norm() / tr.norm();
            report.max_relative_deviation = report.max_relative_deviation.max(dev);
            report.rows.push(CrossRow {
                c,
                y,
                eps,
                trace_derivative: tr,
                jacobian: jac,
                relative_deviation: dev,
            });
        }
    }
    Ok(())
}

/// Compares the trace-derivative torsion with `𝕋_λ` (from the fiber traces
/// of reconstructed matrices) times the curve-change factor, at up to
/// `samples` fiber points. With `c = None`, generic fibers are drawn from
/// `seed` until enough points are collected.
pub fn cross_check(sf: &SlopeFns, c: Option<CNum>, seed: u64, samples: usize, tol: f64) -> Result<CrossCheckReport> {
    let mut report = CrossCheckReport {
        rows: Vec::new(),
        skipped: Vec::new(),
        max_relative_deviation: 0.0,
    };
    match c {
        Some(c) => cross_fiber(sf, c, tol, samples, &mut report)?,
        None => {
            let mut draws = GenericDraws::new(seed);
            let mut fibers = 0;
            while report.rows.len() < samples && fibers < MAX_REDRAWS {
                draws.until_generic(|c| cross_fiber(sf, c, tol, samples, &mut report))?;
                fibers += 1;
            }
        }
    }
    Ok(report)
}

/// `Σ_{f(r)=0} g(r)/f'(r)` and `max |g(r)/f'(r)|`.
pub fn residue_sum(f: &UniPoly, g: &UniPoly, tol: f64) -> Result<(CNum, f64)> {
    let fc = f.to_cnum_coeffs();
    let gc = g.to_cnum_coeffs();
    let roots = find_roots_c(&fc, tol)?;
    let mut sum = CNum::zero();
    let mut scale: f64 = 0.0;
    for r in roots {
        let (_, df) = eval_with_derivative(&fc, r);
        let term = eval(&gc, r) / df;
        sum += term;
        scale = scale.max(term.norm());
    }
    Ok((sum, scale))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport {
    pub seed: u64,
    pub trials: usize,
    pub positive_failures: usize,
    pub negative_failures: usize,
    pub max_positive_residual: f64,
    pub max_negative_residual: f64,
    pub checks: Vec<Check>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.positive_failures == 0 && self.negative_failures == 0
    }
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> UniPoly {
    let mut coeffs: Vec<i64> = (0..=degree).map(|_| rng.random_range(-9..=9)).collect();
    while coeffs[degree] == 0 {
        coeffs[degree] = rng.random_range(-9..=9);
    }
    UniPoly::from_ints(&coeffs)
}

/// Random trials of the residue identity `Σ g/f' = 0` for
/// `deg g ≤ deg f − 2`, with the negative control `deg g = deg f − 1` where
/// the sum is `lc(g)/lc(f)`.
pub fn jacobi_selftest(seed: u64, trials: usize) -> Result<JacobiReport> {
    if trials == 0 {
        return Err(Error::domain("jacobi self-test needs at least one trial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = JacobiReport {
        seed,
        trials,
        positive_failures: 0,
        negative_failures: 0,
        max_positive_residual: 0.0,
        max_negative_residual: 0.0,
        checks: Vec::new(),
    };
    const BOUND: f64 = 1e-9;
    for _ in 0..trials {
        let d = rng.random_range(2..=25usize);
        let f = loop {
            let f = random_poly(&mut rng, d);
            if !f.coeff(0).is_zero() && f.is_squarefree()? {
                break f;
            }
        };
        let dg = rng.random_range(0..=d - 2);
        let g = random_poly(&mut rng, dg);
        let (sum, scale) = residue_sum(&f, &g, 1e-12)?;
        let res = sum.norm() / scale;
        report.max_positive_residual = report.max_positive_residual.max(res);
        if !(res < BOUND) {
            report.positive_failures += 1;
        }

        let g = random_poly(&mut rng, d - 1);
        let (sum, scale) = residue_sum(&f, &g, 1e-12)?;
        let lead = |p: &UniPoly| p.leading().cloned().unwrap_or_else(Rat::zero);
        let expected = RatFunc::constant(lead(&g) / lead(&f)).num().to_cnum_coeffs()[0];
        let res = (sum - expected).norm() / scale;
        report.max_negative_residual = report.max_negative_residual.max(res);
        if !(res < BOUND) || expected.norm() == 0.0 {
            report.negative_failures += 1;
        }
    }
    report.checks = vec![
        Check::compare("positive_control", report.positive_failures == 0, || {
            format!("{} of {trials} trials failed", report.positive_failures)
        }),
        Check::compare("negative_control", report.negative_failures == 0, || {
            format!("{} of {trials} trials failed", report.negative_failures)
        }),
    ];
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: i64,
    pub slopes: Vec<SlopeParam>,
    pub checks: Vec<Check>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Closed form of `L R^k` against the iterated action, `k ∈ [−10, 10]`.
pub fn closed_form_check() -> Check {
    let bad: Vec<i64> = (-10..=10)
        .filter(|&k| apply_word(&MonodromyWord::lr(k), &TraceTriple::identity()) != closed_form_lr(k))
        .collect();
    Check::compare("lr_closed_form", bad.is_empty(), || format!("mismatch at k = {bad:?}"))
}

/// `(y² − 4) f_k' = (k − 1) f_{k+1} − (k + 1) f_{k−1}` for `k ∈ [−12, 12]`.
pub fn cheb_derivative_check() -> Check {
    let quad = UniPoly::from_ints(&[-4, 0, 1]);
    let bad: Vec<i64> = (-12..=12)
        .filter(|&k| {
            let lhs = &quad * &cheb(k).derivative();
            let rhs = &cheb(k + 1).scale(&rat(k - 1)) - &cheb(k - 1).scale(&rat(k + 1));
            lhs != rhs
        })
        .collect();
    Check::compare("cheb_derivative_divisibility", bad.is_empty(), || {
        format!("mismatch at k = {bad:?}")
    })
}

/// Every exact identity for `M_n` and the given slopes.
pub fn identity_suite(bp: BundleParam, slopes: &[SlopeParam]) -> Result<IdentityReport> {
    bp.require_hyperbolic()?;
    let bf = boundary_functions_unchecked(bp)?;
    let mut checks = boundary_checks(bp, &bf)?;

    let (lhs, rhs) = lambda_derivative_identity(bp, &bf)?;
    checks.push(Check::compare("lambda_derivative_identity", lhs == rhs, || {
        (&lhs - &rhs).to_string()
    }));
    let tp = torsion_polynomial(&MonodromyWord::bundle(bp.n));
    let want = bundle_torsion_polynomial(bp.n);
    checks.push(Check::compare("bundle_torsion_polynomial", tp == want, || {
        format!("{}", &tp - &want)
    }));
    checks.push(closed_form_check());
    checks.push(cheb_derivative_check());

    for &slope in slopes {
        let sf = slope_fns_unchecked(bp, slope, bf.clone())?;
        for mut c in slope_checks(&sf) {
            c.name = format!("{}[{},{}]", c.name, slope.p, slope.q);
            checks.push(c);
        }
    }
    Ok(IdentityReport {
        n: bp.n,
        slopes: slopes.to_vec(),
        checks,
    })
}

pub fn default_slopes() -> Vec<SlopeParam> {
    DEFAULT_SLOPES
        .iter()
        .map(|&(p, q)| SlopeParam::new(p, q).expect("default slopes are primitive"))
        .collect()
}
