//! Simultaneous-iteration complex root finding.
//!
//! Aberth–Ehrlich iteration started from points on circles read off the
//! Newton polygon of `log |a_i|`, restarted from seeded random perturbations
//! when it stalls, followed by one Newton polishing pass. Results are
//! deterministic for a given coefficient vector.

use std::f64::consts::PI;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{is_finite, CNum, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 600;
const MAX_RESTARTS: usize = 6;
const RESTART_SEED: u64 = 0x005e_ed0f_a6e7;

/// Tolerance used when callers have no specific requirement.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Horner evaluation of `p` and `p'` at `z`.
pub fn eval_with_derivative(coeffs: &[CNum], z: CNum) -> (CNum, CNum) {
    let mut p = CNum::zero();
    let mut dp = CNum::zero();
    for a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

pub fn eval(coeffs: &[CNum], z: CNum) -> CNum {
    coeffs.iter().rev().fold(CNum::zero(), |acc, a| acc * z + a)
}

/// `Σ |a_i| |z|^i`, the magnitude scale against which `|p(z)|` is judged.
pub fn magnitude_scale(coeffs: &[CNum], z: CNum) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

/// All complex roots of an exact rational polynomial, with multiplicity.
pub fn find_roots(f: &UniPoly<Rat>, tol: f64) -> Result<Vec<CNum>> {
    find_roots_c(&f.to_cnum_coeffs(), tol)
}

/// All complex roots of `Σ coeffs[i] z^i`, with multiplicity. Every
/// returned root satisfies `|p(r)| ≤ tol · Σ|a_i||r|^i`.
pub fn find_roots_c(coeffs: &[CNum], tol: f64) -> Result<Vec<CNum>> {
    if !(tol > 0.0) {
        return Err(Error::domain("root tolerance must be positive"));
    }
    let mut coeffs: Vec<CNum> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.iter().any(|c| !is_finite(*c)) {
        return Err(Error::domain("non-finite polynomial coefficient"));
    }
    if coeffs.len() < 2 {
        return Err(Error::domain("root finding needs degree at least 1"));
    }
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![CNum::zero(); zeros];
    let reduced = &coeffs[zeros..];
    if reduced.len() > 1 {
        roots.extend(aberth(reduced, tol)?);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn aberth(coeffs: &[CNum], tol: f64) -> Result<Vec<CNum>> {
    let degree = coeffs.len() - 1;
    if degree == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let deriv: Vec<CNum> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * i as f64)
        .collect();

    let start = initial_guesses(coeffs);
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut total_iterations = 0;
    let mut last_correction = f64::INFINITY;
    for restart in 0..=MAX_RESTARTS {
        let mut z = start.clone();
        if restart > 0 {
            for zi in z.iter_mut() {
                let scale = zi.norm().max(1e-3);
                let angle = rng.random::<f64>() * 2.0 * PI;
                let radius = 0.1 * scale * (0.5 + rng.random::<f64>());
                *zi += CNum::from_polar(radius, angle);
            }
        }
        let (converged, iters, correction) = iterate(coeffs, &deriv, &mut z);
        total_iterations += iters;
        last_correction = correction;
        if converged {
            polish(coeffs, &deriv, &mut z);
            if z.iter().all(|&r| accept(coeffs, r, tol)) {
                return Ok(z);
            }
        }
    }
    Err(Error::NoConvergence {
        degree,
        iterations: total_iterations,
        restarts: MAX_RESTARTS,
        max_correction: last_correction,
    })
}

fn accept(coeffs: &[CNum], r: CNum, tol: f64) -> bool {
    is_finite(r) && eval(coeffs, r).norm() <= tol * magnitude_scale(coeffs, r)
}

fn iterate(coeffs: &[CNum], deriv: &[CNum], z: &mut [CNum]) -> (bool, usize, f64) {
    let eval_all = |x: CNum| (eval(coeffs, x), eval(deriv, x), magnitude_scale(coeffs, x));
    aberth_iterate(&eval_all, z, MAX_ITERATIONS)
}

/// Aberth iteration for any function with exactly `z.len()` zeros in the
/// region of interest. `f` returns the value, the derivative and a rounding
/// scale below which the value counts as zero (0 to rely on step size alone).
fn aberth_iterate(f: &dyn Fn(CNum) -> (CNum, CNum, f64), z: &mut [CNum], max_iter: usize) -> (bool, usize, f64) {
    let n = z.len();
    let eps = 4.0 * f64::EPSILON;
    let mut done = vec![false; n];
    let mut max_corr = f64::INFINITY;
    for it in 0..max_iter {
        max_corr = 0.0f64;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = f(z[i]);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: CNum = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.is_zero() {
                        CNum::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = CNum::new(1.0, 0.0) - ratio * repulsion;
            let w = if denom.is_zero() || !is_finite(ratio) {
                ratio
            } else {
                ratio / denom
            };
            if !is_finite(w) {
                return (false, it + 1, f64::INFINITY);
            }
            z[i] -= w;
            let rel = w.norm() / z[i].norm().max(f64::MIN_POSITIVE);
            max_corr = max_corr.max(rel);
            if w.norm() <= eps * z[i].norm().max(f64::MIN_POSITIVE) || scale * eps >= p.norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return (true, it + 1, max_corr);
        }
    }
    (false, max_iter, max_corr)
}

/// Re-runs the simultaneous iteration on `f` (value and derivative) from the
/// starting points `z`, typically roots of an expanded polynomial whose
/// unexpanded form `f` evaluates more accurately. Returns whether every
/// point converged.
pub fn refine_simultaneous(f: impl Fn(CNum) -> (CNum, CNum), z: &mut [CNum], max_iter: usize) -> bool {
    let wrapped = |x: CNum| {
        let (v, d) = f(x);
        (v, d, 0.0)
    };
    aberth_iterate(&wrapped, z, max_iter).0
}

fn polish(coeffs: &[CNum], deriv: &[CNum], z: &mut [CNum]) {
    for zi in z.iter_mut() {
        let p = eval(coeffs, *zi);
        let dp = eval(deriv, *zi);
        if dp.is_zero() {
            continue;
        }
        let cand = *zi - p / dp;
        if is_finite(cand) && eval(coeffs, cand).norm() < p.norm() {
            *zi = cand;
        }
    }
}

/// Starting points on concentric circles whose radii come from the upper
/// convex hull of `(i, log|a_i|)`.
fn initial_guesses(coeffs: &[CNum]) -> Vec<CNum> {
    let degree = coeffs.len() - 1;
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i as f64, a.norm().ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            let cross = (bx - ax) * (pt.1 - ay) - (by - ay) * (pt.0 - ax);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(degree);
    const OFFSET: f64 = 0.4;
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let k = (j - i) as usize;
        let radius = ((li - lj) / (j - i)).exp();
        for m in 0..k {
            let angle = 2.0 * PI * (m as f64) / (k as f64) + OFFSET + 2.0 * PI * i / degree as f64;
            guesses.push(CNum::from_polar(radius, angle));
        }
    }
    guesses
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::rat;

    fn sorted_close(mut got: Vec<CNum>, mut want: Vec<CNum>, tol: f64) {
        let key = |a: &CNum, b: &CNum| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        got.sort_by(key);
        want.sort_by(key);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < tol, "{g} vs {w}");
        }
    }

    #[test]
    fn imaginary_pair() {
        let r = find_roots(&UniPoly::from_ints(&[1, 0, 1]), DEFAULT_TOL).unwrap();
        sorted_close(r, vec![CNum::new(0.0, 1.0), CNum::new(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn integer_roots() {
        let f = UniPoly::from_roots(&[rat(1), rat(2), rat(3)]);
        let r = find_roots(&f, DEFAULT_TOL).unwrap();
        sorted_close(r, vec![1.0, 2.0, 3.0].into_iter().map(|x| CNum::new(x, 0.0)).collect(), 1e-12);
    }

    #[test]
    fn cubic_with_zero_root() {
        let r = find_roots(&UniPoly::from_ints(&[0, -3, 0, 1]), DEFAULT_TOL).unwrap();
        let s = 3f64.sqrt();
        sorted_close(r, vec![0.0, s, -s].into_iter().map(|x| CNum::new(x, 0.0)).collect(), 1e-12);
    }

    #[test]
    fn constant_is_error() {
        assert!(find_roots(&UniPoly::from_ints(&[5]), DEFAULT_TOL).is_err());
        assert!(find_roots(&UniPoly::zero(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn deterministic() {
        let f = UniPoly::from_ints(&[7, -3, 0, 2, 9, -1, 4, 0, 1]);
        assert_eq!(find_roots(&f, DEFAULT_TOL).unwrap(), find_roots(&f, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn wide_magnitude_spread() {
        // roots 1e-3, 1, 1e3
        let f = [CNum::new(-1.0, 0.0), CNum::new(1001.001, 0.0), CNum::new(-1001.001, 0.0), CNum::new(1.0, 0.0)];
        let r = find_roots_c(&f, DEFAULT_TOL).unwrap();
        sorted_close(r, vec![1e-3, 1.0, 1e3].into_iter().map(|x| CNum::new(x, 0.0)).collect(), 1e-9);
    }
}
