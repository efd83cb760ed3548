//! Character variety data of `M_n`: the three defining equations in the
//! trace coordinates `(x, y, z) = (tr α, tr β, tr μ)`, the boundary eigenvalue
//! functions on the geometric component, and explicit `SL₂(ℂ)` matrices for
//! its points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chebyshev::cheb;
use crate::error::{Error, Result};
use crate::exactalg::field::rat;
use crate::exactalg::{CNum, RatFunc, TriPoly, UniPoly};
use crate::verifier::Check;

/// The bundle `M_n` with monodromy `L R^{−(n+2)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BundleParam {
    pub n: i64,
}

impl BundleParam {
    pub fn new(n: i64) -> Self {
        BundleParam { n }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.n.abs() > 2
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic() {
            Ok(())
        } else {
            Err(Error::domain(format!("M_{} is not hyperbolic (need |n| > 2)", self.n)))
        }
    }

    /// The extra component `x = y = 0` exists exactly when `n ≡ 2 (mod 4)`.
    pub fn has_extra_component(&self) -> bool {
        self.n.rem_euclid(4) == 2
    }
}

impl fmt::Display for BundleParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{}", self.n)
    }
}

/// Variable names used when displaying [`defining_polys`].
pub const XYZ: [&str; 3] = ["x", "y", "z"];

/// `x² − 1 + f_{n−1}(y)`, `xz − y + f_n(y)`, `x(f_{n+1}(y) − 1) − z f_n(y)`,
/// as polynomials in `(x, y, z)`.
pub fn defining_polys(bp: BundleParam) -> [TriPoly; 3] {
    let n = bp.n;
    let x = TriPoly::var(0);
    let z = TriPoly::var(2);
    let fy = |k: i64| TriPoly::from_unipoly(&cheb(k), 1);
    let one = TriPoly::from_int(1);
    [
        &(&(&x * &x) - &one) + &fy(n - 1),
        &(&(&x * &z) - &TriPoly::var(1)) + &fy(n),
        &(&x * &(&fy(n + 1) - &one)) - &(&z * &fy(n)),
    ]
}

/// Boundary data on the geometric component. The longitude eigenvalue is
/// `ℓ = u m⁻² + v m⁻⁴` and the meridian satisfies `m² + m⁻² = s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFns {
    pub u: RatFunc,
    pub v: RatFunc,
    pub s: RatFunc,
    /// `(f_n − y) / d`
    pub a: UniPoly,
    /// `(1 − f_{n−1}) / d`
    pub b: UniPoly,
    /// Monic `gcd(f_n − y, 1 − f_{n−1})`.
    pub d: UniPoly,
}

/// Builds `u, v, s` and the `A, B, d` split, certifying every relation
/// between them exactly.
pub fn boundary_functions(bp: BundleParam) -> Result<BoundaryFns> {
    let bf = boundary_functions_unchecked(bp)?;
    if let Some(bad) = boundary_checks(bp, &bf)?.into_iter().find(|c| !c.passed) {
        return Err(Error::Consistency(format!(
            "{} fails for n = {}: {}",
            bad.name, bp.n, bad.detail
        )));
    }
    Ok(bf)
}

/// The same data as [`boundary_functions`] without certification.
pub fn boundary_functions_unchecked(bp: BundleParam) -> Result<BoundaryFns> {
    bp.require_hyperbolic()?;
    let n = bp.n;
    let y = UniPoly::x();
    let fn_ = cheb(n);
    let one_minus_fn1 = &UniPoly::one() - &cheb(n - 1);
    let y_minus_fn = &y - &fn_;

    let u = RatFunc::reduce(-(&one_minus_fn1 * &fn_), y_minus_fn.clone())?;
    let v = RatFunc::reduce(cheb(n - 2), y_minus_fn.clone())?;
    let s = &RatFunc::reduce(&y_minus_fn * &y_minus_fn, one_minus_fn1.clone())?
        - &RatFunc::constant(rat(2));

    let fn_minus_y = -y_minus_fn;
    let d = UniPoly::gcd(&fn_minus_y, &one_minus_fn1)?;
    let a = fn_minus_y.div_exact(&d)?;
    let b = one_minus_fn1.div_exact(&d)?;
    Ok(BoundaryFns { u, v, s, a, b, d })
}

fn ratfunc_check(name: &str, lhs: &RatFunc, rhs: &RatFunc) -> Check {
    Check::compare(name, lhs == rhs, || (lhs - rhs).to_string())
}

fn poly_check(name: &str, lhs: &UniPoly, rhs: &UniPoly) -> Check {
    Check::compare(name, lhs == rhs, || (lhs - rhs).to_string())
}

/// Exact relations among `u, v, s, A, B, d`.
pub fn boundary_checks(bp: BundleParam, bf: &BoundaryFns) -> Result<Vec<Check>> {
    let n = bp.n;
    let y = UniPoly::x();
    let fn_ = cheb(n);
    let fn_minus_y = &fn_ - &y;
    let one_minus_fn1 = &UniPoly::one() - &cheb(n - 1);
    let BoundaryFns { u, v, s, a, b, d } = bf;

    let gcd_ab = UniPoly::gcd(a, b)?;
    let uv = &(&(u * u) + &(v * v)) + &(&(s * u) * v);
    let want_deg = if n >= 3 { n } else { -n - 2 };
    Ok(vec![
        poly_check("A_times_d", &(a * d), &fn_minus_y),
        poly_check("B_times_d", &(b * d), &one_minus_fn1),
        Check::compare("gcd_A_B", gcd_ab.is_constant(), || format!("gcd(A, B) = {gcd_ab}")),
        ratfunc_check("u_equals_B_fn_over_A", u, &RatFunc::reduce(b * &fn_, a.clone())?),
        ratfunc_check("v_equals_A_plus_yB_over_A", v, &RatFunc::reduce(a + &(&y * b), a.clone())?),
        ratfunc_check("uv_identity", &uv, &RatFunc::one()),
        Check::compare("s_degree", s.degree() == Some(want_deg), || {
            format!("deg s = {:?}, expected {want_deg}", s.degree())
        }),
    ])
}

/// The traces `y ∈ {2 cos(2πk/(n−2))}` carrying the case-(2) characters
/// (`x = 0`, `f_{n−1}(y) = 1`). Sorted descending, duplicates removed.
/// Slope traces there lie in `{±2, 0}`, so these points never enter a
/// generic fiber.
pub fn fibered_traces(bp: BundleParam) -> Result<Vec<f64>> {
    let period = bp.n - 2;
    if period == 0 {
        return Err(Error::domain("n = 2 has no fibered case-(2) traces"));
    }
    let period = period.abs();
    let mut out: Vec<f64> = (0..period)
        .map(|k| {
            let t = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / period as f64).cos();
            // Snap to suppress `-0.0` and 1e-16 noise so that dedup is exact.
            let snapped = (t * 1e9).round() / 1e9;
            if snapped == 0.0 {
                0.0
            } else {
                snapped
            }
        })
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out.dedup();
    Ok(out)
}

/// A 2×2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[CNum; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let (o, z) = (CNum::one(), CNum::zero());
        Mat2([[o, z], [z, o]])
    }

    pub fn det(&self) -> CNum {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> CNum {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let d = self.det();
        Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut out = Mat2::identity();
        for _ in 0..k.unsigned_abs() {
            out = out * base;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &r.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &r.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Geometric,
    Extra,
    FiberedCase2,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Geometric => "geometric",
            Component::Extra => "extra",
            Component::FiberedCase2 => "fibered-case2",
        })
    }
}

/// One numeric character with its boundary eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint {
    pub n: i64,
    pub y: CNum,
    pub x: CNum,
    pub z: CNum,
    pub m: CNum,
    pub ell: CNum,
    pub eps: i8,
    pub component: Component,
    /// Named defect magnitudes recorded during construction.
    pub residuals: BTreeMap<String, f64>,
}

impl FiberPoint {
    /// The fiber trace coordinate `x₂ = tr ρ(β′)`.
    pub fn x2(&self) -> CNum {
        match self.component {
            Component::Extra => self.m * self.m + (self.m * self.m).inv(),
            _ => self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z - 2.0,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// `ρ(μ)`, `ρ(β)` and derived words for a reconstructed character.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Representation {
    pub mu: Mat2,
    pub beta: Mat2,
}

impl Representation {
    /// `α = β⁻¹ μ`.
    pub fn alpha(&self) -> Mat2 {
        self.beta.inverse() * self.mu
    }

    /// `β′ = α β α⁻¹ β⁻¹`.
    pub fn beta_prime(&self) -> Mat2 {
        let a = self.alpha();
        a * self.beta * a.inverse() * self.beta.inverse()
    }

    /// `λ = α β α⁻¹ β α β⁻¹ α⁻¹ β⁻¹`.
    pub fn lambda(&self) -> Mat2 {
        let (a, b) = (self.alpha(), self.beta);
        let (ai, bi) = (a.inverse(), b.inverse());
        a * b * ai * b * a * bi * ai * bi
    }

    /// Fiber trace coordinates `(tr β, tr β′, tr ββ′)`.
    pub fn fiber_traces(&self) -> [CNum; 3] {
        let bp = self.beta_prime();
        [self.beta.trace(), bp.trace(), (self.beta * bp).trace()]
    }

    /// `‖β^{−n} − α⁻¹βα²βα⁻¹‖ / max(1, ‖β^{−n}‖)`.
    pub fn relation_residual(&self, n: i64) -> f64 {
        let (a, b) = (self.alpha(), self.beta);
        let ai = a.inverse();
        let lhs = b.pow(-n);
        let rhs = ai * b * a * a * b * ai;
        (lhs - rhs).max_norm() / lhs.max_norm().max(1.0)
    }

    /// `‖μλ − λμ‖ / max(1, ‖μλ‖)`.
    pub fn commutator_residual(&self) -> f64 {
        let l = self.lambda();
        let ml = self.mu * l;
        (ml - l * self.mu).max_norm() / ml.max_norm().max(1.0)
    }
}

fn branch_sqrt(w: CNum, sign: i8) -> CNum {
    w.sqrt() * f64::from(sign)
}

fn check_sign(name: &str, s: i8) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be ±1, got {s}")))
    }
}

/// Reconstructs the geometric-component character over `y` with sign `ε`
/// and meridian branch `m_branch`, together with explicit matrices.
///
/// Points with `f_n(y) = y` are accepted: they have `z = 0` and a perfectly
/// good representation. Only the boundary functions `u, v` are singular
/// there.
pub fn build_representation(
    bp: BundleParam,
    y: CNum,
    eps: i8,
    m_branch: i8,
    tol: f64,
) -> Result<(FiberPoint, Representation)> {
    check_sign("ε", eps)?;
    check_sign("m branch", m_branch)?;
    let n = bp.n;
    let one = CNum::one();
    let fn_ = cheb(n).eval_c(y);
    let w = one - cheb(n - 1).eval_c(y);
    let scale = 1.0 + y.norm().powi((n.abs() + 1) as i32);
    if w.norm() <= tol * scale {
        return Err(Error::domain("f_{n-1}(y) = 1: not a case-(1) point"));
    }
    let root = branch_sqrt(w, eps);
    let x = root;
    let z = (y - fn_) / root;
    let m = (z + branch_sqrt(z * z - 4.0, m_branch)) / 2.0;
    let ell = m.powi(-4) - x * y * m.powi(-3) + x * x * m.powi(-2);
    let b = (y + (y * y - 4.0).sqrt()) / 2.0;

    let star = b / m + m / b - x;
    if star.norm() <= tol * (1.0 + (b / m).norm() + (m / b).norm()) {
        return Err(Error::domain("b/m + m/b − x vanishes: reducible character"));
    }
    let rep = Representation {
        mu: Mat2([[m, one], [CNum::zero(), m.inv()]]),
        beta: Mat2([[b, CNum::zero()], [star, b.inv()]]),
    };

    let mut residuals = BTreeMap::new();
    for (k, p) in defining_polys(bp).iter().enumerate() {
        residuals.insert(format!("eq{}", k + 1), p.eval_c([x, y, z]).norm());
    }
    residuals.insert("m_plus_inv_minus_z".into(), (m + m.inv() - z).norm());
    let ell_inv = m.powi(4) - x * y * m.powi(3) + x * x * m.powi(2);
    residuals.insert("ell_times_ell_inv".into(), (ell * ell_inv - one).norm());
    let lam = rep.lambda();
    residuals.insert(
        "lambda_eigenvalue".into(),
        (lam.0[0][0] - ell).norm() / ell.norm().max(1.0),
    );
    let relation = rep.relation_residual(n);
    let commutator = rep.commutator_residual();
    residuals.insert("group_relation".into(), relation);
    residuals.insert("mu_lambda_commutator".into(), commutator);

    for (name, r) in [("group relation", relation), ("μλ commutator", commutator)] {
        if !(r <= tol) {
            return Err(Error::Reconstruction {
                name: name.into(),
                residual: r,
                tol,
            });
        }
    }
    let point = FiberPoint {
        n,
        y,
        x,
        z,
        m,
        ell,
        eps,
        component: Component::Geometric,
        residuals,
    };
    Ok((point, rep))
}

/// The point of the extra component `x = y = 0` with meridian eigenvalue `m`;
/// there `ℓ = m⁻⁴`.
pub fn extra_component_point(bp: BundleParam, m: CNum) -> Result<FiberPoint> {
    if !bp.has_extra_component() {
        return Err(Error::domain(format!(
            "M_{} has no extra component (need n ≡ 2 mod 4)",
            bp.n
        )));
    }
    if m.is_zero() {
        return Err(Error::domain("m must be nonzero"));
    }
    let mut residuals = BTreeMap::new();
    let ell = m.powi(-4);
    residuals.insert("m4_ell".into(), (m.powi(4) * ell - CNum::one()).norm());
    Ok(FiberPoint {
        n: bp.n,
        y: CNum::zero(),
        x: CNum::zero(),
        z: m + m.inv(),
        m,
        ell,
        eps: 1,
        component: Component::Extra,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::tripoly::TRACE_VARS;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn c(re: f64, im: f64) -> CNum {
        CNum::new(re, im)
    }

    #[test]
    fn defining_polys_small_n() {
        let [e1, ..] = defining_polys(BundleParam::new(1));
        assert_eq!(e1.display_with(XYZ), "x^2 - 1");
        let [e1, e2, e3] = defining_polys(BundleParam::new(4));
        assert_eq!(e1.display_with(XYZ), "x^2 + y^2 - 2");
        assert_eq!(e2.display_with(XYZ), "y^3 + x*z - 3*y");
        assert_eq!(e3.display_with(XYZ), "x*y^4 - y^3*z - 3*x*y^2 + 2*y*z");
        assert_ne!(TRACE_VARS, XYZ);
    }

    #[test]
    fn boundary_functions_n4() {
        let bf = boundary_functions(BundleParam::new(4)).unwrap();
        // s = y²(3 − y²)² / (2 − y²) − 2
        let num = &(&p(&[0, 0, 1]) * &p(&[3, 0, -1])) * &p(&[3, 0, -1]);
        let s = &RatFunc::reduce(num, p(&[2, 0, -1])).unwrap() - &RatFunc::constant(rat(2));
        assert_eq!(bf.s, s);
        assert_eq!(bf.d, UniPoly::one());
    }

    #[test]
    fn boundary_functions_certify_for_range() {
        for n in (-8..=8).filter(|n: &i64| n.abs() > 2) {
            let bf = boundary_functions(BundleParam::new(n)).unwrap();
            let want = if n >= 3 { n } else { -n - 2 };
            assert_eq!(bf.s.degree(), Some(want), "n = {n}");
        }
    }

    #[test]
    fn shared_factor_y_when_n_is_2_mod_4() {
        let bf = boundary_functions(BundleParam::new(6)).unwrap();
        assert_eq!(bf.d, UniPoly::x());
        assert!(bf.b.coeff(0).is_zero());
        let bf = boundary_functions(BundleParam::new(5)).unwrap();
        assert!(!bf.b.coeff(0).is_zero() || !bf.d.coeff(0).is_zero());
    }

    #[test]
    fn boundary_functions_reject_small_n() {
        assert!(boundary_functions(BundleParam::new(2)).is_err());
        assert!(boundary_functions(BundleParam::new(-1)).is_err());
    }

    #[test]
    fn fibered_trace_sets() {
        assert_eq!(fibered_traces(BundleParam::new(5)).unwrap(), vec![2.0, -1.0]);
        assert_eq!(fibered_traces(BundleParam::new(6)).unwrap(), vec![2.0, 0.0, -2.0]);
        assert_eq!(fibered_traces(BundleParam::new(3)).unwrap(), vec![2.0]);
        assert!(fibered_traces(BundleParam::new(2)).is_err());
    }

    #[test]
    fn representation_n4_at_zero() {
        let (pt, _) = build_representation(BundleParam::new(4), c(0.0, 0.0), 1, 1, 1e-9).unwrap();
        assert!((pt.x - c(2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!(pt.z.norm() < 1e-14);
        assert!((pt.m - c(0.0, 1.0)).norm() < 1e-14);
        assert!((pt.ell - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn representation_residuals_small() {
        for n in [3, -3, 5, 6, -7] {
            let bp = BundleParam::new(n);
            for &(yr, yi) in &[(0.3, 0.4), (1.1, -0.2), (-0.7, 0.9)] {
                for eps in [1, -1] {
                    let (pt, rep) = build_representation(bp, c(yr, yi), eps, 1, 1e-8).unwrap();
                    assert!(pt.max_residual() < 1e-8, "n={n} {:?}", pt.residuals);
                    let [x1, x2, x3] = rep.fiber_traces();
                    assert!((x1 - pt.y).norm() < 1e-9);
                    assert!((x3 - pt.y).norm() < 1e-9);
                    assert!((x2 - pt.x2()).norm() < 1e-8 * (1.0 + x2.norm()));
                }
            }
        }
    }

    #[test]
    fn representation_domain_errors() {
        let bp = BundleParam::new(3);
        // f_2(y) = y, so y = 1 makes 1 − f_{n−1} vanish
        assert!(build_representation(bp, c(1.0, 0.0), 1, 1, 1e-9).is_err());
        assert!(build_representation(bp, c(0.5, 0.0), 0, 1, 1e-9).is_err());
    }

    #[test]
    fn extra_points() {
        let bp = BundleParam::new(6);
        let pt = extra_component_point(bp, c(0.0, 1.0)).unwrap();
        assert!((pt.ell - c(1.0, 0.0)).norm() < 1e-14);
        assert!((pt.x2() - c(-2.0, 0.0)).norm() < 1e-14);
        let pt = extra_component_point(bp, c(1.0, 0.0)).unwrap();
        assert_eq!(pt.ell, c(1.0, 0.0));
        assert_eq!(pt.x2(), c(2.0, 0.0));
        assert!(extra_component_point(BundleParam::new(5), c(1.0, 0.0)).is_err());
        assert!(extra_component_point(BundleParam::new(-6), c(0.5, 0.0)).is_ok());
    }
}
