//! Adjoint torsion of `M_n` relative to boundary slopes.
//!
//! On the geometric component every slope trace `tr ρ(μ^p λ^q)` is a
//! rational function of `y`, and `1/𝕋` is `G / P'` (even `p`) or
//! `2G / (Q − 2)'` (odd `p`). The extra component has its own closed form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::charvariety::{boundary_functions, BoundaryFns, BundleParam, Component, FiberPoint};
use crate::chebyshev::{cheb, cheb_eval, cheb_of};
use crate::error::{Error, Result};
use crate::exactalg::field::rat;
use crate::exactalg::roots::magnitude_scale;
use crate::exactalg::{CNum, Dual, Rat, RatFunc, UniPoly};
use crate::verifier::Check;

/// A primitive slope `γ = μ^p λ^q`, normalized to `q ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SlopeParam {
    pub p: i64,
    pub q: i64,
}

impl SlopeParam {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::domain(format!("slope ({p},{q}) is not primitive")));
        }
        if q < 0 {
            return Err(Error::domain(format!(
                "slope ({p},{q}) has q < 0; use ({},{}) and negate the torsion",
                -p, -q
            )));
        }
        Ok(SlopeParam { p, q })
    }

    /// A possibly non-primitive class such as `μ²`. The trace and torsion
    /// formulas make sense for any `(p, q) ≠ (0, 0)` with `q ≥ 0`.
    pub fn class(p: i64, q: i64) -> Result<Self> {
        if (p, q) == (0, 0) || q < 0 {
            return Err(Error::domain(format!("({p},{q}) needs q ≥ 0 and (p,q) ≠ (0,0)")));
        }
        Ok(SlopeParam { p, q })
    }

    pub fn is_primitive(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }

    /// Normalizes `q ≥ 0`, returning the sign picked up by `𝕋_{γ⁻¹} = −𝕋_γ`.
    pub fn normalized(p: i64, q: i64) -> Result<(Self, i8)> {
        if q < 0 || (q == 0 && p < 0) {
            Ok((Self::new(-p, -q)?, -1))
        } else {
            Ok((Self::new(p, q)?, 1))
        }
    }

    pub fn parity(&self) -> Parity {
        if self.p.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for SlopeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pathway {
    TraceDerivative,
    JacobianDirect,
    ExtraClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorsionValue {
    pub value: CNum,
    pub slope: SlopeParam,
    pub pathway: Pathway,
}

/// `3 + f_{n+1} + y (f_n − y)/(f_{n−1} − 1) f_n' − y f_{n+1}'`, the λ-torsion
/// along the geometric component.
pub fn torsion_lambda(bp: BundleParam) -> Result<RatFunc> {
    bp.require_hyperbolic()?;
    let n = bp.n;
    let y = UniPoly::x();
    let x2 = RatFunc::reduce(&y * &(&cheb(n) - &y), &cheb(n - 1) - &UniPoly::one())?;
    let poly_part = &(&UniPoly::constant(rat(3)) + &cheb(n + 1)) - &(&y * &cheb(n + 1).derivative());
    Ok(&RatFunc::from(poly_part) + &(&x2 * &RatFunc::from(cheb(n).derivative())))
}

/// `3 + f_{n+1}(x₃) + x₂ f_n'(x₃) − x₁ f_{n+1}'(x₃)`.
pub fn torsion_lambda_at_triple(n: i64, x1: CNum, x2: CNum, x3: CNum) -> CNum {
    3.0 + cheb_eval(n + 1, x3) + x2 * cheb(n).derivative().eval_c(x3)
        - x1 * cheb(n + 1).derivative().eval_c(x3)
}

/// Both sides of `2vs' + 2u' + v's = v (y − f_n)/(1 − f_{n−1}) · 𝕋_λ`.
pub fn lambda_derivative_identity(bp: BundleParam, bf: &BoundaryFns) -> Result<(RatFunc, RatFunc)> {
    let n = bp.n;
    let (u, v, s) = (&bf.u, &bf.v, &bf.s);
    let two = RatFunc::constant(rat(2));
    let lhs = &(&(&(&two * v) * &s.derivative()) + &(&two * &u.derivative())) + &(&v.derivative() * s);
    let y = UniPoly::x();
    let ratio = RatFunc::reduce(&y - &cheb(n), &UniPoly::one() - &cheb(n - 1))?;
    let rhs = &(v * &ratio) * &torsion_lambda(bp)?;
    Ok((lhs, rhs))
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `δ_r = Σ_{k=0}^{q} C(q,k) u^k v^{q−k} f_{k+r}(s)`.
pub fn delta_with(bf: &BoundaryFns, q: u32, r: i64) -> RatFunc {
    let mut out = RatFunc::zero();
    for k in 0..=q {
        let coeff = Rat::from_integer(binomial(q as u64, k as u64));
        let term = &(&pow(&bf.u, k) * &pow(&bf.v, q - k)) * &cheb_of(k as i64 + r, &bf.s);
        out = &out + &term.scale(&coeff);
    }
    out
}

pub fn delta(bp: BundleParam, q: i64, r: i64) -> Result<RatFunc> {
    let q = u32::try_from(q).map_err(|_| Error::domain("δ_r needs q ≥ 0"))?;
    Ok(delta_with(&boundary_functions(bp)?, q, r))
}

fn pow(f: &RatFunc, e: u32) -> RatFunc {
    (0..e).fold(RatFunc::one(), |acc, _| &acc * f)
}

/// Slope-dependent functions of `y` on the geometric component.
#[derive(Clone, Debug)]
pub struct SlopeFns {
    pub bp: BundleParam,
    pub slope: SlopeParam,
    pub parity: Parity,
    pub boundary: BoundaryFns,
    pub g: RatFunc,
    pub h: RatFunc,
    /// `P` for even `p`, `Q − 2` for odd `p`.
    pub trace_fn: RatFunc,
    pub trace_deriv: RatFunc,
    /// `(f_n − y)/(1 − f_{n−1})` times `g` (even) or `g² − h²` (odd).
    pub g_fn: RatFunc,
    /// `g` (even) or `g² − h²` (odd), the factor dividing `P'` or `(Q−2)'`.
    pub g_factor: RatFunc,
}

/// Builds and certifies the slope functions for `(n, p, q)`.
pub fn slope_fns(bp: BundleParam, slope: SlopeParam) -> Result<SlopeFns> {
    slope_fns_with(bp, slope, boundary_functions(bp)?)
}

pub fn slope_fns_with(bp: BundleParam, slope: SlopeParam, boundary: BoundaryFns) -> Result<SlopeFns> {
    let sf = slope_fns_unchecked(bp, slope, boundary)?;
    if let Some(bad) = slope_checks(&sf).into_iter().find(|c| !c.passed) {
        return Err(Error::Consistency(format!(
            "{} fails for n = {}, slope {slope}: {}",
            bad.name, bp.n, bad.detail
        )));
    }
    Ok(sf)
}

/// `g = δ_{p/2−2q}`, `h = δ_{p/2−2q−1}` for even `p` and
/// `g = δ_{(p+1)/2−2q}`, `h = δ_{(p−1)/2−2q}` for odd `p`. The odd index
/// is the one for which `(p, q) = (1, 0)` gives `μ^p` trace `m + 1/m`.
pub fn slope_fns_unchecked(bp: BundleParam, slope: SlopeParam, boundary: BoundaryFns) -> Result<SlopeFns> {
    let SlopeParam { p, q } = slope;
    let qu = u32::try_from(q).map_err(|_| Error::domain("slope needs q ≥ 0"))?;
    let parity = slope.parity();
    let (gi, hi) = match parity {
        Parity::Even => (p / 2 - 2 * q, p / 2 - 2 * q - 1),
        Parity::Odd => ((p + 1) / 2 - 2 * q, (p - 1) / 2 - 2 * q),
    };
    let g = delta_with(&boundary, qu, gi);
    let h = delta_with(&boundary, qu, hi);
    let s = &boundary.s;
    let two = RatFunc::constant(rat(2));
    let (trace_fn, g_factor) = match parity {
        Parity::Even => (&(s * &g) - &(&two * &h), g.clone()),
        Parity::Odd => {
            let gmh = &g - &h;
            (
                &(&(s + &two) * &(&gmh * &gmh)) - &two,
                &(&g * &g) - &(&h * &h),
            )
        }
    };
    let n = bp.n;
    let y = UniPoly::x();
    let pref = RatFunc::reduce(&cheb(n) - &y, &UniPoly::one() - &cheb(n - 1))?;
    let g_fn = &pref * &g_factor;
    let trace_deriv = trace_fn.derivative();
    Ok(SlopeFns {
        bp,
        slope,
        parity,
        boundary,
        g,
        h,
        trace_fn,
        trace_deriv,
        g_fn,
        g_factor,
    })
}

fn diff_check(name: &str, lhs: &RatFunc, rhs: &RatFunc) -> Check {
    Check::compare(name, lhs == rhs, || (lhs - rhs).to_string())
}

/// Exact identities of the slope functions plus the degree margin and the
/// denominator relation between the trace function and `G`.
///
/// For `n ≡ 2 (mod 4)` both `B` and `d` contain the factor `y`, so `G` can
/// carry an extra simple pole at `y = 0`: `den G` is `den(traceFn)` or
/// `y · den(traceFn)`. Otherwise the two denominators agree.
pub fn slope_checks(sf: &SlopeFns) -> Vec<Check> {
    let s = &sf.boundary.s;
    let (g, h) = (&sf.g, &sf.h);
    let four = RatFunc::constant(rat(4));
    let s2m4 = &(s * s) - &four;
    let mut out = vec![diff_check(
        "g2_h2_sgh",
        &(&(&(g * g) + &(h * h)) - &(&(s * g) * h)),
        &RatFunc::one(),
    )];
    let t = &sf.trace_fn;
    let f = &sf.g_factor;
    match sf.parity {
        Parity::Even => out.push(diff_check("P2_minus_4", &(&(t * t) - &four), &(&s2m4 * &(f * f)))),
        Parity::Odd => out.push(diff_check("Qm2_sq_minus_4", &(&(t * t) - &four), &(&s2m4 * &(f * f)))),
    }
    let (gd, td) = (sf.g_fn.den(), t.den());
    let related = gd == td || (sf.bp.has_extra_component() && gd == &(&UniPoly::x() * td));
    out.push(Check::compare("denominator_relation", related, || {
        format!("den G = {gd}, den traceFn = {td}")
    }));
    let margin = sf.degree_margin();
    out.push(Check::compare("degree_margin", margin.is_some_and(|m| m >= 2), || {
        format!("deg traceFn − deg G = {margin:?}")
    }));
    out
}

/// `f_k(s)` for a dual argument, by the recurrence.
pub fn cheb_dual(k: i64, s: Dual) -> Dual {
    let (mut prev, mut cur) = (Dual::real(0.0), Dual::real(1.0));
    if k == 0 {
        return prev;
    }
    for _ in 1..k.unsigned_abs() {
        let next = s * cur - prev;
        prev = cur;
        cur = next;
    }
    if k < 0 {
        -cur
    } else {
        cur
    }
}

/// `(u, v, s)` at `y` with their `y`-derivatives, evaluated from the
/// Chebyshev recurrence rather than from expanded coefficients.
pub fn boundary_at(n: i64, y: CNum) -> [Dual; 3] {
    let yd = Dual::var(y);
    let fn_ = cheb_dual(n, yd);
    let one_minus = Dual::real(1.0) - cheb_dual(n - 1, yd);
    let y_minus = yd - fn_;
    [
        -(one_minus * fn_) / y_minus,
        cheb_dual(n - 2, yd) / y_minus,
        y_minus.square() / one_minus - Dual::real(2.0),
    ]
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn delta_dual(u: Dual, v: Dual, s: Dual, q: u32, r: i64) -> Dual {
    (0..=q).fold(Dual::real(0.0), |acc, k| {
        acc + (u.powu(k) * v.powu(q - k) * cheb_dual(k as i64 + r, s)).scale(binomial_f64(q, k))
    })
}

/// Numeric values of the slope functions at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeEval {
    /// `P` or `Q − 2`, with derivative.
    pub trace: Dual,
    /// `g` or `g² − h²`.
    pub g_factor: CNum,
    /// `(f_n − y)/(1 − f_{n−1})`.
    pub prefactor: CNum,
    pub g: CNum,
    pub h: CNum,
}

impl SlopeEval {
    /// Whether `g_factor` is zero up to rounding. `g² + h² − sgh = 1` makes
    /// `|g|² + |h|²` the natural size of both `g` and `g² − h²`.
    fn g_factor_vanishes(&self) -> bool {
        let size = (self.g.norm_sqr() + self.h.norm_sqr()).max(1.0);
        self.g_factor.norm() <= 64.0 * f64::EPSILON * size
    }
}

fn vanishes(p: &UniPoly, at: CNum) -> bool {
    let c = p.to_cnum_coeffs();
    let v = crate::exactalg::roots::eval(&c, at);
    v.norm() <= 8.0 * f64::EPSILON * magnitude_scale(&c, at)
}

impl SlopeFns {
    /// `2` for odd `p`, `1` for even: the factor in `1/𝕋 = w·G/trace'`.
    pub fn weight(&self) -> f64 {
        match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => 2.0,
        }
    }

    /// `deg(traceFn) − deg(G)` in the `deg num − deg den` convention.
    pub fn degree_margin(&self) -> Option<i64> {
        Some(self.trace_fn.degree()? - self.g_fn.degree()?)
    }

    /// `(g, h)` indices into `δ`.
    fn delta_indices(&self) -> (i64, i64) {
        let SlopeParam { p, q } = self.slope;
        match self.parity {
            Parity::Even => (p / 2 - 2 * q, p / 2 - 2 * q - 1),
            Parity::Odd => ((p + 1) / 2 - 2 * q, (p - 1) / 2 - 2 * q),
        }
    }

    /// Evaluates the trace function, its derivative and `G`'s factors at `y`
    /// through the recurrences, which stays accurate where the expanded
    /// coefficients would cancel catastrophically.
    pub fn eval_at(&self, y: CNum) -> SlopeEval {
        let n = self.bp.n;
        let [u, v, s] = boundary_at(n, y);
        let q = self.slope.q as u32;
        let (gi, hi) = self.delta_indices();
        let g = delta_dual(u, v, s, q, gi);
        let h = delta_dual(u, v, s, q, hi);
        let two = Dual::real(2.0);
        let (trace, g_factor) = match self.parity {
            Parity::Even => (s * g - two * h, g.val),
            Parity::Odd => ((s + two) * (g - h).square() - two, g.val * g.val - h.val * h.val),
        };
        let prefactor = (cheb_eval(n, y) - y) / (1.0 - cheb_eval(n - 1, y));
        SlopeEval {
            trace,
            g_factor,
            prefactor,
            g: g.val,
            h: h.val,
        }
    }

    /// `1/𝕋 = w·G(y)/trace'(y)`.
    pub fn inv_torsion_at(&self, y: CNum) -> Result<CNum> {
        let e = self.eval_at(y);
        if e.trace.der.is_zero() {
            return Err(Error::Vanishing("trace derivative".into()));
        }
        let inv = self.weight() * e.prefactor * e.g_factor / e.trace.der;
        if !crate::exactalg::field::is_finite(inv) {
            return Err(Error::Vanishing("1 − f_{n−1}".into()));
        }
        Ok(inv)
    }

    /// `𝕋 = ((1 − f_{n−1})/(f_n − y)) · trace'/(w·g)` at `y`.
    pub fn torsion_at(&self, y: CNum) -> Result<TorsionValue> {
        let n = self.bp.n;
        let fn_minus_y = &cheb(n) - &UniPoly::x();
        if vanishes(&fn_minus_y, y) {
            return Err(Error::Vanishing("f_n − y".into()));
        }
        let e = self.eval_at(y);
        if e.g_factor_vanishes() {
            return Err(Error::Vanishing(
                match self.parity {
                    Parity::Even => "g",
                    Parity::Odd => "g² − h²",
                }
                .into(),
            ));
        }
        let value = e.trace.der / (self.weight() * e.prefactor * e.g_factor);
        if !crate::exactalg::field::is_finite(value) {
            return Err(Error::Vanishing("1 − f_{n−1}".into()));
        }
        Ok(TorsionValue {
            value,
            slope: self.slope,
            pathway: Pathway::TraceDerivative,
        })
    }
}

/// Torsion at `y` through the trace-derivative pathway.
pub fn torsion_gamma_from_trace(bp: BundleParam, slope: SlopeParam, y: CNum) -> Result<TorsionValue> {
    slope_fns(bp, slope)?.torsion_at(y)
}

/// `p (ℓ/m)(dm/dℓ) + q`, the factor turning `𝕋_λ` into `𝕋_γ`.
///
/// On the geometric component `ℓ = u m⁻² + v m⁻⁴` and `y` moves with `m`
/// along `m² + m⁻² = s(y)`. On the extra component `ℓ = m⁻⁴`.
pub fn curve_change_factor(slope: SlopeParam, point: &FiberPoint) -> Result<CNum> {
    let (p, q) = (slope.p as f64, slope.q as f64);
    let m = point.m;
    if point.component == Component::Extra {
        return Ok(CNum::new(q - p / 4.0, 0.0));
    }
    let [u, v, s] = boundary_at(point.n, point.y);
    let (du, dv, ds) = (u.der, v.der, s.der);
    let (u, v) = (u.val, v.val);
    if ds.norm() <= 1e-13 * (1.0 + s.val.norm()) {
        return Err(Error::BranchPoint("s'(y) = 0".into()));
    }
    let (m2, m3, m4, m5) = (m.powi(-2), m.powi(-3), m.powi(-4), m.powi(-5));
    let ell = u * m2 + v * m4;
    let dy_dm = (2.0 * m - 2.0 * m3) / ds;
    let dl_dm = -2.0 * u * m3 - 4.0 * v * m5 + (du * m2 + dv * m4) * dy_dm;
    if dl_dm.norm() <= 1e-13 * (ell / m).norm() {
        return Err(Error::BranchPoint("dℓ/dm = 0".into()));
    }
    Ok(p * ell / (m * dl_dm) + q)
}

/// `𝕋_λ` from the fiber trace coordinates times the curve-change factor.
pub fn torsion_gamma_jacobian(
    slope: SlopeParam,
    point: &FiberPoint,
    traces: [CNum; 3],
) -> Result<TorsionValue> {
    let [x1, x2, x3] = traces;
    let t_lambda = torsion_lambda_at_triple(point.n, x1, x2, x3);
    Ok(TorsionValue {
        value: t_lambda * curve_change_factor(slope, point)?,
        slope,
        pathway: Pathway::JacobianDirect,
    })
}

/// `tr ρ(μ^p λ^q) = m^{p−4q} + m^{−(p−4q)}` on the extra component.
pub fn extra_trace(slope: SlopeParam, m: CNum) -> CNum {
    let k = (slope.p - 4 * slope.q) as i32;
    m.powi(k) + m.powi(-k)
}

/// `(−p/4 + q)(2 + (m² + m⁻²) n/2)` on the extra component.
pub fn extra_torsion(bp: BundleParam, slope: SlopeParam, m: CNum) -> Result<TorsionValue> {
    if !bp.has_extra_component() {
        return Err(Error::domain(format!("M_{} has no extra component", bp.n)));
    }
    if slope.p == 4 * slope.q {
        return Err(Error::DegenerateSlope { p: slope.p, q: slope.q });
    }
    if m.is_zero() {
        return Err(Error::domain("m must be nonzero"));
    }
    let factor = slope.q as f64 - slope.p as f64 / 4.0;
    let x2 = m * m + (m * m).inv();
    Ok(TorsionValue {
        value: factor * (2.0 + x2 * (bp.n as f64 / 2.0)),
        slope,
        pathway: Pathway::ExtraClosedForm,
    })
}
