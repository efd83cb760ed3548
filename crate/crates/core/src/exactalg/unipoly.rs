use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{rat, CNum, Field, Rat};
use crate::error::{Error, Result};

/// Name of the indeterminate of a [`UniPoly`]; used for display and to
/// validate `differentiate` requests.
pub type Var = Cow<'static, str>;

pub const DEFAULT_VAR: &str = "y";

/// Dense univariate polynomial over a field. `coeffs[i]` is the coefficient
/// of `var^i`; the leading coefficient is never zero and the zero polynomial
/// has no coefficients.
#[derive(Clone, Debug)]
pub struct UniPoly<F: Field = Rat> {
    coeffs: Vec<F>,
    var: Var,
}

impl<F: Field> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.var == other.var || self.degree().unwrap_or(0) == 0)
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        trim(&mut coeffs);
        UniPoly {
            coeffs,
            var: Cow::Borrowed(DEFAULT_VAR),
        }
    }

    pub fn with_var(mut self, var: impl Into<Var>) -> Self {
        self.var = var.into();
        self
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero().with_var(self.var.clone());
        }
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Self::new(coeffs).with_var(self.var.clone())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = F::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, at: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, a| acc * at.clone() + a.clone())
    }

    pub fn eval_c(&self, at: CNum) -> CNum {
        self.coeffs
            .iter()
            .rev()
            .fold(CNum::zero(), |acc, a| acc * at + a.to_cnum())
    }

    pub fn to_cnum_coeffs(&self) -> Vec<CNum> {
        self.coeffs.iter().map(Field::to_cnum).collect()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.clone() * from_usize::<F>(i))
            .collect();
        Self::new(coeffs).with_var(self.var.clone())
    }

    /// Formal derivative with respect to the named variable.
    pub fn differentiate(&self, var: &str) -> Result<Self> {
        if var != self.var {
            return Err(Error::domain(format!(
                "unknown variable `{var}` for a polynomial in `{}`",
                self.var
            )));
        }
        Ok(self.derivative())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one().with_var(self.var.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: returns `(q, r)` with `self = q·d + r` and
    /// `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::domain("division by the zero polynomial"))?;
        let lc_inv = F::one() / d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let nq = rem.len().saturating_sub(dd);
        let mut quot = vec![F::zero(); nq];
        for k in (0..nq).rev() {
            let c = rem[k + dd].clone() * lc_inv.clone();
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let t = rem[k + j].clone() - c.clone() * dj.clone();
                    rem[k + j] = t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::new(quot).with_var(self.var.clone()),
            Self::new(rem).with_var(self.var.clone()),
        ))
    }

    /// Exact quotient; fails when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Consistency(format!(
                "inexact polynomial division (remainder of degree {:?})",
                r.degree()
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::domain("gcd of two zero polynomials"));
        }
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y)?;
            x = y;
            y = r.monic();
        }
        Ok(x.monic())
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::domain("squarefree test of the zero polynomial"));
        }
        if self.is_constant() {
            return Ok(true);
        }
        Ok(Self::gcd(self, &self.derivative())?.is_constant())
    }

    /// Polynomial with the given coefficients evaluated by `map`.
    pub fn map_coeffs<G: Field>(&self, map: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(map).collect()).with_var(self.var.clone())
    }

    fn combine_var(&self, other: &Self) -> Var {
        if self.is_constant() {
            other.var.clone()
        } else {
            debug_assert!(
                other.is_constant() || self.var == other.var,
                "mixing polynomials in `{}` and `{}`",
                self.var,
                other.var
            );
            self.var.clone()
        }
    }
}

impl UniPoly<Rat> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Expands `Π (y − r)` over the given rational roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rat::one()])
        })
    }
}

fn trim<F: Field>(coeffs: &mut Vec<F>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

fn from_usize<F: Field>(n: usize) -> F {
    // Small multiplicities only; repeated addition keeps the trait minimal.
    let mut acc = F::zero();
    let mut base = F::one();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    acc
}

impl<F: Field> Add for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: Self) -> UniPoly<F> {
        let var = self.combine_var(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UniPoly::new(coeffs).with_var(var)
    }
}

impl<F: Field> Sub for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: Self) -> UniPoly<F> {
        let var = self.combine_var(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::new(coeffs).with_var(var)
    }
}

impl<F: Field> Mul for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: Self) -> UniPoly<F> {
        let var = self.combine_var(rhs);
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero().with_var(var);
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = t;
            }
        }
        UniPoly::new(out).with_var(var)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.iter().map(|a| -a.clone()).collect()).with_var(self.var.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<F: Field> $tr for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: Self) -> UniPoly<F> { (&self).$m(&rhs) }
        }
        impl<F: Field> $tr<&UniPoly<F>> for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: &UniPoly<F>) -> UniPoly<F> { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<F: Field> Neg for UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        -&self
    }
}

impl fmt::Display for UniPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{ratio, GaussRat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn gcd_common_factor() {
        let g = UniPoly::gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap();
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(UniPoly::gcd(&p(&[-2, 0, 1]), &p(&[0, 1])).unwrap(), p(&[1]));
        // f4 - y = y^3 - 3y and 1 - f3 = 2 - y^2 for n = 4
        assert_eq!(
            UniPoly::gcd(&p(&[0, -3, 0, 1]), &p(&[2, 0, -1])).unwrap(),
            p(&[1])
        );
    }

    #[test]
    fn gcd_of_zeros_is_error() {
        assert!(UniPoly::<Rat>::gcd(&UniPoly::zero(), &UniPoly::zero()).is_err());
        assert_eq!(UniPoly::gcd(&UniPoly::zero(), &p(&[4, 2])).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn derivative_and_var_check() {
        assert_eq!(p(&[0, -2, 0, 1]).derivative(), p(&[-2, 0, 3]));
        assert!(p(&[0, 1]).differentiate("y").is_ok());
        assert!(p(&[0, 1]).differentiate("t").is_err());
    }

    #[test]
    fn squarefree() {
        assert!(!p(&[0, 0, 1]).is_squarefree().unwrap());
        assert!(p(&[-2, 0, 1]).is_squarefree().unwrap());
        // (y-1)^2 (y+2) = y^3 - 3y + 2
        assert!(!p(&[2, -3, 0, 1]).is_squarefree().unwrap());
        assert!(UniPoly::<Rat>::zero().is_squarefree().is_err());
    }

    #[test]
    fn div_rem_identity() {
        let a = p(&[3, 0, -14, 0, 3]);
        let d = p(&[-4, 0, 1]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gaussian_coefficients() {
        // y^2 + 1 = (y - i)(y + i); gcd with y - i is y - i.
        let i = GaussRat::new(Rat::zero(), Rat::one());
        let f = UniPoly::new(vec![GaussRat::one(), GaussRat::zero(), GaussRat::one()]);
        let g = UniPoly::new(vec![-i.clone(), GaussRat::one()]);
        assert_eq!(UniPoly::gcd(&f, &g).unwrap(), g);
        assert!(f.is_squarefree().unwrap());
        let sq = &g * &g;
        assert!(!sq.is_squarefree().unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 3]).to_string(), "3*y^2 - 2");
        assert_eq!(UniPoly::new(vec![ratio(1, 2), rat(-1)]).to_string(), "-y + 1/2");
        assert_eq!(UniPoly::<Rat>::zero().to_string(), "0");
    }
}
