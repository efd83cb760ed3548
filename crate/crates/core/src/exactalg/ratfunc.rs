use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{CNum, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Reduced quotient `num / den` of rational polynomials: `gcd(num, den) = 1`
/// and `den` is monic. Zero is stored as `0 / 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    /// Cancels common factors and normalizes the denominator to be monic.
    pub fn reduce(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::zero().with_var_of(&den));
        }
        let g = UniPoly::gcd(&num, &den)?;
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lc = den.leading().cloned().unwrap_or_else(Rat::one);
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let var = p.var().to_owned();
        RatFunc {
            num: p,
            den: UniPoly::one().with_var(var),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }

    fn with_var_of(self, p: &UniPoly) -> Self {
        let var = p.var().to_owned();
        RatFunc {
            num: self.num.with_var(var.clone()),
            den: self.den.with_var(var),
        }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn var(&self) -> &str {
        self.den.var()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `deg num − deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("inverse of the zero rational function"));
        }
        Self::reduce(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::domain("division by the zero rational function"));
        }
        Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero().with_var_of(&self.den);
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return RatFunc {
                num: self.num.derivative(),
                den: self.den.clone(),
            };
        }
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let bottom = &self.den * &self.den;
        Self::reduce(top, bottom).expect("nonzero denominator")
    }

    pub fn differentiate(&self, var: &str) -> Result<Self> {
        if var != self.var() {
            return Err(Error::domain(format!(
                "unknown variable `{var}` for a rational function in `{}`",
                self.var()
            )));
        }
        Ok(self.derivative())
    }

    /// Numeric value; a vanishing denominator is reported as a pole.
    pub fn eval_c(&self, at: CNum) -> Result<CNum> {
        let d = self.den.eval_c(at);
        if d.norm() == 0.0 {
            return Err(Error::Vanishing("denominator".into()));
        }
        Ok(self.num.eval_c(at) / d)
    }

    pub fn eval(&self, at: &Rat) -> Result<Rat> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::Vanishing("denominator".into()));
        }
        Ok(self.num.eval(at) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: Self) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RatFunc::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: Self) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: Self) -> RatFunc {
        // Cross-cancel first so the final gcd works on smaller inputs.
        let g1 = UniPoly::gcd(&self.num, &rhs.den).unwrap_or_else(|_| UniPoly::one());
        let g2 = UniPoly::gcd(&rhs.num, &self.den).unwrap_or_else(|_| UniPoly::one());
        let split = |p: &UniPoly, g: &UniPoly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &split(&self.num, &g1) * &split(&rhs.num, &g2);
        let den = &split(&self.den, &g2) * &split(&rhs.den, &g1);
        RatFunc::reduce(num, den).expect("nonzero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: Self) -> RatFunc { (&self).$m(&rhs) }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<UniPoly> for RatFunc {
    fn from(p: UniPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
