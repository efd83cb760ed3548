use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// Gaussian rational `a + bi` with `a, b` in [`Rat`].
pub type GaussRat = Complex<Rat>;

/// Complex binary64 scalar used at evaluation and root-finding boundaries.
pub type CNum = Complex<f64>;

/// Coefficient field for [`super::UniPoly`].
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn to_cnum(&self) -> CNum;
}

impl Field for Rat {
    fn to_cnum(&self) -> CNum {
        CNum::new(rat_to_f64(self), 0.0)
    }
}

impl Field for GaussRat {
    fn to_cnum(&self) -> CNum {
        CNum::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite binary64 number.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    if x == 0.0 {
        return Some(Rat::zero());
    }
    Rat::from_float(x)
}

/// Exact Gaussian-rational value of a finite complex binary64 number.
pub fn gauss_from_cnum(c: CNum) -> Option<GaussRat> {
    Some(GaussRat::new(rat_from_f64(c.re)?, rat_from_f64(c.im)?))
}

pub fn gauss_from_rat(r: Rat) -> GaussRat {
    GaussRat::new(r, Rat::zero())
}

pub fn is_finite(c: CNum) -> bool {
    c.re.is_finite() && c.im.is_finite()
}
