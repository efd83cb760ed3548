//! Forward-mode derivatives over complex binary64: `a + b·δ` with `δ² = 0`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::CNum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub val: CNum,
    pub der: CNum,
}

impl Dual {
    pub fn constant(val: CNum) -> Self {
        Dual { val, der: CNum::new(0.0, 0.0) }
    }

    pub fn real(x: f64) -> Self {
        Self::constant(CNum::new(x, 0.0))
    }

    /// The independent variable at `val`.
    pub fn var(val: CNum) -> Self {
        Dual { val, der: CNum::new(1.0, 0.0) }
    }

    pub fn scale(self, k: f64) -> Self {
        Dual { val: self.val * k, der: self.der * k }
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn powu(self, e: u32) -> Self {
        (0..e).fold(Dual::real(1.0), |acc, _| acc * self)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, r: Dual) -> Dual {
        Dual { val: self.val + r.val, der: self.der + r.der }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, r: Dual) -> Dual {
        Dual { val: self.val - r.val, der: self.der - r.der }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, r: Dual) -> Dual {
        Dual { val: self.val * r.val, der: self.der * r.val + self.val * r.der }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, r: Dual) -> Dual {
        let q = self.val / r.val;
        Dual { val: q, der: (self.der - q * r.der) / r.val }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { val: -self.val, der: -self.der }
    }
}
