use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{rat, CNum, Field, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

pub type Exponent = [u32; 3];

pub const TRACE_VARS: [&str; 3] = ["x1", "x2", "x3"];

/// Sparse polynomial in three variables with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriPoly {
    terms: BTreeMap<Exponent, Rat>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, [0, 0, 0])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn term(c: Rat, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TriPoly { terms }
    }

    /// The coordinate `x_{i+1}` (`i` in `0..3`).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::term(Rat::one(), e)
    }

    /// `p(x_{i+1})` for a univariate `p`.
    pub fn from_unipoly(p: &UniPoly, i: usize) -> Self {
        let mut out = TriPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = [0; 3];
            e[i] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Exponent, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = TriPoly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            out.add_term(d, c.clone() * rat(e[i] as i64));
        }
        out
    }

    /// Partial derivative by variable name, `x1`, `x2` or `x3`.
    pub fn differentiate(&self, var: &str) -> Result<Self> {
        let i = TRACE_VARS
            .iter()
            .position(|v| *v == var)
            .ok_or_else(|| Error::domain(format!("unknown variable `{var}`")))?;
        Ok(self.partial(i))
    }

    pub fn eval_c(&self, at: [CNum; 3]) -> CNum {
        self.terms.iter().fold(CNum::zero(), |acc, (e, c)| {
            let mono = (0..3).fold(CNum::one(), |m, i| m * at[i].powu(e[i]));
            acc + c.to_cnum() * mono
        })
    }

    pub fn display_with(&self, names: [&str; 3]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // Descending total degree, then lexicographic.
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then(b.cmp(a))
        });
        for (k, (e, c)) in items.into_iter().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| match e[i] {
                    1 => names[i].to_string(),
                    p => format!("{}^{p}", names[i]),
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, rhs: Self) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, rhs: Self) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: Self) -> TriPoly {
        let mut out = TriPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TriPoly {
            type Output = TriPoly;
            fn $m(self, rhs: Self) -> TriPoly { (&self).$m(&rhs) }
        }
        impl $tr<&TriPoly> for TriPoly {
            type Output = TriPoly;
            fn $m(self, rhs: &TriPoly) -> TriPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        -&self
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(TRACE_VARS))
    }
}
