//! The family `f_0 = 0`, `f_1 = 1`, `f_{k+1} = y f_k − f_{k−1}`, extended to
//! negative indices by `f_{−k} = −f_k`.

use std::sync::{OnceLock, RwLock};

use num_traits::Zero;

use crate::exactalg::{CNum, Rat, RatFunc, UniPoly};
use crate::error::{Error, Result};

/// Memo table of `f_k` for `k ≥ 0`; negative indices are served by negation.
#[derive(Debug, Default)]
pub struct ChebCache {
    table: RwLock<Vec<UniPoly>>,
}

impl ChebCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, k: i64) -> UniPoly {
        let idx = k.unsigned_abs() as usize;
        let p = {
            let table = self.table.read().expect("cheb cache poisoned");
            table.get(idx).cloned()
        };
        let p = p.unwrap_or_else(|| self.extend_to(idx));
        if k < 0 {
            -p
        } else {
            p
        }
    }

    fn extend_to(&self, idx: usize) -> UniPoly {
        let mut table = self.table.write().expect("cheb cache poisoned");
        if table.is_empty() {
            table.push(UniPoly::zero());
            table.push(UniPoly::one());
        }
        let y = UniPoly::x();
        while table.len() <= idx {
            let k = table.len();
            let next = &(&y * &table[k - 1]) - &table[k - 2];
            table.push(next);
        }
        table[idx].clone()
    }
}

fn cache() -> &'static ChebCache {
    static CACHE: OnceLock<ChebCache> = OnceLock::new();
    CACHE.get_or_init(ChebCache::new)
}

/// `f_k(y)` as an exact polynomial.
pub fn cheb(k: i64) -> UniPoly {
    cache().get(k)
}

/// `((k−1) f_{k+1} − (k+1) f_{k−1}) / (y² − 4)`, reduced. The division is
/// exact, so the result is the polynomial `f_k'`.
pub fn cheb_derivative(k: i64) -> RatFunc {
    let top = &cheb(k + 1).scale(&Rat::from_integer((k - 1).into()))
        - &cheb(k - 1).scale(&Rat::from_integer((k + 1).into()));
    RatFunc::reduce(top, UniPoly::from_ints(&[-4, 0, 1])).expect("nonzero denominator")
}

/// `f_k(y)` at a complex point via the three-term recurrence.
pub fn cheb_eval(k: i64, y: CNum) -> CNum {
    let (mut prev, mut cur) = (CNum::zero(), CNum::new(1.0, 0.0));
    let idx = k.unsigned_abs();
    if idx == 0 {
        return CNum::zero();
    }
    for _ in 1..idx {
        let next = y * cur - prev;
        prev = cur;
        cur = next;
    }
    if k < 0 {
        -cur
    } else {
        cur
    }
}

/// `f_k(b + 1/b) = (b^k − b^{−k}) / (b − b^{−1})`.
pub fn cheb_eval_closed(b: CNum, k: i64) -> Result<CNum> {
    let one = CNum::new(1.0, 0.0);
    if b.is_zero() || b == one || b == -one {
        return Err(Error::domain(format!(
            "closed form undefined at b = {b} (denominator vanishes)"
        )));
    }
    let bk = b.powi(k as i32);
    Ok((bk - bk.inv()) / (b - b.inv()))
}

/// `f_k(s)` for a rational function `s`, by the recurrence.
pub fn cheb_of(k: i64, s: &RatFunc) -> RatFunc {
    let idx = k.unsigned_abs();
    if idx == 0 {
        return RatFunc::zero();
    }
    let (mut prev, mut cur) = (RatFunc::zero(), RatFunc::one());
    for _ in 1..idx {
        let next = &(s * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    if k < 0 {
        -cur
    } else {
        cur
    }
}

/// Value `f_k(0)`.
pub fn cheb_at_zero(k: i64) -> i64 {
    let r = cheb(k).coeff(0);
    if r.is_zero() {
        0
    } else if r > Rat::zero() {
        1
    } else {
        -1
    }
}
