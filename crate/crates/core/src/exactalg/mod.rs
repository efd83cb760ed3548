//! Exact arithmetic: rationals, univariate and trivariate polynomials,
//! reduced rational functions, plus the numeric root finder used at the
//! evaluation boundary.

pub mod dual;
pub mod field;
pub mod ratfunc;
pub mod roots;
pub mod tripoly;
pub mod unipoly;

pub use dual::Dual;
pub use field::{CNum, Field, GaussRat, Rat};
pub use ratfunc::RatFunc;
pub use roots::{find_roots, find_roots_c};
pub use tripoly::TriPoly;
pub use unipoly::UniPoly;

/// `gcd` over the rationals; see [`UniPoly::gcd`].
pub fn poly_gcd(a: &UniPoly, b: &UniPoly) -> crate::Result<UniPoly> {
    UniPoly::gcd(a, b)
}

/// See [`RatFunc::reduce`].
pub fn reduce(num: UniPoly, den: UniPoly) -> crate::Result<RatFunc> {
    RatFunc::reduce(num, den)
}

pub fn is_squarefree(f: &UniPoly) -> crate::Result<bool> {
    f.is_squarefree()
}
