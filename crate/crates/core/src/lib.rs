//! Adjoint Reidemeister torsion of the once-punctured torus bundles `M_n`
//! with monodromy `L R^{−(n+2)}`: exact algebra, trace-coordinate monodromy
//! actions, the character variety, slope torsions and numeric fiber sums.

pub mod charvariety;
pub mod cli;
pub mod chebyshev;
pub mod error;
pub mod exactalg;
pub mod monodromy;
pub mod torsion;
pub mod verifier;

pub use error::{Error, Result};
