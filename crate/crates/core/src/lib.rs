//! Fractional power series on the lattice {mα + nβ}: Caputo derivatives,
//! Riemann–Liouville integrals, fractional special functions and series
//! solutions of linear fractional differential equations.

pub mod error;
pub mod fde;
pub mod gamma;
pub mod hypergeometric;
pub mod quadrature;
pub mod report;
pub mod residual;
pub mod series;
pub mod special;

pub use error::{FracError, Result};
pub use series::{Evaluation, ExponentKey, FracIndexPair, FracSeries, Side, Term, Truncated};
