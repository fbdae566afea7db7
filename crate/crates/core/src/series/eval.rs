use serde::Serialize;

use super::{FracSeries, Side, EXPONENT_TOL};
use crate::error::{FracError, Result};

/// Value of a truncated series at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    /// |last included term|, a heuristic indicator of the truncation error.
    pub tail_estimate: f64,
    /// Whether `tail_estimate` is within the requested tolerance.
    pub converged: bool,
}

impl FracSeries {
    /// Sums all retained terms at `x` in canonical (ascending exponent) order.
    ///
    /// Right series need `x ≥ base`, left series `x ≤ base`; 0^0 is 1.
    pub fn evaluate(&self, x: f64, tail_tol: f64) -> Result<Evaluation> {
        if !x.is_finite() {
            return Err(FracError::Domain(format!(
                "evaluation point must be finite, got {x}"
            )));
        }
        if tail_tol.is_nan() || tail_tol < 0.0 {
            return Err(FracError::Domain(format!(
                "tail tolerance must be non-negative, got {tail_tol}"
            )));
        }
        let base = self.indices.base();
        let distance = match self.indices.side() {
            Side::Right => x - base,
            Side::Left => base - x,
        };
        if distance < 0.0 {
            return Err(FracError::Domain(format!(
                "x = {x} lies outside the {:?} neighbourhood of {base}",
                self.indices.side()
            )));
        }
        if distance == 0.0 && self.is_singular_at_base() {
            return Err(FracError::Singularity { base });
        }

        let log_distance = distance.ln();
        let mut value = 0.0;
        let mut last = 0.0;
        for term in self.terms() {
            let power = if term.exponent.abs() <= EXPONENT_TOL {
                1.0
            } else if distance == 0.0 {
                0.0
            } else {
                (term.exponent * log_distance).exp()
            };
            last = term.coefficient * power;
            value += last;
        }
        let tail_estimate = last.abs();
        Ok(Evaluation {
            value,
            tail_estimate,
            converged: tail_estimate <= tail_tol,
        })
    }
}
