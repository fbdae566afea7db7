use super::{ExponentKey, FracIndexPair, FracSeries, Side};
use crate::error::{FracError, Result};
use crate::gamma::reciprocal_gamma;

impl FracSeries {
    /// Fractional Taylor series Σ d_m (x−a)^{mα}/Γ(mα+1) from the values
    /// d_m = (D^α)^m f at the base.
    ///
    /// `indices` must be single-index and right-sided; use [`mirror`](Self::mirror)
    /// for the expansion at a right endpoint.
    pub fn fractional_taylor(derivative_values: &[f64], indices: FracIndexPair) -> Result<Self> {
        if indices.beta().is_some() {
            return Err(FracError::Incompatible(
                "fractional Taylor series are single-index".into(),
            ));
        }
        if indices.side() != Side::Right {
            return Err(FracError::Incompatible(
                "fractional Taylor series are built on the right; mirror the result".into(),
            ));
        }
        let top = derivative_values.len().saturating_sub(1);
        let mut series = FracSeries::zero(indices, top as f64 * indices.alpha())?;
        for (m, &d) in derivative_values.iter().enumerate() {
            let key = ExponentKey::new(m as i32, 0);
            series.insert(key, d * reciprocal_gamma(indices.exponent(key) + 1.0)?)?;
        }
        Ok(series)
    }

    /// Reinterprets the series on the other side of its base point: a right
    /// series at `a` in (x−a) becomes a left series at `b = a` in (b−x), with
    /// identical coefficients.
    pub fn mirror(&self) -> FracSeries {
        FracSeries {
            indices: self.indices.with_side(self.indices.side().flipped()),
            terms: self.terms.clone(),
            cutoff: self.cutoff,
        }
    }
}
