use serde::Serialize;

use crate::error::{FracError, Result};
use crate::series::{FracSeries, EXPONENT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Differentiability {
    Infinite,
    Finite(usize),
}

/// How many times D^α can be applied before the series turns singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DifferentiabilityReport {
    /// N such that the series is N·α-differentiable; `None` when infinite.
    pub n_alpha: Option<usize>,
    /// Smallest retained exponent that is not an integer multiple of α.
    pub witness_exponent: Option<f64>,
    pub classification: Differentiability,
}

fn is_alpha_multiple(exponent: f64, alpha: f64) -> bool {
    let ratio = exponent / alpha;
    (ratio - ratio.round()).abs() <= EXPONENT_TOL * ratio.abs().max(1.0)
}

/// Classifies a series with non-negative exponents: it is N·α-differentiable
/// with N = ⌊μ*/α⌋, where μ* is the smallest exponent with a nonzero
/// coefficient that is not a multiple of α.
pub fn classify(s: &FracSeries) -> Result<DifferentiabilityReport> {
    if s.is_singular_at_base() {
        return Err(FracError::Domain(
            "classification needs non-negative exponents".into(),
        ));
    }
    let alpha = s.indices().alpha();
    let witness = s
        .by_exponent()
        .into_iter()
        .find(|&(e, c)| c != 0.0 && !is_alpha_multiple(e, alpha))
        .map(|(e, _)| e);
    Ok(match witness {
        None => DifferentiabilityReport {
            n_alpha: None,
            witness_exponent: None,
            classification: Differentiability::Infinite,
        },
        Some(w) => {
            let n = (w / alpha).floor() as usize;
            DifferentiabilityReport {
                n_alpha: Some(n),
                witness_exponent: Some(w),
                classification: Differentiability::Finite(n),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fde::example_rhs;
    use crate::series::{ExponentKey, FracIndexPair};
    use crate::special::mittag_leffler_series;

    #[test]
    fn examples() {
        let ml = mittag_leffler_series(0.5, 0.0, 10.0).unwrap();
        assert_eq!(
            classify(&ml).unwrap().classification,
            Differentiability::Infinite
        );

        let rhs = example_rhs(0.6, 0.0, 6.0).unwrap();
        let r = classify(&rhs).unwrap();
        assert_eq!(r.witness_exponent, Some(1.0));
        assert_eq!(r.classification, Differentiability::Finite(1));

        let pair = FracIndexPair::two_index(0.5, 0.7, 0.0).unwrap();
        let s = FracSeries::from_terms(pair, 1.0, [(ExponentKey::new(0, 1), 1.0)]).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!((r.n_alpha, r.witness_exponent), (Some(1), Some(0.7)));
    }

    #[test]
    fn zero_coefficients_are_not_witnesses() {
        let pair = FracIndexPair::two_index(0.5, 0.7, 0.0).unwrap();
        let s = FracSeries::from_terms(
            pair,
            3.0,
            [(ExponentKey::new(0, 1), 0.0), (ExponentKey::new(1, 2), 2.0)],
        )
        .unwrap();
        assert_eq!(classify(&s).unwrap().n_alpha, Some(3));
    }

    #[test]
    fn extension_never_raises_n() {
        let pair = FracIndexPair::two_index(0.3, 0.7, 0.0).unwrap();
        let mut terms = Vec::new();
        let mut last = usize::MAX;
        for (m, n) in [(3, 0), (0, 2), (0, 1), (1, 0)] {
            terms.push((ExponentKey::new(m, n), 1.0));
            let s = FracSeries::from_terms(pair, 2.0, terms.clone()).unwrap();
            let n_alpha = classify(&s).unwrap().n_alpha.unwrap_or(usize::MAX);
            assert!(n_alpha <= last);
            last = n_alpha;
        }
    }
}
