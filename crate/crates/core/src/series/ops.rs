//! Termwise Caputo derivative, Riemann-Liouville integral and the linear
//! structure of [`FracSeries`].

use super::{ExponentKey, FracIndexPair, FracSeries, EXPONENT_TOL};
use crate::error::{FracError, Result};
use crate::gamma::gamma_ratio;

/// A series together with the number of terms an operator pushed past the
/// cutoff and discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub series: FracSeries,
    pub dropped: usize,
}

impl Truncated {
    pub fn into_series(self) -> FracSeries {
        self.series
    }

    pub fn scale(self, k: f64) -> Truncated {
        Truncated {
            series: self.series.scale(k),
            dropped: self.dropped,
        }
    }
}

fn tol(value: f64) -> f64 {
    EXPONENT_TOL * value.abs().max(1.0)
}

/// Caputo power rule on a single monomial with lattice key `key`:
/// (x−a)^μ ↦ Γ(μ+1)/Γ(μ−δ+1)·(x−a)^{μ−δ} where δ is the exponent of `order`.
///
/// Returns `None` when the monomial is annihilated: μ ∈ {0, 1, …, ⌈δ⌉−1}, or
/// the reciprocal gamma in the denominator vanishes.
pub fn caputo_power_rule(
    indices: &FracIndexPair,
    key: ExponentKey,
    order: ExponentKey,
) -> Result<Option<(ExponentKey, f64)>> {
    let delta = indices.exponent(order);
    let mu = indices.exponent(key);
    let integer_order = (delta - tol(delta)).ceil();
    let nearest = mu.round();
    if (mu - nearest).abs() <= tol(mu) && nearest >= 0.0 && nearest < integer_order {
        return Ok(None);
    }
    if mu <= -1.0 + tol(mu) {
        return Err(FracError::Domain(format!(
            "term (x-a)^{mu} is not integrable at the base; its Caputo derivative is undefined"
        )));
    }
    let target = key - order;
    let factor = gamma_ratio(mu, indices.exponent(target))?;
    Ok((factor != 0.0).then_some((target, factor)))
}

impl FracSeries {
    /// Caputo derivative of order `order`, applied termwise.
    ///
    /// The order must lie on the lattice of the series. The result keeps the
    /// same index pair; its cutoff is `cutoff - order`. Exponents may turn
    /// negative, in which case the result is singular at the base.
    pub fn caputo_derivative(&self, order: f64) -> Result<FracSeries> {
        if !(order.is_finite() && order > 0.0) {
            return Err(FracError::Domain(format!(
                "derivative order must be positive, got {order}"
            )));
        }
        let order_key = self.indices.require_lattice_key(order)?;
        self.caputo_derivative_by_key(order_key)
    }

    pub(crate) fn caputo_derivative_by_key(&self, order: ExponentKey) -> Result<FracSeries> {
        let mut out = FracSeries::zero(self.indices, self.cutoff - self.indices.exponent(order))?;
        for (key, c) in self.raw_terms() {
            if let Some((target, factor)) = caputo_power_rule(&self.indices, key, order)? {
                out.insert_unchecked(target, c * factor);
            }
        }
        Ok(out)
    }

    /// Riemann-Liouville integral of order `order`, applied termwise.
    ///
    /// The cutoff is unchanged; terms pushed past it are dropped and counted.
    pub fn rl_integral(&self, order: f64) -> Result<Truncated> {
        if !(order.is_finite() && order > 0.0) {
            return Err(FracError::Domain(format!(
                "integral order must be positive, got {order}"
            )));
        }
        let order_key = self.indices.require_lattice_key(order)?;
        let mut out = FracSeries::zero(self.indices, self.cutoff)?;
        let mut dropped = 0;
        for (key, c) in self.raw_terms() {
            let mu = self.indices.exponent(key);
            if mu <= -1.0 + tol(mu) {
                return Err(FracError::Domain(format!(
                    "term (x-a)^{mu} is not integrable at the base"
                )));
            }
            let target = key + order_key;
            let nu = self.indices.exponent(target);
            if nu > self.cutoff + tol(self.cutoff) {
                dropped += 1;
                continue;
            }
            out.insert_unchecked(target, c * gamma_ratio(mu, nu)?);
        }
        Ok(Truncated {
            series: out,
            dropped,
        })
    }

    /// Multiplies by (x−a)^power. The cutoff is unchanged; terms pushed past
    /// it are dropped and counted.
    pub fn multiply_by_power(&self, power: f64) -> Result<Truncated> {
        if !(power.is_finite() && power >= 0.0) {
            return Err(FracError::Domain(format!(
                "power must be non-negative, got {power}"
            )));
        }
        let shift = if power == 0.0 {
            ExponentKey::ZERO
        } else {
            self.indices.require_lattice_key(power)?
        };
        Ok(self.multiply_by_power_key(shift))
    }

    pub(crate) fn multiply_by_power_key(&self, shift: ExponentKey) -> Truncated {
        let mut out = FracSeries {
            indices: self.indices,
            terms: Default::default(),
            cutoff: self.cutoff,
        };
        let mut dropped = 0;
        for (key, c) in self.raw_terms() {
            let target = key + shift;
            if self.indices.exponent(target) > self.cutoff + tol(self.cutoff) {
                dropped += 1;
            } else {
                out.insert_unchecked(target, c);
            }
        }
        Truncated {
            series: out,
            dropped,
        }
    }

    /// Coefficient-wise sum; the cutoff is the smaller of the two.
    pub fn add(&self, other: &FracSeries) -> Result<FracSeries> {
        self.indices.ensure_same(&other.indices)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = FracSeries::zero(self.indices, cutoff)?;
        for (key, c) in self.raw_terms().chain(other.raw_terms()) {
            if self.indices.exponent(key) <= cutoff + tol(cutoff) {
                out.accumulate(key, c);
            }
        }
        Ok(out)
    }

    /// `self - other`.
    pub fn sub(&self, other: &FracSeries) -> Result<FracSeries> {
        self.add(&other.scale(-1.0))
    }

    /// Scalar multiple.
    pub fn scale(&self, k: f64) -> FracSeries {
        FracSeries {
            indices: self.indices,
            terms: self.terms.iter().map(|(&key, &c)| (key, k * c)).collect(),
            cutoff: self.cutoff,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::FracIndexPair;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    fn single(alpha: f64) -> FracIndexPair {
        FracIndexPair::single(alpha, 0.0).unwrap()
    }

    #[test]
    fn caputo_kills_constants() {
        let s = FracSeries::constant(single(0.5), 5.0, 4.0).unwrap();
        let d = s.caputo_derivative(0.5).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.cutoff(), 3.5);
    }

    #[test]
    fn caputo_power_rule_value() {
        // d^{0.5}/dx^{0.5} x^{1.5} = Γ(2.5)/Γ(2) x
        let s = FracSeries::from_terms(single(0.5), 3.0, [(ExponentKey::new(3, 0), 1.0)]).unwrap();
        let d = s.caputo_derivative(0.5).unwrap();
        let c = d.coefficient(ExponentKey::new(2, 0));
        assert!(close(c, 1.329_340_388_179_137_020_5, 1e-14));
        assert_eq!(d.indices().exponent(ExponentKey::new(2, 0)), 1.0);
    }

    #[test]
    fn classical_derivative_of_quadratic() {
        let s = FracSeries::from_terms(
            single(1.0),
            2.0,
            [
                (ExponentKey::new(0, 0), 1.0),
                (ExponentKey::new(1, 0), 1.0),
                (ExponentKey::new(2, 0), 1.0),
            ],
        )
        .unwrap();
        let d = s.caputo_derivative(1.0).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(ExponentKey::new(0, 0)), 1.0);
        assert_eq!(d.coefficient(ExponentKey::new(1, 0)), 2.0);
    }

    #[test]
    fn caputo_rejects_bad_orders() {
        let s = FracSeries::constant(single(0.5), 1.0, 2.0).unwrap();
        assert!(matches!(
            s.caputo_derivative(0.3),
            Err(FracError::Lattice { .. })
        ));
        assert!(matches!(
            s.caputo_derivative(0.0),
            Err(FracError::Domain(_))
        ));
        assert!(matches!(
            s.caputo_derivative(-0.5),
            Err(FracError::Domain(_))
        ));
    }

    #[test]
    fn caputo_can_produce_singular_output() {
        // beta < alpha: D^alpha x^beta has a negative exponent.
        let pair = FracIndexPair::two_index(0.6, 0.25, 0.0).unwrap();
        let s = FracSeries::from_terms(pair, 2.0, [(ExponentKey::new(0, 1), 1.0)]).unwrap();
        let d = s.caputo_derivative(0.6).unwrap();
        assert!(d.is_singular_at_base());
        assert!(close(
            d.coefficient(ExponentKey::new(-1, 1)),
            gamma_ratio(0.25, -0.35).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn integral_of_constant() {
        let s = FracSeries::constant(single(0.5), 1.0, 4.0).unwrap();
        let i = s.rl_integral(0.5).unwrap();
        assert_eq!(i.dropped, 0);
        let c = i.series.coefficient(ExponentKey::new(1, 0));
        assert!(close(c, 1.0 / 0.886_226_925_452_758_013_6, 1e-14));
    }

    #[test]
    fn integral_examples() {
        let s = FracSeries::from_terms(single(1.0), 3.0, [(ExponentKey::new(1, 0), 2.0)]).unwrap();
        let i = s.rl_integral(1.0).unwrap().series;
        assert_eq!(i.coefficient(ExponentKey::new(2, 0)), 1.0);

        let s = FracSeries::from_terms(single(0.5), 3.0, [(ExponentKey::new(1, 0), 1.0)]).unwrap();
        let i = s.rl_integral(0.5).unwrap().series;
        assert!(close(
            i.coefficient(ExponentKey::new(2, 0)),
            0.886_226_925_452_758_013_6,
            1e-14
        ));
    }

    #[test]
    fn integral_reports_drops() {
        let s = FracSeries::from_terms(
            single(0.5),
            1.0,
            (0..=2).map(|m| (ExponentKey::new(m, 0), 1.0)),
        )
        .unwrap();
        let i = s.rl_integral(0.5).unwrap();
        assert_eq!(i.dropped, 1);
        assert_eq!(i.series.len(), 2);
        assert_eq!(i.series.cutoff(), 1.0);
    }

    #[test]
    fn integral_rejects_nonintegrable_terms() {
        let pair = FracIndexPair::two_index(1.5, 0.25, 0.0).unwrap();
        let s = FracSeries::from_terms(pair, 2.0, [(ExponentKey::new(-1, 1), 1.0)]).unwrap();
        assert!(matches!(s.rl_integral(1.5), Err(FracError::Domain(_))));
    }

    #[test]
    fn multiply_by_power_examples() {
        let s = FracSeries::constant(single(0.5), 1.0, 3.0).unwrap();
        assert_eq!(s.multiply_by_power(0.0).unwrap().series, s);
        let shifted = s.multiply_by_power(0.5).unwrap();
        assert_eq!(shifted.series.coefficient(ExponentKey::new(1, 0)), 1.0);
        assert_eq!(shifted.dropped, 0);
        assert!(matches!(
            s.multiply_by_power(0.2),
            Err(FracError::Lattice { .. })
        ));
    }

    #[test]
    fn theta_operator_on_power() {
        // z^{0.5} D^{0.5} z^{0.5} = Γ(1.5) z^{0.5}
        let s = FracSeries::from_terms(single(0.5), 3.0, [(ExponentKey::new(1, 0), 1.0)]).unwrap();
        let out = s
            .caputo_derivative(0.5)
            .unwrap()
            .multiply_by_power(0.5)
            .unwrap()
            .series;
        assert!(close(
            out.coefficient(ExponentKey::new(1, 0)),
            0.886_226_925_452_758_013_6,
            1e-14
        ));
    }

    #[test]
    fn linear_structure() {
        let pair = FracIndexPair::two_index(0.5, 0.7, 0.0).unwrap();
        let a = FracSeries::from_terms(pair, 3.0, [(ExponentKey::new(1, 0), 1.0)]).unwrap();
        let b = FracSeries::from_terms(pair, 2.0, [(ExponentKey::new(0, 1), 1.0)]).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.cutoff(), 2.0);
        assert!(a
            .add(&a.scale(-1.0))
            .unwrap()
            .terms()
            .iter()
            .all(|t| t.coefficient == 0.0));
        assert_eq!(a.scale(1.0), a);

        let other =
            FracSeries::constant(FracIndexPair::single(0.5, 0.0).unwrap(), 1.0, 2.0).unwrap();
        assert!(matches!(a.add(&other), Err(FracError::Incompatible(_))));
    }

    fn arb_series() -> impl Strategy<Value = FracSeries> {
        (
            0.05f64..0.95,
            0.05f64..1.95,
            prop::collection::vec(-5.0f64..5.0, 1..30),
        )
            .prop_map(|(alpha, beta, coeffs)| {
                let pair = FracIndexPair::two_index(alpha, beta, 0.0).unwrap();
                let cutoff = 6.0;
                let mut s = FracSeries::zero(pair, cutoff).unwrap();
                let mut it = coeffs.into_iter();
                'outer: for m in 0..20 {
                    for n in 0..6 {
                        let key = ExponentKey::new(m, n);
                        if pair.exponent(key) > cutoff {
                            continue;
                        }
                        match it.next() {
                            Some(c) => s.insert(key, c).unwrap(),
                            None => break 'outer,
                        }
                    }
                }
                s
            })
    }

    proptest! {
        #[test]
        fn derivative_after_integral_is_identity(s in arb_series(), k in 1i32..3) {
            let order = k as f64 * s.indices().alpha();
            let back = s.rl_integral(order).unwrap().series.caputo_derivative(order).unwrap();
            for t in s.truncate(back.cutoff()).terms() {
                prop_assert!(close(back.coefficient(t.key), t.coefficient, 1e-12));
            }
        }

        #[test]
        fn operators_are_linear(s in arb_series(), k in -3.0f64..3.0) {
            let alpha = s.indices().alpha();
            let lhs = s.scale(k).add(&s).unwrap().caputo_derivative(alpha).unwrap();
            let rhs = s.caputo_derivative(alpha).unwrap();
            for t in lhs.terms() {
                prop_assert!((t.coefficient - (k + 1.0) * rhs.coefficient(t.key)).abs()
                    <= 1e-12 * t.coefficient.abs().max(1.0));
            }
            let lhs = s.scale(k).rl_integral(alpha).unwrap().series;
            let rhs = s.rl_integral(alpha).unwrap().series;
            for t in lhs.terms() {
                prop_assert!((t.coefficient - k * rhs.coefficient(t.key)).abs()
                    <= 1e-12 * t.coefficient.abs().max(1.0));
            }
        }
    }
}
