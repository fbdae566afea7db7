//! Fractional hypergeometric series
//! Σ Π(a_i)^α_k / Π(b_j)^α_k · z^{kα}/Γ(kα+1) and residual checks against
//! the fractional confluent and Gauss equations they satisfy.

use crate::error::{FracError, Result};
use crate::gamma::reciprocal_gamma;
use crate::residual::{Residual, ResidualBuilder};
use crate::series::{ExponentKey, FracIndexPair, FracSeries, Truncated};
use crate::special::{lattice_count, with_pochhammer_table};

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub alpha: f64,
    /// Expansion point z_0.
    pub shift: f64,
}

impl HypergeometricSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, alpha: f64, shift: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(FracError::Domain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if let Some(p) = upper.iter().chain(&lower).find(|p| !p.is_finite()) {
            return Err(FracError::Parameter(format!("parameter {p} is not finite")));
        }
        if !shift.is_finite() {
            return Err(FracError::Parameter(format!("shift {shift} is not finite")));
        }
        Ok(HypergeometricSpec {
            upper,
            lower,
            alpha,
            shift,
        })
    }

    /// Number of orders k with kα ≤ cutoff.
    fn orders(&self, cutoff: f64) -> usize {
        lattice_count(self.alpha, cutoff)
    }

    /// Checks that no lower Pochhammer symbol vanishes for k with kα ≤ cutoff.
    pub fn check_lower(&self, cutoff: f64) -> Result<()> {
        let k_max = self.orders(cutoff).saturating_sub(1);
        for &b in &self.lower {
            if let Some(k) = with_pochhammer_table(b, self.alpha, |t| t.first_zero(k_max))? {
                return Err(FracError::Parameter(format!(
                    "lower parameter {b} makes the Pochhammer symbol vanish at k = {k}"
                )));
            }
        }
        Ok(())
    }

    /// The series on base `shift`, truncated at exponent `cutoff`.
    pub fn series(&self, cutoff: f64) -> Result<FracSeries> {
        self.check_lower(cutoff)?;
        let k_count = self.orders(cutoff);
        let pochhammers = |params: &[f64]| -> Result<Vec<f64>> {
            let mut product = vec![1.0; k_count];
            for &p in params {
                with_pochhammer_table(p, self.alpha, |t| {
                    t.extend_to(k_count.saturating_sub(1))?;
                    for (acc, v) in product.iter_mut().zip(t.values()) {
                        *acc *= v;
                    }
                    Ok(())
                })?;
            }
            Ok(product)
        };
        let numerator = pochhammers(&self.upper)?;
        let denominator = pochhammers(&self.lower)?;

        let pair = FracIndexPair::single(self.alpha, self.shift)?;
        let mut series = FracSeries::zero(pair, cutoff)?;
        for k in 0..k_count {
            let c = numerator[k] / denominator[k] * reciprocal_gamma(k as f64 * self.alpha + 1.0)?;
            series
                .insert(ExponentKey::new(k as i32, 0), c)
                .map_err(|_| {
                    FracError::Parameter(format!("coefficient at k = {k} is not finite"))
                })?;
        }
        Ok(series)
    }
}

pub fn frac_pfq_series(spec: &HypergeometricSpec, cutoff: f64) -> Result<FracSeries> {
    spec.series(cutoff)
}

/// Fractional ₁F₁(a; c) about the origin.
pub fn frac_confluent_series(a: f64, c: f64, alpha: f64, cutoff: f64) -> Result<FracSeries> {
    HypergeometricSpec::new(vec![a], vec![c], alpha, 0.0)?.series(cutoff)
}

/// Fractional ₂F₁(a, b; c) about the origin.
pub fn frac_gauss_series(a: f64, b: f64, c: f64, alpha: f64, cutoff: f64) -> Result<FracSeries> {
    HypergeometricSpec::new(vec![a, b], vec![c], alpha, 0.0)?.series(cutoff)
}

fn check_single_index(y: &FracSeries, alpha: f64) -> Result<()> {
    let pair = y.indices();
    if pair.beta().is_some() || pair.alpha() != alpha {
        return Err(FracError::Incompatible(format!(
            "expected a single-index series in alpha = {alpha}, got {pair}"
        )));
    }
    Ok(())
}

/// z^α D^α applied to `y`.
fn theta(y: &FracSeries, alpha: f64) -> Result<Truncated> {
    y.caputo_derivative(alpha)?.multiply_by_power(alpha)
}

/// Residual of z^α(D^α)²y + (c − z^α)D^α y − a·y = 0.
pub fn confluent_residual(y: &FracSeries, a: f64, c: f64, alpha: f64) -> Result<Residual> {
    check_single_index(y, alpha)?;
    let dy = y.caputo_derivative(alpha)?;
    let ddy = dy.caputo_derivative(alpha)?;
    let mut b = ResidualBuilder::new(*y.indices());
    b.push_truncated(ddy.multiply_by_power(alpha)?)?
        .push(dy.scale(c))?
        .push_truncated(dy.multiply_by_power(alpha)?.scale(-1.0))?
        .push(y.scale(-a))?;
    b.finish()
}

/// Residual of
/// ab·f + (a+b)·θf + θ(θf) − c·D^α f − (z−z_0)^α (D^α)² f = 0 with θ = (z−z_0)^α D^α.
pub fn gauss_residual(
    f: &FracSeries,
    a: f64,
    b: f64,
    c: f64,
    alpha: f64,
    z0: f64,
) -> Result<Residual> {
    check_single_index(f, alpha)?;
    if f.indices().base() != z0 {
        return Err(FracError::Incompatible(format!(
            "series is expanded about {} but the equation about {z0}",
            f.indices().base()
        )));
    }
    let df = f.caputo_derivative(alpha)?;
    let ddf = df.caputo_derivative(alpha)?;
    let theta_f = theta(f, alpha)?;
    let theta_theta_f = theta(&theta_f.series, alpha)?;
    let mut builder = ResidualBuilder::new(*f.indices());
    builder
        .push(f.scale(a * b))?
        .push_truncated(theta_f.scale(a + b))?
        .push_truncated(theta_theta_f)?
        .push(df.scale(-c))?
        .push_truncated(ddf.multiply_by_power(alpha)?.scale(-1.0))?;
    builder.finish()
}
