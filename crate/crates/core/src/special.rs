//! Fractional special functions as single-index series, and the fractional
//! Pochhammer symbol (a)^α_k.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{FracError, Result};
use crate::gamma::{gamma_ratio, log_gamma, reciprocal_gamma};
use crate::series::{ExponentKey, FracIndexPair, FracSeries, EXPONENT_TOL};

/// Hard cap on the number of Mittag-Leffler terms.
pub const ML_MAX_TERMS: usize = 1_000_000;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(FracError::Domain(format!(
            "alpha must be positive, got {alpha}"
        )))
    }
}

/// r_j = Γ(jα+1)/Γ(jα−α+1), the eigenvalue of (x−a)^α·D^α on (x−a)^{jα}.
/// r_0 is 0 because the Caputo derivative annihilates constants.
pub fn theta_eigenvalue(alpha: f64, j: usize) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    let p = j as f64 * alpha;
    gamma_ratio(p, p - alpha)
}

/// Memoized values (a)^α_0, (a)^α_1, … for one (a, α).
#[derive(Debug, Clone, PartialEq)]
pub struct PochhammerTable {
    a: f64,
    alpha: f64,
    values: Vec<f64>,
    /// Factor (a + r_{k−1}) by which values[k−1] was multiplied.
    factors: Vec<f64>,
}

impl PochhammerTable {
    pub fn new(a: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !a.is_finite() {
            return Err(FracError::Parameter(format!(
                "Pochhammer base must be finite, got {a}"
            )));
        }
        Ok(PochhammerTable {
            a,
            alpha,
            values: vec![1.0],
            factors: vec![1.0],
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Highest k currently tabulated.
    pub fn len_k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn extend_to(&mut self, k: usize) -> Result<()> {
        while self.values.len() <= k {
            let next = self.values.len();
            let factor = self.a + theta_eigenvalue(self.alpha, next - 1)?;
            let value = factor * self.values[next - 1];
            self.factors.push(factor);
            self.values.push(value);
        }
        Ok(())
    }

    pub fn value(&mut self, k: usize) -> Result<f64> {
        self.extend_to(k)?;
        Ok(self.values[k])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest k ≤ `k_max` at which (a)^α_k vanishes, if any. A factor is
    /// treated as zero when it is below 1e-12 relative to the terms forming it.
    pub fn first_zero(&mut self, k_max: usize) -> Result<Option<usize>> {
        self.extend_to(k_max)?;
        for k in 1..=k_max {
            let r = self.factors[k] - self.a;
            if self.factors[k].abs() <= 1e-12 * self.a.abs().max(r.abs()).max(1.0) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

type CacheKey = (u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, PochhammerTable>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, PochhammerTable>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Runs `f` on the shared table for (a, α), keyed on the exact bit patterns.
pub fn with_pochhammer_table<T>(
    a: f64,
    alpha: f64,
    f: impl FnOnce(&mut PochhammerTable) -> Result<T>,
) -> Result<T> {
    let key = (a.to_bits(), alpha.to_bits());
    let mut guard = cache()
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner());
    let table = match guard.entry(key) {
        std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
        std::collections::hash_map::Entry::Vacant(e) => e.insert(PochhammerTable::new(a, alpha)?),
    };
    f(table)
}

/// (a)^α_k: 1 for k = 0, a for k = 1, and (a + r_{k−1})·(a)^α_{k−1} beyond.
pub fn frac_pochhammer(a: f64, alpha: f64, k: usize) -> Result<f64> {
    with_pochhammer_table(a, alpha, |t| t.value(k))
}

/// Number of steps m ≥ 0 with m·step ≤ cutoff.
pub(crate) fn lattice_count(step: f64, cutoff: f64) -> usize {
    if cutoff < 0.0 {
        return 0;
    }
    let ratio = cutoff / step;
    (ratio + EXPONENT_TOL * ratio.max(1.0)).floor() as usize + 1
}

fn single_index_series(
    alpha: f64,
    base: f64,
    cutoff: f64,
    mut coefficient: impl FnMut(usize) -> Result<Option<f64>>,
) -> Result<FracSeries> {
    check_alpha(alpha)?;
    let pair = FracIndexPair::single(alpha, base)?;
    let mut series = FracSeries::zero(pair, cutoff)?;
    for m in 0..lattice_count(alpha, cutoff) {
        if let Some(c) = coefficient(m)? {
            series.insert(ExponentKey::new(m as i32, 0), c)?;
        }
    }
    Ok(series)
}

/// E_α((x−a)^α) = Σ (x−a)^{mα}/Γ(mα+1).
pub fn mittag_leffler_series(alpha: f64, base: f64, cutoff: f64) -> Result<FracSeries> {
    single_index_series(alpha, base, cutoff, |m| {
        reciprocal_gamma(m as f64 * alpha + 1.0).map(Some)
    })
}

/// e^{(x−a)^α} = Σ (x−a)^{mα}/m!.
pub fn frac_exp_series(alpha: f64, base: f64, cutoff: f64) -> Result<FracSeries> {
    let mut inv_factorial = 1.0;
    single_index_series(alpha, base, cutoff, |m| {
        if m > 0 {
            inv_factorial /= m as f64;
        }
        Ok(Some(inv_factorial))
    })
}

fn alternating(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// cos_α((x−a)^α) = Σ (−1)^k (x−a)^{2kα}/Γ(2kα+1); odd orders are omitted.
pub fn frac_cos_series(alpha: f64, base: f64, cutoff: f64) -> Result<FracSeries> {
    single_index_series(alpha, base, cutoff, |m| {
        if m % 2 == 1 {
            return Ok(None);
        }
        Ok(Some(
            alternating(m / 2) * reciprocal_gamma(m as f64 * alpha + 1.0)?,
        ))
    })
}

/// sin_α((x−a)^α) = Σ (−1)^k (x−a)^{(2k+1)α}/Γ((2k+1)α+1); even orders are omitted.
pub fn frac_sin_series(alpha: f64, base: f64, cutoff: f64) -> Result<FracSeries> {
    single_index_series(alpha, base, cutoff, |m| {
        if m % 2 == 0 {
            return Ok(None);
        }
        Ok(Some(
            alternating((m - 1) / 2) * reciprocal_gamma(m as f64 * alpha + 1.0)?,
        ))
    })
}

/// E_α(z) = Σ z^k/Γ(kα+1) for real z ≥ 0 by partial summation.
///
/// Summation runs at least to K ≈ z^{1/α}/α, past which the terms decrease,
/// and stops once the next term is below `tol` relative to the partial sum.
pub fn mittag_leffler_eval(alpha: f64, z: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(FracError::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(FracError::Domain(format!(
            "z must be finite and non-negative, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let floor = z.powf(1.0 / alpha) / alpha;
    if floor.is_nan() || floor >= ML_MAX_TERMS as f64 {
        return Err(FracError::NonConvergence {
            terms: ML_MAX_TERMS,
        });
    }
    let floor = floor.ceil() as usize;
    let ln_z = z.ln();
    let term = |k: usize| -> Result<f64> {
        let x = k as f64 * alpha + 1.0;
        Ok((k as f64 * ln_z - log_gamma(x)?).exp())
    };

    let mut sum: f64 = 1.0;
    let mut current = 1.0;
    for k in 1..=ML_MAX_TERMS {
        let next = term(k)?;
        if k > floor && next < current && next < tol * sum.abs() {
            return Ok(sum);
        }
        sum += next;
        current = next;
        if !sum.is_finite() {
            return Err(FracError::Domain(format!("E_{alpha}({z}) overflows")));
        }
    }
    Err(FracError::NonConvergence {
        terms: ML_MAX_TERMS,
    })
}
