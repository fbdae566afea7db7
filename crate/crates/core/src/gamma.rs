//! Gamma-function kernel.
//!
//! Every power rule for the Caputo derivative and the Riemann-Liouville
//! integral reduces to a ratio Γ(p+1)/Γ(q+1). This module evaluates those
//! ratios from a single Lanczos approximation, always in log space, so that
//! the ratio stays representable even when numerator and denominator are not.
//!
//! The pole convention is a hard rule: 1/Γ(z) is exactly zero at
//! z = 0, −1, −2, …

use crate::error::{FracError, Result};

/// Lanczos shift `r` and coefficients from Pugh's thesis table (n = 10).
const LANCZOS_R: f64 = 10.900511;

const LANCZOS_D: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_556_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];

/// ln(2·sqrt(e/π))
const LN_PREFACTOR: f64 = 0.620_782_237_635_245_2;

/// Largest argument for which Γ is finite in double precision.
const MAX_GAMMA_ARG: f64 = 171.624_376_956_302_7;

/// Arguments below this are shifted upward factor by factor; further out the
/// product of shift factors itself overflows.
const MIN_SHIFT_ARG: f64 = -170.0;

/// Tolerance used to decide that an argument sits on a pole of Γ.
pub const POLE_TOL: f64 = 1e-12;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_D[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_D[0], |acc, (k, d)| acc + d / (x + k as f64))
}

/// ln Γ(x) for x ≥ 0.5, no argument checks.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let u = x - 0.5 + LANCZOS_R;
    LN_PREFACTOR + (x - 0.5) * (u.ln() - 1.0) + lanczos_sum(x).ln()
}

/// ln(Γ(x)/Γ(y)) for x, y ≥ 1, arranged so that nearby arguments do not
/// lose digits to cancellation.
fn ln_gamma_ratio_lanczos(x: f64, y: f64) -> f64 {
    let u = x - 0.5 + LANCZOS_R;
    let v = y - 0.5 + LANCZOS_R;
    let d = x - y;
    d * (u.ln() - 1.0) + (y - 0.5) * (d / v).ln_1p() + (lanczos_sum(x) / lanczos_sum(y)).ln()
}

/// Returns `true` when `z` is (within [`POLE_TOL`]) one of 0, −1, −2, …
pub fn is_nonpositive_integer(z: f64) -> bool {
    z <= POLE_TOL && (z - z.round()).abs() <= POLE_TOL * z.abs().max(1.0)
}

fn as_small_positive_integer(z: f64) -> Option<u32> {
    ((1.0..=171.0).contains(&z) && z.fract() == 0.0).then_some(z as u32)
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(FracError::Domain(format!(
            "log_gamma requires a positive finite argument, got {x}"
        )));
    }
    if let Some(n) = as_small_positive_integer(x) {
        // ln((n-1)!)
        return Ok((2..n).map(|k| (k as f64).ln()).sum());
    }
    if x < 0.5 {
        return Ok(ln_gamma_lanczos(x + 1.0) - x.ln());
    }
    Ok(ln_gamma_lanczos(x))
}

/// Γ(p+1)/Γ(q+1).
///
/// Exactly zero when q+1 is a pole of Γ. Non-integer negative arguments are
/// moved into [1, ∞) with Γ(z+1) = zΓ(z) before the Lanczos ratio is taken.
pub fn gamma_ratio(p: f64, q: f64) -> Result<f64> {
    if !(p.is_finite() && q.is_finite()) {
        return Err(FracError::Domain(format!(
            "gamma_ratio needs finite arguments, got ({p}, {q})"
        )));
    }
    let mut x = p + 1.0;
    let mut y = q + 1.0;
    if is_nonpositive_integer(x) {
        return Err(FracError::Domain(format!(
            "gamma_ratio numerator Γ({x}) sits on a pole"
        )));
    }
    if is_nonpositive_integer(y) {
        return Ok(0.0);
    }
    if p == q {
        return Ok(1.0);
    }
    if x < MIN_SHIFT_ARG || y < MIN_SHIFT_ARG {
        return Err(FracError::Domain(format!(
            "gamma_ratio arguments ({p}, {q}) are outside the supported range"
        )));
    }

    let mut prefactor = 1.0;
    while x < 1.0 {
        prefactor /= x;
        x += 1.0;
    }
    while y < 1.0 {
        prefactor *= y;
        y += 1.0;
    }

    if let (Some(m), Some(n)) = (as_small_positive_integer(x), as_small_positive_integer(y)) {
        // (m-1)!/(n-1)! as an exact-as-possible product.
        let ratio = if m >= n {
            (n..m).fold(1.0, |acc, k| acc * k as f64)
        } else {
            1.0 / (m..n).fold(1.0, |acc, k| acc * k as f64)
        };
        return finite_or_overflow(prefactor * ratio, p, q);
    }

    let log_ratio = if x <= MAX_GAMMA_ARG && y <= MAX_GAMMA_ARG {
        ln_gamma_ratio_lanczos(x, y)
    } else {
        ln_gamma_lanczos(x) - ln_gamma_lanczos(y)
    };
    finite_or_overflow(prefactor * log_ratio.exp(), p, q)
}

fn finite_or_overflow(value: f64, p: f64, q: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FracError::Domain(format!(
            "Γ({})/Γ({}) overflows double precision",
            p + 1.0,
            q + 1.0
        )))
    }
}

/// 1/Γ(z), exactly zero at the poles.
pub fn reciprocal_gamma(z: f64) -> Result<f64> {
    gamma_ratio(0.0, z - 1.0)
}

/// Riemann-Liouville derivative of the constant 1, (x−a)^{−α}/Γ(1−α).
///
/// Only meaningful as a contrast value: the Caputo derivative of a constant
/// is zero, the Riemann-Liouville one is not.
pub fn rl_derivative_of_constant(alpha: f64, x_minus_a: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(x_minus_a > 0.0 && x_minus_a.is_finite()) {
        return Err(FracError::Domain(format!(
            "x - a must be positive, got {x_minus_a}"
        )));
    }
    Ok(x_minus_a.powf(-alpha) * gamma_ratio(0.0, -alpha)?)
}
