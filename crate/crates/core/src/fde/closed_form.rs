//! Closed-form coefficient solutions of two model equations on the lattice
//! {mα + nβ}.

use crate::error::{FracError, Result};
use crate::gamma::gamma_ratio;
use crate::series::{ExponentKey, FracIndexPair, FracSeries, EXPONENT_TOL};

fn within(cutoff: f64, exponent: f64) -> bool {
    exponent <= cutoff + EXPONENT_TOL * cutoff.abs().max(1.0)
}

fn check_unit_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FracError::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// (x−a + (x−a)^α)/(1 − (x−a)) = Σ_{k≥1} (x−a)^k + Σ_{k≥0} (x−a)^{k+α},
/// on the index pair (α, 1).
pub fn example_rhs(alpha: f64, base: f64, cutoff: f64) -> Result<FracSeries> {
    let pair = FracIndexPair::two_index(alpha, 1.0, base)?;
    let mut rhs = FracSeries::zero(pair, cutoff)?;
    for k in 0.. {
        let mut inserted = false;
        for key in [ExponentKey::new(0, k), ExponentKey::new(1, k)] {
            if key == ExponentKey::ZERO {
                continue;
            }
            if within(cutoff, pair.exponent(key)) {
                rhs.insert(key, 1.0)?;
                inserted = true;
            }
        }
        if !inserted && k > 0 {
            break;
        }
    }
    Ok(rhs)
}

/// Solves (x−a)^α (D^α)² f − D^α f = (x−a + (x−a)^α)/(1 − (x−a)), 0 < α < 1:
///
/// c_{00} = f(a), c_{10} = c_{0n} = 0, c_{mn} = 0 for m ≥ 3,
/// 1/c_{1n} = Γ(n+α+1)/Γ(n−α+1) − Γ(n+α+1)/Γ(n+1) for n ≥ 1,
/// 1/c_{2n} = Γ(n+2α+1)/Γ(n+1) − Γ(n+2α+1)/Γ(n+α+1).
///
/// Zero coefficients other than c_{00} are not stored.
pub fn solve_example_equation(
    alpha: f64,
    base: f64,
    y_at_base: f64,
    cutoff: f64,
) -> Result<FracSeries> {
    check_unit_alpha(alpha)?;
    let pair = FracIndexPair::two_index(alpha, 1.0, base)?;
    let mut f = FracSeries::constant(pair, y_at_base, cutoff)?;
    for n in 0.. {
        let nf = n as f64;
        let k1 = ExponentKey::new(1, n);
        let k2 = ExponentKey::new(2, n);
        if !within(cutoff, pair.exponent(k1)) {
            break;
        }
        if n >= 1 {
            let inv = gamma_ratio(nf + alpha, nf - alpha)? - gamma_ratio(nf + alpha, nf)?;
            f.insert(k1, 1.0 / inv)?;
        }
        if within(cutoff, pair.exponent(k2)) {
            let inv =
                gamma_ratio(nf + 2.0 * alpha, nf)? - gamma_ratio(nf + 2.0 * alpha, nf + alpha)?;
            f.insert(k2, 1.0 / inv)?;
        }
    }
    Ok(f)
}

/// Solves D^α y + f·y = g with f = Σ f_n (x−a)^{nβ} and g = Σ g_n (x−a)^{nβ}:
///
/// c_{00} = y(a), c_{0n} = 0 for n ≥ 1,
/// c_{1n} = Γ(nβ+1)/Γ(α+nβ+1)·(g_n − f_n c_{00}),
/// c_{2n} = −Γ(α+nβ+1)/Γ(2α+nβ+1)·(f_n c_{10} + f_0 c_{1n}),
/// c_{mn} = (−f_0)^{m−2}·Γ(2α+nβ+1)/Γ(mα+nβ+1)·c_{2n} for m ≥ 3.
///
/// Only the leading products of f·y enter each order, so for f with more
/// than a constant term the result is not an exact solution; check it with
/// [`assemble_residual`](super::assemble_residual). Missing f_n, g_n are 0.
/// Zero coefficients other than c_{00} are not stored.
pub fn solve_linear_fde(
    alpha: f64,
    beta: f64,
    base: f64,
    f_coeffs: &[f64],
    g_coeffs: &[f64],
    y_at_base: f64,
    cutoff: f64,
) -> Result<FracSeries> {
    let pair = FracIndexPair::two_index(alpha, beta, base)?;
    if let Some(v) = f_coeffs.iter().chain(g_coeffs).find(|v| !v.is_finite()) {
        return Err(FracError::Parameter(format!(
            "coefficient {v} is not finite"
        )));
    }
    let fc = |n: usize| f_coeffs.get(n).copied().unwrap_or(0.0);
    let gc = |n: usize| g_coeffs.get(n).copied().unwrap_or(0.0);
    let f0 = fc(0);

    let mut y = FracSeries::constant(pair, y_at_base, cutoff)?;
    let mut c10 = 0.0;
    for n in 0.. {
        let nb = n as f64 * beta;
        if !within(cutoff, alpha + nb) {
            break;
        }
        let c1 = gamma_ratio(nb, alpha + nb)? * (gc(n) - fc(n) * y_at_base);
        if n == 0 {
            c10 = c1;
        }
        let c2 = -gamma_ratio(alpha + nb, 2.0 * alpha + nb)? * (fc(n) * c10 + f0 * c1);
        let n = n as i32;
        let mut set = |m: i32, c: f64| -> Result<()> {
            if c != 0.0 {
                y.insert(ExponentKey::new(m, n), c)?;
            }
            Ok(())
        };
        set(1, c1)?;
        for m in 2.. {
            let mu = m as f64 * alpha + nb;
            if !within(cutoff, mu) {
                break;
            }
            let c = if m == 2 {
                c2
            } else {
                (-f0).powi(m - 2) * gamma_ratio(2.0 * alpha + nb, mu)? * c2
            };
            set(m, c)?;
        }
    }
    Ok(y)
}

/// Conditions under which the linear equation leaves its intended regime.
pub fn linear_fde_warnings(alpha: f64, beta: f64, g_coeffs: &[f64]) -> Vec<String> {
    let mut warnings = Vec::new();
    let g1 = g_coeffs.get(1).copied().unwrap_or(0.0);
    if g1 != 0.0 && !(alpha < beta && beta < 2.0 * alpha) {
        warnings.push(format!(
            "g_1 is nonzero but beta = {beta} lies outside (alpha, 2 alpha) = ({alpha}, {})",
            2.0 * alpha
        ));
    }
    warnings
}
