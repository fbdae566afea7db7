//! Built-in verification suites behind `frac verify`.

use fracseries::gamma::{gamma_ratio, log_gamma};
use fracseries::quadrature::{caputo_l1, verify_ftfc, GridSpec, Scheme};
use fracseries::report::{Check, Report};
use fracseries::Result;

use crate::args::Suite;

pub const FTFC_GRID: usize = 2048;
pub const FTFC_TOL: f64 = 1e-2;
pub const POWER_RULE_GRID: usize = 8192;
pub const POWER_RULE_TOL: f64 = 1e-3;
/// Allowed relative departure of the observed L1 order from 2 − α.
pub const ORDER_SLACK: f64 = 0.2;
const GAMMA_TOL: f64 = 1e-12;

const ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];
const POWER_RULE_BETAS: [f64; 4] = [1.0, 1.5, 2.0, 2.3];
const FTFC_POINTS: [f64; 3] = [0.25, 0.5, 1.0];

/// ln Γ(x), 40-digit reference values.
const LOG_GAMMA_REF: [(f64, f64); 10] = [
    (1e-5, 11.512919692895825707),
    (0.1, 2.2527126517342059599),
    (0.5, 0.57236494292470008707),
    (1.5, -0.12078223763524522235),
    (2.5, 0.28468287047291915963),
    (7.3, 7.1478925230222490328),
    (20.0, 39.339884187199494036),
    (50.5, 146.51925549072062722),
    (100.25, 360.28455963776423497),
    (171.5, 709.14316303092824227),
];

/// Γ(p+1)/Γ(q+1), 40-digit reference values.
const GAMMA_RATIO_REF: [(f64, f64, f64); 6] = [
    (0.5, -0.5, 0.5),
    (2.3, 0.7, 2.9532500485966393195),
    (-0.9, 1.2, 8.6344946371221732881),
    (10.5, 3.25, 1436246.3246004035921),
    (49.5, -0.99, 4.3149465612411413555e61),
    (0.3, 0.3, 1.0),
];

fn rel(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

fn alphas(only: Option<f64>) -> Vec<f64> {
    only.map_or_else(|| ALPHAS.to_vec(), |a| vec![a])
}

pub fn run(suite: Suite, grid: Option<usize>, alpha: Option<f64>) -> Result<Report> {
    let mut report = Report::default();
    if matches!(suite, Suite::Gamma | Suite::All) {
        report.extend(gamma()?);
    }
    if matches!(suite, Suite::Ftfc | Suite::All) {
        report.extend(ftfc(grid.unwrap_or(FTFC_GRID), &alphas(alpha))?);
    }
    if matches!(suite, Suite::PowerRule | Suite::All) {
        report.extend(power_rule(grid.unwrap_or(POWER_RULE_GRID), &alphas(alpha))?);
    }
    Ok(report)
}

pub fn gamma() -> Result<Report> {
    let mut report = Report::default();
    let worst = LOG_GAMMA_REF
        .iter()
        .map(|&(x, r)| Ok(rel(log_gamma(x)?, r)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.push(Check::at_most(
        "gamma/log_gamma_reference",
        worst,
        GAMMA_TOL,
    ));

    let worst = GAMMA_RATIO_REF
        .iter()
        .map(|&(p, q, r)| Ok((gamma_ratio(p, q)? - r).abs() / r.abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.push(Check::at_most("gamma/ratio_reference", worst, GAMMA_TOL));

    let mut worst: f64 = 0.0;
    let mut factorial = [1.0f64; 21];
    for m in 1..=20 {
        factorial[m] = factorial[m - 1] * m as f64;
    }
    for m in 0..=20 {
        for n in 0..=20 {
            let exact = factorial[m] / factorial[n];
            let got = gamma_ratio(m as f64, n as f64)?;
            worst = worst.max((got - exact).abs() / exact);
        }
    }
    report.push(Check::at_most("gamma/factorial_ratios", worst, GAMMA_TOL));

    let (mut recurrence, mut reciprocity): (f64, f64) = (0.0, 0.0);
    for i in 0..40 {
        for j in 0..40 {
            let p = -0.95 + 1.23 * i as f64;
            let q = -0.97 + 1.19 * j as f64;
            let r = gamma_ratio(p, q)?;
            let up = gamma_ratio(p + 1.0, q)?;
            recurrence = recurrence.max((up - (p + 1.0) * r).abs() / up.abs());
            reciprocity = reciprocity.max((r * gamma_ratio(q, p)? - 1.0).abs());
        }
    }
    report.push(Check::at_most("gamma/recurrence", recurrence, GAMMA_TOL));
    report.push(Check::at_most("gamma/reciprocity", reciprocity, GAMMA_TOL));
    Ok(report)
}

type TestFunction = (&'static str, fn(f64) -> f64);

pub fn ftfc(grid: usize, alphas: &[f64]) -> Result<Report> {
    let tests: [TestFunction; 3] = [("x", |x| x), ("x^1.5", |x| x.powf(1.5)), ("x^2", |x| x * x)];
    let mut report = Report::default();
    for &alpha in alphas {
        for (label, f) in tests {
            let r = verify_ftfc(f, alpha, 0.0, &FTFC_POINTS, grid)?;
            report.push(
                Check::at_most(
                    format!("ftfc/f={label}/alpha={alpha}"),
                    r.max_deviation(),
                    FTFC_TOL,
                )
                .with_detail(format!(
                    "grid {grid}: D I f - f up to {:e}, I D f - (f - f(a)) up to {:e}",
                    r.max_part1(),
                    r.max_part2()
                )),
            );
        }
    }
    Ok(report)
}

/// |L1 value − Γ(β+1)/Γ(β−α+1)| for D^α ξ^β at x = 1.
pub fn power_rule_error(alpha: f64, beta: f64, n: usize) -> Result<f64> {
    let grid = GridSpec::new(0.0, 1.0, n, Scheme::L1Caputo)?;
    let numeric = caputo_l1(|x| x.powf(beta), &grid, alpha)?;
    Ok((numeric - gamma_ratio(beta, beta - alpha)?).abs())
}

/// Observed orders log2(e_n / e_2n) over three doublings ending at `grid`.
pub fn power_rule_orders(alpha: f64, beta: f64, grid: usize) -> Result<Vec<f64>> {
    let coarsest = (grid / 8).max(2);
    let errors = (0..4)
        .map(|i| power_rule_error(alpha, beta, coarsest << i))
        .collect::<Result<Vec<_>>>()?;
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

pub fn power_rule(grid: usize, alphas: &[f64]) -> Result<Report> {
    let mut report = Report::default();
    for &alpha in alphas {
        for beta in POWER_RULE_BETAS {
            report.push(Check::at_most(
                format!("power-rule/alpha={alpha}/beta={beta}"),
                power_rule_error(alpha, beta, grid)?,
                POWER_RULE_TOL,
            ));
        }
        let orders = power_rule_orders(alpha, 2.0, grid)?;
        let target = 2.0 - alpha;
        let departure = orders
            .iter()
            .map(|p| (p - target).abs() / target)
            .fold(0.0, f64::max);
        report.push(
            Check::at_most(
                format!("power-rule/order/alpha={alpha}"),
                departure,
                ORDER_SLACK,
            )
            .with_detail(format!("observed orders {orders:?} against {target}")),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_suite_passes() {
        let r = gamma().unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn coarse_grid_fails() {
        assert!(!ftfc(2, &[0.5]).unwrap().passed());
        assert!(!power_rule(4, &[0.5]).unwrap().passed());
    }
}
