//! Grid-based evaluation of the defining integrals, independent of the
//! series power rules: the L1 scheme for the Caputo derivative and the
//! product-trapezoid rule for the Riemann-Liouville integral.

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::gamma::log_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    L1Caputo,
    ProductTrapezoidRlfi,
}

/// Uniform grid of `n` subintervals on [a, x].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub a: f64,
    pub x: f64,
    pub n: usize,
    pub scheme: Scheme,
}

impl GridSpec {
    pub fn new(a: f64, x: f64, n: usize, scheme: Scheme) -> Result<Self> {
        if n < 2 {
            return Err(FracError::Domain(format!(
                "a grid needs at least 2 subintervals, got {n}"
            )));
        }
        if !(a.is_finite() && x.is_finite() && x > a) {
            return Err(FracError::Domain(format!(
                "grid needs a < x, got [{a}, {x}]"
            )));
        }
        Ok(GridSpec { a, x, n, scheme })
    }

    pub fn step(&self) -> f64 {
        (self.x - self.a) / self.n as f64
    }

    fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.x
        } else {
            self.a + i as f64 * self.step()
        }
    }

    fn expect(&self, scheme: Scheme) -> Result<()> {
        if self.scheme == scheme {
            Ok(())
        } else {
            Err(FracError::Parameter(format!(
                "grid is set up for {:?}, not {scheme:?}",
                self.scheme
            )))
        }
    }
}

fn check_unit_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FracError::Domain(format!(
            "the L1 oracle needs alpha in (0, 1), got {alpha}"
        )))
    }
}

/// Precomputed L1 weights b_j = (j+1)^{1−α} − j^{1−α} and scale 1/Γ(2−α).
struct L1Weights {
    b: Vec<f64>,
    scale: f64,
    alpha: f64,
}

impl L1Weights {
    fn new(alpha: f64, n: usize) -> Result<Self> {
        let p = 1.0 - alpha;
        let powers: Vec<f64> = (0..=n).map(|j| (j as f64).powf(p)).collect();
        Ok(L1Weights {
            b: powers.windows(2).map(|w| w[1] - w[0]).collect(),
            scale: (-log_gamma(2.0 - alpha)?).exp(),
            alpha,
        })
    }

    /// D^α at node k from nodal values f_0..f_k with step h.
    fn apply(&self, values: &[f64], k: usize, h: f64) -> f64 {
        let sum: f64 = (0..k)
            .map(|j| self.b[j] * (values[k - j] - values[k - j - 1]))
            .sum();
        sum * self.scale * h.powf(-self.alpha)
    }
}

/// Precomputed product-trapezoid data: k^{α+1} and scale 1/Γ(α+2).
struct TrapezoidWeights {
    powers: Vec<f64>,
    scale: f64,
    alpha: f64,
}

impl TrapezoidWeights {
    fn new(alpha: f64, n: usize) -> Result<Self> {
        Ok(TrapezoidWeights {
            powers: (0..=n).map(|k| (k as f64).powf(alpha + 1.0)).collect(),
            scale: (-log_gamma(alpha + 2.0)?).exp(),
            alpha,
        })
    }

    /// I^α at node k from nodal values f_0..f_k with step h.
    fn apply(&self, values: &[f64], k: usize, h: f64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let p = &self.powers;
        let kf = k as f64;
        let mut sum = (p[k - 1] - (kf - self.alpha - 1.0) * kf.powf(self.alpha)) * values[0];
        for (j, v) in values.iter().enumerate().take(k).skip(1) {
            let d = k - j;
            sum += (p[d + 1] - 2.0 * p[d] + p[d - 1]) * v;
        }
        sum += values[k];
        sum * self.scale * h.powf(self.alpha)
    }
}

/// Caputo derivative of order α ∈ (0, 1) at `grid.x` by the L1 scheme.
pub fn caputo_l1<F: Fn(f64) -> f64>(f: F, grid: &GridSpec, alpha: f64) -> Result<f64> {
    grid.expect(Scheme::L1Caputo)?;
    check_unit_alpha(alpha)?;
    let values: Vec<f64> = (0..=grid.n).map(|i| f(grid.node(i))).collect();
    Ok(L1Weights::new(alpha, grid.n)?.apply(&values, grid.n, grid.step()))
}

/// Riemann-Liouville integral of order α > 0 at `grid.x` by the
/// product-trapezoid rule.
pub fn rlfi_quad<F: Fn(f64) -> f64>(f: F, grid: &GridSpec, alpha: f64) -> Result<f64> {
    grid.expect(Scheme::ProductTrapezoidRlfi)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(FracError::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let values: Vec<f64> = (0..=grid.n).map(|i| f(grid.node(i))).collect();
    Ok(TrapezoidWeights::new(alpha, grid.n)?.apply(&values, grid.n, grid.step()))
}

/// Nodal values of an operator on a uniform grid, read back by linear
/// interpolation.
struct Table {
    a: f64,
    h: f64,
    values: Vec<f64>,
}

impl Table {
    fn at(&self, x: f64) -> f64 {
        let last = self.values.len() - 1;
        let t = ((x - self.a) / self.h).max(0.0);
        let i = (t.floor() as usize).min(last - 1);
        let w = (t - i as f64).min(1.0);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

/// Deviations of both inverse-pair identities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FtfcPoint {
    pub x: f64,
    /// |D^α I^α f (x) − f(x)|
    pub part1: f64,
    /// |I^α D^α f (x) − (f(x) − f(a))|
    pub part2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FtfcReport {
    pub alpha: f64,
    pub a: f64,
    pub grid_n: usize,
    pub points: Vec<FtfcPoint>,
}

impl FtfcReport {
    pub fn max_part1(&self) -> f64 {
        self.points.iter().map(|p| p.part1).fold(0.0, f64::max)
    }

    pub fn max_part2(&self) -> f64 {
        self.points.iter().map(|p| p.part2).fold(0.0, f64::max)
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_part1().max(self.max_part2())
    }
}

/// Inner operator refinement relative to the outer grid.
pub const FTFC_REFINEMENT: usize = 4;

/// Checks D^α I^α f = f and I^α D^α f = f − f(a) at each point of `xs` with
/// nested quadrature: the inner operator is tabulated on a grid
/// [`FTFC_REFINEMENT`] times finer than the outer one over [a, max xs], and
/// the outer operator uses `grid_n` subintervals on [a, x].
pub fn verify_ftfc<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    a: f64,
    xs: &[f64],
    grid_n: usize,
) -> Result<FtfcReport> {
    check_unit_alpha(alpha)?;
    if xs.is_empty() {
        return Err(FracError::Domain("no sample points given".into()));
    }
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for &x in xs {
        GridSpec::new(a, x, grid_n, Scheme::L1Caputo)?;
    }

    let fine_n = FTFC_REFINEMENT * grid_n;
    let fine = GridSpec::new(a, x_max, fine_n, Scheme::L1Caputo)?;
    let h = fine.step();
    let samples: Vec<f64> = (0..=fine_n).map(|i| f(fine.node(i))).collect();
    let l1_fine = L1Weights::new(alpha, fine_n)?;
    let trap_fine = TrapezoidWeights::new(alpha, fine_n)?;
    let integral = Table {
        a,
        h,
        values: (0..=fine_n)
            .map(|k| trap_fine.apply(&samples, k, h))
            .collect(),
    };
    let derivative = Table {
        a,
        h,
        values: (0..=fine_n)
            .map(|k| l1_fine.apply(&samples, k, h))
            .collect(),
    };

    let l1 = L1Weights::new(alpha, grid_n)?;
    let trap = TrapezoidWeights::new(alpha, grid_n)?;
    let f_a = f(a);
    let points = xs
        .iter()
        .map(|&x| {
            let outer = GridSpec::new(a, x, grid_n, Scheme::L1Caputo).expect("validated above");
            let step = outer.step();
            let nodes: Vec<f64> = (0..=grid_n).map(|i| outer.node(i)).collect();
            let inner_i: Vec<f64> = nodes.iter().map(|&t| integral.at(t)).collect();
            let inner_d: Vec<f64> = nodes.iter().map(|&t| derivative.at(t)).collect();
            let fx = f(x);
            FtfcPoint {
                x,
                part1: (l1.apply(&inner_i, grid_n, step) - fx).abs(),
                part2: (trap.apply(&inner_d, grid_n, step) - (fx - f_a)).abs(),
            }
        })
        .collect();
    Ok(FtfcReport {
        alpha,
        a,
        grid_n,
        points,
    })
}
