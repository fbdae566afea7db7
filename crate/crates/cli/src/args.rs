use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "frac",
    version,
    about = "Fractional power series: operators, special functions and series solvers"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Operate on a series stored as JSON.
    #[command(subcommand)]
    Series(SeriesCmd),

    /// Build a special-function series.
    Special {
        kind: SpecialKind,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
        /// Expansion point a.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        base: f64,
    },

    /// Evaluate the Mittag-Leffler function E_alpha(z) for z >= 0.
    MlEval {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, allow_negative_numbers = true)]
        tol: f64,
    },

    /// Fractional Pochhammer symbol (a)^alpha_k.
    Poch {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        k: usize,
    },

    /// Fractional hypergeometric series.
    Hyper {
        kind: HyperKind,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Numerator parameters.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        upper: Vec<f64>,
        /// Denominator parameters.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lower: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
        /// Expansion point z_0.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        shift: f64,
        /// Also substitute the series into its differential equation.
        #[arg(long)]
        residual: bool,
    },

    /// Series solutions of fractional differential equations.
    #[command(subcommand)]
    Solve(SolveCmd),

    /// Run verification suites; exits with 2 if a check fails.
    Verify {
        suite: Suite,
        /// Grid subintervals for the quadrature oracles.
        #[arg(long)]
        grid: Option<usize>,
        /// Restrict the quadrature suites to one order in (0, 1).
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesCmd {
    /// Caputo derivative.
    Diff {
        #[arg(long, allow_negative_numbers = true)]
        order: f64,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Riemann-Liouville integral.
    Int {
        #[arg(long, allow_negative_numbers = true)]
        order: f64,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Evaluate at one point or on a uniform sample.
    Eval {
        #[arg(
            long,
            allow_negative_numbers = true,
            required_unless_present = "sample",
            conflicts_with = "sample"
        )]
        x: Option<f64>,
        /// A:B:N, N points from A to B inclusive.
        #[arg(long, allow_hyphen_values = true)]
        sample: Option<Sample>,
        /// Tolerance on the last included term.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveCmd {
    /// x^a (D^a)^2 f - D^a f = (x + x^a)/(1 - x) in closed form.
    Example {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        base: f64,
    },
    /// D^a y + f y = g with f, g power series in (x - base)^beta.
    Linear {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        fcoef: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        gcoef: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        base: f64,
    },
    /// Coefficient matching for a problem file.
    Ansatz {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialKind {
    Ml,
    Exp,
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HyperKind {
    Confluent,
    Gauss,
    Pfq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Gamma,
    Ftfc,
    PowerRule,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Sample {
    pub fn xs(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.to
                } else {
                    self.from + i as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for Sample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [from, to, points] = parts.as_slice() else {
            return Err(format!("expected A:B:N, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let points: usize = points
            .trim()
            .parse()
            .map_err(|e| format!("{points:?}: {e}"))?;
        if points == 0 {
            return Err("N must be at least 1".into());
        }
        Ok(Sample {
            from: num(from)?,
            to: num(to)?,
            points,
        })
    }
}
