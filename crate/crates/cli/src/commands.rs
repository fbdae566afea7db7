//! Dispatch from parsed arguments to the library.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use fracseries::fde::{
    assemble_residual, linear_fde_warnings, solve_by_ansatz, solve_example_equation,
    solve_linear_fde, FdeProblem,
};
use fracseries::hypergeometric::{confluent_residual, gauss_residual, HypergeometricSpec};
use fracseries::residual::{Residual, ResidualOrder};
use fracseries::special::{
    frac_cos_series, frac_exp_series, frac_pochhammer, frac_sin_series, mittag_leffler_eval,
    mittag_leffler_series,
};
use fracseries::FracSeries;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Command, HyperKind, SeriesCmd, SolveCmd, SpecialKind};
use crate::output::{num, Output, Table};
use crate::verify;

/// Relative tolerance used when reporting whether a residual vanishes.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Residual digest: worst exact order and where exactness ends.
#[derive(Debug, Serialize)]
pub struct ResidualSummary {
    pub max_relative: f64,
    pub tolerance: f64,
    pub vanishes: bool,
    pub exact_through: f64,
    pub dropped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<ResidualOrder>,
}

impl From<&Residual> for ResidualSummary {
    fn from(r: &Residual) -> Self {
        ResidualSummary {
            max_relative: r.max_relative(),
            tolerance: RESIDUAL_TOL,
            vanishes: r.vanishes(RESIDUAL_TOL),
            exact_through: r.exact_through,
            dropped: r.dropped,
            first_failure: r.first_failure(RESIDUAL_TOL).copied(),
        }
    }
}

/// The name echoed in the output metadata, e.g. `series diff`.
pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Series(SeriesCmd::Diff { .. }) => "series diff",
        Command::Series(SeriesCmd::Int { .. }) => "series int",
        Command::Series(SeriesCmd::Eval { .. }) => "series eval",
        Command::Special { .. } => "special",
        Command::MlEval { .. } => "ml-eval",
        Command::Poch { .. } => "poch",
        Command::Hyper { .. } => "hyper",
        Command::Solve(SolveCmd::Example { .. }) => "solve example",
        Command::Solve(SolveCmd::Linear { .. }) => "solve linear",
        Command::Solve(SolveCmd::Ansatz { .. }) => "solve ansatz",
        Command::Verify { .. } => "verify",
    }
}

/// Input paths named by the command, checked before any computation.
pub fn inputs(command: &Command) -> Vec<&Path> {
    match command {
        Command::Series(
            SeriesCmd::Diff { input, .. }
            | SeriesCmd::Int { input, .. }
            | SeriesCmd::Eval { input, .. },
        ) => vec![input.as_path()],
        Command::Solve(SolveCmd::Ansatz { problem, .. }) => vec![problem.as_path()],
        _ => Vec::new(),
    }
}

/// Reads a series document, either bare or as the `series` field of a
/// previous command's JSON output.
pub fn read_series(path: &Path) -> anyhow::Result<FracSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(inner) = value.get_mut("series") {
        value = inner.take();
    }
    serde_json::from_value(value)
        .with_context(|| format!("{} is not a series document", path.display()))
}

fn series_output(series: &FracSeries) -> Output {
    Output::new(Table::series(series)).tabulating("series", series)
}

fn scalar_output(columns: Vec<&'static str>, values: &[f64]) -> Output {
    Output::new(Table {
        header: columns,
        rows: vec![values.iter().map(|&v| num(v)).collect()],
    })
}

pub fn run(command: &Command) -> anyhow::Result<Output> {
    Ok(match command {
        Command::Series(cmd) => series(cmd)?,
        Command::Special {
            kind,
            alpha,
            cutoff,
            base,
        } => {
            let build = match kind {
                SpecialKind::Ml => mittag_leffler_series,
                SpecialKind::Exp => frac_exp_series,
                SpecialKind::Sin => frac_sin_series,
                SpecialKind::Cos => frac_cos_series,
            };
            series_output(&build(*alpha, *base, *cutoff)?)
        }
        Command::MlEval { alpha, z, tol } => {
            let value = mittag_leffler_eval(*alpha, *z, *tol)?;
            scalar_output(vec!["alpha", "z", "value"], &[*alpha, *z, value]).with("value", value)
        }
        Command::Poch { a, alpha, k } => {
            let value = frac_pochhammer(*a, *alpha, *k)?;
            Output::new(Table {
                header: vec!["a", "alpha", "k", "value"],
                rows: vec![vec![num(*a), num(*alpha), k.to_string(), num(value)]],
            })
            .with("value", value)
        }
        Command::Hyper {
            kind,
            alpha,
            upper,
            lower,
            cutoff,
            shift,
            residual,
        } => hyper(*kind, *alpha, upper, lower, *cutoff, *shift, *residual)?,
        Command::Solve(cmd) => solve(cmd)?,
        Command::Verify { suite, grid, alpha } => {
            let report = verify::run(*suite, *grid, *alpha)?;
            let rows = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        num(c.measured),
                        num(c.tolerance),
                        c.passed.to_string(),
                    ]
                })
                .collect();
            let mut out = Output::new(Table {
                header: vec!["check", "measured", "tolerance", "passed"],
                rows,
            })
            .with("passed", report.passed())
            .tabulating("checks", &report.checks);
            out.failed = !report.passed();
            out
        }
    })
}

fn series(cmd: &SeriesCmd) -> anyhow::Result<Output> {
    Ok(match cmd {
        SeriesCmd::Diff { order, input } => {
            series_output(&read_series(input)?.caputo_derivative(*order)?)
        }
        SeriesCmd::Int { order, input } => {
            let t = read_series(input)?.rl_integral(*order)?;
            series_output(&t.series).with("dropped", t.dropped)
        }
        SeriesCmd::Eval {
            x,
            sample,
            tol,
            input,
        } => {
            let s = read_series(input)?;
            let xs = match (x, sample) {
                (Some(x), _) => vec![*x],
                (None, Some(sample)) => sample.xs(),
                (None, None) => bail!("either --x or --sample is required"),
            };
            let mut points = Vec::with_capacity(xs.len());
            for x in xs {
                points.push((x, s.evaluate(x, *tol)?));
            }
            let rows = points
                .iter()
                .map(|(x, e)| vec![num(*x), num(e.value), num(e.tail_estimate)])
                .collect();
            let out = Output::new(Table {
                header: vec!["x", "value", "tail_estimate"],
                rows,
            });
            match (x, points.as_slice()) {
                (Some(_), [(_, e)]) => out.tabulating("evaluation", e),
                _ => out.tabulating(
                    "samples",
                    points
                        .iter()
                        .map(|(x, e)| serde_json::json!({"x": x, "evaluation": e}))
                        .collect::<Vec<_>>(),
                ),
            }
        }
    })
}

fn hyper(
    kind: HyperKind,
    alpha: f64,
    upper: &[f64],
    lower: &[f64],
    cutoff: f64,
    shift: f64,
    residual: bool,
) -> anyhow::Result<Output> {
    let arity = match kind {
        HyperKind::Confluent => Some((1, 1)),
        HyperKind::Gauss => Some((2, 1)),
        HyperKind::Pfq => None,
    };
    if let Some((p, q)) = arity {
        if upper.len() != p || lower.len() != q {
            bail!(
                "{kind:?} takes {p} upper and {q} lower parameters, got {} and {}",
                upper.len(),
                lower.len()
            );
        }
    }
    let spec = HypergeometricSpec::new(upper.to_vec(), lower.to_vec(), alpha, shift)?;
    let series = spec.series(cutoff)?;
    let mut out = series_output(&series);
    if residual {
        let r = match kind {
            HyperKind::Confluent => confluent_residual(&series, upper[0], lower[0], alpha)?,
            HyperKind::Gauss => {
                gauss_residual(&series, upper[0], upper[1], lower[0], alpha, shift)?
            }
            HyperKind::Pfq => bail!("--residual is available for confluent and gauss only"),
        };
        out = out.with("residual", ResidualSummary::from(&r));
    }
    Ok(out)
}

fn solve(cmd: &SolveCmd) -> anyhow::Result<Output> {
    Ok(match cmd {
        SolveCmd::Example {
            alpha,
            y0,
            cutoff,
            base,
        } => {
            let y = solve_example_equation(*alpha, *base, *y0, *cutoff)?;
            let problem = FdeProblem::worked_example(*alpha, *base, *y0, *cutoff)?;
            let r = assemble_residual(&problem, &y)?;
            series_output(&y).with("residual", ResidualSummary::from(&r))
        }
        SolveCmd::Linear {
            alpha,
            beta,
            fcoef,
            gcoef,
            y0,
            cutoff,
            base,
        } => {
            let y = solve_linear_fde(*alpha, *beta, *base, fcoef, gcoef, *y0, *cutoff)?;
            let problem = FdeProblem::linear(*alpha, *beta, *base, fcoef, gcoef, *y0, *cutoff)?;
            let r = assemble_residual(&problem, &y)?;
            series_output(&y)
                .with("warnings", linear_fde_warnings(*alpha, *beta, gcoef))
                .with("residual", ResidualSummary::from(&r))
        }
        SolveCmd::Ansatz { problem, cutoff } => {
            let text = fs::read_to_string(problem)
                .with_context(|| format!("reading {}", problem.display()))?;
            let problem = FdeProblem::from_json(&text)?;
            let solution = solve_by_ansatz(&problem, *cutoff)?;
            series_output(&solution.series)
                .with("warnings", &solution.warnings)
                .with("residual", ResidualSummary::from(&solution.residual))
        }
    })
}
