//! Coefficient matching for linear equations on a two-index lattice.
//!
//! Every operator term maps (x−a)^μ to a multiple of (x−a)^{μ+d_t}. With
//! δ = min_t d_t, the equation at exponent μ+δ involves the unknown at μ and
//! unknowns at lower exponents only, so processing lattice exponents in
//! ascending order gives a triangular system.

use serde::Serialize;

use super::problem::{assemble_residual, FdeProblem, ResolvedTerm};
use crate::error::{FracError, Result};
use crate::residual::Residual;
use crate::series::{
    caputo_power_rule, exponents_coincide, group_by_exponent, ExponentKey, FracIndexPair,
    FracSeries, EXPONENT_TOL,
};

/// Residual tolerance the solution must meet at every exact order.
pub const ANSATZ_RESIDUAL_TOL: f64 = 1e-10;

/// Relative size below which a pivot counts as zero.
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct AnsatzSolution {
    pub series: FracSeries,
    /// Coefficients the equation left undetermined, and similar notes.
    pub warnings: Vec<String>,
    pub residual: Residual,
}

/// Image of one unit monomial under one operator term.
#[derive(Debug, Clone, Copy)]
struct Image {
    exponent: f64,
    coefficient: f64,
}

fn images_of(pair: &FracIndexPair, key: ExponentKey, terms: &[ResolvedTerm]) -> Result<Vec<Image>> {
    let mut out = Vec::with_capacity(terms.len());
    'terms: for term in terms {
        let mut current = key;
        let mut factor = term.coeff;
        for _ in 0..term.derivatives {
            match caputo_power_rule(pair, current, ExponentKey::new(1, 0))? {
                Some((next, f)) => {
                    current = next;
                    factor *= f;
                }
                None => continue 'terms,
            }
        }
        out.push(Image {
            exponent: pair.exponent(current + term.shift),
            coefficient: factor,
        });
    }
    Ok(out)
}

/// Sorted, de-duplicated equation exponents with tolerant lookup.
struct EquationIndex {
    exponents: Vec<f64>,
}

impl EquationIndex {
    fn new(exponents: impl IntoIterator<Item = f64>) -> Self {
        let groups = group_by_exponent(exponents.into_iter().map(|e| (e, 0.0)));
        EquationIndex {
            exponents: groups.into_iter().map(|(e, _)| e).collect(),
        }
    }

    fn find(&self, exponent: f64) -> Option<usize> {
        let i = self.exponents.partition_point(|&e| e < exponent);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .find(|&j| j < self.exponents.len() && exponents_coincide(self.exponents[j], exponent))
    }
}

/// Lattice keys with exponent ≤ cutoff, grouped by exponent in ascending
/// order; each group lists its keys in (m, n) order.
fn unknown_groups(pair: &FracIndexPair, cutoff: f64) -> Vec<(f64, Vec<ExponentKey>)> {
    let limit = cutoff + EXPONENT_TOL * cutoff.abs().max(1.0);
    let mut keys = Vec::new();
    let max_n = pair
        .beta()
        .map_or(0, |b| (limit / b).floor().max(0.0) as i32);
    for n in 0..=max_n {
        for m in 0.. {
            let key = ExponentKey::new(m, n);
            if pair.exponent(key) > limit {
                break;
            }
            keys.push(key);
        }
    }
    keys.sort_by(|a, b| {
        pair.exponent(*a)
            .total_cmp(&pair.exponent(*b))
            .then(a.cmp(b))
    });
    let mut groups: Vec<(f64, Vec<ExponentKey>)> = Vec::new();
    for key in keys {
        let e = pair.exponent(key);
        match groups.last_mut() {
            Some((last, members)) if exponents_coincide(*last, e) => members.push(key),
            _ => groups.push((e, vec![key])),
        }
    }
    groups
}

/// Solves `problem` by matching coefficients through exponent `cutoff`.
///
/// The solution is truncated further if the right-hand side does not reach
/// far enough to determine every coefficient. A coefficient the equation
/// leaves free is set to `y0` at exponent 0 and to 0 elsewhere, with a
/// warning. When several lattice keys share an exponent the value is stored
/// under the first key in (m, n) order.
pub fn solve_by_ansatz(problem: &FdeProblem, cutoff: f64) -> Result<AnsatzSolution> {
    let pair = *problem.indices();
    let terms: Vec<ResolvedTerm> = problem
        .resolved_terms()?
        .into_iter()
        .filter(|t| t.coeff != 0.0)
        .collect();
    if !terms.iter().any(|t| t.derivatives > 0) {
        return Err(FracError::Parameter(
            "the equation has no derivative term; it is not a differential equation".into(),
        ));
    }
    let delta = terms
        .iter()
        .map(|t| pair.exponent(t.shift) - t.derivatives as f64 * pair.alpha())
        .fold(f64::INFINITY, f64::min);
    let rhs = problem.rhs();
    let cutoff = cutoff.min(rhs.cutoff() - delta);

    let groups = unknown_groups(&pair, cutoff);
    let images: Vec<Vec<Image>> = groups
        .iter()
        .map(|(_, keys)| images_of(&pair, keys[0], &terms))
        .collect::<Result<_>>()?;
    let rhs_terms = rhs.by_exponent();
    let index = EquationIndex::new(
        images
            .iter()
            .flatten()
            .map(|im| im.exponent)
            .chain(rhs_terms.iter().map(|&(e, _)| e)),
    );
    // Running LHS − rhs per equation, and the largest contribution seen.
    let mut value = vec![0.0; index.exponents.len()];
    let mut scale = vec![0.0f64; index.exponents.len()];
    for &(e, c) in &rhs_terms {
        let i = index.find(e).expect("rhs exponents are indexed");
        value[i] -= c;
        scale[i] = scale[i].max(c.abs());
    }

    let mut warnings = Vec::new();
    let mut solution = FracSeries::zero(pair, cutoff)?;
    for ((mu, keys), imgs) in groups.iter().zip(&images) {
        let target = mu + delta;
        let leading: Vec<f64> = imgs
            .iter()
            .filter(|im| exponents_coincide(im.exponent, target))
            .map(|im| im.coefficient)
            .collect();
        let pivot: f64 = leading.iter().sum();
        let pivot_scale = leading.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        let row = index.find(target);
        let pending = row.map_or(0.0, |i| value[i]);

        let c = if pivot_scale > 0.0 && pivot.abs() > PIVOT_TOL * pivot_scale {
            -pending / pivot
        } else if *mu == 0.0 {
            problem.y0()
        } else {
            warnings.push(format!(
                "coefficient of exponent {mu} is not determined by the equation; set to 0"
            ));
            0.0
        };
        if *mu == 0.0 && c != problem.y0() {
            warnings.push(format!(
                "the equation fixes the constant term to {c}; initial value {} ignored",
                problem.y0()
            ));
        }
        if c != 0.0 || *mu == 0.0 {
            solution.insert(keys[0], c)?;
        }
        for im in imgs {
            let i = index
                .find(im.exponent)
                .expect("image exponents are indexed");
            value[i] += c * im.coefficient;
            scale[i] = scale[i].max((c * im.coefficient).abs());
        }
    }

    // Every equation at or below cutoff + δ is now final.
    let limit = cutoff + delta + EXPONENT_TOL * (cutoff + delta).abs().max(1.0);
    for (i, &e) in index.exponents.iter().enumerate() {
        if e > limit {
            break;
        }
        if value[i].abs() > ANSATZ_RESIDUAL_TOL * scale[i] {
            return Err(FracError::NoSeriesSolution {
                exponent: e,
                mismatch: value[i],
            });
        }
    }

    let residual = assemble_residual(problem, &solution)?;
    if let Some(order) = residual.first_failure(ANSATZ_RESIDUAL_TOL) {
        return Err(FracError::NoSeriesSolution {
            exponent: order.exponent,
            mismatch: order.value,
        });
    }
    Ok(AnsatzSolution {
        series: solution,
        warnings,
        residual,
    })
}
