//! Linear equations Σ_t coeff_t·(x−a)^{shift_t}·(D^α)^{k_t} y = rhs.

use serde::{Deserialize, Serialize};

use super::closed_form::example_rhs;
use crate::error::{FracError, Result};
use crate::residual::{Residual, ResidualBuilder};
use crate::series::{ExponentKey, FracIndexPair, FracSeries, SeriesDoc, Side, EXPONENT_TOL};

/// coeff·(x−a)^shift·(D^α)^k with `order` = kα the total Caputo order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorTerm {
    pub shift: f64,
    pub order: f64,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdeProblem {
    indices: FracIndexPair,
    terms: Vec<OperatorTerm>,
    rhs: FracSeries,
    y0: f64,
}

/// A term resolved against the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ResolvedTerm {
    pub shift: ExponentKey,
    pub derivatives: u32,
    pub coeff: f64,
}

/// JSON form:
/// `{"alpha":0.5,"beta":1.0,"base":0.0,"terms":[{"shift":0.5,"order":1.0,"coeff":1.0}],"rhs":{…},"y0":0.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ProblemDoc {
    alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    base: f64,
    terms: Vec<OperatorTerm>,
    rhs: SeriesDoc,
    y0: f64,
}

impl FdeProblem {
    /// Validates that every term sits on the lattice of `rhs` and that the
    /// orders are whole multiples of α.
    pub fn new(terms: Vec<OperatorTerm>, rhs: FracSeries, y0: f64) -> Result<Self> {
        let indices = *rhs.indices();
        if indices.side() != Side::Right {
            return Err(FracError::Incompatible(
                "equations are posed for right series; mirror the data first".into(),
            ));
        }
        if terms.is_empty() {
            return Err(FracError::Parameter(
                "an equation needs at least one operator term".into(),
            ));
        }
        if !y0.is_finite() {
            return Err(FracError::Parameter(format!(
                "initial value {y0} is not finite"
            )));
        }
        let problem = FdeProblem {
            indices,
            terms,
            rhs,
            y0,
        };
        problem.resolved_terms()?;
        Ok(problem)
    }

    /// (x−a)^α (D^α)² y − D^α y = (x−a + (x−a)^α)/(1 − (x−a)) on (α, β = 1).
    pub fn worked_example(alpha: f64, base: f64, y0: f64, cutoff: f64) -> Result<Self> {
        let terms = vec![
            OperatorTerm {
                shift: alpha,
                order: 2.0 * alpha,
                coeff: 1.0,
            },
            OperatorTerm {
                shift: 0.0,
                order: alpha,
                coeff: -1.0,
            },
        ];
        Self::new(terms, example_rhs(alpha, base, cutoff)?, y0)
    }

    /// D^α y + f·y = g with f, g given by their coefficients on (x−a)^{nβ}.
    pub fn linear(
        alpha: f64,
        beta: f64,
        base: f64,
        f_coeffs: &[f64],
        g_coeffs: &[f64],
        y0: f64,
        cutoff: f64,
    ) -> Result<Self> {
        let pair = FracIndexPair::two_index(alpha, beta, base)?;
        let mut terms = vec![OperatorTerm {
            shift: 0.0,
            order: alpha,
            coeff: 1.0,
        }];
        for (n, &f) in f_coeffs.iter().enumerate() {
            if f != 0.0 {
                terms.push(OperatorTerm {
                    shift: n as f64 * beta,
                    order: 0.0,
                    coeff: f,
                });
            }
        }
        let mut rhs = FracSeries::zero(pair, cutoff)?;
        for (n, &g) in g_coeffs.iter().enumerate() {
            let key = ExponentKey::new(0, n as i32);
            if g != 0.0 && pair.exponent(key) <= cutoff + EXPONENT_TOL * cutoff.abs().max(1.0) {
                rhs.insert(key, g)?;
            }
        }
        Self::new(terms, rhs, y0)
    }

    pub fn indices(&self) -> &FracIndexPair {
        &self.indices
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn rhs(&self) -> &FracSeries {
        &self.rhs
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub(crate) fn resolved_terms(&self) -> Result<Vec<ResolvedTerm>> {
        let alpha = self.indices.alpha();
        self.terms
            .iter()
            .map(|t| {
                if !(t.coeff.is_finite() && t.shift.is_finite() && t.order.is_finite()) {
                    return Err(FracError::Parameter(format!(
                        "operator term {t:?} is not finite"
                    )));
                }
                let k = (t.order / alpha).round();
                if k < 0.0 || (t.order - k * alpha).abs() > EXPONENT_TOL * t.order.abs().max(1.0) {
                    return Err(FracError::Lattice {
                        value: t.order,
                        alpha,
                        beta: None,
                    });
                }
                let shift = if t.shift == 0.0 {
                    ExponentKey::ZERO
                } else {
                    self.indices.require_lattice_key(t.shift)?
                };
                Ok(ResolvedTerm {
                    shift,
                    derivatives: k as u32,
                    coeff: t.coeff,
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let doc = ProblemDoc {
            alpha: self.indices.alpha(),
            beta: self.indices.beta(),
            base: self.indices.base(),
            terms: self.terms.clone(),
            rhs: self.rhs.to_doc(),
            y0: self.y0,
        };
        serde_json::to_string_pretty(&doc).expect("problem documents always serialize")
    }

    /// Parses the JSON form. The index pair of `rhs` must match the top-level one.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemDoc = serde_json::from_str(text)?;
        let rhs = FracSeries::try_from(doc.rhs)?;
        let declared = FracIndexPair::new(doc.alpha, doc.beta, doc.base, Side::Right)?;
        if rhs.indices() != &declared {
            return Err(FracError::Incompatible(format!(
                "rhs is on {} but the problem declares {declared}",
                rhs.indices()
            )));
        }
        Self::new(doc.terms, rhs, doc.y0)
    }
}

/// Substitutes `candidate` into the equation and returns LHS − rhs order by
/// order, exact through the smallest component cutoff.
pub fn assemble_residual(problem: &FdeProblem, candidate: &FracSeries) -> Result<Residual> {
    if candidate.indices() != problem.indices() {
        return Err(FracError::Incompatible(format!(
            "candidate on {} does not match the problem's {}",
            candidate.indices(),
            problem.indices()
        )));
    }
    let mut builder = ResidualBuilder::new(*problem.indices());
    for term in problem.resolved_terms()? {
        let mut image = candidate.clone();
        for _ in 0..term.derivatives {
            image = image.caputo_derivative_by_key(ExponentKey::new(1, 0))?;
        }
        builder.push_truncated(image.multiply_by_power_key(term.shift).scale(term.coeff))?;
    }
    builder.push(problem.rhs().scale(-1.0))?;
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fde::{solve_example_equation, solve_linear_fde};
    use crate::special::mittag_leffler_series;

    #[test]
    fn worked_example_residual() {
        for alpha in [0.3, 0.5, 0.7] {
            let problem = FdeProblem::worked_example(alpha, 0.0, 2.0, 5.0).unwrap();
            let f = solve_example_equation(alpha, 0.0, 2.0, 5.0).unwrap();
            let r = assemble_residual(&problem, &f).unwrap();
            assert!(
                r.vanishes(1e-10),
                "alpha={alpha}: {:?}",
                r.first_failure(1e-10)
            );
            assert!((r.exact_through - (5.0 - 2.0 * alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_candidates() {
        let pair = FracIndexPair::single(0.5, 0.0).unwrap();
        let zero_rhs = FracSeries::zero(pair, 6.0).unwrap();
        let d = OperatorTerm {
            shift: 0.0,
            order: 0.5,
            coeff: 1.0,
        };
        let p = FdeProblem::new(vec![d], zero_rhs.clone(), 5.0).unwrap();
        let five = FracSeries::constant(pair, 5.0, 6.0).unwrap();
        assert!(assemble_residual(&p, &five).unwrap().vanishes(0.0));

        let minus_y = OperatorTerm {
            shift: 0.0,
            order: 0.0,
            coeff: -1.0,
        };
        let p = FdeProblem::new(vec![d, minus_y], zero_rhs, 1.0).unwrap();
        let ml = mittag_leffler_series(0.5, 0.0, 6.0).unwrap();
        let r = assemble_residual(&p, &ml).unwrap();
        assert!(r.vanishes(1e-12));
        assert_eq!(r.exact_through, 5.5);
    }

    #[test]
    fn linear_with_zero_f_is_exact() {
        let problem = FdeProblem::linear(0.5, 0.8, 0.0, &[], &[1.0, -2.0, 0.5], 3.0, 4.0).unwrap();
        let y = solve_linear_fde(0.5, 0.8, 0.0, &[], &[1.0, -2.0, 0.5], 3.0, 4.0).unwrap();
        assert!(assemble_residual(&problem, &y).unwrap().vanishes(1e-12));
    }

    #[test]
    fn rejects_off_lattice_terms() {
        let pair = FracIndexPair::single(0.5, 0.0).unwrap();
        let rhs = FracSeries::zero(pair, 2.0).unwrap();
        let bad_order = OperatorTerm {
            shift: 0.0,
            order: 0.75,
            coeff: 1.0,
        };
        assert!(matches!(
            FdeProblem::new(vec![bad_order], rhs.clone(), 0.0),
            Err(FracError::Lattice { .. })
        ));
        let bad_shift = OperatorTerm {
            shift: 0.3,
            order: 0.5,
            coeff: 1.0,
        };
        assert!(FdeProblem::new(vec![bad_shift], rhs, 0.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = FdeProblem::worked_example(0.5, 0.0, 1.0, 3.0).unwrap();
        let q = FdeProblem::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        let text = r#"{"alpha":0.5,"beta":1.0,"base":0.0,
            "terms":[{"shift":0.5,"order":1.0,"coeff":1.0},{"shift":0.0,"order":0.5,"coeff":-1.0}],
            "rhs":{"alpha":0.5,"beta":1.0,"base":0.0,"side":"right","cutoff":2.0,"terms":[{"m":1,"n":0,"c":1.0}]},
            "y0":0.0}"#;
        let p = FdeProblem::from_json(text).unwrap();
        assert_eq!(p.terms().len(), 2);
        let mismatched = text.replacen(
            r#""alpha":0.5,"beta":1.0,"base":0.0,"#,
            r#""alpha":0.25,"beta":1.0,"base":0.0,"#,
            1,
        );
        assert!(matches!(
            FdeProblem::from_json(&mismatched),
            Err(FracError::Incompatible(_))
        ));
    }
}
