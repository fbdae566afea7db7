use fracseries::fde::{
    assemble_residual, classify, solve_by_ansatz, solve_example_equation, solve_linear_fde,
    Differentiability, FdeProblem, OperatorTerm,
};
use fracseries::hypergeometric::{confluent_residual, frac_confluent_series, HypergeometricSpec};
use fracseries::special::{frac_exp_series, frac_pochhammer, mittag_leffler_series};
use fracseries::{ExponentKey, FracError, FracIndexPair, FracSeries};

#[test]
fn problem_files_round_trip_through_the_solver() {
    let problem = FdeProblem::worked_example(0.4, 0.0, -1.0, 4.0).unwrap();
    let reread = FdeProblem::from_json(&problem.to_json()).unwrap();
    let a = solve_by_ansatz(&problem, 4.0).unwrap();
    let b = solve_by_ansatz(&reread, 4.0).unwrap();
    assert_eq!(a.series, b.series);
    assert!(a.residual.vanishes(1e-10));
}

#[test]
fn ansatz_handles_variable_coefficients_exactly() {
    let (alpha, beta) = (0.5, 0.8);
    let f = [1.0, 0.5];
    let g = [1.0, 2.0];
    let problem = FdeProblem::linear(alpha, beta, 0.0, &f, &g, 1.0, 3.0).unwrap();
    let exact = solve_by_ansatz(&problem, 3.0).unwrap();
    assert!(exact.residual.vanishes(1e-10));

    // The leading-order recurrence agrees until the first omitted cross term.
    let leading = solve_linear_fde(alpha, beta, 0.0, &f, &g, 1.0, 3.0).unwrap();
    let r = assemble_residual(&problem, &leading).unwrap();
    let failure = r.first_failure(1e-10).expect("cross terms are omitted");
    assert!(failure.exponent > alpha);
}

#[test]
fn relaxation_equation_gives_mittag_leffler() {
    // D^α y = -y, y(0) = 2.
    let pair = FracIndexPair::single(0.6, 0.0).unwrap();
    let terms = vec![
        OperatorTerm {
            shift: 0.0,
            order: 0.6,
            coeff: 1.0,
        },
        OperatorTerm {
            shift: 0.0,
            order: 0.0,
            coeff: 1.0,
        },
    ];
    let problem = FdeProblem::new(terms, FracSeries::zero(pair, 6.0).unwrap(), 2.0).unwrap();
    let y = solve_by_ansatz(&problem, 6.0).unwrap().series;
    let ml = mittag_leffler_series(0.6, 0.0, 6.0).unwrap();
    for (k, &(_, c)) in y.by_exponent().iter().enumerate() {
        let expected =
            2.0 * (-1.0f64).powi(k as i32) * ml.coefficient(ExponentKey::new(k as i32, 0));
        assert!((c - expected).abs() <= 1e-12 * expected.abs(), "k = {k}");
    }
}

#[test]
fn worked_solution_differentiability() {
    // First exponent off the α-lattice is 1 + α.
    let f = solve_example_equation(0.7, 0.0, 1.0, 4.0).unwrap();
    let report = classify(&f).unwrap();
    assert_eq!(report.classification, Differentiability::Finite(2));
    // With α = 1/2 every exponent is a multiple of α.
    let f = solve_example_equation(0.5, 0.0, 1.0, 4.0).unwrap();
    assert_eq!(
        classify(&f).unwrap().classification,
        Differentiability::Infinite
    );
}

#[test]
fn exp_series_is_infinitely_differentiable() {
    let s = frac_exp_series(0.5, 0.0, 5.0).unwrap();
    assert_eq!(
        classify(&s).unwrap().classification,
        Differentiability::Infinite
    );
}

#[test]
fn confluent_series_away_from_the_origin() {
    let spec = HypergeometricSpec::new(vec![0.5], vec![1.5], 0.7, 2.0).unwrap();
    let y = spec.series(5.0).unwrap();
    assert_eq!(y.indices().base(), 2.0);
    assert!(confluent_residual(&y, 0.5, 1.5, 0.7)
        .unwrap()
        .vanishes(1e-10));
}

#[test]
fn vanishing_lower_parameter_is_rejected() {
    // (b)^1_k vanishes at k = 3 for b = -2.
    assert!(matches!(
        frac_confluent_series(1.0, -2.0, 1.0, 5.0),
        Err(FracError::Parameter(_))
    ));
    // With k ≤ 2 only, the same parameter is harmless.
    assert!(frac_confluent_series(1.0, -2.0, 1.0, 2.0).is_ok());
}

#[test]
fn pochhammer_reduces_to_rising_factorial() {
    let rising: f64 = (0..6).map(|j| 2.5 + j as f64).product();
    assert!((frac_pochhammer(2.5, 1.0, 6).unwrap() - rising).abs() <= 1e-12 * rising);
}
