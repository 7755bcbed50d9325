use mathieu_trace::ode::SolverConfig;
use mathieu_trace::potential::PotentialModel;
use mathieu_trace::spectrum::{eigenvalues, fredholm_a_log, product_crosscheck, Parity};

#[test]
fn cosh_product_agrees_with_shooting_within_its_error_bar() {
    let cfg = SolverConfig::default();
    let eigs = eigenvalues(PotentialModel::Cosh, 40, &cfg).unwrap();
    let p = product_crosscheck(PotentialModel::Cosh, -10.0, &eigs, 2).unwrap();
    let s = fredholm_a_log(PotentialModel::Cosh, -10.0, 0.0, &cfg).unwrap();
    assert_eq!(p.sign, s.sign);
    assert!((p.log_value - s.log_abs).abs() <= p.log_error, "{} vs {} ± {}", p.log_value, s.log_abs, p.log_error);
}

#[test]
fn eigenvalues_are_stable_under_tighter_tolerance() {
    let loose = SolverConfig::default();
    let tight = SolverConfig::default().with_rtol(0.5e-11);
    for model in [PotentialModel::Cosh, PotentialModel::Exp] {
        let a = eigenvalues(model, 10, &loose).unwrap();
        let b = eigenvalues(model, 10, &tight).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.lambda - y.lambda).abs() <= 1e-8 * y.lambda.abs().max(1.0), "{model:?}: {} vs {}", x.lambda, y.lambda);
        }
    }
}

#[test]
fn determinant_vanishes_between_sign_changes_at_eigenvalues() {
    let cfg = SolverConfig::default();
    let eigs = eigenvalues(PotentialModel::Cosh, 3, &cfg).unwrap();
    assert_eq!(eigs[0].parity, Parity::Even);
    let below = fredholm_a_log(PotentialModel::Cosh, eigs[0].lambda - 0.1, 0.0, &cfg).unwrap();
    let above = fredholm_a_log(PotentialModel::Cosh, eigs[0].lambda + 0.1, 0.0, &cfg).unwrap();
    assert_eq!(below.sign, 1.0);
    assert_eq!(above.sign, -1.0);
}

#[test]
fn exp_determinant_is_bessel_ratio_at_nu_five() {
    // K₅(1)/K₀(1)
    let a = fredholm_a_log(PotentialModel::Exp, -25.0, 0.0, &SolverConfig::default()).unwrap();
    assert!((a.value() / 857.338_807_005_003_6 - 1.0).abs() < 1e-9);
}
