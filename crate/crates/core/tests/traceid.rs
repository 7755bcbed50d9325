use mathieu_trace::ode::SolverConfig;
use mathieu_trace::potential::PotentialModel;
use mathieu_trace::traceid::{
    expansion_data, fit_expansion, harmonic_log_a, leading_term, log_grid, report, series_coeffs, sigma_integral_exact, CoeffRoute,
};

#[test]
fn harmonic_leading_term_matches_stirling() {
    // log a − leading ≈ −1/(12z) + …, z = (1+ν²)/2
    let cfg = SolverConfig::default();
    for nu in [10.0f64, 20.0] {
        let z = 0.5 * (1.0 + nu * nu);
        let r = harmonic_log_a(nu).unwrap() - leading_term(PotentialModel::Harmonic, nu, &cfg).unwrap();
        let stirling = -1.0 / (12.0 * z);
        assert!((r / stirling - 1.0).abs() < 0.05, "nu={nu}: {r} vs {stirling}");
    }
}

#[test]
fn cosh_first_coefficient_is_stable_under_grid_perturbation() {
    let cfg = SolverConfig::default();
    let fit_c1 = |grid: &[f64]| {
        let (log_a, leading) = expansion_data(PotentialModel::Cosh, grid, &cfg).unwrap();
        let r: Vec<f64> = log_a.iter().zip(&leading).map(|(a, l)| a - l).collect();
        fit_expansion(grid, &r, 3, 0).unwrap().powers[0].value
    };
    let base = fit_c1(&[8.0, 12.0, 16.0, 24.0, 32.0]);
    let moved = fit_c1(&[8.5, 12.5, 17.0, 25.0, 33.0]);
    assert!((base / moved - 1.0).abs() < 5e-4, "{base} vs {moved}");
    assert!((base - 1.0 / 6.0).abs() < 5e-3, "{base}");
}

#[test]
fn cosh_report_with_log_basis_carries_log_amplitudes() {
    let grid = log_grid(6.0, 48.0, 8).unwrap();
    let r = report(PotentialModel::Cosh, &grid, 1, true, &SolverConfig::default()).unwrap();
    let logs = r.log_term_amplitudes.as_ref().unwrap();
    assert_eq!(logs.len(), 1);
    assert!(logs[0].value.abs() < 1e-2);
    assert!(r.failed_orders().is_empty());
}

#[test]
fn exp_fit_agrees_with_recursion() {
    let cfg = SolverConfig::default();
    let grid = log_grid(5.0, 80.0, 12).unwrap();
    let fit = series_coeffs(PotentialModel::Exp, 2, CoeffRoute::Fit { nu_grid: &grid, log_basis: false }, &cfg).unwrap();
    let rec = series_coeffs(PotentialModel::Exp, 2, CoeffRoute::Recursion { nu: 40.0 }, &cfg).unwrap();
    let (f, r) = (fit.c[0], rec.c[0]);
    assert!((f.value - r.value).abs() <= 3.0 * (f.uncertainty + r.uncertainty) + 1e-3, "{f:?} vs {r:?}");
}

#[test]
fn sigma_integral_is_small_at_large_nu() {
    // |∫σ| ≤ 1.5 · 2|c₁|/ν with c₁ = 1/6
    let nu: f64 = 80.0;
    let s = sigma_integral_exact(PotentialModel::Cosh, 2.0 - nu * nu, &SolverConfig::default()).unwrap();
    assert!(s.value.abs() <= 1.5 * 2.0 / (6.0 * nu), "{}", s.value);
}
