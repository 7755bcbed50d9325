//! Trace identities: leading terms, the exact σ-integral route, expansion
//! coefficients and residual-order reports.

pub mod coeffs;
pub mod fit;
pub mod identity;
pub mod report;

pub use coeffs::{
    exp_alpha, expansion_data, fit_expansion, fit_powers, series_coeffs, CoeffRoute, Coefficient, ExpansionFit, SeriesCoeffs,
    MAX_FIT_ORDER, MAX_RECURSION_ORDER,
};
pub use fit::{least_squares, log_log_slope, LinearFit, MAX_GRAM_CONDITION};
pub use identity::{
    cosh_log_t12_ref, exp_a0, harmonic_log_a, leading_term, leading_with_reference, log_a_exact, sigma_integral_exact, SigmaIntegral,
};
pub use report::{log_grid, report, ExpansionReport, MIN_GRID_POINTS, REPORT_SCHEMA};
