//! Special functions used by the potential models and the reference solutions.

pub mod bessel;
pub(crate) mod ddouble;
pub mod elliptic;
pub mod gamma;
pub mod lambert;

pub use bessel::{
    bessel_i_re_integral, bessel_i_re_integral_scaled, bessel_i_reim, bessel_i_reim_with_derivative, bessel_k, bessel_k_derivative_scaled,
    bessel_k_log_derivative, bessel_k_scaled, BesselIReIm, BesselOrder, LogScaled,
};
pub use elliptic::{
    carlson_rd, carlson_rf, elliptic_complete, elliptic_complete_from_complement, elliptic_incomplete, incomplete_from_sin_cos2,
    EllipticPair,
};
pub use gamma::{digamma, ln_gamma_complex, log_gamma};
pub use lambert::lambert_w;
