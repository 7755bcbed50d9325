//! Exact identities between `log a(λ)`, the phase integral and `∫σ`.
//!
//! With `σ = ψ'/ψ + Q'/4Q + √Q`, on `[a, b]`
//! `∫σ = [log ψ + ¼ log Q]_a^b + ∫_a^b √Q`, so the integral up to the seed
//! point follows from the path endpoints and the phase integral; beyond the
//! seed point the Liouville–Green series for σ is integrated directly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{auto_seed, integrate_psi1, wkb_sigma_branch, Branch, SolverConfig};
use crate::potential::{phase_integral, phase_integral_limit, Domain, PotentialModel};
use crate::quad;
use crate::specfun::{bessel_k, log_gamma, BesselOrder};
use crate::spectrum::{fredholm_a_log, shoot};

/// `∫σ dx` over the model's domain and an error bar dominated by the
/// truncation of the Liouville–Green series in the tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaIntegral {
    pub value: f64,
    pub error: f64,
}

/// `log a(λ)` at `λ = shift − ν²` from shooting, relative to `λ_ref = 0`.
pub fn log_a_exact(model: PotentialModel, nu: f64, cfg: &SolverConfig) -> Result<f64> {
    let a = fredholm_a_log(model, model.lambda_from_nu(nu), 0.0, cfg)?;
    if a.sign < 0.0 {
        return Err(Error::InvalidInput(format!("a(λ) is negative at nu = {nu}; λ is above the ground state")));
    }
    Ok(a.log_abs)
}

fn log_k0_at_one() -> Result<f64> {
    Ok(bessel_k(BesselOrder::Real(0.0), 1.0)?.ln())
}

/// `log t12(0)` for the cosh model.
pub fn cosh_log_t12_ref(cfg: &SolverConfig) -> Result<f64> {
    let t = shoot(PotentialModel::Cosh, 0.0, cfg)?.t12.ok_or(Error::InvalidInput("no t12 on the half line".into()))?;
    Ok(t.log_abs)
}

/// Explicit part of `log a` for the exp model:
/// `−√(1+ν²) + ν asinh ν − ¼ log(1+ν²) + ½ log(π/2) − log K₀(1)`,
/// so that `log a = a₀ − ∫₀^∞ σ dx` exactly.
pub fn exp_a0(nu: f64) -> Result<f64> {
    let s = 1.0 + nu * nu;
    Ok(-s.sqrt() + nu * nu.asinh() - 0.25 * s.ln() + 0.5 * (0.5 * PI).ln() - log_k0_at_one()?)
}

/// Leading large-`ν` form of `log a`.
///
/// exp: `ν log 2ν − ν − ½ log ν + ½ log(π/2) − log K₀(1)`;
/// cosh: `2ν(K − E) + log π − log t12(0)`;
/// harmonic: the Stirling form of the Gamma-function determinant without its
/// `1/z` series, `z = (1 + ν²)/2`.
pub fn leading_term(model: PotentialModel, nu: f64, cfg: &SolverConfig) -> Result<f64> {
    match model {
        PotentialModel::Cosh => leading_with_reference(model, nu, cosh_log_t12_ref(cfg)?),
        _ => leading_with_reference(model, nu, 0.0),
    }
}

/// [`leading_term`] with `log t12(0)` supplied (ignored off the cosh model).
pub fn leading_with_reference(model: PotentialModel, nu: f64, log_t12_ref: f64) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::NonPositiveArgument(nu));
    }
    match model {
        PotentialModel::Exp => Ok(nu * (2.0 * nu).ln() - nu - 0.5 * nu.ln() + 0.5 * (0.5 * PI).ln() - log_k0_at_one()?),
        PotentialModel::Cosh => Ok(2.0 * phase_integral_limit(model, nu)? + PI.ln() - log_t12_ref),
        PotentialModel::Harmonic => {
            let z = 0.5 * (1.0 + nu * nu);
            let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
            Ok(0.5 * nu * nu * std::f64::consts::LN_2 + 0.5 * PI.ln() - stirling)
        }
    }
}

/// Exact `log a` for the harmonic model from the Gamma function.
pub fn harmonic_log_a(nu: f64) -> Result<f64> {
    let lambda = -nu * nu;
    Ok(-0.5 * lambda * std::f64::consts::LN_2 + 0.5 * PI.ln() - log_gamma(0.5 * (1.0 - lambda))?)
}

fn phase(model: PotentialModel, lambda: f64, x: f64) -> Result<f64> {
    match model.nu_from_lambda(lambda) {
        Ok(nu) => phase_integral(model, nu, x),
        Err(_) => Ok(quad::integrate(|s| (model.q(s) - lambda).sqrt(), 0.0, x, 1e-13)?.value),
    }
}

/// `∫_X^∞ σ` on the given branch and the same integral of the last iterate
/// difference, as an error estimate.
fn lg_tail(model: PotentialModel, lambda: f64, x: f64, m: usize, branch: Branch) -> Result<(f64, f64)> {
    let mut failure = None;
    let mut diff = 0.0f64;
    let mut eval = |xx: f64, jac: f64| match wkb_sigma_branch(model, lambda, xx, m, branch) {
        Ok((s, p)) => {
            diff = diff.max(((s - p) * jac).abs());
            s * jac
        }
        Err(e) => {
            failure = Some(e);
            0.0
        }
    };
    let r = match model {
        PotentialModel::Harmonic => quad::integrate(|s| eval(x / s, x / (s * s)), 1e-6, 1.0, 1e-15)?,
        _ => quad::integrate(|t| eval(t, 1.0), x, x + 40.0, 1e-15)?,
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((r.value, diff))
}

/// `∫σ(x, λ) dx` over `(0, ∞)` or `(−∞, ∞)` from one downward path of the
/// decaying solution.
pub fn sigma_integral_exact(model: PotentialModel, lambda: f64, cfg: &SolverConfig) -> Result<SigmaIntegral> {
    let lowest = model.q(0.0);
    if !(lambda < lowest) {
        return Err(Error::InvalidInput(format!("lambda {lambda} must lie below min q = {lowest}")));
    }
    let seed = auto_seed(model, lambda, &cfg.seed)?;
    let x0 = seed.x0;
    let m = cfg.seed.wkb_order.max(1);
    let (right, right_err) = lg_tail(model, lambda, x0, m, Branch::Decaying)?;
    let phi = phase(model, lambda, x0)?;
    let path_err = cfg.dp5.rtol * phi;
    let big_q = |x: f64| model.q(x) - lambda;
    match model.domain() {
        Domain::HalfLine => {
            let path = integrate_psi1(model, lambda, &seed, &[0.0], cfg)?;
            let inner = seed.log_psi - path.log_psi(0) + 0.25 * (big_q(x0) / big_q(0.0)).ln() + phi;
            Ok(SigmaIntegral { value: inner + right, error: seed.est_error + right_err + path_err })
        }
        Domain::FullLine => {
            let path = integrate_psi1(model, lambda, &seed, &[-x0], cfg)?;
            // left of −x0 the decaying solution is on the growing branch: σ(−s) = −σ_grow(s)
            let (left, left_err) = lg_tail(model, lambda, x0, m, Branch::Growing)?;
            let inner = seed.log_psi - path.log_psi(0) + 2.0 * phi;
            Ok(SigmaIntegral { value: inner + right - left, error: seed.est_error + right_err + left_err + 2.0 * path_err })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_identity_against_bessel() {
        let cfg = SolverConfig::default();
        let nu = 5.0;
        let s = sigma_integral_exact(PotentialModel::Exp, -nu * nu, &cfg).unwrap();
        let log_a = bessel_k(BesselOrder::Real(nu), 1.0).unwrap().ln() - log_k0_at_one().unwrap();
        let defect = log_a - exp_a0(nu).unwrap() + s.value;
        assert!(defect.abs() < 1e-8, "{defect:e} (bar {:e})", s.error);
    }

    #[test]
    fn cosh_identity_closes() {
        let cfg = SolverConfig::default();
        let t0 = cosh_log_t12_ref(&cfg).unwrap();
        for nu in [4.0, 6.0, 10.0] {
            let log_a = log_a_exact(PotentialModel::Cosh, nu, &cfg).unwrap();
            let s = sigma_integral_exact(PotentialModel::Cosh, 2.0 - nu * nu, &cfg).unwrap();
            let defect = log_a - leading_with_reference(PotentialModel::Cosh, nu, t0).unwrap() + s.value;
            assert!(defect.abs() < 1e-8, "nu {nu}: {defect:e} (bar {:e})", s.error);
        }
    }

    #[test]
    fn harmonic_sigma_integral_shrinks_with_nu() {
        let cfg = SolverConfig::default();
        let a = sigma_integral_exact(PotentialModel::Harmonic, -9.0, &cfg).unwrap();
        let b = sigma_integral_exact(PotentialModel::Harmonic, -16.0, &cfg).unwrap();
        assert!(a.value.is_finite() && b.value.is_finite());
        assert!(b.value.abs() < a.value.abs());
    }

    #[test]
    fn exp_leading_is_close_to_bessel_ratio() {
        let cfg = SolverConfig::default();
        let log_a = bessel_k(BesselOrder::Real(10.0), 1.0).unwrap().ln() - log_k0_at_one().unwrap();
        let lead = leading_term(PotentialModel::Exp, 10.0, &cfg).unwrap();
        assert!((log_a - lead).abs() <= 0.05, "{}", log_a - lead);
    }

    #[test]
    fn harmonic_leading_matches_gamma_to_stirling_order() {
        for nu in [3.0, 6.0] {
            let r = harmonic_log_a(nu).unwrap() - leading_with_reference(PotentialModel::Harmonic, nu, 0.0).unwrap();
            let z = 0.5 * (1.0 + nu * nu);
            assert!((r + 1.0 / (12.0 * z)).abs() < 1.0 / (300.0 * z * z * z), "{r}");
        }
    }

    #[test]
    fn rejects_lambda_in_the_well() {
        assert!(sigma_integral_exact(PotentialModel::Cosh, 3.0, &SolverConfig::default()).is_err());
    }
}
