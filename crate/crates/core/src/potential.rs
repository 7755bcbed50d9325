//! The three potential models, their spectral-parameter maps and phase
//! integrals `∫₀^x √(q(s) − λ) ds`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::quad;
use crate::specfun::{elliptic_complete_from_complement, incomplete_from_sin_cos2};

/// `Cosh`: `q = 2 cosh 2x` on the line, `λ = 2 − ν²`.
/// `Exp`: `q = e^{2x}` on the half line with a Dirichlet condition at 0, `λ = −ν²`.
/// `Harmonic`: `q = x²` on the line, `λ = −ν²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialModel {
    Cosh,
    Exp,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    FullLine,
    HalfLine,
}

impl PotentialModel {
    pub const ALL: [PotentialModel; 3] = [PotentialModel::Cosh, PotentialModel::Exp, PotentialModel::Harmonic];

    pub fn name(self) -> &'static str {
        match self {
            PotentialModel::Cosh => "cosh",
            PotentialModel::Exp => "exp",
            PotentialModel::Harmonic => "harmonic",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            PotentialModel::Exp => Domain::HalfLine,
            _ => Domain::FullLine,
        }
    }

    /// `λ = shift − ν²`.
    pub fn shift(self) -> f64 {
        match self {
            PotentialModel::Cosh => 2.0,
            _ => 0.0,
        }
    }

    pub fn lambda_from_nu(self, nu: f64) -> f64 {
        self.shift() - nu * nu
    }

    /// `ν = √(shift − λ)`; requires `λ < shift`.
    pub fn nu_from_lambda(self, lambda: f64) -> Result<f64> {
        let d = self.shift() - lambda;
        if !(d > 0.0) {
            return Err(Error::InvalidInput(format!("lambda {lambda} is not below {}", self.shift())));
        }
        Ok(d.sqrt())
    }

    pub fn q(self, x: f64) -> f64 {
        match self {
            PotentialModel::Cosh => 2.0 * (2.0 * x).cosh(),
            PotentialModel::Exp => (2.0 * x).exp(),
            PotentialModel::Harmonic => x * x,
        }
    }

    pub fn dq(self, x: f64) -> f64 {
        match self {
            PotentialModel::Cosh => 4.0 * (2.0 * x).sinh(),
            PotentialModel::Exp => 2.0 * (2.0 * x).exp(),
            PotentialModel::Harmonic => 2.0 * x,
        }
    }

    pub fn d2q(self, x: f64) -> f64 {
        match self {
            PotentialModel::Cosh => 8.0 * (2.0 * x).cosh(),
            PotentialModel::Exp => 4.0 * (2.0 * x).exp(),
            PotentialModel::Harmonic => 2.0,
        }
    }

    /// Smallest `x ≥ 0` with `q(x) ≥ level`.
    pub fn inverse_q(self, level: f64) -> f64 {
        match self {
            PotentialModel::Cosh => (0.5 * level.max(2.0)).acosh() / 2.0,
            PotentialModel::Exp => 0.5 * level.max(1.0).ln(),
            PotentialModel::Harmonic => level.max(0.0).sqrt(),
        }
    }
}

impl fmt::Display for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosh" => Ok(PotentialModel::Cosh),
            "exp" => Ok(PotentialModel::Exp),
            "harmonic" => Ok(PotentialModel::Harmonic),
            other => Err(Error::InvalidInput(format!("unknown model '{other}' (valid: cosh, exp, harmonic)"))),
        }
    }
}

/// Jet of `q` at `x`.
pub fn q_jet(model: PotentialModel, x: f64, order: usize) -> Result<Jet> {
    let t = Jet::variable(x, order)?;
    Ok(match model {
        PotentialModel::Cosh => t.scale(2.0).cosh().scale(2.0),
        PotentialModel::Exp => t.scale(2.0).exp(),
        PotentialModel::Harmonic => &t * &t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    ClosedForm,
    Quadrature,
}

/// `x ↦ ∫₀^x √(q(s) + ν² − shift) ds` for one model and `ν`.
#[derive(Debug, Clone)]
pub struct PhaseIntegral {
    model: PotentialModel,
    nu: f64,
    method: PhaseMethod,
    diagnostic: Option<String>,
}

const VALIDATION_POINTS: [f64; 5] = [0.2, 0.7, 1.5, 2.8, 4.5];
const VALIDATION_TOL: f64 = 1e-9;

impl PhaseIntegral {
    /// Builds the integral, checking the closed form against quadrature at
    /// five points and falling back to quadrature if it disagrees or is not
    /// available (`ν ≤ 2` for the cosh model).
    pub fn new(model: PotentialModel, nu: f64) -> Result<PhaseIntegral> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::NonPositiveArgument(nu));
        }
        let mut p = PhaseIntegral { model, nu, method: PhaseMethod::ClosedForm, diagnostic: None };
        for &x in &VALIDATION_POINTS {
            let closed = match p.closed_form(x) {
                Ok(v) => v,
                Err(e) => {
                    p.fall_back(format!("closed form unavailable: {e}"));
                    return Ok(p);
                }
            };
            let reference = p.by_quadrature(x)?;
            let rel = ((closed - reference) / reference).abs();
            if !(rel <= VALIDATION_TOL) {
                p.fall_back(format!("closed form off by {rel:e} at x = {x}"));
                return Ok(p);
            }
        }
        Ok(p)
    }

    fn fall_back(&mut self, why: String) {
        self.method = PhaseMethod::Quadrature;
        self.diagnostic = Some(why);
    }

    pub fn model(&self) -> PotentialModel {
        self.model
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn method(&self) -> PhaseMethod {
        self.method
    }

    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }

    pub fn integrand(&self, x: f64) -> f64 {
        integrand(self.model, self.nu, x)
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        match self.method {
            PhaseMethod::ClosedForm => self.closed_form(x),
            PhaseMethod::Quadrature => self.by_quadrature(x),
        }
    }

    fn closed_form(&self, x: f64) -> Result<f64> {
        let nu = self.nu;
        Ok(match self.model {
            PotentialModel::Exp => {
                let anti = |s: f64| {
                    let w = ((2.0 * s).exp() + nu * nu).sqrt();
                    w - nu * (nu * (-s).exp()).asinh()
                };
                anti(x) - anti(0.0)
            }
            PotentialModel::Harmonic => 0.5 * (x * (x * x + nu * nu).sqrt() + nu * nu * (x / nu).asinh()),
            PotentialModel::Cosh => {
                let (k, _) = cosh_modulus(nu)?;
                let th = x.tanh();
                let sech2 = 1.0 / (x.cosh() * x.cosh());
                let p = incomplete_from_sin_cos2(th, sech2, k);
                let boundary = th * (nu * nu + 4.0 * x.sinh().powi(2)).sqrt();
                nu * (p.first - p.second) + boundary
            }
        })
    }

    fn by_quadrature(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        // split at the scale length of the integrand
        let scale = match self.model {
            PotentialModel::Harmonic => self.nu.max(1.0),
            _ => 0.5,
        };
        let pieces = ((x.abs() / scale).ceil() as usize).clamp(1, 400);
        let h = x / pieces as f64;
        let mut total = 0.0;
        for i in 0..pieces {
            let a = i as f64 * h;
            let r = quad::integrate(|s| self.integrand(s), a, a + h, 1e-12)?;
            total += r.value;
        }
        Ok(total)
    }
}

fn integrand(model: PotentialModel, nu: f64, x: f64) -> f64 {
    match model {
        PotentialModel::Cosh => (nu * nu + 4.0 * x.sinh().powi(2)).sqrt(),
        _ => (model.q(x) + nu * nu).sqrt(),
    }
}

/// `(k, k')` with `k² = (ν² − 4)/ν²`, `k' = 2/ν`.
pub fn cosh_modulus(nu: f64) -> Result<(f64, f64)> {
    if !(nu > 2.0) {
        let k2 = (nu * nu - 4.0) / (nu * nu);
        return Err(Error::ModulusOutOfRange(k2.signum() * k2.abs().sqrt()));
    }
    let kp = 2.0 / nu;
    Ok((((nu - 2.0) * (nu + 2.0)).sqrt() / nu, kp))
}

pub fn phase_integral(model: PotentialModel, nu: f64, x: f64) -> Result<f64> {
    PhaseIntegral::new(model, nu)?.value(x)
}

/// Finite part of the phase integral as `x → ∞`:
/// cosh: `ν(K(k) − E(k))`; exp: `∫₀^∞ (√(e^{2x} + ν²) − e^x) dx`.
pub fn phase_integral_limit(model: PotentialModel, nu: f64) -> Result<f64> {
    match model {
        PotentialModel::Cosh => {
            let (_, kp) = cosh_modulus(nu)?;
            let p = elliptic_complete_from_complement(kp)?;
            Ok(nu * (p.first - p.second))
        }
        PotentialModel::Exp => Ok(1.0 - (nu * nu + 1.0).sqrt() + nu * nu.asinh()),
        PotentialModel::Harmonic => Err(Error::InvalidInput("the harmonic phase integral has no finite x -> infinity part".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_jets() {
        assert_eq!(q_jet(PotentialModel::Cosh, 0.0, 2).unwrap().coeffs(), &[2.0, 0.0, 4.0]);
        let e = q_jet(PotentialModel::Exp, 0.0, 3).unwrap();
        for (c, want) in e.coeffs().iter().zip([1.0, 2.0, 2.0, 4.0 / 3.0]) {
            assert!((c - want).abs() < 1e-15);
        }
        assert_eq!(q_jet(PotentialModel::Harmonic, 3.0, 3).unwrap().coeffs(), &[9.0, 6.0, 1.0, 0.0]);
    }

    #[test]
    fn derivatives_consistent_with_jets() {
        for m in PotentialModel::ALL {
            for &x in &[-1.2, 0.0, 0.8] {
                let j = q_jet(m, x, 2).unwrap();
                assert!((j.coeff(0) - m.q(x)).abs() < 1e-14 * m.q(x).abs().max(1.0));
                assert!((j.coeff(1) - m.dq(x)).abs() < 1e-13 * m.dq(x).abs().max(1.0));
                assert!((2.0 * j.coeff(2) - m.d2q(x)).abs() < 1e-13 * m.d2q(x).abs().max(1.0));
            }
        }
    }

    #[test]
    fn parse_and_maps() {
        assert_eq!("cosh".parse::<PotentialModel>().unwrap(), PotentialModel::Cosh);
        assert!("bogus".parse::<PotentialModel>().is_err());
        assert_eq!(PotentialModel::Cosh.lambda_from_nu(3.0), -7.0);
        assert_eq!(PotentialModel::Exp.nu_from_lambda(-25.0).unwrap(), 5.0);
        assert!(PotentialModel::Cosh.nu_from_lambda(3.0).is_err());
    }

    #[test]
    fn empty_integral() {
        for m in PotentialModel::ALL {
            assert_eq!(phase_integral(m, 3.0, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_forms_are_selected() {
        for m in PotentialModel::ALL {
            let p = PhaseIntegral::new(m, 3.0).unwrap();
            assert_eq!(p.method(), PhaseMethod::ClosedForm, "{m}: {:?}", p.diagnostic());
        }
    }

    #[test]
    fn cosh_below_two_falls_back() {
        let p = PhaseIntegral::new(PotentialModel::Cosh, 1.5).unwrap();
        assert_eq!(p.method(), PhaseMethod::Quadrature);
        assert!(p.diagnostic().is_some());
        assert!(p.value(1.0).unwrap() > 1.5);
    }

    #[test]
    fn cosh_limit_near_two() {
        let v = phase_integral_limit(PotentialModel::Cosh, 2.0 + 1e-9).unwrap();
        assert!(v.abs() < 1e-8);
        assert!(phase_integral_limit(PotentialModel::Cosh, 2.0).is_err());
    }
}
