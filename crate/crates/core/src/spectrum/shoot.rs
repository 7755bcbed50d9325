//! Values of the decaying solution at the origin and the quantities built
//! from them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{psi1_path, SolutionPath, SolverConfig};
use crate::potential::{Domain, PotentialModel};
use crate::specfun::LogScaled;

/// Which boundary value at the origin vanishes on an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `ψ'(0) = 0` on the line.
    Even,
    /// `ψ(0) = 0` on the line.
    Odd,
    /// Dirichlet condition on the half line.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    pub lambda: f64,
    pub psi0: LogScaled,
    pub dpsi0: LogScaled,
    /// `t12 = −2 ψ(0) ψ'(0)`; line models only.
    pub t12: Option<LogScaled>,
    /// Determinant ratio against a reference point, when requested.
    pub a: Option<LogScaled>,
    /// `ψ(0)` and `ψ'(0)/ω` divided by their Euclidean norm, with
    /// `ω = √(|q(0) − λ| + 1)`; smooth in λ and scale free.
    pub angle: (f64, f64),
}

fn log_scaled(log_abs: f64, sign: f64) -> LogScaled {
    LogScaled { log_abs, sign: if sign < 0.0 { -1.0 } else { 1.0 } }
}

impl ShootResult {
    fn from_path(path: &SolutionPath, i: usize) -> ShootResult {
        let s = path.log_scale[i];
        let (p, dp) = (path.p[i], path.dp[i]);
        let lambda = path.lambda;
        let model = path.model;
        let psi0 = log_scaled(s + p.abs().ln(), p);
        let dpsi0 = log_scaled(s + dp.abs().ln(), dp);
        let t12 = match model.domain() {
            Domain::FullLine => Some(log_scaled(std::f64::consts::LN_2 + psi0.log_abs + dpsi0.log_abs, -psi0.sign * dpsi0.sign)),
            Domain::HalfLine => None,
        };
        let omega = ((model.q(0.0) - lambda).abs() + 1.0).sqrt();
        let norm = p.hypot(dp / omega);
        ShootResult { lambda, psi0, dpsi0, t12, a: None, angle: (p / norm, dp / omega / norm) }
    }

    /// Value whose zeros in λ are the eigenvalues of the given parity.
    pub fn node_value(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Even => self.angle.1,
            Parity::Odd | Parity::None => self.angle.0,
        }
    }

    /// The quantity whose ratio defines the determinant: `ψ(0)` on the half
    /// line, `t12` on the line.
    pub fn determinant_numerator(&self) -> LogScaled {
        self.t12.unwrap_or(self.psi0)
    }

    /// Distance from the nearest eigenvalue condition, on the angle scale.
    fn eigen_defect(&self, model: PotentialModel) -> f64 {
        match model.domain() {
            Domain::FullLine => self.angle.0.abs().min(self.angle.1.abs()),
            Domain::HalfLine => self.angle.0.abs(),
        }
    }
}

/// One downward integration to the origin.
pub fn shoot(model: PotentialModel, lambda: f64, cfg: &SolverConfig) -> Result<ShootResult> {
    let path = psi1_path(model, lambda, &[0.0], cfg)?;
    Ok(ShootResult::from_path(&path, 0))
}

/// Shoots at every λ concurrently; results keep the input order.
pub fn shoot_many(model: PotentialModel, lambdas: &[f64], cfg: &SolverConfig) -> Vec<Result<ShootResult>> {
    lambdas.par_iter().map(|&l| shoot(model, l, cfg)).collect()
}

/// `W[ψ₁(x), ψ₁(−x)]` evaluated at the matching point `m ≥ 0`; equals `t12`
/// for even potentials.
pub fn t12_wronskian(model: PotentialModel, lambda: f64, m: f64, cfg: &SolverConfig) -> Result<LogScaled> {
    if model.domain() == Domain::HalfLine {
        return Err(Error::InvalidInput(format!("{model} lives on the half line")));
    }
    let m = m.abs();
    let targets: Vec<f64> = if m == 0.0 { vec![0.0] } else { vec![m, -m] };
    let path = psi1_path(model, lambda, &targets, cfg)?;
    let j = targets.len() - 1;
    // W = ψ(m)·(−ψ'(−m)) − ψ'(m)·ψ(−m)
    let w = -(path.p[0] * path.dp[j] + path.dp[0] * path.p[j]);
    Ok(log_scaled(path.log_scale[0] + path.log_scale[j] + w.abs().ln(), w))
}

/// `log a(λ)` with sign: `ψ(0,λ)/ψ(0,λ_ref)` on the half line and
/// `t12(λ)/t12(λ_ref)` on the line.
pub fn fredholm_a_log(model: PotentialModel, lambda: f64, lambda_ref: f64, cfg: &SolverConfig) -> Result<LogScaled> {
    let reference = shoot(model, lambda_ref, cfg)?;
    if reference.eigen_defect(model) < 1e-9 {
        return Err(Error::ReferenceAtEigenvalue(lambda_ref));
    }
    let here = if lambda == lambda_ref { reference } else { shoot(model, lambda, cfg)? };
    Ok(ratio(here.determinant_numerator(), reference.determinant_numerator()))
}

fn ratio(num: LogScaled, den: LogScaled) -> LogScaled {
    LogScaled { log_abs: num.log_abs - den.log_abs, sign: num.sign * den.sign }
}

/// `a(λ)` as a plain number; [`Error::Overflow`] when not representable.
pub fn fredholm_a(model: PotentialModel, lambda: f64, lambda_ref: f64, cfg: &SolverConfig) -> Result<f64> {
    let v = fredholm_a_log(model, lambda, lambda_ref, cfg)?.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// Shoots at every λ and attaches `a(λ)` relative to `λ_ref`.
pub fn shoot_with_reference(model: PotentialModel, lambdas: &[f64], lambda_ref: f64, cfg: &SolverConfig) -> Result<Vec<ShootResult>> {
    let reference = shoot(model, lambda_ref, cfg)?;
    if reference.eigen_defect(model) < 1e-9 {
        return Err(Error::ReferenceAtEigenvalue(lambda_ref));
    }
    let den = reference.determinant_numerator();
    shoot_many(model, lambdas, cfg)
        .into_iter()
        .map(|r| {
            r.map(|mut s| {
                s.a = Some(ratio(s.determinant_numerator(), den));
                s
            })
        })
        .collect()
}
