//! Liouville–Green seeding of the decaying solution far out in the
//! classically forbidden region.
//!
//! With σ = ψ'/ψ + Q'/4Q + √Q, the exact decaying solution normalized as
//! `ψ ~ A(x)` at infinity satisfies
//! `log ψ(x0) = log A(x0) + ∫_{x0}^∞ (D' − σ) dx`, `D' = (log A)' + Q'/4Q + √Q`.
//! σ is approximated by iterating the Riccati equation in jets
//! (`σ_{j+1} = (σ_j' + σ_j² − (Q'/2Q) σ_j − V) / 2√Q`).
//!
//! Normalizations `A(x)`:
//! exp and cosh: `√(π/2) e^{−x/2} e^{−e^x}` (the large-`x` form of `K(e^x)`);
//! harmonic: `x^{(λ−1)/2} e^{−x²/2}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potential::{q_jet, PotentialModel};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedConfig {
    /// Seed where `q(x0) ≥ max(q_factor·|λ|, q_floor)`.
    pub q_factor: f64,
    pub q_floor: f64,
    /// Number of Riccati iterations for σ.
    pub wkb_order: usize,
    /// Target for `est_error` when the seed point is chosen automatically.
    pub max_error: f64,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig { q_factor: 10.0, q_floor: 1e4, wkb_order: 6, max_error: 1e-10 }
    }
}

impl SeedConfig {
    pub fn threshold(&self, lambda: f64) -> f64 {
        (self.q_factor * lambda.abs()).max(self.q_floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgSeed {
    pub x0: f64,
    pub log_psi: f64,
    pub dlog_psi: f64,
    pub est_error: f64,
}

/// Branch of the Liouville–Green pair `Q^{−1/4} e^{∓∫√Q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Decaying,
    Growing,
}

/// σ from `m` Riccati iterations at `x`, together with the previous iterate.
pub fn wkb_sigma(model: PotentialModel, lambda: f64, x: f64, m: usize) -> Result<(f64, f64)> {
    wkb_sigma_branch(model, lambda, x, m, Branch::Decaying)
}

/// Correction to `ψ'/ψ = ∓√Q − Q'/4Q` on either branch; for the growing
/// branch the iteration divides by `−2√Q`.
pub fn wkb_sigma_branch(model: PotentialModel, lambda: f64, x: f64, m: usize, branch: Branch) -> Result<(f64, f64)> {
    let order = m + 1;
    let qj = q_jet(model, x, order + 2)?;
    let big_q = qj.add_scalar(-lambda);
    let dq = big_q.derivative()?;
    let d2q = dq.derivative()?;
    let big_q = big_q.truncate(order);
    let dq = dq.truncate(order);
    let d2q = d2q.truncate(order);
    if !(big_q.value() > 0.0) {
        return Err(Error::EvaluationAtSingularPoint(x));
    }
    let sign = match branch {
        Branch::Decaying => 2.0,
        Branch::Growing => -2.0,
    };
    let two_sqrt = big_q.sqrt()?.scale(sign);
    let b = &dq / &big_q.scale(2.0);
    let ratio = &dq / &big_q;
    let v = &(&d2q / &big_q.scale(4.0)) - &(&ratio * &ratio).scale(5.0 / 16.0);
    let mut sigma = Jet::constant(x, order, 0.0)?;
    let mut prev = 0.0;
    for _ in 0..m {
        prev = sigma.value();
        let o = sigma.order().saturating_sub(1);
        let ds = if sigma.order() == 0 { Jet::constant(x, 0, 0.0)? } else { sigma.derivative()? };
        let s = sigma.truncate(o);
        let num = &(&(&ds + &(&s * &s)) - &(&b.truncate(o) * &s)) - &v.truncate(o);
        sigma = &num / &two_sqrt.truncate(o);
    }
    Ok((sigma.value(), prev))
}

fn log_amplitude(model: PotentialModel, lambda: f64, x: f64) -> f64 {
    match model {
        PotentialModel::Exp | PotentialModel::Cosh => 0.5 * (0.5 * PI).ln() - 0.5 * x - x.exp(),
        PotentialModel::Harmonic => 0.5 * (lambda - 1.0) * x.ln() - 0.5 * x * x,
    }
}

/// `D' = (log A)' + Q'/4Q + √Q`, written without cancellation.
fn d_prime(model: PotentialModel, lambda: f64, x: f64) -> f64 {
    let big_q = model.q(x) - lambda;
    let sq = big_q.sqrt();
    match model {
        PotentialModel::Exp => {
            let e = x.exp();
            -lambda / (sq + e) + lambda / (2.0 * big_q)
        }
        PotentialModel::Cosh => {
            let e = x.exp();
            let em2 = (-2.0 * x).exp();
            (em2 - lambda) / (sq + e) + (lambda - 2.0 * em2) / (2.0 * big_q)
        }
        PotentialModel::Harmonic => lambda / (2.0 * x) - lambda / (sq + x) + lambda / (2.0 * x * big_q),
    }
}

/// Seeds at a given `x0`; fails if `q(x0)` is below the configured threshold.
pub fn lg_seed(model: PotentialModel, lambda: f64, x0: f64, cfg: &SeedConfig) -> Result<LgSeed> {
    let threshold = cfg.threshold(lambda);
    let q = model.q(x0);
    if !(q >= threshold) || x0 <= 0.0 {
        return Err(Error::SeedPointTooSmall { x0, q, threshold });
    }
    let m = cfg.wkb_order.max(1);
    let (s0, s_prev) = wkb_sigma(model, lambda, x0, m)?;
    let big_q = q - lambda;
    let dlog_psi = -big_q.sqrt() - model.dq(x0) / (4.0 * big_q) + s0;

    let (tail, tail_diff) = match model {
        PotentialModel::Exp | PotentialModel::Cosh => tail_integrals(model, lambda, m, x0, x0 + 40.0, |x| (x, 1.0))?,
        PotentialModel::Harmonic => {
            // x = x0 / s maps [x0, x0·1e6] onto [1e-6, 1]
            tail_integrals(model, lambda, m, 1e-6, 1.0, |s| (x0 / s, x0 / (s * s)))?
        }
    };
    let log_psi = log_amplitude(model, lambda, x0) + tail;
    let est_error = tail_diff.abs().max((s0 - s_prev).abs());
    Ok(LgSeed { x0, log_psi, dlog_psi, est_error })
}

/// `∫ (D' − σ_m) dx` and `∫ (σ_m − σ_{m−1}) dx` over the seed tail, with the
/// variable map `t ↦ (x, dx/dt)`.
fn tail_integrals<M: Fn(f64) -> (f64, f64)>(model: PotentialModel, lambda: f64, m: usize, a: f64, b: f64, map: M) -> Result<(f64, f64)> {
    let mut failure = None;
    let mut diffs = Vec::new();
    let r = quad::integrate(
        |t| {
            let (x, jac) = map(t);
            match wkb_sigma(model, lambda, x, m) {
                Ok((s, p)) => {
                    diffs.push((t, (s - p) * jac));
                    (d_prime(model, lambda, x) - s) * jac
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        a,
        b,
        1e-14 * (1.0 + lambda.abs()).sqrt(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    // crude bound on the iterate difference: largest sampled value times span
    let bound = diffs.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max) * (b - a).abs().min(1.0);
    Ok((r.value, bound))
}

/// Seeds at the smallest admissible `x0` whose error estimate meets
/// `cfg.max_error`.
pub fn auto_seed(model: PotentialModel, lambda: f64, cfg: &SeedConfig) -> Result<LgSeed> {
    let mut x0 = model.inverse_q(cfg.threshold(lambda)) * (1.0 + 1e-12) + 1e-12;
    let mut best = lg_seed(model, lambda, x0, cfg)?;
    for _ in 0..40 {
        if best.est_error <= cfg.max_error {
            return Ok(best);
        }
        x0 = match model {
            PotentialModel::Harmonic => x0 * 1.1,
            _ => x0 + 0.25,
        };
        best = lg_seed(model, lambda, x0, cfg)?;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k_log_derivative, bessel_k_scaled, BesselOrder};

    #[test]
    fn exp_seed_matches_bessel() {
        let cfg = SeedConfig::default();
        let s = lg_seed(PotentialModel::Exp, -25.0, 5.0, &cfg).unwrap();
        let y = 5f64.exp();
        let expect = bessel_k_log_derivative(BesselOrder::Real(5.0), y).unwrap();
        assert!(((s.dlog_psi - expect) / expect).abs() < 1e-12);
        let lk = bessel_k_scaled(BesselOrder::Real(5.0), y).unwrap().log_abs;
        assert!((s.log_psi - lk).abs() < 1e-11, "{} vs {lk}", s.log_psi);
    }

    #[test]
    fn harmonic_seed_is_gaussian() {
        let s = lg_seed(PotentialModel::Harmonic, -1.0, 100.0, &SeedConfig::default()).unwrap();
        assert!((s.dlog_psi + 100.0).abs() < 0.02);
        // λ = −1: ψ = x^{-1} e^{-x²/2} exactly up to the series tail
        let expect = -100f64.ln() - 5000.0;
        assert!((s.log_psi - expect).abs() < 1e-4);
    }

    #[test]
    fn harmonic_ground_state_is_exact() {
        // λ = 1: ψ = e^{-x²/2}
        let s = lg_seed(PotentialModel::Harmonic, 1.0, 100.0, &SeedConfig::default()).unwrap();
        assert!((s.dlog_psi + 100.0).abs() < 1e-12);
        assert!((s.log_psi + 5000.0).abs() < 1e-10);
    }

    #[test]
    fn too_small_seed_point() {
        let r = lg_seed(PotentialModel::Exp, -25.0, 2.0, &SeedConfig::default());
        assert!(matches!(r, Err(Error::SeedPointTooSmall { .. })));
    }

    #[test]
    fn auto_seed_meets_error_target() {
        for m in PotentialModel::ALL {
            let s = auto_seed(m, -4.0, &SeedConfig::default()).unwrap();
            assert!(s.est_error <= 1e-10, "{m}: {}", s.est_error);
        }
    }
}
