//! Runtime check suites for the `verify` command.

use std::f64::consts::PI;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::Result;
use crate::ode::{picard_psi1, psi1_path, PicardConfig, SolverConfig};
use crate::potential::PotentialModel;
use crate::specfun::{bessel_i_reim, bessel_k, elliptic_complete, elliptic_incomplete, lambert_w, log_gamma, BesselOrder};
use crate::spectrum::{fredholm_a, shoot, t12_wronskian};
use crate::traceid::{cosh_log_t12_ref, exp_a0, leading_with_reference, log_a_exact, sigma_integral_exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Specfun,
    Identities,
    Picard,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed defect.
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(suite: &'static str, name: &'static str, value: Result<f64>, tolerance: f64) -> Check {
        let value = value.unwrap_or(f64::INFINITY);
        Check { suite, name, passed: value <= tolerance, value, tolerance }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}/{}: {:.3e} (tol {:.1e})", self.suite, self.name, self.value, self.tolerance)
    }
}

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for v in it {
        m = m.max(v?.abs());
    }
    Ok(m)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn specfun() -> Vec<Check> {
    let s = "specfun";
    let legendre = worst((1..=20).map(|i| {
        let k = i as f64 / 21.0;
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let a = elliptic_complete(k)?;
        let b = elliptic_complete(kp)?;
        Ok(a.second * b.first + b.second * a.first - a.first * b.first - 0.5 * PI)
    }));
    let limit = worst([0.2, 0.5, 0.9].map(|k| {
        let c = elliptic_complete(k)?;
        let i = elliptic_incomplete(0.5 * PI - 1e-10, k)?;
        Ok(rel(i.first, c.first).max(rel(i.second, c.second)))
    }));
    let half =
        worst([0.5, 1.0, 2.0, 5.0].map(|y: f64| Ok(rel(bessel_k(BesselOrder::Real(0.5), y)?, (PI / (2.0 * y)).sqrt() * (-y).exp()))));
    let connection = worst([0.5, 1.0, 2.0].map(|y| bessel_i_reim(1.0, y).map(|_| 0.0)));
    let lambert = worst([0.5, 10.0, 1e3].map(|x: f64| {
        let w = lambert_w(x)?;
        Ok(rel(w * w.exp(), x))
    }));
    vec![
        Check::new(s, "legendre-relation", legendre, 1e-13),
        Check::new(s, "incomplete-to-complete", limit, 1e-8),
        Check::new(s, "k-half-closed-form", half, 1e-12),
        Check::new(s, "connection-identity", connection, 0.0),
        Check::new(s, "lambert-w", lambert, 1e-14),
    ]
}

fn identities(cfg: &SolverConfig) -> Vec<Check> {
    let s = "identities";
    let bessel = worst([2.0, 5.0, 10.0, 20.0].map(|nu: f64| {
        let a = fredholm_a(PotentialModel::Exp, -nu * nu, 0.0, cfg)?;
        Ok(rel(a, bessel_k(BesselOrder::Real(nu), 1.0)? / bessel_k(BesselOrder::Real(0.0), 1.0)?))
    }));
    let gamma = worst([-1.0, -3.0, -7.5].map(|l: f64| {
        let a = fredholm_a(PotentialModel::Harmonic, l, 0.0, cfg)?;
        Ok(rel(a, (-0.5 * l * std::f64::consts::LN_2 + 0.5 * PI.ln() - log_gamma(0.5 * (1.0 - l))?).exp()))
    }));
    let cosh = cosh_log_t12_ref(cfg).and_then(|t0| {
        worst([4.0, 6.0, 10.0].map(|nu: f64| {
            let log_a = log_a_exact(PotentialModel::Cosh, nu, cfg)?;
            let s = sigma_integral_exact(PotentialModel::Cosh, 2.0 - nu * nu, cfg)?;
            Ok(log_a - leading_with_reference(PotentialModel::Cosh, nu, t0)? + s.value)
        }))
    });
    let exp = worst([5.0, 15.0].map(|nu: f64| {
        let s = sigma_integral_exact(PotentialModel::Exp, -nu * nu, cfg)?;
        Ok(log_a_exact(PotentialModel::Exp, nu, cfg)? - exp_a0(nu)? + s.value)
    }));
    let wronskian = (|| {
        let t0 = shoot(PotentialModel::Cosh, -5.0, cfg)?.t12.map(|t| t.log_abs).unwrap_or(f64::NAN);
        worst([0.5, 1.0].map(|m| Ok(t12_wronskian(PotentialModel::Cosh, -5.0, m, cfg)?.log_abs - t0)))
    })();
    vec![
        Check::new(s, "bessel-ratio", bessel, 1e-7),
        Check::new(s, "gamma-formula", gamma, 1e-6),
        Check::new(s, "cosh-sigma-identity", cosh, 1e-6),
        Check::new(s, "exp-sigma-identity", exp, 1e-6),
        Check::new(s, "wronskian-constancy", wronskian, 1e-8),
    ]
}

fn picard(cfg: &SolverConfig) -> Vec<Check> {
    let s = "picard";
    let xs = [3.0, 2.5, 2.0, 1.5, 1.0];
    let run = picard_psi1(1.0, &xs, 5, &PicardConfig::default());
    let bounds = run.as_ref().map_err(Clone::clone).map(|r| {
        let mut excess: f64 = 0.0;
        for n in 1..=5 {
            for i in 0..xs.len() {
                excess = excess.max(r.iterates_scaled[n][i].abs() / r.iterate_bound(n, i));
            }
        }
        excess
    });
    let remainder = run.as_ref().map_err(Clone::clone).map(|r| r.remainder_constant(5));
    let agreement = run.as_ref().map_err(Clone::clone).and_then(|r| {
        let p = psi1_path(PotentialModel::Cosh, 1.0, &xs, cfg)?;
        worst(r.x.iter().enumerate().map(|(i, &x)| Ok(r.log_partial_sum(5, i) - p.log_psi(p.index_of(x)?))))
    });
    vec![
        Check::new(s, "iterate-bounds", bounds, 1.0),
        Check::new(s, "remainder-constant", remainder, 10.0),
        Check::new(s, "agrees-with-shooting", agreement, 1e-7),
    ]
}

pub fn run_suite(suite: Suite, cfg: &SolverConfig) -> Vec<Check> {
    match suite {
        Suite::Specfun => specfun(),
        Suite::Identities => identities(cfg),
        Suite::Picard => picard(cfg),
        Suite::All => {
            let mut v = specfun();
            v.extend(identities(cfg));
            v.extend(picard(cfg));
            v
        }
    }
}
