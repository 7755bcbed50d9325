//! Semiclassical eigenvalue counting and tail sums over the spectrum.
//!
//! With `I(μ) = ∫_0^{x_t} √(μ − q) dx` (right half of the well), the
//! Bohr–Sommerfeld index of the level `μ` (counting from 0) is
//! `(2/π) I − 1/2` on the line and `I/π − 3/4` on the half line with a
//! Dirichlet wall at 0.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potential::{Domain, PotentialModel};
use crate::quad;
use crate::specfun::lambert_w;

/// `I(μ) = ∫_0^{x_t} √(μ − q(x)) dx`; zero when `μ ≤ q(0)`.
pub fn action(model: PotentialModel, mu: f64) -> Result<f64> {
    if mu <= model.q(0.0) {
        return Ok(0.0);
    }
    match model {
        PotentialModel::Harmonic => return Ok(PI * mu / 4.0),
        PotentialModel::Exp => {
            let a = mu.sqrt();
            return Ok(a * a.acosh() - (mu - 1.0).sqrt());
        }
        PotentialModel::Cosh => {}
    }
    let xt = model.inverse_q(mu);
    // x = x_t − t² removes the square-root endpoint
    let r = quad::integrate(|t| 2.0 * t * (mu - model.q(xt - t * t)).max(0.0).sqrt(), 0.0, xt.sqrt(), 1e-13 * mu.sqrt())?;
    Ok(r.value)
}

fn density_factor(model: PotentialModel) -> f64 {
    match model.domain() {
        Domain::FullLine => 2.0 / PI,
        Domain::HalfLine => 1.0 / PI,
    }
}

/// Semiclassical index `n(μ)` of the level `μ`, counting from 0.
pub fn bs_index(model: PotentialModel, mu: f64) -> Result<f64> {
    let offset = match model.domain() {
        Domain::FullLine => 0.5,
        Domain::HalfLine => 0.75,
    };
    Ok(density_factor(model) * action(model, mu)? - offset)
}

/// Semiclassical number of eigenvalues below `μ`.
pub fn counting_estimate(model: PotentialModel, mu: f64) -> Result<f64> {
    Ok((bs_index(model, mu)? + 0.5).max(0.0))
}

/// `dN/dμ = c ∫_0^{x_t} dx / (2√(μ − q))`.
pub fn density(model: PotentialModel, mu: f64) -> Result<f64> {
    if mu <= model.q(0.0) {
        return Ok(0.0);
    }
    let inner = match model {
        PotentialModel::Harmonic => PI / 4.0,
        PotentialModel::Exp => {
            let a = mu.sqrt();
            a.acosh() / (2.0 * a)
        }
        PotentialModel::Cosh => {
            let xt = model.inverse_q(mu);
            // x = x_t − t²: dx / √(μ − q) = 2t dt / √(μ − q), finite at t = 0
            let dq_t = model.dq(xt);
            let r = quad::integrate(
                |t| {
                    let g = mu - model.q(xt - t * t);
                    if t < 1e-8 {
                        2.0 / dq_t.sqrt()
                    } else {
                        2.0 * t / g.max(1e-300).sqrt()
                    }
                },
                0.0,
                xt.sqrt(),
                1e-12,
            )?;
            0.5 * r.value
        }
    };
    Ok(density_factor(model) * inner)
}

/// Level `μ` with `bs_index(μ) = n`.
pub fn bs_level(model: PotentialModel, n: f64) -> Result<f64> {
    let lo0 = model.q(0.0);
    let mut lo = lo0;
    let mut hi = lo0 + 4.0;
    while bs_index(model, hi)? < n {
        lo = hi;
        hi = lo0 + 2.0 * (hi - lo0);
        if hi > 1e12 {
            return Err(Error::InvalidInput(format!("level {n} out of range")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bs_index(model, mid)? < n {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Semiclassical `(Σ 1/λ_n, Σ 1/λ_n²)` over levels above the cut `Λ`.
///
/// The sums are `∫_Λ^∞ μ^{−j} dN(μ)`; exchanging the order of integration
/// leaves closed-form inner integrals in `μ`. The first sum diverges for the
/// harmonic model and is reported as infinite.
pub fn tail_sums(model: PotentialModel, cut: f64) -> Result<(f64, f64)> {
    if model == PotentialModel::Harmonic {
        return Ok((f64::INFINITY, density_factor(model) * PI / 4.0 / cut));
    }
    let half = 0.5 * density_factor(model);
    let inner1 = |x: f64| {
        let q = model.q(x);
        let m = cut.max(q);
        2.0 / q.sqrt() * (q / (m - q)).sqrt().atan()
    };
    let inner2 = |x: f64| {
        let q = model.q(x);
        let m = cut.max(q);
        (q / (m - q)).sqrt().atan() / (q * q.sqrt()) - (m - q).sqrt() / (q * m)
    };
    let xc = model.inverse_q(cut);
    let s1 = quad::integrate(inner1, 0.0, xc, 1e-14)?.value + quad::integrate_to_infinity(inner1, xc, 1.0, 1e-14, 1e-17)?.value;
    let s2 = quad::integrate(inner2, 0.0, xc, 1e-16)?.value + quad::integrate_to_infinity(inner2, xc, 1.0, 1e-16, 1e-17)?.value;
    Ok((half * s1, half * s2))
}

/// Leading half-line counting law `(√λ/π) log(2√λ/e)` for `q = e^{2x}`.
pub fn exp_counting_leading(lambda: f64) -> f64 {
    let s = lambda.sqrt();
    s / PI * (2.0 * s / std::f64::consts::E).ln()
}

/// Inverse of [`exp_counting_leading`] at count `n` through Lambert W:
/// `λ = (e/2)² (x / W(x))²` with `x = 2πn/e`.
pub fn exp_level_lambert(n: f64) -> Result<f64> {
    let e = std::f64::consts::E;
    let x = 2.0 * PI * n / e;
    let w = lambert_w(x)?;
    Ok((0.5 * e * x / w).powi(2))
}
