//! Modified Bessel functions of real and purely imaginary order.
//!
//! `K` is evaluated from `K_ν(y) = ∫₀^∞ e^{-y cosh t} cosh(νt) dt` with the
//! trapezoid rule, which converges geometrically for this analytic, doubly
//! exponentially decaying integrand. For imaginary order `ν = ik` the contour
//! is shifted to `Im t = β` (towards the saddle point) so that the
//! oscillatory cancellation `~e^{-πk/2}` is absorbed into the prefactor.
//!
//! `I_{-ik}` comes from its power series, summed in double-double arithmetic.

use std::f64::consts::{FRAC_PI_2, PI};

use super::ddouble::{CDd, Dd};
use super::gamma::arg_gamma_one_plus_ik;
use crate::error::{Error, Result};
use crate::quad;

/// Order of a modified Bessel function: `ν` (real) or `ik` (imaginary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselOrder {
    Real(f64),
    Imaginary(f64),
}

impl BesselOrder {
    pub fn value(self) -> f64 {
        match self {
            BesselOrder::Real(v) | BesselOrder::Imaginary(v) => v,
        }
    }
}

/// A real number stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogScaled {
    pub log_abs: f64,
    pub sign: f64,
}

impl LogScaled {
    pub fn value(self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

const LOG_CUTOFF: f64 = 46.0; // e^{-46} ≈ 1e-20

fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Trapezoid sum of an even integrand over `[0, tail]`, halving the step
/// until two successive levels agree to ~1e-14.
fn trapezoid_even<F: Fn(f64) -> f64>(f: F, h0: f64, tail: f64) -> f64 {
    let mut h = h0;
    let n = (tail / h).ceil() as usize;
    let mut sum = 0.5 * f(0.0);
    let mut l1 = sum.abs();
    for j in 1..=n {
        let v = f(j as f64 * h);
        sum += v;
        l1 += v.abs();
    }
    let mut estimate = h * sum;
    for level in 0..16 {
        let half = 0.5 * h;
        let m = (tail / h).ceil() as usize;
        let mut odd = 0.0;
        for j in 0..m {
            let v = f((2 * j + 1) as f64 * half);
            odd += v;
            l1 += v.abs();
        }
        sum += odd;
        h = half;
        let next = h * sum;
        let delta = (next - estimate).abs();
        estimate = next;
        if level >= 1 && (delta <= 1e-14 * next.abs() || delta <= 1e-17 * h * l1) {
            break;
        }
    }
    estimate
}

fn check_argument(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::NonPositiveArgument(y));
    }
    Ok(())
}

fn scaled_from(total: f64, shift: f64) -> LogScaled {
    LogScaled { log_abs: total.abs().ln() + shift, sign: if total < 0.0 { -1.0 } else { 1.0 } }
}

/// `∫₀^∞ e^{-y cosh t} cosh(νt) · w(t) dt` with `w = 1` or `cosh t`.
fn real_order_integral(nu: f64, y: f64, with_cosh: bool) -> LogScaled {
    let nu = nu.abs();
    let phi = |t: f64| {
        let base = -y * t.cosh() + ln_cosh(nu * t);
        if with_cosh {
            base + ln_cosh(t)
        } else {
            base
        }
    };
    let peak_t = ((nu + if with_cosh { 1.0 } else { 0.0 }) / y).asinh();
    let shift = phi(0.0).max(phi(peak_t));
    let mut tail = peak_t + 0.5;
    while phi(tail) > shift - LOG_CUTOFF {
        tail += 0.5;
    }
    let total = trapezoid_even(|t| (phi(t) - shift).exp(), 0.4f64.min(tail / 8.0), tail);
    scaled_from(total, shift)
}

/// Same integral for order `ik`, on the shifted contour `t = u + iβ`.
fn imaginary_order_integral(k: f64, y: f64, with_cosh: bool) -> LogScaled {
    let k = k.abs();
    let beta = if k == 0.0 {
        0.0
    } else {
        let margin = 0.5f64.min(1.0 / k);
        (k / y).min(1.0).asin().min(FRAC_PI_2 - margin)
    };
    let (sb, cb) = beta.sin_cos();
    let strip = FRAC_PI_2 - beta;
    let shift = -k * beta - y * cb;
    let need = LOG_CUTOFF + k * strip;
    let tail = (1.0 + need / (y * cb)).acosh() + 0.5;
    let f = |u: f64| {
        let env = (-y * cb * (u.cosh() - 1.0)).exp();
        let theta = k * u - y * sb * u.sinh();
        let (st, ct) = theta.sin_cos();
        if with_cosh {
            env * (u.cosh() * cb * ct - u.sinh() * sb * st)
        } else {
            env * ct
        }
    };
    let total = trapezoid_even(f, 0.5f64.min(strip / 4.0), tail);
    scaled_from(total, shift)
}

/// Log-scaled `K_ν(y)` (real order) or `K_{ik}(y)` (imaginary order).
pub fn bessel_k_scaled(order: BesselOrder, y: f64) -> Result<LogScaled> {
    check_argument(y)?;
    if !order.value().is_finite() {
        return Err(Error::InvalidInput(format!("non-finite Bessel order {}", order.value())));
    }
    Ok(match order {
        BesselOrder::Real(nu) => real_order_integral(nu, y, false),
        BesselOrder::Imaginary(k) => imaginary_order_integral(k, y, false),
    })
}

/// `K_ν(y)` or `K_{ik}(y)`; fails with [`Error::Overflow`] when the value is
/// not representable (use [`bessel_k_scaled`] instead).
pub fn bessel_k(order: BesselOrder, y: f64) -> Result<f64> {
    let v = bessel_k_scaled(order, y)?.value();
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(v)
}

/// Log-scaled derivative `d/dy K(y)`.
pub fn bessel_k_derivative_scaled(order: BesselOrder, y: f64) -> Result<LogScaled> {
    check_argument(y)?;
    let mut s = match order {
        BesselOrder::Real(nu) => real_order_integral(nu, y, true),
        BesselOrder::Imaginary(k) => imaginary_order_integral(k, y, true),
    };
    s.sign = -s.sign;
    Ok(s)
}

/// `d/dx log K(e^x)` evaluated at `y = e^x`, i.e. `y K'(y) / K(y)`.
pub fn bessel_k_log_derivative(order: BesselOrder, y: f64) -> Result<f64> {
    let k = bessel_k_scaled(order, y)?;
    let dk = bessel_k_derivative_scaled(order, y)?;
    Ok(y * k.sign * dk.sign * (dk.log_abs - k.log_abs).exp())
}

/// `I_{-ik}(y)` and its `y`-derivative, split into real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIReIm {
    pub re: f64,
    pub im: f64,
    pub d_re: f64,
    pub d_im: f64,
}

const CONNECTION_TOL: f64 = 1e-10;

/// Real and imaginary parts of `I_{-ik}(y)`.
///
/// Every call verifies the connection identity
/// `Im I_{-ik}(y) = sinh(πk)/π · K_{ik}(y)` against the quadrature for `K`
/// and fails if the relative defect exceeds 1e-10.
pub fn bessel_i_reim(k: f64, y: f64) -> Result<(f64, f64)> {
    let r = bessel_i_reim_with_derivative(k, y)?;
    Ok((r.re, r.im))
}

pub fn bessel_i_reim_with_derivative(k: f64, y: f64) -> Result<BesselIReIm> {
    check_argument(y)?;
    let r = i_series(k, y);
    if k != 0.0 {
        let kval = bessel_k(BesselOrder::Imaginary(k), y)?;
        let expect = (PI * k).sinh() / PI * kval;
        let defect = ((r.im - expect) / expect).abs();
        if !(defect <= CONNECTION_TOL) {
            return Err(Error::ConnectionCheckFailed(defect));
        }
    }
    Ok(r)
}

/// Power series `I_{-ik}(y) = Σ (y/2)^{2m-ik} / (m! Γ(m+1-ik))`, without the
/// post-check.
pub(crate) fn i_series(k: f64, y: f64) -> BesselIReIm {
    // I = |Γ(1-ik)|^{-1} e^{iθ} S, θ = arg Γ(1+ik) - k ln(y/2),
    // S = Σ_m (y²/4)^m / (m! Π_{j≤m} (j - ik)).
    let kk = Dd::new(k);
    let quarter_y2 = Dd::prod(y, y).mul_f64(0.25);
    let mut term = CDd::new(Dd::ONE, Dd::ZERO);
    let mut sum = term;
    // derivative: d/dy (y/2)^{2m-ik} = (2m - ik)/y · (...)
    let mut dsum = CDd::new(Dd::ZERO, -kk);
    let mut peak = 1.0f64;
    for m in 1..2000 {
        let mf = m as f64;
        let den = Dd::new(mf * mf) + kk * kk;
        // multiply by (y²/4) / m · (m + ik) / (m² + k²)
        let factor = quarter_y2 / (Dd::new(mf) * den);
        let t = CDd::new(term.re * Dd::new(mf) - term.im * kk, term.re * kk + term.im * Dd::new(mf));
        term = t.scale(factor);
        sum = sum + term;
        dsum = dsum + term * CDd::new(Dd::new(2.0 * mf), -kk);
        let mag = term.re.hi.abs() + term.im.hi.abs();
        peak = peak.max(mag);
        if mf > 0.5 * y && mag < 1e-34 * peak {
            break;
        }
    }
    let theta = arg_gamma_one_plus_ik(k) - kk * Dd::new(0.5 * y).ln();
    let (s, c) = theta.sin_cos();
    let inv_mod = if k == 0.0 {
        1.0
    } else {
        let pk = PI * k;
        (pk.sinh() / pk).sqrt()
    };
    let re = (c * sum.re - s * sum.im).to_f64() * inv_mod;
    let im = (s * sum.re + c * sum.im).to_f64() * inv_mod;
    let d_re = (c * dsum.re - s * dsum.im).to_f64() * inv_mod / y;
    let d_im = (s * dsum.re + c * dsum.im).to_f64() * inv_mod / y;
    BesselIReIm { re, im, d_re, d_im }
}

/// `Re I_{-ik}(y)` and its derivative from the Schläfli-type representation
/// `Re I_{-ik}(y) = (1/π)∫₀^π e^{y cos θ} cosh(kθ) dθ - (sinh πk/π)∫₀^∞ e^{-y cosh t} sin(kt) dt`.
///
/// Well conditioned for large `y`; used to build the real Green's function.
pub fn bessel_i_re_integral(k: f64, y: f64) -> Result<(f64, f64)> {
    let (v, d) = bessel_i_re_integral_scaled(k, y)?;
    let e = y.exp();
    Ok((v * e, d * e))
}

/// `e^{-y}` times the pair returned by [`bessel_i_re_integral`].
pub fn bessel_i_re_integral_scaled(k: f64, y: f64) -> Result<(f64, f64)> {
    check_argument(y)?;
    let first = |w: fn(f64) -> f64| -> Result<f64> {
        let r = quad::integrate(|th| (y * (th.cos() - 1.0)).exp() * (k * th).cosh() * w(th), 0.0, PI, 1e-16)?;
        Ok(r.value / PI)
    };
    let v1 = first(|_| 1.0)?;
    let d1 = first(f64::cos)?;
    let tail = (1.0 + LOG_CUTOFF / y).acosh() + 0.5;
    let second = |w: fn(f64) -> f64| -> Result<f64> {
        let r = quad::integrate(|t| (-y * (t.cosh() - 1.0)).exp() * (k * t).sin() * w(t), 0.0, tail, 1e-17)?;
        Ok(r.value * (-2.0 * y).exp() * (PI * k).sinh() / PI)
    };
    let v2 = second(|_| 1.0)?;
    let d2 = second(f64::cosh)?;
    Ok((v1 - v2, d1 + d2))
}
