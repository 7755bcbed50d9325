//! Gamma-function family: Lanczos log-gamma (real and complex), digamma, and
//! a double-double evaluation of `arg Γ(1 + ik)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::ddouble::Dd;
use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(z)` for complex `z` with `Re z ≥ 0.5`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma_complex(Complex64::new(1.0 - x, 0.0)).re);
    }
    if x > 20.0 {
        return Ok(stirling_ln_gamma(x));
    }
    Ok(ln_gamma_complex(Complex64::new(x, 0.0)).re)
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

// B_{2m} as exact numerator/denominator pairs, m = 1..15.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `arg Γ(1 + ik)` in double-double precision (principal branch of the
/// continuous `Im ln Γ`).
pub(crate) fn arg_gamma_one_plus_ik(k: f64) -> Dd {
    if k == 0.0 {
        return Dd::ZERO;
    }
    let shift = 40usize.max((2.0 * k.abs()) as usize);
    let kk = Dd::new(k);
    // Im ln Γ(1+ik) = Im ln Γ(N+1+ik) - Σ_{j=1}^{N} atan(k/j)
    let mut acc = Dd::ZERO;
    for j in 1..=shift {
        acc = acc - (kk / Dd::new(j as f64)).atan();
    }
    let a = Dd::new((shift + 1) as f64);
    let modsq = a * a + kk * kk;
    let ln_mod = modsq.ln().mul_f64(0.5);
    let arg = (kk / a).atan();
    // Im[(z - 1/2) ln z - z] with z = a + ik
    let mut im = (a - Dd::new(0.5)) * arg + kk * ln_mod - kk;
    // Σ B_{2m} / (2m(2m-1) z^{2m-1}); 1/z = (a - ik)/|z|^2
    let inv_re = a / modsq;
    let inv_im = -(kk / modsq);
    let (mut pr, mut pi) = (inv_re, inv_im);
    let inv2_re = inv_re * inv_re - inv_im * inv_im;
    let inv2_im = (inv_re * inv_im).mul_f64(2.0);
    for (m, &(num, den)) in BERNOULLI.iter().enumerate() {
        let m = (m + 1) as f64;
        let coef = Dd::new(num) / (Dd::new(den) * Dd::new(2.0 * m * (2.0 * m - 1.0)));
        im = im + coef * pi;
        let nr = pr * inv2_re - pi * inv2_im;
        let ni = pr * inv2_im + pi * inv2_re;
        pr = nr;
        pi = ni;
    }
    acc + im
}
