//! Successive approximations for the decaying solution of
//! `ψ'' = (e^{2x} + e^{−2x} − k²) ψ`, treating `e^{−2x}` as a perturbation of
//! the Bessel problem.
//!
//! `f_0 = K_{ik}(e^x)` and `f_n(x) = ∫_x^∞ G(x, y) e^{−2y} f_{n−1}(y) dy` with
//! `G(x, y) = K(x) I(y) − I(x) K(y)`, where `I = Re I_{−ik}(e^x)` is the real
//! second solution normalized by `W[K, I] = K I' − K' I = 1`.
//!
//! In `z = e^x` with `K̃ = e^z K`, `Ĩ = e^{−z} I` and `f̃ = e^z f`:
//! `f̃_n = K̃ B − Ĩ Â`, `B = ∫_z^∞ Ĩ f̃_{n−1} s^{−3} ds`,
//! `Â = ∫_z^∞ K̃ f̃_{n−1} e^{−2(s−z)} s^{−3} ds`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{bessel_i_re_integral_scaled, bessel_k_scaled, BesselOrder};

pub const MAX_PICARD_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    /// Largest node spacing in `z`.
    pub hz: f64,
    /// Integration extends to `max z_eval + z_margin`.
    pub z_margin: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig { hz: 0.02, z_margin: 200.0 }
    }
}

/// Iterates at the evaluation points, stored with the factor `e^{e^x}`
/// removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardResult {
    pub k: f64,
    pub x: Vec<f64>,
    /// `e^{e^x} f_n(x)` for `n = 0..=n_max`.
    pub iterates_scaled: Vec<Vec<f64>>,
    /// `e^{e^x} Σ_{m≤n} f_m(x)`.
    pub partial_sums_scaled: Vec<Vec<f64>>,
    /// Smallest `C` with `|K| ≤ C e^{−e^x} e^{−x/2}` and
    /// `|I| ≤ C e^{e^x} e^{−x/2}` on the integration range.
    pub c_fit: f64,
}

impl PicardResult {
    pub fn n_max(&self) -> usize {
        self.iterates_scaled.len() - 1
    }

    /// `f_n(x_i)`; underflows to zero for large `x`.
    pub fn iterate(&self, n: usize, i: usize) -> f64 {
        self.iterates_scaled[n][i] * (-self.x[i].exp()).exp()
    }

    /// `log |Σ_{m≤n} f_m(x_i)|`.
    pub fn log_partial_sum(&self, n: usize, i: usize) -> f64 {
        self.partial_sums_scaled[n][i].abs().ln() - self.x[i].exp()
    }

    /// Bound `2^n C^{2n+1} / (3^n n!) · e^{−(6n+1)x/2}` on `e^{e^x} |f_n|`.
    pub fn iterate_bound(&self, n: usize, i: usize) -> f64 {
        let c = self.c_fit;
        let mut b = c;
        for m in 1..=n {
            b *= 2.0 * c * c / (3.0 * m as f64);
        }
        b * (-(6.0 * n as f64 + 1.0) * self.x[i] / 2.0).exp()
    }

    /// Smallest `C` with `|Σ_{m≤n} f_m − f_0| ≤ C e^{−e^x} e^{−7x/2}` at the
    /// evaluation points.
    pub fn remainder_constant(&self, n: usize) -> f64 {
        (0..self.x.len())
            .map(|i| (self.partial_sums_scaled[n][i] - self.iterates_scaled[0][i]).abs() * (3.5 * self.x[i]).exp())
            .fold(0.0, f64::max)
    }
}

/// Weights integrating the 6-point Lagrange interpolant over one interval.
fn interval_weights(nodes: &[f64], a: f64, b: f64) -> [f64; 6] {
    const GX: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
    const GW: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];
    let mut w = [0.0; 6];
    let half = 0.5 * (b - a);
    for (gx, gw) in GX.iter().zip(GW) {
        let t = a + half * (gx + 1.0);
        for (m, wm) in w.iter_mut().enumerate() {
            let mut l = 1.0;
            for (j, nj) in nodes.iter().enumerate() {
                if j != m {
                    l *= (t - nj) / (nodes[m] - nj);
                }
            }
            *wm += half * gw * l;
        }
    }
    w
}

/// Nodes with spacing at most `hz`, containing every evaluation point; also
/// returns the node index of each evaluation point.
fn build_nodes(z_eval: &[f64], z_top: f64, hz: f64) -> (Vec<f64>, Vec<usize>) {
    let mut anchors = z_eval.to_vec();
    anchors.push(z_top);
    let mut nodes = vec![anchors[0]];
    let mut idx = vec![0];
    for w in anchors.windows(2) {
        let m = ((w[1] - w[0]) / hz).ceil().max(1.0) as usize;
        for j in 1..m {
            nodes.push(w[0] + (w[1] - w[0]) * j as f64 / m as f64);
        }
        nodes.push(w[1]);
        idx.push(nodes.len() - 1);
    }
    idx.truncate(z_eval.len());
    (nodes, idx)
}

/// Runs `n_max` Picard iterations for `λ = k²` at the points `x_eval`
/// (inside `[0.5, 6]`).
pub fn picard_psi1(k: f64, x_eval: &[f64], n_max: usize, cfg: &PicardConfig) -> Result<PicardResult> {
    if n_max > MAX_PICARD_ORDER {
        return Err(Error::OrderTooHigh { requested: n_max, max: MAX_PICARD_ORDER });
    }
    if x_eval.is_empty() || x_eval.iter().any(|x| !(0.5..=6.0).contains(x)) {
        return Err(Error::InvalidInput("evaluation points must lie in [0.5, 6]".into()));
    }
    let mut xs = x_eval.to_vec();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let z_eval: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
    let z_top = z_eval[z_eval.len() - 1] + cfg.z_margin;
    let (z, eval_idx) = build_nodes(&z_eval, z_top, cfg.hz);
    let n = z.len();

    let pairs: Vec<(f64, f64)> = z
        .par_iter()
        .map(|&zi| -> Result<(f64, f64)> {
            let kl = bessel_k_scaled(BesselOrder::Imaginary(k), zi)?;
            let kt = kl.sign * (kl.log_abs + zi).exp();
            let (it, _) = bessel_i_re_integral_scaled(k, zi)?;
            Ok((kt, it))
        })
        .collect::<Result<_>>()?;
    let kt: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let it: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let c_fit = (0..n).map(|i| kt[i].abs().max(it[i].abs()) * z[i].sqrt()).fold(0.0, f64::max);

    // stencil start and weights per interval [z_i, z_{i+1}]
    let stencils: Vec<(usize, [f64; 6])> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let s = i.saturating_sub(2).min(n.saturating_sub(6));
            (s, interval_weights(&z[s..s + 6], z[i], z[i + 1]))
        })
        .collect();

    let mut f = kt.clone();
    let mut iterates = vec![eval_idx.iter().map(|&i| f[i]).collect::<Vec<_>>()];
    let inv3: Vec<f64> = z.iter().map(|zi| zi.powi(-3)).collect();
    for _ in 1..=n_max {
        let gb: Vec<f64> = (0..n).map(|i| it[i] * f[i] * inv3[i]).collect();
        let ga: Vec<f64> = (0..n).map(|i| kt[i] * f[i] * inv3[i]).collect();
        let mut b = vec![0.0; n];
        let mut a = vec![0.0; n];
        b[n - 1] = power_tail(&z, &gb);
        a[n - 1] = 0.5 * ga[n - 1];
        for i in (0..n - 1).rev() {
            let (s, w) = &stencils[i];
            let mut sb = 0.0;
            let mut sa = 0.0;
            for (m, wm) in w.iter().enumerate() {
                let j = s + m;
                sb += wm * gb[j];
                sa += wm * ga[j] * (-2.0 * (z[j] - z[i])).exp();
            }
            b[i] = b[i + 1] + sb;
            a[i] = (-2.0 * (z[i + 1] - z[i])).exp() * a[i + 1] + sa;
        }
        f = (0..n).map(|i| kt[i] * b[i] - it[i] * a[i]).collect();
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::QuadratureFailure { estimate: f64::NAN, error: f64::INFINITY });
        }
        iterates.push(eval_idx.iter().map(|&i| f[i]).collect());
    }

    let mut partial_sums = Vec::with_capacity(n_max + 1);
    let mut acc = vec![0.0; xs.len()];
    for it_n in &iterates {
        for (a, v) in acc.iter_mut().zip(it_n) {
            *a += v;
        }
        partial_sums.push(acc.clone());
    }
    Ok(PicardResult { k, x: xs, iterates_scaled: iterates, partial_sums_scaled: partial_sums, c_fit })
}

/// `∫_{z_top}^∞ g` assuming `g ∝ z^{−p}` beyond the last node.
fn power_tail(z: &[f64], g: &[f64]) -> f64 {
    let n = z.len();
    let (z1, z2, g1, g2) = (z[n - 11], z[n - 1], g[n - 11], g[n - 1]);
    if g2 == 0.0 || g1 == 0.0 || g1.signum() != g2.signum() {
        return 0.0;
    }
    let p = -(g2 / g1).ln() / (z2 / z1).ln();
    if p <= 1.0 {
        return 0.0;
    }
    g2 * z2 / (p - 1.0)
}
