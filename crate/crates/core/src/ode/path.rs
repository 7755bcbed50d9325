//! Downward integration of the decaying solution from a Liouville–Green seed.
//!
//! Where `Q = q − λ` is comfortably positive the state is the Riccati pair
//! `(u, log ψ)` with `u' = Q − u²`, which never forms `ψ` itself. Below the
//! level `Q = switch_q` (only reached when λ approaches the spectrum) the
//! state becomes the linear pair `(p, p')` with `ψ = e^s p`, rescaled at every
//! target so that zeros of `ψ` are crossed without trouble.

use crate::error::{Error, Result};
use crate::ode::dp5::{Dp5, Dp5Options};
use crate::ode::seed::{auto_seed, lg_seed, LgSeed, SeedConfig};
use crate::potential::{Domain, PotentialModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dp5: Dp5Options,
    pub seed: SeedConfig,
    /// Switch to the linear form below this value of `Q`.
    pub switch_q: f64,
    /// Longest stretch of linear integration between rescalings.
    pub chunk: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { dp5: Dp5Options::default(), seed: SeedConfig::default(), switch_q: 1.0, chunk: 0.5 }
    }
}

impl SolverConfig {
    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.dp5.rtol = rtol;
        self.dp5.atol = rtol * 1e-3;
        self
    }
}

/// `ψ(x_i) = e^{log_scale_i} p_i`, `ψ'(x_i) = e^{log_scale_i} dp_i` on a
/// descending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath {
    pub model: PotentialModel,
    pub lambda: f64,
    pub seed: LgSeed,
    pub grid: Vec<f64>,
    pub log_scale: Vec<f64>,
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
}

impl SolutionPath {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn index_of(&self, x: f64) -> Result<usize> {
        let tol = 1e-12 * x.abs().max(1.0);
        self.grid.iter().position(|g| (g - x).abs() <= tol).ok_or(Error::OffGrid(x))
    }

    /// `log |ψ|` at grid index `i`.
    pub fn log_psi(&self, i: usize) -> f64 {
        self.log_scale[i] + self.p[i].abs().ln()
    }

    pub fn sign(&self, i: usize) -> f64 {
        self.p[i].signum()
    }

    /// `ψ'/ψ` at grid index `i`.
    pub fn dlog_psi(&self, i: usize) -> f64 {
        self.dp[i] / self.p[i]
    }

    pub fn log_psi_all(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.log_psi(i)).collect()
    }

    pub fn dlog_psi_all(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.dlog_psi(i)).collect()
    }
}

fn lowest_q(model: PotentialModel, a: f64, b: f64) -> f64 {
    match model.domain() {
        Domain::HalfLine => model.q(a),
        Domain::FullLine => model.q(0f64.clamp(a, b)),
    }
}

/// Integrates from `seed.x0` down through the descending `targets`.
pub fn integrate_psi1(model: PotentialModel, lambda: f64, seed: &LgSeed, targets: &[f64], cfg: &SolverConfig) -> Result<SolutionPath> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("empty target grid".into()));
    }
    if targets.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("targets must be descending".into()));
    }
    let x0 = seed.x0;
    let x_min = *targets.last().unwrap();
    if targets[0] > x0 || x_min < -x0 || (model.domain() == Domain::HalfLine && x_min < 0.0) {
        return Err(Error::InvalidInput(format!(
            "targets must lie in [{}, {x0}]",
            if model.domain() == Domain::HalfLine { 0.0 } else { -x0 }
        )));
    }
    let switch_x =
        if lowest_q(model, x_min, x0) - lambda < cfg.switch_q { Some(model.inverse_q(lambda + cfg.switch_q).min(x0)) } else { None };

    let n = targets.len();
    let mut path = SolutionPath {
        model,
        lambda,
        seed: *seed,
        grid: targets.to_vec(),
        log_scale: Vec::with_capacity(n),
        p: Vec::with_capacity(n),
        dp: Vec::with_capacity(n),
    };

    let mut riccati = |x: f64, y: &[f64; 2]| [model.q(x) - lambda - y[0] * y[0], y[0]];
    let mut linear = |x: f64, y: &[f64; 2]| [y[1], (model.q(x) - lambda) * y[0]];

    let h0 = 0.01 / (model.q(x0) - lambda).sqrt().max(1.0);
    let mut ric = Dp5::new(x0, [seed.dlog_psi, seed.log_psi], h0, cfg.dp5);
    let mut idx = 0;
    let riccati_end = switch_x.unwrap_or(f64::NEG_INFINITY);
    while idx < n && targets[idx] >= riccati_end {
        ric.advance_to(&mut riccati, targets[idx])?;
        path.log_scale.push(ric.y[1]);
        path.p.push(1.0);
        path.dp.push(ric.y[0]);
        idx += 1;
    }
    if idx == n {
        return Ok(path);
    }
    ric.advance_to(&mut riccati, riccati_end)?;

    let mut scale = ric.y[1];
    let mut lin = Dp5::new(ric.x, [1.0, ric.y[0]], h0, cfg.dp5);
    lin.opts.atol = 0.0;
    while idx < n {
        let target = targets[idx];
        while lin.x - target > cfg.chunk {
            lin.advance_to(&mut linear, lin.x - cfg.chunk)?;
            scale += rescale(&mut lin.y);
        }
        lin.advance_to(&mut linear, target)?;
        scale += rescale(&mut lin.y);
        path.log_scale.push(scale);
        path.p.push(lin.y[0]);
        path.dp.push(lin.y[1]);
        idx += 1;
    }
    Ok(path)
}

fn rescale(y: &mut [f64; 2]) -> f64 {
    let m = y[0].abs().max(y[1].abs());
    if m == 0.0 || !m.is_finite() {
        return 0.0;
    }
    y[0] /= m;
    y[1] /= m;
    m.ln()
}

/// Seeds automatically (never below the first target) and integrates.
pub fn psi1_path(model: PotentialModel, lambda: f64, targets: &[f64], cfg: &SolverConfig) -> Result<SolutionPath> {
    let mut seed = auto_seed(model, lambda, &cfg.seed)?;
    if let Some(&top) = targets.first() {
        if top > seed.x0 {
            seed = lg_seed(model, lambda, top, &cfg.seed)?;
        }
    }
    integrate_psi1(model, lambda, &seed, targets, cfg)
}

/// `σ = ψ'/ψ + Q'/4Q + √Q` at a grid point of the path.
pub fn sigma_of_x(path: &SolutionPath, x: f64) -> Result<f64> {
    let i = path.index_of(x)?;
    let x = path.grid[i];
    let big_q = path.model.q(x) - path.lambda;
    if big_q <= 0.0 {
        return Err(Error::EvaluationAtSingularPoint(x));
    }
    Ok(path.dlog_psi(i) + path.model.dq(x) / (4.0 * big_q) + big_q.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k, bessel_k_log_derivative, BesselOrder};

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exp_matches_bessel_ratio() {
        let cfg = SolverConfig::default();
        let p = psi1_path(PotentialModel::Exp, -9.0, &[0.0], &cfg).unwrap();
        let p0 = psi1_path(PotentialModel::Exp, 0.0, &[0.0], &cfg).unwrap();
        let ratio = (p.log_psi(0) - p0.log_psi(0)).exp();
        let k3 = bessel_k(BesselOrder::Real(3.0), 1.0).unwrap();
        let k0 = bessel_k(BesselOrder::Real(0.0), 1.0).unwrap();
        assert!((ratio / (k3 / k0) - 1.0).abs() < 1e-8, "{ratio} vs {}", k3 / k0);
        // the normalization is that of K itself
        assert!((p.log_psi(0) - k3.ln()).abs() < 1e-8);
    }

    #[test]
    fn exp_sigma_matches_bessel() {
        let cfg = SolverConfig::default();
        let lambda = -100.0;
        let p = psi1_path(PotentialModel::Exp, lambda, &[1.0, 0.0], &cfg).unwrap();
        let s = sigma_of_x(&p, 0.0).unwrap();
        let dl = bessel_k_log_derivative(BesselOrder::Real(10.0), 1.0).unwrap();
        let big_q = 1.0 - lambda;
        let expect = dl + 2.0 / (4.0 * big_q) + big_q.sqrt();
        assert!((s - expect).abs() < 1e-8, "{s} vs {expect}");
        assert!(matches!(sigma_of_x(&p, 0.5), Err(Error::OffGrid(_))));
    }

    #[test]
    fn sigma_vanishes_at_seed() {
        let cfg = SolverConfig::default();
        let seed = auto_seed(PotentialModel::Cosh, -50.0, &cfg.seed).unwrap();
        let p = integrate_psi1(PotentialModel::Cosh, -50.0, &seed, &[seed.x0, 0.0], &cfg).unwrap();
        let s = sigma_of_x(&p, seed.x0).unwrap();
        let (w, _) = crate::ode::seed::wkb_sigma(PotentialModel::Cosh, -50.0, seed.x0, cfg.seed.wkb_order).unwrap();
        assert!((s - w).abs() < 1e-12 * (1.0 + s.abs()), "{s} {w}");
        let far = lg_seed(PotentialModel::Cosh, -50.0, seed.x0 + 1.0, &cfg.seed).unwrap();
        let pf = integrate_psi1(PotentialModel::Cosh, -50.0, &far, &[far.x0], &cfg).unwrap();
        let sf = sigma_of_x(&pf, far.x0).unwrap();
        assert!(sf.abs() < 0.5 * s.abs(), "{s} {sf}");
    }

    #[test]
    fn cosh_ground_truth_and_tolerance() {
        let coarse = SolverConfig::default().with_rtol(1e-9);
        let fine = SolverConfig::default().with_rtol(1e-13);
        let a = psi1_path(PotentialModel::Cosh, 0.0, &[0.0], &coarse).unwrap();
        let b = psi1_path(PotentialModel::Cosh, 0.0, &[0.0], &fine).unwrap();
        assert!(a.p[0] * a.log_scale[0].exp() > 0.0);
        assert!(a.dlog_psi(0).is_finite());
        assert!((a.log_psi(0) - b.log_psi(0)).abs() <= 1e-8);
    }

    #[test]
    fn riccati_form_holds_on_grid() {
        let cfg = SolverConfig::default();
        let xs = grid(3.0, 0.0, 301);
        let p = psi1_path(PotentialModel::Harmonic, -4.0, &xs, &cfg).unwrap();
        for i in 1..xs.len() - 1 {
            let h = xs[i + 1] - xs[i - 1];
            let du = (p.dlog_psi(i + 1) - p.dlog_psi(i - 1)) / h;
            let u = p.dlog_psi(i);
            let rhs = xs[i] * xs[i] + 4.0 - u * u;
            assert!((du - rhs).abs() < 1e-3 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn linear_segment_crosses_nodes() {
        // λ = 7 is the fourth harmonic eigenvalue, ψ has three zeros on x > −∞
        let cfg = SolverConfig::default();
        let xs = grid(2.5, -2.5, 101);
        let p = psi1_path(PotentialModel::Harmonic, 7.0, &xs, &cfg).unwrap();
        let changes = p.p.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        assert_eq!(changes, 3);
        // odd eigenfunction: ψ(−x) = −ψ(x)
        let i = p.index_of(2.0).unwrap();
        let j = p.index_of(-2.0).unwrap();
        assert!((p.log_psi(i) - p.log_psi(j)).abs() < 1e-7);
        assert!(p.sign(i) == -p.sign(j));
    }

    #[test]
    fn rejects_bad_targets() {
        let cfg = SolverConfig::default();
        assert!(psi1_path(PotentialModel::Exp, -1.0, &[1.0, 2.0], &cfg).is_err());
        assert!(psi1_path(PotentialModel::Exp, -1.0, &[1.0, -0.5], &cfg).is_err());
    }
}
