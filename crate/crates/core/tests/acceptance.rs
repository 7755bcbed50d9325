//! Acceptance criteria, one line each. Companion lines (marked `*`) evaluate
//! corrected forms where a literal criterion cannot hold; see the notes in the
//! README.

use std::time::Instant;

use mathieu_trace::ode::{picard_psi1, psi1_path, PicardConfig, SolverConfig};
use mathieu_trace::potential::{phase_integral_limit, PhaseIntegral, PhaseMethod, PotentialModel};
use mathieu_trace::riccati::{cosh_tau_series, exp_sigma_series, riccati_residual, riccati_residual_normalized, RiccatiForm, WeightMode};
use mathieu_trace::spectrum::weyl::{exp_counting_leading, exp_level_lambert};
use mathieu_trace::spectrum::{eigenvalues, fredholm_a, shoot};
use mathieu_trace::traceid::{log_a_exact, log_grid, log_log_slope, report, sigma_integral_exact};
use rand::{Rng, SeedableRng};

const BESSEL_TOL: f64 = 1e-7;
const BESSEL_SECONDS: f64 = 5.0;
const GAMMA_TOL: f64 = 1e-6;
const HARMONIC_EIG_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-6;
const PICARD_C_MAX: f64 = 10.0;
const PICARD_AGREE_TOL: f64 = 1e-7;
const COUNT_TOL: f64 = 2.0;
const LAMBERT_TOL: f64 = 0.05;
const PHASE_TOL: f64 = 1e-9;

struct Line {
    id: &'static str,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn line(id: &'static str, name: &'static str, passed: bool, detail: String) -> Line {
    Line { id, name, passed, detail }
}

fn fmt_slopes(s: &[f64]) -> String {
    s.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", ")
}

/// `K_ν(1) = ∫₀^∞ e^{−cosh t} cosh(νt) dt`.
fn bessel_k_at_one(nu: f64) -> f64 {
    quadrature::double_exponential::integrate(|t: f64| (-t.cosh() + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp()), 0.0, 12.0, 1e-14)
        .integral
}

fn bessel_gate(cfg: &SolverConfig) -> Line {
    let k0 = bessel_k_at_one(0.0);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for nu in [2.0, 5.0, 10.0, 20.0] {
        let a = fredholm_a(PotentialModel::Exp, -nu * nu, 0.0, cfg).expect("exp determinant");
        worst = worst.max((a / (bessel_k_at_one(nu) / k0) - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    line(
        "1",
        "Bessel closed form",
        worst <= BESSEL_TOL && secs <= BESSEL_SECONDS,
        format!("max rel err {worst:.2e} (tol {BESSEL_TOL:.0e}), {secs:.2} s (limit {BESSEL_SECONDS} s)"),
    )
}

fn gamma_gate(cfg: &SolverConfig) -> Line {
    // 2^{−λ/2}√π/Γ((1−λ)/2)
    let oracle = [(-1.0, 2.506_628_274_631_000_7), (-3.0, 5.013_256_549_262_001), (-7.5, 2.878_329_072_377_290_3)];
    let det = oracle
        .iter()
        .map(|&(l, v)| (fredholm_a(PotentialModel::Harmonic, l, 0.0, cfg).expect("harmonic determinant") / v - 1.0).abs())
        .fold(0.0, f64::max);
    let eigs = eigenvalues(PotentialModel::Harmonic, 10, cfg).expect("harmonic eigenvalues");
    let eig = eigs.iter().enumerate().map(|(i, r)| (r.lambda - (2 * i + 1) as f64).abs()).fold(0.0, f64::max);
    line(
        "2",
        "Gamma closed form",
        det <= GAMMA_TOL && eig <= HARMONIC_EIG_TOL,
        format!("det rel err {det:.2e} (tol {GAMMA_TOL:.0e}), eigenvalue err {eig:.2e} (tol {HARMONIC_EIG_TOL:.0e})"),
    )
}

fn identity_gate(cfg: &SolverConfig) -> Vec<Line> {
    let log_t12_ref = shoot(PotentialModel::Cosh, 0.0, cfg).expect("cosh at 0").t12.expect("line model").log_abs;
    let log_pi = std::f64::consts::PI.ln();
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    for nu in [4.0, 6.0, 10.0] {
        let log_a = log_a_exact(PotentialModel::Cosh, nu, cfg).expect("cosh determinant");
        let phase = 2.0 * phase_integral_limit(PotentialModel::Cosh, nu).expect("phase limit");
        let sigma = sigma_integral_exact(PotentialModel::Cosh, 2.0 - nu * nu, cfg).expect("sigma integral").value;
        literal = literal.max((log_a + log_pi + log_t12_ref - phase + sigma).abs());
        corrected = corrected.max((log_a - log_pi + log_t12_ref - phase + sigma).abs());
    }
    vec![
        line(
            "3",
            "exact identity, as stated",
            literal <= IDENTITY_TOL,
            format!("max defect {literal:.3e} (tol {IDENTITY_TOL:.0e}); 2 log pi = {:.6}", 2.0 * log_pi),
        ),
        line(
            "3*",
            "exact identity with -log pi",
            corrected <= IDENTITY_TOL,
            format!("max defect {corrected:.3e} (tol {IDENTITY_TOL:.0e})"),
        ),
    ]
}

fn order_gate(cfg: &SolverConfig) -> Line {
    let cases = [
        (PotentialModel::Exp, (5.0, 80.0, 12), 2),
        (PotentialModel::Cosh, (6.0, 48.0, 8), 1),
        (PotentialModel::Harmonic, (4.0, 40.0, 10), 1),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (model, (a, b, n), order) in cases {
        let grid = log_grid(a, b, n).expect("grid");
        let r = report(model, &grid, order, false, cfg).expect("expansion report");
        for (k, s) in r.residual_orders.iter().enumerate() {
            passed &= *s <= -(k as f64 + 0.5);
        }
        parts.push(format!("{} [{}]", model.name(), fmt_slopes(&r.residual_orders)));
    }
    line("4", "asymptotic orders", passed, format!("slopes {} (bounds -0.5, -1.5, -2.5)", parts.join("; ")))
}

fn picard_gate(cfg: &SolverConfig) -> Line {
    let xs: Vec<f64> = (0..=8).map(|i| 1.0 + 0.25 * i as f64).collect();
    let r = picard_psi1(1.0, &xs, 5, &PicardConfig::default()).expect("picard");
    let c = r.remainder_constant(5);
    let descending: Vec<f64> = xs.iter().rev().copied().collect();
    let p = psi1_path(PotentialModel::Cosh, 1.0, &descending, cfg).expect("shooting path");
    let agree =
        r.x.iter()
            .enumerate()
            .map(|(i, &x)| (r.log_partial_sum(5, i) - p.log_psi(p.index_of(x).expect("path point"))).abs())
            .fold(0.0, f64::max);
    line(
        "5",
        "Picard remainder and agreement",
        c <= PICARD_C_MAX && agree <= PICARD_AGREE_TOL,
        format!("C = {c:.3} (max {PICARD_C_MAX}), log psi difference {agree:.2e} (tol {PICARD_AGREE_TOL:.0e})"),
    )
}

fn counting_gate(cfg: &SolverConfig) -> Line {
    let eigs = eigenvalues(PotentialModel::Exp, 30, cfg).expect("exp eigenvalues");
    let mut worst: f64 = 0.0;
    for r in &eigs {
        let n = r.index as f64;
        let w = exp_counting_leading(r.lambda);
        // the count jumps from n − 1 to n at λ_n
        worst = worst.max((w - n).abs().max((w - (n - 1.0)).abs()));
    }
    let l30 = eigs[29].lambda;
    let lambert = (exp_level_lambert(30.0).expect("lambert") / l30 - 1.0).abs();
    line(
        "6",
        "eigenvalue counting",
        worst <= COUNT_TOL && lambert <= LAMBERT_TOL,
        format!("max count deviation {worst:.3} (tol {COUNT_TOL}), Lambert lambda_30 rel err {lambert:.3} (tol {LAMBERT_TOL})"),
    )
}

/// Worst log–log slope over the sample points of a residual as a function of ν.
fn residual_order(points: &[f64], nus: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
    points
        .iter()
        .map(|&p| {
            let r: Vec<f64> = nus.iter().map(|&nu| f(nu, p)).collect();
            log_log_slope(nus, &r).expect("slope")
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn recursion_gate() -> Vec<Line> {
    let nus = log_grid(20.0, 320.0, 9).expect("grid");
    let t_points = [-1.0, 0.0, 1.0, 2.0];
    let y_points = [0.5, 1.0];
    let mut raw = Vec::new();
    let mut normalized = Vec::new();
    let mut raw_ok = true;
    let mut norm_ok = true;
    let mut record = |n: usize, r: f64, s: f64| {
        raw_ok &= r <= -(n as f64 + 0.5);
        norm_ok &= s <= -(n as f64 + 0.5);
        raw.push(r);
        normalized.push(s);
    };
    for n in 1..=4 {
        let series = exp_sigma_series(n).expect("exp series");
        let r = residual_order(&t_points, &nus, |nu, t| riccati_residual(&series, RiccatiForm::ExpT, nu, t).expect("residual"));
        let s = residual_order(&t_points, &nus, |nu, t| riccati_residual_normalized(&series, RiccatiForm::ExpT, nu, t).expect("residual"));
        record(n, r, s);
    }
    for n in 1..=2 {
        let series = cosh_tau_series(n, WeightMode::formal()).expect("cosh series");
        let r = residual_order(&y_points, &nus, |nu, y| riccati_residual(&series, RiccatiForm::CoshY, nu, y).expect("residual"));
        let s = residual_order(&y_points, &nus, |nu, y| riccati_residual_normalized(&series, RiccatiForm::CoshY, nu, y).expect("residual"));
        record(n, r, s);
    }
    vec![
        line("7", "Riccati recursion, raw residual", raw_ok, format!("exp N=1..4, cosh N=1..2: [{}] (bounds -(N+0.5))", fmt_slopes(&raw))),
        line(
            "7*",
            "Riccati recursion, residual / A",
            norm_ok,
            format!("exp N=1..4, cosh N=1..2: [{}] (bounds -(N+0.5))", fmt_slopes(&normalized)),
        ),
    ]
}

fn phase_gate() -> Line {
    let mut rng = rand::rngs::StdRng::seed_from_u64(20_240_601);
    let mut worst: f64 = 0.0;
    let mut closed = true;
    for _ in 0..20 {
        let nu: f64 = rng.gen_range(2.5..50.0);
        let x: f64 = rng.gen_range(-5.0..5.0);
        let p = PhaseIntegral::new(PotentialModel::Cosh, nu).expect("phase integral");
        closed &= p.method() == PhaseMethod::ClosedForm;
        let oracle = quadrature::double_exponential::integrate(|s: f64| (nu * nu + 4.0 * s.sinh().powi(2)).sqrt(), 0.0, x, 1e-13).integral;
        worst = worst.max((p.value(x).expect("phase value") - oracle).abs() / oracle.abs().max(1.0));
    }
    line(
        "8",
        "cosh phase integral closed form",
        closed && worst <= PHASE_TOL,
        format!("max rel err {worst:.2e} over 20 samples (tol {PHASE_TOL:.0e}), closed form used: {closed}"),
    )
}

fn main() {
    let cfg = SolverConfig::default();
    let mut lines = vec![bessel_gate(&cfg), gamma_gate(&cfg)];
    lines.extend(identity_gate(&cfg));
    lines.push(order_gate(&cfg));
    lines.push(picard_gate(&cfg));
    lines.push(counting_gate(&cfg));
    lines.extend(recursion_gate());
    lines.push(phase_gate());
    let mut failed = 0;
    for l in &lines {
        let tag = if l.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {} ({}): {}", l.id, l.name, l.detail);
        failed += usize::from(!l.passed && !l.id.ends_with('*'));
    }
    let companions_failed = lines.iter().filter(|l| !l.passed && l.id.ends_with('*')).count();
    println!("acceptance: {} criteria failed, {} companion checks failed", failed, companions_failed);
    if failed + companions_failed > 0 {
        std::process::exit(1);
    }
}
