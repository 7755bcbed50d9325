//! Coefficients `c_n` of `log a − leading ≃ Σ c_n ν^{−n}`.
//!
//! exp: `log a = a₀ − ∫₀^∞ σ dx` with `σ = Σ c_n(t) ν^{−n}`, `t = x − log ν`,
//! so `c_n = α_n − ∫_{−log ν}^∞ c_n(t) dt` where `α_n` expands `a₀ − leading`.
//! cosh: `log a − leading = −∫σ dx = −∫ τ(y) dy / w(y)` with
//! `w = dy/dx = √(tanh² y + 4ν^{−2} sech² y)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::ode::SolverConfig;
use crate::potential::PotentialModel;
use crate::quad;
use crate::riccati::{cosh_tau_series, exp_sigma_series, WeightMode};
use crate::traceid::fit::{least_squares, LinearFit};
use crate::traceid::identity::{cosh_log_t12_ref, leading_with_reference, log_a_exact};

pub const MAX_RECURSION_ORDER: usize = 6;
pub const MAX_FIT_ORDER: usize = 4;
/// Absolute tolerance for coefficient integrals.
const COEFF_TOL: f64 = 1e-11;
/// Integrands are dropped once below this fraction of their peak.
const TAIL_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: f64,
    pub uncertainty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoeffRoute<'a> {
    /// exp: `α_n − ∫_{−log ν}^∞ c_n(t) dt`; cosh: `−∫ τ_n(y; ν) dy / w` with
    /// the weight exact at `ν`.
    Recursion { nu: f64 },
    /// cosh: formal `τ_n` against the `1/ν`-expanded `1/w` outside `|y| < δ`;
    /// the window is estimated with the exact weight at `ν` and reported as
    /// uncertainty.
    Formal { nu: f64, delta: f64 },
    /// Least squares of `log a − leading` over a `ν` grid.
    Fit { nu_grid: &'a [f64], log_basis: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    /// `c_1 .. c_N`.
    pub c: Vec<Coefficient>,
    /// Fitted constant (fit route only).
    pub constant: Option<Coefficient>,
    /// Amplitudes of `ν^{−n} log ν`, `n = 1..N` (fit route with log basis).
    pub log_amplitudes: Option<Vec<Coefficient>>,
    pub gram_condition: Option<f64>,
}

/// `α_1 .. α_n` in `a₀ − leading = Σ α_k ν^{−k}` for the exp model.
///
/// With `ε = ν^{−2}`: `a₀ − leading = ν g(ε) − ¼ log(1 + ε)`,
/// `g(ε) = 1 − √(1+ε) + log((1 + √(1+ε))/2)`.
pub fn exp_alpha(n: usize) -> Result<Vec<f64>> {
    let order = n / 2 + 1;
    let eps = Jet::variable(0.0, order)?;
    let s = eps.add_scalar(1.0).sqrt()?;
    let g = &(-&s).add_scalar(1.0) + &s.add_scalar(1.0).scale(0.5).ln()?;
    Ok((1..=n)
        .map(|k| {
            let m = k.div_ceil(2);
            if k % 2 == 1 {
                g.coeff(m)
            } else {
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                -0.25 * sign / m as f64
            }
        })
        .collect())
}

fn check_nu(nu: f64, model: PotentialModel) -> Result<()> {
    let min = if model == PotentialModel::Cosh { 2.0 } else { 0.0 };
    if !(nu > min) || !nu.is_finite() {
        return Err(Error::InvalidInput(format!("nu = {nu} must exceed {min} for {model}")));
    }
    Ok(())
}

/// `∫_a^∞ f` with the shared tolerance and cutoff.
fn tail_integral<F: FnMut(f64) -> f64>(f: F, a: f64) -> Result<Coefficient> {
    let r = quad::integrate_to_infinity(f, a, 1.0, COEFF_TOL, TAIL_CUTOFF)?;
    Ok(Coefficient { value: r.value, uncertainty: r.error })
}

/// Runs `f`, converting the first evaluation error into a failure.
fn guarded<F: FnMut(f64) -> Result<f64>>(mut f: F) -> (impl FnMut(f64) -> f64, std::rc::Rc<std::cell::RefCell<Option<Error>>>) {
    let slot = std::rc::Rc::new(std::cell::RefCell::new(None));
    let s = slot.clone();
    (
        move |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                s.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        slot,
    )
}

fn finish(c: Coefficient, slot: std::rc::Rc<std::cell::RefCell<Option<Error>>>) -> Result<Coefficient> {
    match slot.borrow_mut().take() {
        Some(e) => Err(e),
        None => Ok(c),
    }
}

fn exp_recursion(n: usize, nu: f64) -> Result<Vec<Coefficient>> {
    let alpha = exp_alpha(n)?;
    (1..=n)
        .map(|k| {
            let series = exp_sigma_series(k)?;
            let (f, slot) = guarded(|t| Ok(series.coeffs_at(t)?[k - 1]));
            let i = finish(tail_integral(f, -nu.ln())?, slot)?;
            Ok(Coefficient { value: alpha[k - 1] - i.value, uncertainty: i.uncertainty })
        })
        .collect()
}

fn cosh_weight(nu: f64, y: f64) -> f64 {
    let th = y.tanh();
    let ch = y.cosh();
    (th * th + 4.0 / (nu * nu * ch * ch)).sqrt()
}

/// `∫_{|y|>a} f(y) dy` for `a ≥ 0`.
fn whole_line<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64) -> Result<Coefficient> {
    let (g, slot) = guarded(move |y| Ok(f(y)? + f(-y)?));
    finish(tail_integral(g, a)?, slot)
}

fn cosh_recursion(n: usize, nu: f64) -> Result<Vec<Coefficient>> {
    let series = cosh_tau_series(n, WeightMode::Exact(nu))?;
    (1..=n)
        .map(|k| {
            let i = whole_line(|y| Ok(series.coeffs_at(y)?[k - 1] / cosh_weight(nu, y)), 0.0)?;
            Ok(Coefficient { value: -i.value, uncertainty: i.uncertainty })
        })
        .collect()
}

/// `binom(−½, j)`.
fn binom_minus_half(j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (-0.5 - i as f64) / (i + 1) as f64)
}

fn cosh_formal(n: usize, nu: f64, delta: f64) -> Result<Vec<Coefficient>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput("window half-width must be positive".into()));
    }
    let formal = cosh_tau_series(n, WeightMode::Formal { delta })?;
    let exact = cosh_tau_series(n, WeightMode::Exact(nu))?;
    (1..=n)
        .map(|k| {
            // coefficient of ν^{−k} in τ/w with 1/w = |coth y| Σ_j binom(−½, j)(4/sinh² y)^j ν^{−2j}
            let outside = whole_line(
                |y| {
                    let tau = formal.coeffs_at(y)?;
                    let inv_sh2 = 1.0 / y.sinh().powi(2);
                    let mut acc = 0.0;
                    let mut j = 0;
                    while 2 * j < k {
                        acc += tau[k - 2 * j - 1] * binom_minus_half(j) * (4.0 * inv_sh2).powi(j as i32);
                        j += 1;
                    }
                    Ok(acc / y.tanh().abs())
                },
                delta,
            )?;
            let (f, slot) = guarded(|y: f64| {
                let a = exact.coeffs_at(y)?[k - 1] / cosh_weight(nu, y);
                let b = exact.coeffs_at(-y)?[k - 1] / cosh_weight(nu, y);
                Ok(a.abs() + b.abs())
            });
            let window =
                finish(quad::integrate(f, 0.0, delta, COEFF_TOL).map(|r| Coefficient { value: r.value, uncertainty: r.error })?, slot)?;
            Ok(Coefficient { value: -outside.value, uncertainty: outside.uncertainty + window.value + window.uncertainty })
        })
        .collect()
}

/// `log a(ν) − leading(ν)` at each grid point, computed concurrently.
pub fn expansion_data(model: PotentialModel, nu_grid: &[f64], cfg: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    for &nu in nu_grid {
        check_nu(nu, model)?;
    }
    let t0 = if model == PotentialModel::Cosh { cosh_log_t12_ref(cfg)? } else { 0.0 };
    let rows: Vec<(f64, f64)> =
        nu_grid.par_iter().map(|&nu| Ok((log_a_exact(model, nu, cfg)?, leading_with_reference(model, nu, t0)?))).collect::<Result<_>>()?;
    Ok(rows.into_iter().unzip())
}

/// Number of power terms used when `n` coefficients are requested: two extra
/// terms absorb truncation where the order cap allows.
pub fn fit_powers(n: usize) -> usize {
    n.max((n + 2).min(MAX_FIT_ORDER))
}

/// A fit of `r(ν)` on `{1, ν^{−1}, …, ν^{−K}}` and optionally `ν^{−k} log ν`,
/// `k = 1..n_log`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    pub constant: Coefficient,
    pub powers: Vec<Coefficient>,
    pub logs: Vec<Coefficient>,
    pub gram_condition: f64,
}

impl ExpansionFit {
    /// `constant + Σ_{k≤n} c_k ν^{−k} (+ log terms up to n)`.
    pub fn partial_sum(&self, nu: f64, n: usize) -> f64 {
        let mut s = self.constant.value;
        for (k, c) in self.powers.iter().enumerate().take(n) {
            s += c.value * nu.powi(-(k as i32 + 1));
        }
        for (k, c) in self.logs.iter().enumerate().take(n) {
            s += c.value * nu.powi(-(k as i32 + 1)) * nu.ln();
        }
        s
    }
}

pub fn fit_expansion(nu_grid: &[f64], r: &[f64], powers: usize, n_log: usize) -> Result<ExpansionFit> {
    let mut cols = vec![vec![1.0; nu_grid.len()]];
    for k in 1..=powers {
        cols.push(nu_grid.iter().map(|nu| nu.powi(-(k as i32))).collect());
    }
    for k in 1..=n_log {
        cols.push(nu_grid.iter().map(|nu| nu.powi(-(k as i32)) * nu.ln()).collect());
    }
    let LinearFit { coef, stderr, gram_condition, .. } = least_squares(&cols, r)?;
    let c: Vec<Coefficient> = coef.iter().zip(&stderr).map(|(&value, &uncertainty)| Coefficient { value, uncertainty }).collect();
    Ok(ExpansionFit { constant: c[0], powers: c[1..=powers].to_vec(), logs: c[powers + 1..].to_vec(), gram_condition })
}

/// Coefficients `c_1 .. c_n` by the chosen route.
pub fn series_coeffs(model: PotentialModel, n: usize, route: CoeffRoute, cfg: &SolverConfig) -> Result<SeriesCoeffs> {
    if n == 0 {
        return Err(Error::InvalidInput("at least one coefficient must be requested".into()));
    }
    let plain = |c| SeriesCoeffs { c, constant: None, log_amplitudes: None, gram_condition: None };
    match route {
        CoeffRoute::Recursion { nu } => {
            if n > MAX_RECURSION_ORDER {
                return Err(Error::OrderTooHigh { requested: n, max: MAX_RECURSION_ORDER });
            }
            check_nu(nu, model)?;
            match model {
                PotentialModel::Exp => Ok(plain(exp_recursion(n, nu)?)),
                PotentialModel::Cosh => Ok(plain(cosh_recursion(n, nu)?)),
                PotentialModel::Harmonic => Err(Error::InvalidInput("no recursion route for the harmonic model".into())),
            }
        }
        CoeffRoute::Formal { nu, delta } => {
            if n > MAX_RECURSION_ORDER {
                return Err(Error::OrderTooHigh { requested: n, max: MAX_RECURSION_ORDER });
            }
            check_nu(nu, model)?;
            if model != PotentialModel::Cosh {
                return Err(Error::InvalidInput("the formal route applies to the cosh model".into()));
            }
            Ok(plain(cosh_formal(n, nu, delta)?))
        }
        CoeffRoute::Fit { nu_grid, log_basis } => {
            if n > MAX_FIT_ORDER {
                return Err(Error::OrderTooHigh { requested: n, max: MAX_FIT_ORDER });
            }
            let (log_a, lead) = expansion_data(model, nu_grid, cfg)?;
            let r: Vec<f64> = log_a.iter().zip(&lead).map(|(a, l)| a - l).collect();
            let fit = fit_expansion(nu_grid, &r, fit_powers(n), if log_basis { n } else { 0 })?;
            Ok(SeriesCoeffs {
                c: fit.powers[..n].to_vec(),
                constant: Some(fit.constant),
                log_amplitudes: log_basis.then(|| fit.logs.clone()),
                gram_condition: Some(fit.gram_condition),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k, BesselOrder};
    use crate::traceid::identity::exp_a0;

    #[test]
    fn exp_alpha_matches_direct_difference() {
        let a = exp_alpha(4).unwrap();
        for (got, want) in a.iter().zip([-0.25, -0.25, 1.0 / 32.0, 0.125]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        let nu: f64 = 50.0;
        let lead = leading_with_reference(PotentialModel::Exp, nu, 0.0).unwrap();
        let series: f64 = a.iter().enumerate().map(|(k, c)| c * nu.powi(-(k as i32 + 1))).sum();
        assert!((exp_a0(nu).unwrap() - lead - series).abs() < 1e-9);
    }

    #[test]
    fn exp_recursion_reproduces_debye() {
        // log K_ν(1) − leading = −1/(6ν) − 1/(4ν²) + O(ν^{−3})
        let c = series_coeffs(PotentialModel::Exp, 2, CoeffRoute::Recursion { nu: 400.0 }, &SolverConfig::default()).unwrap();
        assert!((c.c[0].value + 1.0 / 6.0).abs() < 1e-4, "{:?}", c.c);
        assert!((c.c[1].value + 0.25).abs() < 1e-4, "{:?}", c.c);
    }

    #[test]
    fn exp_recursion_sum_tracks_bessel() {
        let nu = 20.0;
        let c = series_coeffs(PotentialModel::Exp, 4, CoeffRoute::Recursion { nu }, &SolverConfig::default()).unwrap();
        let exact = bessel_k(BesselOrder::Real(nu), 1.0).unwrap().ln() - bessel_k(BesselOrder::Real(0.0), 1.0).unwrap().ln();
        let lead = leading_with_reference(PotentialModel::Exp, nu, 0.0).unwrap();
        let mut err = Vec::new();
        let mut s = 0.0;
        for (k, ck) in c.c.iter().enumerate() {
            s += ck.value / nu.powi(k as i32 + 1);
            err.push((exact - lead - s).abs());
        }
        for w in err.windows(2) {
            assert!(w[1] < w[0], "{err:?}");
        }
        assert!(err[3] < 1e-6, "{err:?}");
    }

    #[test]
    fn cosh_recursion_tracks_sigma_integral() {
        let cfg = SolverConfig::default();
        let nu = 12.0;
        let exact = crate::traceid::sigma_integral_exact(PotentialModel::Cosh, 2.0 - nu * nu, &cfg).unwrap().value;
        let c = series_coeffs(PotentialModel::Cosh, 3, CoeffRoute::Recursion { nu }, &cfg).unwrap();
        let mut s = 0.0;
        let mut err = Vec::new();
        for (k, ck) in c.c.iter().enumerate() {
            s += ck.value / nu.powi(k as i32 + 1);
            err.push((-exact - s).abs());
        }
        assert!(err[2] < err[0], "{err:?}");
    }

    #[test]
    fn fit_recovers_exp_coefficients() {
        let grid: Vec<f64> = (0..10).map(|i| 8.0 * 2f64.powf(i as f64 / 3.0)).collect();
        let c =
            series_coeffs(PotentialModel::Exp, 2, CoeffRoute::Fit { nu_grid: &grid, log_basis: false }, &SolverConfig::default()).unwrap();
        assert!((c.c[0].value + 1.0 / 6.0).abs() < 1e-3, "{:?}", c);
        assert!(c.constant.unwrap().value.abs() < 1e-4);
    }

    #[test]
    fn order_limits() {
        let cfg = SolverConfig::default();
        assert!(matches!(series_coeffs(PotentialModel::Exp, 7, CoeffRoute::Recursion { nu: 10.0 }, &cfg), Err(Error::OrderTooHigh { .. })));
        let grid = [8.0, 16.0];
        assert!(matches!(
            series_coeffs(PotentialModel::Exp, 5, CoeffRoute::Fit { nu_grid: &grid, log_basis: false }, &cfg),
            Err(Error::OrderTooHigh { .. })
        ));
    }
}
