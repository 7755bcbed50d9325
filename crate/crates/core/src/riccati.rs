//! Formal `1/ν` expansions of the logarithmic-derivative correction σ.
//!
//! σ solves `σ' = −σ² + (2√Q + Q'/2Q) σ + V`, `V = Q''/4Q − (5/16)(Q'/Q)²`,
//! with `Q = q − λ`. Three series are provided:
//!
//! * exp model in `t = x − log ν`: `τ(t) = Σ c_n(t) ν^{-n}`;
//! * cosh model in `y` with `sinh x = (ν/2) sinh y`: `τ(y) = Σ τ_n(y) ν^{-n}`,
//!   either with the weight `w = dy/dx` expanded in `1/ν` (formal) or kept
//!   exact at a given `ν`;
//! * any model at a fixed `x`, expanding `√Q = ν √(1 + (q − shift)/ν²)`.
//!
//! Coefficients are produced as jets so that each recursion step can take the
//! derivative it needs.

use crate::error::{Error, Result};
use crate::jets::{Jet, MAX_ORDER};
use crate::potential::{q_jet, PotentialModel};

pub const MAX_EXP_ORDER: usize = 10;
pub const MAX_COSH_ORDER: usize = 8;
pub const DEFAULT_WINDOW: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// Weight expanded in `1/ν`; coefficients are singular at `y = 0` and
    /// refuse evaluation for `|y| < delta` once `N ≥ 2`.
    Formal { delta: f64 },
    /// Weight kept exact at this `ν`.
    Exact(f64),
}

impl WeightMode {
    pub fn formal() -> Self {
        WeightMode::Formal { delta: DEFAULT_WINDOW }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesKind {
    Exp,
    Cosh(WeightMode),
    Generic(PotentialModel),
}

/// A truncated series `Σ_{n=1}^{N} c_n(point) ν^{-n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuSeries {
    kind: SeriesKind,
    n: usize,
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("series truncation must be at least 1".into()));
    }
    if n > max {
        return Err(Error::OrderTooHigh { requested: n, max });
    }
    Ok(())
}

/// Exp-model series in `t = x − log ν`, `c₁ = (e^{4t} − 4e^{2t}) / (8(1+e^{2t})^{5/2})`.
pub fn exp_sigma_series(n: usize) -> Result<NuSeries> {
    check_n(n, MAX_EXP_ORDER)?;
    Ok(NuSeries { kind: SeriesKind::Exp, n })
}

/// Cosh-model series in `y`.
pub fn cosh_tau_series(n: usize, mode: WeightMode) -> Result<NuSeries> {
    check_n(n, MAX_COSH_ORDER)?;
    if let WeightMode::Exact(nu) = mode {
        if !(nu > 0.0) {
            return Err(Error::NonPositiveArgument(nu));
        }
    }
    Ok(NuSeries { kind: SeriesKind::Cosh(mode), n })
}

/// Fixed-`x` coefficients `c_1(x) .. c_N(x)` of σ for any model.
pub fn generic_sigma_series(model: PotentialModel, n: usize, x: f64) -> Result<Vec<f64>> {
    let s = NuSeries::generic(model, n)?;
    s.coeffs_at(x)
}

fn min_order(jets: &[&Jet]) -> usize {
    jets.iter().map(|j| j.order()).min().unwrap_or(0)
}

fn fit(a: &Jet, order: usize) -> Jet {
    a.truncate(order)
}

/// Σ_{k=1}^{n-1} c_k c_{n-k} for coefficients stored at index `k-1`.
fn convolution(c: &[Jet], n: usize, order: usize) -> Option<Jet> {
    let mut acc: Option<Jet> = None;
    for k in 1..n {
        let term = &fit(&c[k - 1], order) * &fit(&c[n - k - 1], order);
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc
}

fn binom_half(j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (0.5 - i as f64) / (i + 1) as f64)
}

impl NuSeries {
    pub fn generic(model: PotentialModel, n: usize) -> Result<NuSeries> {
        check_n(n, MAX_EXP_ORDER)?;
        Ok(NuSeries { kind: SeriesKind::Generic(model), n })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Coefficient jets `c_1 .. c_N` at `point`, each carrying at least
    /// `extra` derivative orders.
    pub fn coeff_jets(&self, point: f64, extra: usize) -> Result<Vec<Jet>> {
        let order = self.n + extra;
        if order + 2 > MAX_ORDER {
            return Err(Error::OrderTooHigh { requested: order + 2, max: MAX_ORDER });
        }
        match self.kind {
            SeriesKind::Exp => exp_coeffs(self.n, point, order),
            SeriesKind::Cosh(mode) => cosh_coeffs(self.n, mode, point, order),
            SeriesKind::Generic(model) => generic_coeffs(model, self.n, point, order),
        }
    }

    pub fn coeffs_at(&self, point: f64) -> Result<Vec<f64>> {
        Ok(self.coeff_jets(point, 0)?.iter().map(Jet::value).collect())
    }

    pub fn partial_sum(&self, nu: f64, point: f64) -> Result<f64> {
        let c = self.coeffs_at(point)?;
        Ok(c.iter().rev().fold(0.0, |acc, &cn| (acc + cn) / nu))
    }

    /// Checks `τ_n(−y) = (−1)^{n+1} τ_n(y)` for the cosh series at the given
    /// points; any violation is reported with the offending order.
    pub fn check_parity(&self, points: &[f64], tol: f64) -> Result<()> {
        if !matches!(self.kind, SeriesKind::Cosh(_)) {
            return Err(Error::InvalidInput("parity check applies to the cosh series only".into()));
        }
        for &y in points {
            let plus = self.coeffs_at(y)?;
            let minus = self.coeffs_at(-y)?;
            for (i, (p, m)) in plus.iter().zip(&minus).enumerate() {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                if (m - sign * p).abs() > tol * p.abs().max(1e-300).max(1.0) {
                    return Err(Error::InvalidInput(format!("tau_{} fails parity at y = {y}: {p} vs {m}", i + 1)));
                }
            }
        }
        Ok(())
    }
}

fn exp_coeffs(n: usize, t: f64, order: usize) -> Result<Vec<Jet>> {
    let tj = Jet::variable(t, order)?;
    let e2 = tj.scale(2.0).exp();
    let one_plus = &e2 + 1.0;
    let s = one_plus.sqrt()?;
    let b = &e2 / &one_plus;
    let v = exp_v(&e2, &one_plus);
    let mut c = vec![-(&v / &s.scale(2.0))];
    for m in 1..n {
        let d = c[m - 1].derivative()?;
        let o = d.order();
        let mut rhs = &d - &(&fit(&b, o) * &fit(&c[m - 1], o));
        if let Some(conv) = convolution(&c, m, o) {
            rhs = &rhs + &conv;
        }
        c.push(&rhs / &fit(&s, o).scale(2.0));
    }
    Ok(c)
}

/// `V(t) = (e^{2t} − e^{4t}/4) / (1+e^{2t})²` for the exp model in `t`.
fn exp_v(e2: &Jet, one_plus: &Jet) -> Jet {
    let num = e2 - &(e2 * e2).scale(0.25);
    &num / &(one_plus * one_plus)
}

struct CoshParts {
    th: Jet,
    ch: Jet,
    sh: Jet,
    v0: Jet,
    v2: Jet,
}

fn cosh_parts(y: f64, order: usize) -> Result<CoshParts> {
    let yj = Jet::variable(y, order)?;
    let (sh, ch) = yj.sinh_cosh();
    let th = yj.tanh();
    let th2 = &th * &th;
    let v0 = &th2 - &(&th2 * &th2).scale(1.25);
    let v2 = &(&th2.scale(-5.0) + 2.0) / &(&ch * &ch);
    Ok(CoshParts { th, ch, sh, v0, v2 })
}

/// Exact weight `w = √(tanh² y + 4ν^{-2} sech² y) = dy/dx`.
fn cosh_weight(p: &CoshParts, nu: f64) -> Result<Jet> {
    let sech2 = (&p.ch * &p.ch).recip()?;
    (&(&p.th * &p.th) + &sech2.scale(4.0 / (nu * nu))).sqrt()
}

fn cosh_coeffs(n: usize, mode: WeightMode, y: f64, order: usize) -> Result<Vec<Jet>> {
    let p = cosh_parts(y, order)?;
    // weights[j] multiplies ν^{-2j}
    let (weights, v) = match mode {
        WeightMode::Exact(nu) => {
            let w = cosh_weight(&p, nu)?;
            (vec![w], vec![&p.v0 + &p.v2.scale(1.0 / (nu * nu)), Jet::constant(y, order, 0.0)?])
        }
        WeightMode::Formal { delta } => {
            if n >= 2 && y.abs() < delta {
                return Err(Error::EvaluationAtSingularPoint(y));
            }
            let abs_th = if y < 0.0 { -&p.th } else { p.th.clone() };
            let mut ws = vec![abs_th.clone()];
            if n >= 3 {
                let inv_sh2 = (&p.sh * &p.sh).recip().map_err(|_| Error::EvaluationAtSingularPoint(y))?;
                let mut pow = Jet::constant(y, order, 1.0)?;
                for j in 1..=(n - 1) / 2 {
                    pow = &pow * &inv_sh2;
                    ws.push((&abs_th * &pow).scale(binom_half(j) * 4f64.powi(j as i32)));
                }
            }
            (ws, vec![p.v0.clone(), p.v2.clone()])
        }
    };
    let two_ch = p.ch.scale(2.0);
    let mut tau: Vec<Jet> = vec![-(&v[0] / &two_ch)];
    // τ'_m − tanh τ_m, cached per m
    let mut drift: Vec<Jet> = Vec::new();
    for m in 1..n {
        let d = tau[m - 1].derivative()?;
        let o = d.order();
        drift.push(&d - &(&fit(&p.th, o) * &fit(&tau[m - 1], o)));
        let o = min_order(&drift.iter().collect::<Vec<_>>()).min(o);
        let mut rhs = Jet::constant(y, o, 0.0)?;
        for (j, w) in weights.iter().enumerate() {
            if 2 * j >= m {
                break;
            }
            let idx = m - 2 * j; // τ_idx
            rhs = &rhs + &(&fit(w, o) * &fit(&drift[idx - 1], o));
        }
        if let Some(conv) = convolution(&tau, m, o) {
            rhs = &rhs + &conv;
        }
        if m == 2 {
            if let Some(v2) = v.get(1) {
                rhs = &rhs - &fit(v2, o);
            }
        }
        tau.push(&rhs / &fit(&two_ch, o));
    }
    Ok(tau)
}

fn generic_coeffs(model: PotentialModel, n: usize, x: f64, order: usize) -> Result<Vec<Jet>> {
    let o = order + 1;
    let qj = q_jet(model, x, o + 2)?;
    let dq = fit(&qj.derivative()?, o);
    let d2q = fit(&qj.derivative()?.derivative()?, o);
    let p = fit(&qj, o).add_scalar(-model.shift());
    let neg_p = -&p;
    let zero = Jet::constant(x, o, 0.0)?;
    let max_pow = n + 2;
    let mut neg_pows = vec![Jet::constant(x, o, 1.0)?];
    for i in 1..=max_pow {
        neg_pows.push(&neg_pows[i - 1] * &neg_p);
    }
    let mut pos_pows = vec![Jet::constant(x, o, 1.0)?];
    for i in 1..=max_pow {
        pos_pows.push(&pos_pows[i - 1] * &p);
    }
    // √(1+pε²) = Σ a_j ε^{2j}; Q'/2Q = Σ b_j ε^{2j}; V = Σ V_m ε^m
    let a = |j: usize| pos_pows[j].scale(binom_half(j));
    let b = |j: usize| (&dq * &neg_pows[j - 1]).scale(0.5);
    let dq2 = &dq * &dq;
    let v_at = |m: usize| -> Jet {
        let mut acc = zero.clone();
        if m >= 2 && m.is_multiple_of(2) {
            acc = &acc + &(&d2q * &neg_pows[(m - 2) / 2]).scale(0.25);
        }
        if m >= 4 && m.is_multiple_of(2) {
            let i = (m - 4) / 2;
            acc = &acc - &(&dq2 * &neg_pows[i]).scale(5.0 / 16.0 * (i + 1) as f64);
        }
        acc
    };
    let mut c: Vec<Jet> = Vec::new();
    for m in 0..n {
        let mut lhs = -&v_at(m);
        if m >= 1 {
            let d = c[m - 1].derivative()?;
            let od = d.order();
            lhs = &fit(&lhs, od) + &d;
        }
        let ol = lhs.order();
        if let Some(conv) = convolution(&c, m, ol) {
            lhs = &lhs + &conv;
        }
        let mut j = 1;
        while 2 * j < m {
            lhs = &lhs - &(&fit(&b(j), ol) * &fit(&c[m - 2 * j - 1], ol));
            j += 1;
        }
        let mut next = lhs.scale(0.5);
        let mut j = 1;
        while 2 * j <= m {
            next = &next - &(&fit(&a(j), ol) * &fit(&c[m - 2 * j], ol));
            j += 1;
        }
        c.push(next);
    }
    Ok(c)
}

/// Which Riccati equation a residual is measured against, written uniformly
/// as `w S' = −S² + A S + V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiccatiForm {
    /// The σ equation in `x` for a model.
    Sigma(PotentialModel),
    /// The exp model in `t = x − log ν`.
    ExpT,
    /// The cosh model in `y`.
    CoshY,
}

/// Values `(w, A, V)` and their first derivatives are not needed; only values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCoefficients {
    pub w: f64,
    pub a: f64,
    pub v: f64,
}

impl RiccatiForm {
    pub fn coefficients(self, nu: f64, point: f64) -> Result<FormCoefficients> {
        Ok(match self {
            RiccatiForm::Sigma(model) => {
                let lambda = model.lambda_from_nu(nu);
                let q = model.q(point) - lambda;
                let dq = model.dq(point);
                let d2q = model.d2q(point);
                if !(q > 0.0) {
                    return Err(Error::EvaluationAtSingularPoint(point));
                }
                FormCoefficients { w: 1.0, a: 2.0 * q.sqrt() + dq / (2.0 * q), v: d2q / (4.0 * q) - 5.0 / 16.0 * (dq / q).powi(2) }
            }
            RiccatiForm::ExpT => {
                let e2 = (2.0 * point).exp();
                let op = 1.0 + e2;
                FormCoefficients { w: 1.0, a: 2.0 * nu * op.sqrt() + e2 / op, v: (e2 - 0.25 * e2 * e2) / (op * op) }
            }
            RiccatiForm::CoshY => {
                let th = point.tanh();
                let ch = point.cosh();
                let w = (th * th + 4.0 / (nu * nu * ch * ch)).sqrt();
                FormCoefficients {
                    w,
                    a: 2.0 * nu * ch + w * th,
                    v: th * th - 1.25 * th.powi(4) + (2.0 - 5.0 * th * th) / (nu * nu * ch * ch),
                }
            }
        })
    }
}

/// `|w S' + S² − A S − V|` for the partial sum `S` of `series` at `ν`.
///
/// The series and the form must describe the same equation; an exp series may
/// also be checked against `Sigma(Exp)`, in which case `point` is `x`.
pub fn riccati_residual(series: &NuSeries, form: RiccatiForm, nu: f64, point: f64) -> Result<f64> {
    let series_point = match (series.kind, form) {
        (SeriesKind::Exp, RiccatiForm::ExpT) => point,
        (SeriesKind::Exp, RiccatiForm::Sigma(PotentialModel::Exp)) => point - nu.ln(),
        (SeriesKind::Cosh(_), RiccatiForm::CoshY) => point,
        (SeriesKind::Generic(m), RiccatiForm::Sigma(f)) if m == f => point,
        _ => return Err(Error::InvalidInput(format!("series {:?} does not match form {:?}", series.kind, form))),
    };
    let jets = series.coeff_jets(series_point, 1)?;
    let mut s = 0.0;
    let mut ds = 0.0;
    let mut scale = 1.0;
    for j in &jets {
        scale /= nu;
        s += j.coeff(0) * scale;
        ds += j.coeff(1) * scale;
    }
    let f = form.coefficients(nu, point)?;
    Ok((f.w * ds + s * s - f.a * s - f.v).abs())
}

/// Same residual divided by the dominant coefficient `A`, i.e. measured in
/// units of σ itself.
pub fn riccati_residual_normalized(series: &NuSeries, form: RiccatiForm, nu: f64, point: f64) -> Result<f64> {
    let r = riccati_residual(series, form, nu, point)?;
    Ok(r / form.coefficients(nu, point)?.a.abs())
}

/// The empty series, for which the residual is `|V|`.
pub fn zero_residual(form: RiccatiForm, nu: f64, point: f64) -> Result<f64> {
    Ok(form.coefficients(nu, point)?.v.abs())
}
