//! Expansion reports: exact values, leading terms, fitted coefficients and
//! the decay order of the residual after each partial sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::SolverConfig;
use crate::potential::PotentialModel;
use crate::traceid::coeffs::{expansion_data, fit_expansion, fit_powers, Coefficient, MAX_FIT_ORDER};
use crate::traceid::fit::log_log_slope;

pub const REPORT_SCHEMA: u32 = 1;
pub const MIN_GRID_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub schema: u32,
    pub model: PotentialModel,
    pub order: usize,
    pub nu_grid: Vec<f64>,
    pub log_a_exact: Vec<f64>,
    pub leading: Vec<f64>,
    /// Fitted constant; the fit basis always carries one.
    pub constant: Coefficient,
    /// `c_1 .. c_N`.
    pub coeffs: Vec<Coefficient>,
    /// Number of power terms in the fit (at least `order`).
    pub fit_powers: usize,
    /// `partial_sums[k][i] = leading + constant + Σ_{n≤k} c_n ν_i^{−n}`.
    pub partial_sums: Vec<Vec<f64>>,
    /// `residuals[k][i] = log_a_exact − partial_sums[k]`.
    pub residuals: Vec<Vec<f64>>,
    /// Log–log slope of `|residuals[k]|` against ν.
    pub residual_orders: Vec<f64>,
    /// Orders `k` for which the fit had spare terms beyond `k`.
    pub certified: Vec<bool>,
    pub log_term_amplitudes: Option<Vec<Coefficient>>,
    pub gram_condition: f64,
}

impl ExpansionReport {
    /// Required bound on `residual_orders[k]`.
    pub fn order_bound(k: usize) -> f64 {
        -(k as f64 + 0.5)
    }

    /// Certified orders whose fitted slope misses its bound.
    pub fn failed_orders(&self) -> Vec<usize> {
        (0..self.residual_orders.len()).filter(|&k| self.certified[k] && !(self.residual_orders[k] <= Self::order_bound(k))).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// One row per ν: `nu, log_a_exact, leading, partial_k…, residual_k…`.
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["nu".to_string(), "log_a_exact".into(), "leading".into()];
        header.extend((0..=self.order).map(|k| format!("partial_{k}")));
        header.extend((0..=self.order).map(|k| format!("residual_{k}")));
        w.write_record(&header).map_err(io)?;
        for i in 0..self.nu_grid.len() {
            let mut row = vec![self.nu_grid[i], self.log_a_exact[i], self.leading[i]];
            row.extend(self.partial_sums.iter().map(|p| p[i]));
            row.extend(self.residuals.iter().map(|r| r[i]));
            w.write_record(row.iter().map(f64::to_string)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

fn check_grid(nu_grid: &[f64]) -> Result<()> {
    if nu_grid.len() < MIN_GRID_POINTS {
        return Err(Error::InvalidInput(format!("the nu grid needs at least {MIN_GRID_POINTS} points")));
    }
    if nu_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("the nu grid must be strictly ascending".into()));
    }
    if !(nu_grid[nu_grid.len() - 1] >= 2.0 * nu_grid[0]) {
        return Err(Error::InvalidInput("the nu grid must span at least one octave".into()));
    }
    Ok(())
}

/// Builds the report for `c_1 .. c_order`, optionally with `ν^{−n} log ν`
/// terms for `n ≤ order`.
pub fn report(model: PotentialModel, nu_grid: &[f64], order: usize, log_basis: bool, cfg: &SolverConfig) -> Result<ExpansionReport> {
    if order > MAX_FIT_ORDER {
        return Err(Error::OrderTooHigh { requested: order, max: MAX_FIT_ORDER });
    }
    check_grid(nu_grid)?;
    let (log_a_exact, leading) = expansion_data(model, nu_grid, cfg)?;
    let r: Vec<f64> = log_a_exact.iter().zip(&leading).map(|(a, l)| a - l).collect();
    let powers = fit_powers(order.max(1));
    let fit = fit_expansion(nu_grid, &r, powers, if log_basis { order } else { 0 })?;
    let mut partial_sums = Vec::with_capacity(order + 1);
    let mut residuals = Vec::with_capacity(order + 1);
    let mut residual_orders = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let p: Vec<f64> = nu_grid.iter().zip(&leading).map(|(&nu, l)| l + fit.partial_sum(nu, k)).collect();
        let res: Vec<f64> = log_a_exact.iter().zip(&p).map(|(a, s)| a - s).collect();
        residual_orders.push(log_log_slope(nu_grid, &res)?);
        partial_sums.push(p);
        residuals.push(res);
    }
    Ok(ExpansionReport {
        schema: REPORT_SCHEMA,
        model,
        order,
        nu_grid: nu_grid.to_vec(),
        log_a_exact,
        leading,
        constant: fit.constant,
        coeffs: fit.powers[..order].to_vec(),
        fit_powers: powers,
        partial_sums,
        residuals,
        residual_orders,
        certified: (0..=order).map(|k| k < powers).collect(),
        log_term_amplitudes: log_basis.then(|| fit.logs.clone()),
        gram_condition: fit.gram_condition,
    })
}

/// `n` points from `a` to `b`, logarithmically spaced.
pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > a) || n < 2 {
        return Err(Error::InvalidInput(format!("log grid needs 0 < a < b and n >= 2, got {a}:{b}:{n}")));
    }
    let r = (b / a).ln();
    Ok((0..n).map(|i| if i + 1 == n { b } else { a * (r * i as f64 / (n - 1) as f64).exp() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_report_orders() {
        let grid = log_grid(5.0, 80.0, 12).unwrap();
        let r = report(PotentialModel::Exp, &grid, 2, false, &SolverConfig::default()).unwrap();
        assert!(r.residual_orders[0] <= -0.5, "{:?}", r.residual_orders);
        assert!(r.residual_orders[1] <= -1.5, "{:?}", r.residual_orders);
        assert!(r.residual_orders[2] <= -2.5, "{:?}", r.residual_orders);
        assert!(r.failed_orders().is_empty());
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with("nu,log_a_exact,leading,partial_0,partial_1,partial_2,residual_0"));
    }

    #[test]
    fn order_zero_report() {
        let grid = log_grid(5.0, 80.0, 8).unwrap();
        let r = report(PotentialModel::Exp, &grid, 0, false, &SolverConfig::default()).unwrap();
        assert_eq!(r.residual_orders.len(), 1);
        assert!(r.residual_orders[0] <= -0.5);
        assert!(r.coeffs.is_empty());
    }

    #[test]
    fn grid_validation() {
        let cfg = SolverConfig::default();
        assert!(report(PotentialModel::Exp, &[5.0, 6.0, 7.0, 8.0, 9.0, 9.5], 1, false, &cfg).is_err());
        assert!(report(PotentialModel::Exp, &[5.0, 8.0, 7.0, 9.0, 10.0, 20.0], 1, false, &cfg).is_err());
        assert!(report(PotentialModel::Exp, &[5.0, 8.0, 9.0], 1, false, &cfg).is_err());
        assert!(matches!(report(PotentialModel::Exp, &log_grid(5.0, 80.0, 8).unwrap(), 5, false, &cfg), Err(Error::OrderTooHigh { .. })));
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(5.0, 80.0, 5).unwrap();
        assert_eq!(g[0], 5.0);
        assert_eq!(g[4], 80.0);
        assert!((g[2] - 20.0).abs() < 1e-12);
    }
}
