//! Linear least squares with conditioning checks, and log–log slopes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Fits whose column-normalized Gram matrix exceeds this condition number
/// are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coef: Vec<f64>,
    /// Standard errors from the residual variance; zero for exact fits.
    pub stderr: Vec<f64>,
    pub gram_condition: f64,
    pub rss: f64,
}

/// Least squares of `y` on the given basis columns.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<LinearFit> {
    let m = y.len();
    let p = columns.len();
    if p == 0 || columns.iter().any(|c| c.len() != m) {
        return Err(Error::InvalidInput("basis columns must be non-empty and match the data length".into()));
    }
    if m < p {
        return Err(Error::InvalidInput(format!("{m} points cannot determine {p} coefficients")));
    }
    let norms: Vec<f64> = columns.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    if norms.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
        return Err(Error::IllConditionedFit(f64::INFINITY));
    }
    let a = DMatrix::from_fn(m, p, |i, j| columns[j][i] / norms[j]);
    let svd = a.clone().svd(true, true);
    let s = &svd.singular_values;
    let (smax, smin) = (s.max(), s.min());
    let gram_condition = if smin > 0.0 { (smax / smin).powi(2) } else { f64::INFINITY };
    if !(gram_condition <= MAX_GRAM_CONDITION) {
        return Err(Error::IllConditionedFit(gram_condition));
    }
    let b = DVector::from_column_slice(y);
    let x = svd.solve(&b, 0.0).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let r = &b - &a * &x;
    let rss = r.norm_squared();
    let dof = m - p;
    let var = if dof > 0 { rss / dof as f64 } else { 0.0 };
    let v_t = svd.v_t.as_ref().expect("requested V");
    let stderr = (0..p)
        .map(|j| {
            let c: f64 = (0..p).map(|k| (v_t[(k, j)] / s[k]).powi(2)).sum();
            (var * c).sqrt() / norms[j]
        })
        .collect();
    let coef = (0..p).map(|j| x[j] / norms[j]).collect();
    Ok(LinearFit { coef, stderr, gram_condition, rss })
}

/// Slope of `log |y|` against `log x` by ordinary least squares.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidInput("need at least two matching points".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().max(f64::MIN_POSITIVE).ln()).collect();
    let fit = least_squares(&[vec![1.0; lx.len()], lx], &ly)?;
    Ok(fit.coef[1])
}
