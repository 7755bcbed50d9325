use crate::error::{Error, Result};

/// Principal branch of the Lambert function, `W(x)·e^{W(x)} = x`, for `x > 0`.
pub fn lambert_w(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    let mut w = if x < 1.0 {
        x / (1.0 + x)
    } else {
        let l = x.ln();
        (l - l.max(1.0).ln()).max(0.5)
    };
    // Halley iteration
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_of_e_is_one() {
        assert!((lambert_w(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn omega_constant() {
        // Independent oracle: fixed-point iteration w = e^{-w}.
        let mut w: f64 = 0.5;
        for _ in 0..200 {
            w = (-w).exp();
        }
        assert!((lambert_w(1.0).unwrap() - w).abs() < 1e-15);
    }

    #[test]
    fn defining_relation_over_decades() {
        for e in -8..=8 {
            let x = 10f64.powi(e) * 3.7;
            let w = lambert_w(x).unwrap();
            assert!(((w * w.exp() - x) / x).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(lambert_w(0.0).is_err());
        assert!(lambert_w(-0.2).is_err());
    }
}
