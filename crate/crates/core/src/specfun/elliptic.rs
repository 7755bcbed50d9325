//! Elliptic integrals of the first and second kinds.
//!
//! The modulus `k` (not the parameter `m = k²`) is used throughout.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// A pair of first- and second-kind elliptic integrals.
///
/// For the complete case `first = K(k)`, `second = E(k)`; for the incomplete
/// case `first = F(φ, k)`, `second = E(φ, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub first: f64,
    pub second: f64,
}

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(())
}

/// Complete elliptic integrals `K(k)` and `E(k)` by the arithmetic-geometric mean.
pub fn elliptic_complete(k: f64) -> Result<EllipticPair> {
    check_modulus(k)?;
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(complete_from_complementary(k, kp))
}

/// Same as [`elliptic_complete`] but takes the complementary modulus
/// `k' = √(1-k²)` directly, which avoids cancellation when `k → 1`.
pub fn elliptic_complete_from_complement(kp: f64) -> Result<EllipticPair> {
    if !(kp > 0.0 && kp <= 1.0) {
        return Err(Error::ModulusOutOfRange(((1.0 - kp) * (1.0 + kp)).max(0.0).sqrt()));
    }
    let k = ((1.0 - kp) * (1.0 + kp)).sqrt();
    Ok(complete_from_complementary(k, kp))
}

fn complete_from_complementary(k: f64, kp: f64) -> EllipticPair {
    let mut a = 1.0;
    let mut b = kp;
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..40 {
        if c.abs() <= 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let big_k = FRAC_PI_2 / a;
    EllipticPair { first: big_k, second: big_k * (1.0 - sum) }
}

/// Carlson's symmetric integral `R_F(x, y, z)`.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
    }
    unreachable!("R_F duplication did not converge")
}

/// Carlson's symmetric integral `R_D(x, y, z)`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..100 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + 3.0 * z) / 5.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let s = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
            return 3.0 * sum + fac * (1.0 + s) / (mu * mu.sqrt());
        }
    }
    unreachable!("R_D duplication did not converge")
}

/// Incomplete integrals `F(φ, k)` and `E(φ, k)` for `|φ| < π/2`.
pub fn elliptic_incomplete(phi: f64, k: f64) -> Result<EllipticPair> {
    check_modulus(k)?;
    if !(phi.abs() < FRAC_PI_2) {
        return Err(Error::PhiOutOfRange(phi));
    }
    let (s, c) = phi.sin_cos();
    Ok(incomplete_from_sin_cos2(s, c * c, k))
}

/// Incomplete integrals from `sin φ` and `cos² φ` supplied separately, so
/// callers that know `cos² φ` in closed form (e.g. `sech² x` when
/// `sin φ = tanh x`) keep full relative accuracy near `φ = π/2`.
pub fn incomplete_from_sin_cos2(sin_phi: f64, cos2_phi: f64, k: f64) -> EllipticPair {
    if sin_phi == 0.0 {
        return EllipticPair { first: 0.0, second: 0.0 };
    }
    let s2 = sin_phi * sin_phi;
    let delta2 = 1.0 - k * k * s2;
    let rf = carlson_rf(cos2_phi, delta2, 1.0);
    let rd = carlson_rd(cos2_phi, delta2, 1.0);
    let first = sin_phi * rf;
    let second = first - k * k * s2 * sin_phi * rd / 3.0;
    EllipticPair { first, second }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_modulus() {
        let p = elliptic_complete(0.0).unwrap();
        assert_eq!(p.first, FRAC_PI_2);
        assert_eq!(p.second, FRAC_PI_2);
    }

    #[test]
    fn legendre_relation_at_0_6() {
        let p = elliptic_complete(0.6).unwrap();
        let q = elliptic_complete(0.8).unwrap();
        let lhs = p.second * q.first + q.second * p.first - p.first * q.first;
        assert!((lhs - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn near_unit_modulus_limits() {
        let kp = 1e-9;
        let p = elliptic_complete_from_complement(kp).unwrap();
        assert!((p.second - 1.0).abs() < 1e-15);
        assert!((p.first - (4.0 / kp).ln()).abs() < 1e-15);
    }

    #[test]
    fn modulus_out_of_range() {
        assert!(matches!(elliptic_complete(1.0), Err(Error::ModulusOutOfRange(_))));
        assert!(elliptic_complete(-0.1).is_err());
        assert!(matches!(elliptic_incomplete(PI / 2.0, 0.5), Err(Error::PhiOutOfRange(_))));
    }

    #[test]
    fn incomplete_trivial_cases() {
        let z = elliptic_incomplete(0.0, 0.7).unwrap();
        assert_eq!((z.first, z.second), (0.0, 0.0));
        let p = elliptic_incomplete(0.9, 0.0).unwrap();
        assert!((p.first - 0.9).abs() < 1e-15 && (p.second - 0.9).abs() < 1e-15);
    }

    #[test]
    fn incomplete_is_odd() {
        let a = elliptic_incomplete(0.8, 0.45).unwrap();
        let b = elliptic_incomplete(-0.8, 0.45).unwrap();
        assert_eq!(a.first, -b.first);
        assert_eq!(a.second, -b.second);
    }
}
