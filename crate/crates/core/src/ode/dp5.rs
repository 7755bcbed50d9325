//! Dormand–Prince 5(4) with a standard PI-free step controller.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dp5Options {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step magnitude.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dp5Options {
    fn default() -> Self {
        Dp5Options { rtol: 1e-11, atol: 1e-14, h_max: 0.25, max_steps: 1_000_000 }
    }
}

/// Integrator state carried across consecutive segments.
#[derive(Debug, Clone)]
pub struct Dp5<const D: usize> {
    pub x: f64,
    pub y: [f64; D],
    h: f64,
    pub opts: Dp5Options,
    pub steps: usize,
}

fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])], h: f64) -> [f64; D] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        *o += h * s;
    }
    out
}

impl<const D: usize> Dp5<D> {
    pub fn new(x: f64, y: [f64; D], h0: f64, opts: Dp5Options) -> Self {
        Dp5 { x, y, h: h0.abs().min(opts.h_max).max(1e-8), opts, steps: 0 }
    }

    /// Advances to `x_end` (either direction), stopping exactly there.
    pub fn advance_to<F>(&mut self, f: &mut F, x_end: f64) -> Result<()>
    where
        F: FnMut(f64, &[f64; D]) -> [f64; D],
    {
        let dir = if x_end >= self.x { 1.0 } else { -1.0 };
        let span = (x_end - self.x).abs();
        let h_floor = 1e-14 * self.x.abs().max(span).max(1.0);
        let mut k1 = f(self.x, &self.y);
        while (x_end - self.x) * dir > 0.0 {
            if self.steps >= self.opts.max_steps {
                return Err(Error::StepSizeUnderflow(self.x));
            }
            let remaining = (x_end - self.x).abs();
            let mut h = self.h.min(remaining).min(self.opts.h_max);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = dir * h;
            let x = self.x;
            let y = &self.y;
            let k2 = f(x + C2 * hs, &axpy(y, &[(A21, &k1)], hs));
            let k3 = f(x + C3 * hs, &axpy(y, &[(A31, &k1), (A32, &k2)], hs));
            let k4 = f(x + C4 * hs, &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hs));
            let k5 = f(x + C5 * hs, &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hs));
            let k6 = f(x + hs, &axpy(y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hs));
            let y_new = axpy(y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], hs);
            let k7 = f(x + hs, &y_new);
            let mut err = 0.0f64;
            let mut finite = true;
            for i in 0..D {
                let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
                finite &= y_new[i].is_finite();
            }
            if !finite {
                err = f64::INFINITY;
            }
            self.steps += 1;
            if err <= 1.0 {
                self.x = if last { x_end } else { x + hs };
                self.y = y_new;
                k1 = k7;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the unclipped step for the next segment
                if !last || grow < 1.0 {
                    self.h = h * grow;
                }
            } else {
                let shrink = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                self.h = h * shrink;
                if self.h < h_floor {
                    return Err(Error::StepSizeUnderflow(self.x));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut s = Dp5::new(0.0, [1.0], 0.1, Dp5Options::default());
        s.advance_to(&mut |_, y: &[f64; 1]| [-y[0]], 3.0).unwrap();
        assert!((s.y[0] - (-3.0f64).exp()).abs() < 1e-12);
        assert_eq!(s.x, 3.0);
    }

    #[test]
    fn harmonic_backwards() {
        let mut s = Dp5::new(2.0, [2f64.sin(), 2f64.cos()], 0.1, Dp5Options::default());
        let mut f = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        for &x in &[1.5, 0.5, -1.0] {
            s.advance_to(&mut f, x).unwrap();
            assert!((s.y[0] - x.sin()).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y², y(0) = 1 has a pole at x = 1
        let mut s = Dp5::new(0.0, [1.0], 0.01, Dp5Options::default());
        let r = s.advance_to(&mut |_, y: &[f64; 1]| [y[0] * y[0]], 2.0);
        assert!(matches!(r, Err(Error::StepSizeUnderflow(x)) if (x - 1.0).abs() < 1e-3));
    }
}
