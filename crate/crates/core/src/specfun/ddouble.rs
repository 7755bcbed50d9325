//! Minimal double-double arithmetic (about 32 significant digits).
//!
//! Only what the power series for `I_{-ik}` needs: the imaginary part of that
//! function is exponentially smaller than the individual series terms, so the
//! sum and the phase factor have to be carried beyond f64.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const FRAC_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };
const LN_2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact product of two doubles.
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn exp(self) -> Self {
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2.mul_f64(k);
        // exp(r) = exp(r / 2^10)^(2^10)
        let s = r.mul_f64(1.0 / 1024.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=14 {
            term = term * s / Dd::new(n as f64);
            sum = sum + term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        sum.mul_f64(2f64.powi(k as i32))
    }

    /// Natural logarithm by one Newton step on `exp`.
    pub fn ln(self) -> Self {
        let x0 = Dd::new(self.hi.ln());
        x0 + self * (-x0).exp() - Dd::ONE
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let n = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2.mul_f64(n);
        let r2 = r * r;
        let mut s = r;
        let mut c = Dd::ONE;
        let mut ts = r;
        let mut tc = Dd::ONE;
        for j in 1..=15 {
            let j = j as f64;
            ts = -(ts * r2 / Dd::new((2.0 * j) * (2.0 * j + 1.0)));
            tc = -(tc * r2 / Dd::new((2.0 * j - 1.0) * (2.0 * j)));
            s = s + ts;
            c = c + tc;
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Arctangent by one Newton step on `tan`.
    pub fn atan(self) -> Self {
        let z = Dd::new(self.hi.atan());
        let (s, c) = z.sin_cos();
        // z - (tan z - a) cos^2 z
        z - (s * c - self * c * c)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn scale(self, s: Dd) -> Self {
        CDd { re: self.re * s, im: self.im * s }
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}
