//! Truncated Taylor series in one variable.
//!
//! A [`Jet`] stores `coeffs[m] = f^{(m)}(t₀) / m!` for `m = 0..=order`.
//! Arithmetic truncates at the common order. The operator impls panic on a
//! base-point or order mismatch; [`jet_arith`] is the checked entry point.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: f64,
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementaryFn {
    Exp,
    Sqrt,
    Log,
    Cosh,
    Sinh,
    Tanh,
    Pow(f64),
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooHigh { requested: order, max: MAX_ORDER });
    }
    Ok(())
}

impl Jet {
    /// Jet from Taylor coefficients.
    pub fn from_coeffs(base: f64, coeffs: Vec<f64>) -> Result<Jet> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("jet needs at least one coefficient".into()));
        }
        check_order(coeffs.len() - 1)?;
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite jet coefficient {bad}")));
        }
        Ok(Jet { base, coeffs })
    }

    pub fn constant(base: f64, order: usize, value: f64) -> Result<Jet> {
        check_order(order)?;
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Ok(Jet { base, coeffs })
    }

    /// The independent variable `t` expanded at `base`.
    pub fn variable(base: f64, order: usize) -> Result<Jet> {
        let mut j = Jet::constant(base, order, base)?;
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        Ok(j)
    }

    pub fn base_point(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `f^{(m)}/m!`, zero above the order.
    pub fn coeff(&self, m: usize) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    /// The `m`-th derivative `f^{(m)}(t₀)`.
    pub fn derivative_value(&self, m: usize) -> f64 {
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        self.coeff(m) * fact
    }

    /// Evaluates the truncated polynomial at `base + dt`.
    pub fn eval_offset(&self, dt: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * dt + c)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let n = (order + 1).min(self.coeffs.len());
        Jet { base: self.base, coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet { base: self.base, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut j = self.clone();
        j.coeffs[0] += s;
        j
    }

    fn compatible(&self, other: &Jet) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BasePointMismatch(self.base, other.base));
        }
        if self.order() != other.order() {
            return Err(Error::InvalidInput(format!("jet order mismatch: {} vs {}", self.order(), other.order())));
        }
        Ok(())
    }

    fn mul_unchecked(&self, b: &Jet) -> Jet {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (m, o) in out.iter_mut().enumerate() {
            *o = (0..=m).map(|k| self.coeffs[k] * b.coeffs[m - k]).sum();
        }
        Jet { base: self.base, coeffs: out }
    }

    fn div_unchecked(&self, b: &Jet) -> Result<Jet> {
        let b0 = b.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DivisionBySingularJet);
        }
        let n = self.coeffs.len();
        let mut c = vec![0.0; n];
        for m in 0..n {
            let s: f64 = (1..=m).map(|k| b.coeffs[k] * c[m - k]).sum();
            c[m] = (self.coeffs[m] - s) / b0;
        }
        Ok(Jet { base: self.base, coeffs: c })
    }

    pub fn recip(&self) -> Result<Jet> {
        let one = Jet::constant(self.base, self.order(), 1.0)?;
        one.div_unchecked(self)
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for m in 1..a.len() {
            let s: f64 = (1..=m).map(|k| k as f64 * a[k] * b[m - k]).sum();
            b[m] = s / m as f64;
        }
        Jet { base: self.base, coeffs: b }
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(Error::SingularComposition(a[0]));
        }
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].ln();
        for m in 1..a.len() {
            let s: f64 = (1..m).map(|k| k as f64 * b[k] * a[m - k]).sum();
            b[m] = (a[m] - s / m as f64) / a[0];
        }
        Ok(Jet { base: self.base, coeffs: b })
    }

    pub fn powf(&self, r: f64) -> Result<Jet> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(Error::SingularComposition(a[0]));
        }
        let mut b = vec![0.0; a.len()];
        b[0] = if r == 0.5 { a[0].sqrt() } else { a[0].powf(r) };
        for m in 1..a.len() {
            let s: f64 = (1..=m).map(|k| (r * k as f64 - (m - k) as f64) * a[k] * b[m - k]).sum();
            b[m] = s / (m as f64 * a[0]);
        }
        Ok(Jet { base: self.base, coeffs: b })
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    /// `(sinh a, cosh a)` by the coupled recurrence.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for m in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for k in 1..=m {
                let ka = k as f64 * a[k];
                ss += ka * c[m - k];
                cc += ka * s[m - k];
            }
            s[m] = ss / m as f64;
            c[m] = cc / m as f64;
        }
        (Jet { base: self.base, coeffs: s }, Jet { base: self.base, coeffs: c })
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    pub fn tanh(&self) -> Jet {
        // t' = (1 - t²) a'
        let a = &self.coeffs;
        let n = a.len();
        let mut t = vec![0.0; n];
        let mut u = vec![0.0; n];
        t[0] = a[0].tanh();
        u[0] = 1.0 - t[0] * t[0];
        for m in 1..n {
            let s: f64 = (1..=m).map(|k| k as f64 * a[k] * u[m - k]).sum();
            t[m] = s / m as f64;
            let sq: f64 = (0..=m).map(|i| t[i] * t[m - i]).sum();
            u[m] = -sq;
        }
        Jet { base: self.base, coeffs: t }
    }

    /// Jet of `f'`, one order lower.
    pub fn derivative(&self) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::ZeroOrder);
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(m, c)| m as f64 * c).collect();
        Ok(Jet { base: self.base, coeffs })
    }
}

/// Checked binary arithmetic.
pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet> {
    a.compatible(b)?;
    Ok(match op {
        JetOp::Add => a + b,
        JetOp::Sub => a - b,
        JetOp::Mul => a.mul_unchecked(b),
        JetOp::Div => a.div_unchecked(b)?,
    })
}

pub fn jet_elementary(a: &Jet, f: ElementaryFn) -> Result<Jet> {
    match f {
        ElementaryFn::Exp => Ok(a.exp()),
        ElementaryFn::Sqrt => a.sqrt(),
        ElementaryFn::Log => a.ln(),
        ElementaryFn::Cosh => Ok(a.cosh()),
        ElementaryFn::Sinh => Ok(a.sinh()),
        ElementaryFn::Tanh => Ok(a.tanh()),
        ElementaryFn::Pow(r) => a.powf(r),
    }
}

pub fn jet_derivative(a: &Jet) -> Result<Jet> {
    a.derivative()
}

fn assert_compatible(a: &Jet, b: &Jet) {
    if let Err(e) = a.compatible(b) {
        panic!("{e}");
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, b: &Jet) -> Jet {
        assert_compatible(self, b);
        let mut out = self.clone();
        out.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x += y);
        out
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, b: &Jet) -> Jet {
        assert_compatible(self, b);
        let mut out = self.clone();
        out.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x -= y);
        out
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, b: &Jet) -> Jet {
        assert_compatible(self, b);
        self.mul_unchecked(b)
    }
}

/// Panics if `b` has a vanishing constant term.
impl Div for &Jet {
    type Output = Jet;
    fn div(self, b: &Jet) -> Jet {
        assert_compatible(self, b);
        self.div_unchecked(b).expect("division by a jet with zero constant term")
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        self.add_scalar(s)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, b: Jet) -> Jet {
                (&self).$m(&b)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, b: &Jet) -> Jet {
                (&self).$m(b)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, b: Jet) -> Jet {
                self.$m(&b)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        self.add_scalar(s)
    }
}
