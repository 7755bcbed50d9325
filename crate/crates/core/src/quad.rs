//! Adaptive Gauss–Kronrod quadrature.
//!
//! Globally adaptive bisection driven by the 7/15-point Kronrod pair, plus a
//! helper for semi-infinite ranges that marches outward in panels of a given
//! scale length until the integrand is negligible.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    integrate_with(&mut f, a, b, tol, 2000)
}

fn integrate_with<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (v, e) = gk15(f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let (total, err): (f64, f64) = intervals.iter().fold((0.0, 0.0), |(s, t), iv| (s + iv.2, t + iv.3));
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { estimate: total, error: err });
        }
        if err <= tol {
            return Ok(Integral { value: total, error: err, evaluations });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::QuadratureFailure { estimate: total, error: err });
        }
        let (worst, _) = intervals.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            // interval can no longer be split in floating point
            let total: f64 = intervals.iter().map(|iv| iv.2).sum();
            return Err(Error::QuadratureFailure { estimate: total, error: err });
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Integrates `f` over `[a, ∞)` by summing panels `[a + j·scale, a + (j+1)·scale]`
/// until a panel contributes less than `cutoff` times the largest panel seen
/// (three consecutive times). `tol` is the absolute tolerance per panel.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, scale: f64, tol: f64, cutoff: f64) -> Result<Integral> {
    let mut total = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut peak: f64 = 0.0;
    let mut quiet = 0;
    let mut lo = a;
    for _ in 0..100_000 {
        let hi = lo + scale;
        let panel = integrate_with(&mut f, lo, hi, tol, 500)?;
        total += panel.value;
        error += panel.error;
        evaluations += panel.evaluations;
        let mag = panel.value.abs();
        peak = peak.max(mag);
        if mag <= cutoff * peak || mag == 0.0 && peak == 0.0 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(Integral { value: total, error, evaluations });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
    }
    Err(Error::QuadratureFailure { estimate: total, error })
}
