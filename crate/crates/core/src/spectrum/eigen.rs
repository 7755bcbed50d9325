//! Eigenvalues from sign changes of `ψ₁(0, λ)` and `ψ₁'(0, λ)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::SolverConfig;
use crate::potential::{Domain, PotentialModel};
use crate::spectrum::shoot::{shoot, shoot_many, Parity, ShootResult};
use crate::spectrum::weyl;

pub const MAX_EIGEN_COUNT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigRecord {
    pub index: usize,
    pub parity: Parity,
    pub lambda: f64,
    /// `|ψ(0)|` or `|ψ'(0)|/ω` relative to the norm of the boundary pair.
    pub residual: f64,
}

/// Grid points per semiclassical level.
const POINTS_PER_LEVEL: f64 = 8.0;
const REFINEMENTS: usize = 3;

fn parities(model: PotentialModel) -> &'static [Parity] {
    match model.domain() {
        Domain::FullLine => &[Parity::Even, Parity::Odd],
        Domain::HalfLine => &[Parity::None],
    }
}

fn lambda_grid(model: PotentialModel, hi: f64, levels: f64, density_boost: f64) -> Result<Vec<f64>> {
    let lo = model.q(0.0);
    // the density vanishes at the bottom; never step more than the mean spacing allows
    let cap = (hi - lo) / (POINTS_PER_LEVEL * density_boost * levels);
    let mut grid = vec![lo];
    let mut l = lo;
    while l < hi {
        let rho = weyl::density(model, l)?;
        let step = if rho > 0.0 { (1.0 / (POINTS_PER_LEVEL * density_boost * rho)).min(cap) } else { cap };
        l += step.max(1e-6 * l.abs().max(1.0));
        grid.push(l.min(hi));
    }
    Ok(grid)
}

/// The lowest `count` eigenvalues, sorted, with parity labels.
pub fn eigenvalues(model: PotentialModel, count: usize, cfg: &SolverConfig) -> Result<Vec<EigRecord>> {
    if count == 0 || count > MAX_EIGEN_COUNT {
        return Err(Error::InvalidInput(format!("eigenvalue count must be in 1..={MAX_EIGEN_COUNT}")));
    }
    let hi = weyl::bs_level(model, count as f64 + 1.0)?;
    let mut boost = 1.0;
    let mut found = 0;
    for _ in 0..=REFINEMENTS {
        let grid = lambda_grid(model, hi, count as f64 + 1.5, boost)?;
        let shots: Vec<ShootResult> = shoot_many(model, &grid, cfg).into_iter().collect::<Result<_>>()?;
        let mut brackets = Vec::new();
        for &parity in parities(model) {
            for w in shots.windows(2) {
                let (fa, fb) = (w[0].node_value(parity), w[1].node_value(parity));
                if fa == 0.0 || fa * fb < 0.0 {
                    brackets.push((parity, w[0], w[1]));
                }
            }
        }
        found = brackets.len();
        if found >= count {
            let mut records: Vec<EigRecord> =
                brackets.into_par_iter().map(|(parity, a, b)| refine(model, parity, a, b, cfg)).collect::<Result<_>>()?;
            records.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
            records.truncate(count);
            for (i, r) in records.iter_mut().enumerate() {
                r.index = i + 1;
            }
            return Ok(records);
        }
        boost *= 2.0;
    }
    Err(Error::BracketNotFound(found + 1))
}

/// Bisection to width `1e-10·max(1, |λ|)` followed by one secant step.
fn refine(model: PotentialModel, parity: Parity, a: ShootResult, b: ShootResult, cfg: &SolverConfig) -> Result<EigRecord> {
    let (mut a, mut b) = (a, b);
    let mut fa = a.node_value(parity);
    if fa == 0.0 {
        return Ok(EigRecord { index: 0, parity, lambda: a.lambda, residual: 0.0 });
    }
    while b.lambda - a.lambda > 1e-10 * a.lambda.abs().max(1.0) {
        let mid = shoot(model, 0.5 * (a.lambda + b.lambda), cfg)?;
        let fm = mid.node_value(parity);
        if fm == 0.0 {
            return Ok(EigRecord { index: 0, parity, lambda: mid.lambda, residual: 0.0 });
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    let fb = b.node_value(parity);
    let mut best = if fa.abs() < fb.abs() { a } else { b };
    if fb != fa {
        let l = b.lambda - fb * (b.lambda - a.lambda) / (fb - fa);
        if l > a.lambda && l < b.lambda {
            let s = shoot(model, l, cfg)?;
            if s.node_value(parity).abs() <= best.node_value(parity).abs() {
                best = s;
            }
        }
    }
    Ok(EigRecord { index: 0, parity, lambda: best.lambda, residual: best.node_value(parity).abs() })
}

/// Cached eigenvalue list, reusable when the solver tolerance matches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCache {
    pub schema: u32,
    pub model: PotentialModel,
    pub solver_tol: f64,
    pub records: Vec<EigRecord>,
}

impl EigenCache {
    pub const SCHEMA: u32 = 1;

    pub fn new(model: PotentialModel, solver_tol: f64, records: Vec<EigRecord>) -> Self {
        EigenCache { schema: Self::SCHEMA, model, solver_tol, records }
    }

    /// True when the cache answers a request for `count` eigenvalues.
    pub fn covers(&self, model: PotentialModel, solver_tol: f64, count: usize) -> bool {
        self.schema == Self::SCHEMA && self.model == model && self.solver_tol == solver_tol && self.records.len() >= count
    }
}
