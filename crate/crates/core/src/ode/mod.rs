//! Integration of `ψ'' = (q(x) − λ) ψ` for the decaying solution.

pub mod dp5;
pub mod path;
pub mod picard;
pub mod seed;

pub use dp5::{Dp5, Dp5Options};
pub use path::{integrate_psi1, psi1_path, sigma_of_x, SolutionPath, SolverConfig};
pub use picard::{picard_psi1, PicardConfig, PicardResult, MAX_PICARD_ORDER};
pub use seed::{auto_seed, lg_seed, wkb_sigma, wkb_sigma_branch, Branch, LgSeed, SeedConfig};
