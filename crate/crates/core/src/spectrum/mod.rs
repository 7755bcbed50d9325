//! Eigenvalues, connection coefficient, Fredholm determinant and product checks.

pub mod shoot;
pub mod weyl;

pub use shoot::{fredholm_a, fredholm_a_log, shoot, shoot_many, shoot_with_reference, t12_wronskian, Parity, ShootResult};
pub mod eigen;

pub use eigen::{eigenvalues, EigRecord, EigenCache, MAX_EIGEN_COUNT};
pub mod product;

pub use product::{product_crosscheck, ProductEstimate};
