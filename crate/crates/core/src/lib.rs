//! Exact quaternion arithmetic, ideal classes of orders of level `p`, `p²`
//! and `p³`, Brandt matrices, weight-3/2 theta lifts and twisted central
//! L-values.

pub mod arith;
pub mod brandt;
pub mod enumerate;
pub mod error;
pub mod hnf;
pub mod lattice;
pub mod linalg;
pub mod lseries;
pub mod orders;
pub mod quaternion;
pub mod spectral;
pub mod theta;

pub use brandt::{BrandtMatrix, ClassModule};
pub use enumerate::QuadForm;
pub use error::{Error, Result};
pub use lattice::{Lattice, LeftIdeal, Order, Side};
pub use orders::{ClassSet, ClassTower, OrderKind, OrderTower};
pub use quaternion::{algebra_for_prime, Quat, QuaternionAlgebra, Rat};
