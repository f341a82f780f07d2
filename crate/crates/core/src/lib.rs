//! Exact perturbative deformation quantization of polynomial Poisson
//! structures: Darboux coordinates, the star product through third order,
//! trace functionals and the operator realisation used in quantum mechanics.
//!
//! All arithmetic is exact over the Gaussian rationals; the deformation
//! parameter `theta` is a formal grading variable.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exact_algebra;
pub mod operators;
pub mod poisson;
pub mod qm_examples;
pub mod random;
pub mod star;

pub use error::{Error, Result};
pub use exact_algebra::{
    gaussian_integrate, ExactIntegral, GaussianFunction, RationalFunction, Scalar, ThetaPoly, VarSpace,
};

pub use operators::DiffOperator;
pub use poisson::{GammaTower, JacobiDefect, PoissonBivector};
pub use star::{Measure, StarProduct};

