//! Exact scalars, theta-graded polynomials, rational functions and
//! Gaussian-class functions.

mod gaussian;
mod parse;
mod poly;
mod ratfunc;
mod scalar;

pub use gaussian::{gaussian_integrate, ExactIntegral, GaussianFunction};
pub use parse::parse_poly;
pub use poly::{Exponents, Monomial, ThetaPoly, VarSpace, DEFAULT_TRUNC, EXACT};
pub use ratfunc::RationalFunction;
pub use scalar::Scalar;
