//! Poisson bivectors, the canonical bracket, and the perturbative Darboux
//! construction.

mod bivector;
mod bracket;
mod darboux;
mod gamma;

pub use bivector::{epsilon, JacobiDefect, PoissonBivector};
pub use bracket::canonical_bracket;
pub use darboux::{
    assemble_darboux, delta_expected, delta_printed, general_brackets, phase_space_jacobi, verify_darboux,
    DarbouxMap, DarbouxReport, GeneralBrackets,
};
pub use gamma::{build_gamma, GammaTower};
