//! Differential operators and the operator realisation of the coordinates
//! and momenta.

mod coords;
mod diffop;

pub use coords::{
    a_tensor, build_gamma1, build_phat, build_xhat, subalgebra_defect, xp_defect, Gamma1Tensor,
};
pub use diffop::{add_indices, unit_index, DiffOperator, MultiIndex};
