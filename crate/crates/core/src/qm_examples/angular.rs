use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, ThetaPoly, VarSpace};
use crate::operators::{add_indices, unit_index, DiffOperator};
use crate::poisson::epsilon;

/// `L_i = -i eps^{ijk} x_j d_k` in three dimensions.
pub fn angular_momentum(i: usize) -> DiffOperator {
    let space = VarSpace::coords(3);
    let mut op = DiffOperator::zero(3);
    for j in 0..3 {
        for k in 0..3 {
            let e = epsilon(i, j, k);
            if e != 0 {
                op.add_poly_term(0, unit_index(3, k), ThetaPoly::coord(space, j).scale(&Scalar::complex(0, 1, -e, 1)));
            }
        }
    }
    op
}

/// `L^2 = L_1^2 + L_2^2 + L_3^2`.
pub fn l_squared() -> DiffOperator {
    let mut out = DiffOperator::zero(3);
    for i in 0..3 {
        let l = angular_momentum(i);
        out = out.try_add(&l.compose(&l).expect("same dimension")).expect("same dimension");
    }
    out
}

/// `sum_i d_i^2`.
pub fn laplacian(dim: usize) -> DiffOperator {
    let space = VarSpace::coords(dim);
    let mut op = DiffOperator::zero(dim);
    for i in 0..dim {
        let e = unit_index(dim, i);
        op.add_poly_term(0, add_indices(&e, &e), ThetaPoly::one(space));
    }
    op
}

/// Harmonic homogeneous polynomials of degree `l <= 2`, one per `m = l, ..., -l`.
pub fn solid_harmonics(l: u32) -> Result<Vec<ThetaPoly>> {
    let space = VarSpace::coords(3);
    let srcs: &[&str] = match l {
        0 => &["1"],
        1 => &["x1 + i*x2", "x3", "x1 - i*x2"],
        2 => &["(x1 + i*x2)^2", "x3*(x1 + i*x2)", "2*x3^2 - x1^2 - x2^2", "x3*(x1 - i*x2)", "(x1 - i*x2)^2"],
        _ => return Err(Error::UnsupportedOrder { requested: l, max: 2 }),
    };
    srcs.iter().map(|s| ThetaPoly::parse(s, space)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LSquaredCheck {
    pub l: u32,
    pub expected: Scalar,
    pub states: Vec<ThetaPoly>,
    /// `L^2 Y - l(l+1) Y` per state.
    pub residuals: Vec<ThetaPoly>,
}

impl LSquaredCheck {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(ThetaPoly::is_zero)
    }
}

pub fn l_squared_eigencheck(l: u32) -> Result<LSquaredCheck> {
    let states = solid_harmonics(l)?;
    let expected = Scalar::from_int((l * (l + 1)) as i64);
    let l2 = l_squared();
    let residuals = states
        .iter()
        .map(|y| Ok(&l2.apply(y)? - &y.scale(&expected)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LSquaredCheck { l, expected, states, residuals })
}
