//! Coordinate and momentum operators.

use serde::Serialize;

use super::{add_indices, unit_index, DiffOperator};
use crate::error::{Error, Result};
use crate::exact_algebra::{RationalFunction, Scalar, ThetaPoly, VarSpace};
use crate::poisson::{GammaTower, PoissonBivector};
use crate::star::{Measure, StarProduct};

/// `A^{ijk} = w^{nl} d_l w^{mk} d_n d_m w^{ij}`, flattened `(i*N + j)*N + k`.
pub fn a_tensor(omega: &PoissonBivector) -> Vec<ThetaPoly> {
    let n = omega.dim();
    let space = omega.space();
    let mut out = vec![ThetaPoly::zero(space); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let wij = omega.entry(i, j);
            if wij.total_degree().unwrap_or(0) < 2 {
                continue;
            }
            for a in 0..n {
                for m in 0..n {
                    let dd = wij.d(a).d(m);
                    if dd.is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        let w = omega.entry(a, l);
                        if w.is_zero() {
                            continue;
                        }
                        for k in 0..n {
                            let dw = omega.entry(m, k).d(l);
                            if !dw.is_zero() {
                                let slot = &mut out[(i * n + j) * n + k];
                                *slot = &*slot + &(&(w * &dw) * &dd);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The third-order quantum correction `Gamma_1^{ijk}`, symmetric in `(j,k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma1Tensor {
    dim: usize,
    components: Vec<ThetaPoly>,
}

impl Gamma1Tensor {
    pub fn zero(dim: usize) -> Self {
        Gamma1Tensor { dim, components: vec![ThetaPoly::zero(VarSpace::coords(dim)); dim * dim * dim] }
    }

    /// `c (A^{ijk} + A^{ikj})`.
    pub fn symmetrised(omega: &PoissonBivector, c: &Scalar) -> Self {
        let n = omega.dim();
        let a = a_tensor(omega);
        let mut components = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    components.push((&a[(i * n + j) * n + k] + &a[(i * n + k) * n + j]).scale(c));
                }
            }
        }
        Gamma1Tensor { dim: n, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> &ThetaPoly {
        &self.components[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ThetaPoly::is_zero)
    }

    /// `G^{ijl} - G^{jil} - c A^{ijl}` for every index triple.
    pub fn constraint_residual(&self, omega: &PoissonBivector, c: &Scalar) -> Vec<ThetaPoly> {
        let n = self.dim;
        let a = a_tensor(omega);
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let lhs = self.component(i, j, l) - self.component(j, i, l);
                    out.push(&lhs - &a[(i * n + j) * n + l].scale(c));
                }
            }
        }
        out
    }
}

/// `Gamma_1^{ijk} = (1/48)(A^{ijk} + A^{ikj})`, the correction that makes
/// `x^i` act as left star-multiplication by `x^i`. It satisfies
/// `G^{ijl} - G^{jil} = A^{ijl}/16`.
pub fn build_gamma1(omega: &PoissonBivector) -> Gamma1Tensor {
    Gamma1Tensor::symmetrised(omega, &Scalar::ratio(1, 48))
}

/// `x^i = sum_n theta^n Gamma^{i(n)}(x) (-i d)^n - i theta^3 Gamma_1^{ilm} d_l d_m`
/// through `theta^order`.
pub fn build_xhat(tower: &GammaTower, gamma1: &Gamma1Tensor, order: u32) -> Result<Vec<DiffOperator>> {
    if order > tower.max_order() {
        return Err(Error::Invalid(format!(
            "coordinate operators to order {order} need the Gamma tower to order {order}, built to {}",
            tower.max_order()
        )));
    }
    let n = tower.dim();
    if gamma1.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: gamma1.dim() });
    }
    let space = VarSpace::coords(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut op = DiffOperator::multiplication(&ThetaPoly::coord(space, i)).with_trunc(order);
        for k in 1..=order {
            let phase = Scalar::i_pow(-(k as i64));
            for (alpha, c) in tower.contracted(k, i).split_momenta()? {
                op.add_poly_term(k, alpha, c.scale(&phase));
            }
        }
        if order >= 3 {
            let minus_i = -Scalar::i();
            for l in 0..n {
                for m in 0..n {
                    let c = gamma1.component(i, l, m);
                    if !c.is_zero() {
                        op.add_poly_term(3, add_indices(&unit_index(n, l), &unit_index(n, m)), c.scale(&minus_i));
                    }
                }
            }
        }
        out.push(op);
    }
    Ok(out)
}

/// `p_i = -i d_i - (i/2) d_i mu / mu`.
pub fn build_phat(measure: &Measure) -> Vec<DiffOperator> {
    let n = measure.mu().dim();
    let half_i = Scalar::complex(0, 1, -1, 2);
    (0..n)
        .map(|i| {
            let d = DiffOperator::derivative(n, i).scale(&-Scalar::i());
            let m = DiffOperator::multiplication_rational(&measure.log_grad()[i].scale(&half_i));
            d.try_add(&m).expect("same dimension")
        })
        .collect()
}

/// `[x^i, x^j] - i theta L(w^{ij})` for `i < j`, through `theta^order`, where
/// `L(f)` is left star-multiplication.
pub fn subalgebra_defect(
    xhat: &[DiffOperator],
    star: &StarProduct,
    order: u32,
) -> Result<Vec<((usize, usize), DiffOperator)>> {
    let n = star.dim();
    if xhat.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xhat.len() });
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = xhat[i].commutator(&xhat[j])?.truncated(order);
            let w = star.omega().entry(i, j);
            let rhs = if order == 0 {
                DiffOperator::zero(n)
            } else {
                star.left_operator(w, order - 1)?.theta_shift(1).scale(&Scalar::i())
            };
            out.push(((i, j), lhs.try_sub(&rhs)?.truncated(order)));
        }
    }
    Ok(out)
}

/// `[x^i, p_j] - (i delta^{ij} - (i theta/2)(d_j w^{il} p_l + i d_j(w^{il} d_l ln mu)))`
/// through `theta^1`, row-major over `(i, j)`.
pub fn xp_defect(
    xhat: &[DiffOperator],
    phat: &[DiffOperator],
    omega: &PoissonBivector,
    measure: &Measure,
) -> Result<Vec<DiffOperator>> {
    let n = omega.dim();
    let space = omega.space();
    let lam = measure.log_grad();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        // w^{il} lambda_l
        let mut wl = RationalFunction::zero(space);
        for l in 0..n {
            wl = &wl + &lam[l].mul_poly(omega.entry(i, l));
        }
        for j in 0..n {
            let lhs = xhat[i].truncated(1).commutator(&phat[j])?.truncated(1);
            let mut rhs = if i == j {
                DiffOperator::multiplication(&ThetaPoly::constant(space, Scalar::i()))
            } else {
                DiffOperator::zero(n)
            };
            let mut inner = DiffOperator::multiplication_rational(&wl.d(j).scale(&Scalar::i()));
            for l in 0..n {
                let dw = omega.entry(i, l).d(j);
                if !dw.is_zero() {
                    inner = inner.try_add(&DiffOperator::multiplication(&dw).compose(&phat[l])?)?;
                }
            }
            rhs = rhs.try_add(&inner.theta_shift(1).scale(&Scalar::complex(0, 1, -1, 2)))?;
            out.push(lhs.try_sub(&rhs)?.truncated(1));
        }
    }
    Ok(out)
}
