use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{RationalFunction, Scalar, ThetaPoly};
use crate::operators::{build_phat, unit_index, DiffOperator};
use crate::poisson::PoissonBivector;
use crate::star::Measure;

/// `mu^s A mu^{-s}`, using `mu^s d_i mu^{-s} = d_i - s d_i ln mu`.
pub fn conjugate_by_measure_power(op: &DiffOperator, log_grad: &[RationalFunction], s: &Scalar) -> Result<DiffOperator> {
    let n = op.dim();
    if log_grad.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: log_grad.len() });
    }
    let shifted: Vec<DiffOperator> = (0..n)
        .map(|i| {
            DiffOperator::derivative(n, i)
                .try_sub(&DiffOperator::multiplication_rational(&log_grad[i].scale(s)))
                .expect("same dimension")
        })
        .collect();
    let mut out = DiffOperator::zero(n).with_trunc(op.trunc());
    for ((theta, alpha), c) in op.terms() {
        let mut term = DiffOperator::multiplication_rational(c);
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                term = term.compose(&shifted[i])?;
            }
        }
        out = out.try_add(&term.theta_shift(*theta))?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeParticleReport {
    pub dim: usize,
    pub measure: ThetaPoly,
    pub momenta: Vec<DiffOperator>,
    pub hamiltonian: DiffOperator,
    /// `mu^{1/2} p_i mu^{-1/2}`; equals `-i d_i` when the identity holds.
    pub conjugated_momenta: Vec<DiffOperator>,
    /// `mu^{1/2} H mu^{-1/2}`; equals `-Laplacian/2` when the identity holds.
    pub conjugated_hamiltonian: DiffOperator,
    pub conjugation_holds: bool,
    pub wave_vector: Vec<Scalar>,
    /// Eigenvalues of `p_i` on `exp(-i k.x) mu^{-1/2}`.
    pub momentum_eigenvalues: Vec<Scalar>,
    pub energy: Scalar,
}

/// Free particle `H = p_i p_i / 2` with momenta built on the measure `mu`.
pub fn free_particle_check(mu: &ThetaPoly, k: &[Scalar]) -> Result<FreeParticleReport> {
    let dim = mu.dim();
    if k.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: k.len() });
    }
    if !mu.is_theta_free() || !mu.is_momentum_free() {
        return Err(Error::NotCoordinateFunction);
    }
    // The measure condition is irrelevant here, so any bivector will do.
    let measure = Measure::new(mu.clone(), &PoissonBivector::zero(dim))?;
    let momenta = build_phat(&measure);
    let mut hamiltonian = DiffOperator::zero(dim);
    for p in &momenta {
        hamiltonian = hamiltonian.try_add(&p.compose(p)?)?;
    }
    let hamiltonian = hamiltonian.scale(&Scalar::ratio(1, 2));

    let half = Scalar::ratio(1, 2);
    let lam = measure.log_grad();
    let conjugated_momenta = momenta
        .iter()
        .map(|p| conjugate_by_measure_power(p, lam, &half))
        .collect::<Result<Vec<_>>>()?;
    let conjugated_hamiltonian = conjugate_by_measure_power(&hamiltonian, lam, &half)?;

    let mut conjugation_holds = true;
    let mut lap = DiffOperator::zero(dim);
    for (i, p) in conjugated_momenta.iter().enumerate() {
        let d = DiffOperator::derivative(dim, i);
        conjugation_holds &= *p == d.scale(&Scalar::complex(0, 1, -1, 1));
        lap.add_poly_term(0, unit_index(dim, i).iter().map(|a| a * 2).collect(), ThetaPoly::one(mu.space()));
    }
    conjugation_holds &= conjugated_hamiltonian == lap.scale(&Scalar::ratio(-1, 2));

    let constant = |r: RationalFunction| -> Result<Scalar> {
        r.to_poly()
            .and_then(|p| p.as_constant())
            .ok_or_else(|| Error::Invalid("plane-wave symbol is not constant".into()))
    };
    let momentum_eigenvalues = conjugated_momenta
        .iter()
        .map(|p| constant(p.plane_wave_symbol(k)?))
        .collect::<Result<Vec<_>>>()?;
    let energy = constant(conjugated_hamiltonian.plane_wave_symbol(k)?)?;

    Ok(FreeParticleReport {
        dim,
        measure: mu.clone(),
        momenta,
        hamiltonian,
        conjugated_momenta,
        conjugated_hamiltonian,
        conjugation_holds,
        wave_vector: k.to_vec(),
        momentum_eigenvalues,
        energy,
    })
}
