use num_traits::Zero;
use serde::Serialize;

use super::angular::{angular_momentum, l_squared, laplacian, solid_harmonics};
use crate::error::{Error, Result};
use crate::exact_algebra::{RationalFunction, Scalar, ThetaPoly, VarSpace};
use crate::operators::{build_gamma1, build_xhat, DiffOperator};
use crate::poisson::{build_gamma, epsilon, PoissonBivector};
use crate::star::{GaugeCorrection, Measure, TraceFunctional, MAX_STAR_ORDER};

/// `w^{ij} = eps^{ijk} x_k` with a rotation-invariant measure.
#[derive(Clone, Debug)]
pub struct FuzzySphereModel {
    pub omega: PoissonBivector,
    pub measure: Measure,
    pub order: u32,
}

impl FuzzySphereModel {
    pub fn new(mu: ThetaPoly, order: u32) -> Result<Self> {
        if order > MAX_STAR_ORDER {
            return Err(Error::UnsupportedOrder { requested: order, max: MAX_STAR_ORDER });
        }
        let omega = PoissonBivector::fuzzy_sphere();
        let defect = omega.jacobi_defect();
        if !defect.is_zero() {
            return Err(Error::NotPoisson(Box::new(defect)));
        }
        let measure = Measure::new(mu, &omega)?;
        if !measure.is_valid() {
            return Err(Error::MeasureViolation(measure.defect().to_vec()));
        }
        Ok(FuzzySphereModel { omega, measure, order })
    }

    pub fn trace_functional(&self) -> Result<TraceFunctional> {
        TraceFunctional::new(&self.omega, self.measure.mu().clone())
    }

    pub fn xhat(&self) -> Result<Vec<DiffOperator>> {
        build_xhat(&build_gamma(&self.omega, self.order)?, &build_gamma1(&self.omega), self.order)
    }
}

/// `c` with `a = c b`, if it exists.
pub fn proportionality(a: &DiffOperator, b: &DiffOperator) -> Option<Scalar> {
    let Some((key, cb)) = b.terms().next() else {
        return a.is_zero().then(Scalar::zero);
    };
    let ca = a.coefficient(key.0, &key.1).cloned().unwrap_or_else(|| RationalFunction::zero(b.space()));
    let num = ca.numerator() * cb.denominator();
    let den = ca.denominator() * cb.numerator();
    let c = num.div_exact(&den).ok()??.as_constant()?;
    (*a == b.scale(&c)).then_some(c)
}

fn poly_ratio(p: &ThetaPoly, y: &ThetaPoly) -> Option<Scalar> {
    let (m, cy) = y.leading_term()?;
    let c = p.coefficient(m).checked_div(cy).ok()?;
    (*p == y.scale(&c)).then_some(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub l: u32,
    /// `E_n / omega_osc = n + 3/2`.
    pub unperturbed: Scalar,
    /// `Delta E / (theta^2 omega_osc^2) = l(l+1)/24`.
    pub correction: Scalar,
}

pub fn energy_correction(n: u32, l: u32) -> Result<EnergyLevel> {
    if l > n {
        return Err(Error::QuantumNumbers { n, l });
    }
    Ok(EnergyLevel {
        n,
        l,
        unperturbed: Scalar::ratio(2 * n as i64 + 3, 2),
        correction: Scalar::ratio((l * (l + 1)) as i64, 24),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OscillatorReport {
    pub omega_osc: &'static str,
    pub omega_bivector: PoissonBivector,
    pub order: u32,
    pub gauge: GaugeCorrection,
    /// `-Laplacian/2`.
    pub kinetic: DiffOperator,
    /// `(1/2) r^2 *'`, the coefficient of `omega_osc^2`.
    pub potential: DiffOperator,
    pub zeroth_order_holds: bool,
    pub first_order_vanishes: bool,
    /// Theta^2 slice of `potential`.
    pub correction: DiffOperator,
    /// `c` with `correction = c L^2`.
    pub correction_coefficient: Option<Scalar>,
    pub identity_holds: bool,
    pub third_order_vanishes: Option<bool>,
    /// `[correction, L_i] = 0` for all `i`.
    pub degeneracy_preserved: bool,
    /// Eigenvalue of `correction` on the solid harmonics of degree `l`.
    pub harmonic_eigenvalues: Vec<(u32, Option<Scalar>)>,
    pub energy_levels: Vec<EnergyLevel>,
}

impl OscillatorReport {
    pub fn passes(&self) -> bool {
        let expected = |l: u32| Some(Scalar::ratio((l * (l + 1)) as i64, 24));
        self.zeroth_order_holds
            && self.first_order_vanishes
            && self.identity_holds
            && self.degeneracy_preserved
            && self.harmonic_eigenvalues.iter().all(|(l, e)| *e == expected(*l))
    }
}

/// `H = -Laplacian/2 + (omega_osc^2/2) r^2 *'` on the fuzzy sphere with `mu = 1`.
pub fn build_fuzzy_oscillator(order: u32) -> Result<OscillatorReport> {
    if !(2..=MAX_STAR_ORDER).contains(&order) {
        return Err(Error::UnsupportedOrder { requested: order, max: MAX_STAR_ORDER });
    }
    let space = VarSpace::coords(3);
    let model = FuzzySphereModel::new(ThetaPoly::one(space), order)?;
    let tf = model.trace_functional()?;
    let r2 = ThetaPoly::parse("x1^2 + x2^2 + x3^2", space)?;
    let half = Scalar::ratio(1, 2);
    let potential = tf.star_prime.left_operator(&r2, order)?.scale(&half);
    let kinetic = laplacian(3).scale(&-half.clone());

    let zeroth_order_holds = potential.theta_slice(0) == DiffOperator::multiplication(&r2.scale(&half));
    let first_order_vanishes = potential.theta_slice(1).is_zero();
    let correction = potential.theta_slice(2);
    let l2 = l_squared();
    let correction_coefficient = proportionality(&correction, &l2);
    let identity_holds = correction_coefficient == Some(Scalar::ratio(1, 24));
    let third_order_vanishes = (order >= 3).then(|| potential.theta_slice(3).is_zero());

    let mut degeneracy_preserved = true;
    for i in 0..3 {
        degeneracy_preserved &= correction.commutator(&angular_momentum(i))?.is_zero();
    }

    let mut harmonic_eigenvalues = Vec::new();
    for l in 0..=2 {
        let mut common: Option<Option<Scalar>> = None;
        for y in solid_harmonics(l)? {
            let e = poly_ratio(&correction.apply(&y)?, &y);
            common = match common {
                None => Some(e),
                Some(prev) if prev == e => Some(prev),
                Some(_) => Some(None),
            };
        }
        harmonic_eigenvalues.push((l, common.flatten()));
    }

    let mut energy_levels = Vec::new();
    for n in 0..=2 {
        for l in 0..=n {
            energy_levels.push(energy_correction(n, l)?);
        }
    }

    Ok(OscillatorReport {
        omega_osc: "omega_osc",
        omega_bivector: model.omega,
        order,
        gauge: tf.gauge,
        kinetic,
        potential,
        zeroth_order_holds,
        first_order_vanishes,
        correction,
        correction_coefficient,
        identity_holds,
        third_order_vanishes,
        degeneracy_preserved,
        harmonic_eigenvalues,
        energy_levels,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceEntry {
    pub i: usize,
    pub j: usize,
    /// `[L_i, x^j] - i eps^{ijk} x^k` with operator `x^k`.
    pub residual: DiffOperator,
    /// The same with multiplication by `x^k` on the right.
    pub residual_multiplication: DiffOperator,
    /// Whether `residual` vanishes at each theta order.
    pub holds_by_order: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RotationReport {
    pub order: u32,
    pub entries: Vec<CovarianceEntry>,
    /// `[L_i, L_j] = i eps^{ijk} L_k`.
    pub angular_algebra_holds: bool,
    /// `[L_i, r^2] = 0`.
    pub r2_invariant: bool,
}

impl RotationReport {
    pub fn covariant(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }
}

pub fn rotation_covariance_check(order: u32) -> Result<RotationReport> {
    let space = VarSpace::coords(3);
    let model = FuzzySphereModel::new(ThetaPoly::one(space), order)?;
    let xs = model.xhat()?;
    let ls: Vec<DiffOperator> = (0..3).map(angular_momentum).collect();
    let mut entries = Vec::with_capacity(9);
    let mut angular_algebra_holds = true;
    let mut r2_invariant = true;
    let r2 = DiffOperator::multiplication(&ThetaPoly::parse("x1^2 + x2^2 + x3^2", space)?);
    for i in 0..3 {
        r2_invariant &= ls[i].commutator(&r2)?.is_zero();
        for j in 0..3 {
            let mut rot = DiffOperator::zero(3);
            let mut rot_mult = DiffOperator::zero(3);
            let mut rot_l = DiffOperator::zero(3);
            for k in 0..3 {
                let e = epsilon(i, j, k);
                if e != 0 {
                    let c = Scalar::complex(0, 1, e, 1);
                    rot = rot.try_add(&xs[k].scale(&c))?;
                    rot_mult = rot_mult.try_add(&DiffOperator::multiplication(&ThetaPoly::coord(space, k)).scale(&c))?;
                    rot_l = rot_l.try_add(&ls[k].scale(&c))?;
                }
            }
            angular_algebra_holds &= ls[i].commutator(&ls[j])? == rot_l;
            let lx = ls[i].commutator(&xs[j])?;
            let residual = lx.try_sub(&rot)?;
            let residual_multiplication = lx.try_sub(&rot_mult)?;
            let holds_by_order = (0..=order).map(|s| residual.theta_slice(s).is_zero()).collect();
            entries.push(CovarianceEntry { i, j, residual, residual_multiplication, holds_by_order });
        }
    }
    Ok(RotationReport { order, entries, angular_algebra_holds, r2_invariant })
}
