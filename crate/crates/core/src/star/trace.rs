//! Integration measures, the gauge-corrected product and the trace functional.

use serde::Serialize;

use super::StarProduct;
use crate::error::{Error, Result};
use crate::exact_algebra::{gaussian_integrate, ExactIntegral, GaussianFunction, RationalFunction, Scalar, ThetaPoly};
use crate::poisson::PoissonBivector;

/// A polynomial measure `mu(x)` together with its divergence defect for a
/// given bivector.
#[derive(Clone, Debug, Serialize)]
pub struct Measure {
    mu: ThetaPoly,
    #[serde(skip)]
    log_grad: Vec<RationalFunction>,
    defect: Vec<ThetaPoly>,
}

/// `d_i(mu w^{ij})` for each `j`.
pub fn measure_defect(mu: &ThetaPoly, omega: &PoissonBivector) -> Result<Vec<ThetaPoly>> {
    let n = omega.dim();
    if mu.space() != omega.space() {
        return Err(Error::DimensionMismatch { expected: n, found: mu.dim() });
    }
    Ok((0..n)
        .map(|j| {
            let mut acc = ThetaPoly::zero(omega.space());
            for i in 0..n {
                acc = &acc + &(mu * omega.entry(i, j)).d(i);
            }
            acc
        })
        .collect())
}

impl Measure {
    pub fn new(mu: ThetaPoly, omega: &PoissonBivector) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::ZeroMeasure);
        }
        if !mu.is_theta_free() || mu.space().momenta {
            return Err(Error::NotCoordinateFunction);
        }
        let defect = measure_defect(&mu, omega)?;
        let log_grad = (0..mu.dim())
            .map(|i| RationalFunction::new(mu.d(i), mu.clone()))
            .collect::<Result<_>>()?;
        Ok(Measure { mu, log_grad, defect })
    }

    pub fn mu(&self) -> &ThetaPoly {
        &self.mu
    }

    /// `d_i mu / mu`.
    pub fn log_grad(&self) -> &[RationalFunction] {
        &self.log_grad
    }

    pub fn defect(&self) -> &[ThetaPoly] {
        &self.defect
    }

    pub fn is_valid(&self) -> bool {
        self.defect.iter().all(ThetaPoly::is_zero)
    }
}

/// `b^{ik}` of the gauge operator `D = 1 + theta^2 b^{ik} d_i d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeCorrection {
    dim: usize,
    b: Vec<ThetaPoly>,
    /// `M^{ik} = d_l(mu w^{ij} d_j w^{lk})`.
    numerator: Vec<ThetaPoly>,
}

impl GaugeCorrection {
    pub fn zero(dim: usize, space: crate::exact_algebra::VarSpace) -> Self {
        GaugeCorrection { dim, b: vec![ThetaPoly::zero(space); dim * dim], numerator: vec![ThetaPoly::zero(space); dim * dim] }
    }

    /// Builds a correction from an explicit matrix (row-major).
    pub fn from_matrix(dim: usize, b: Vec<ThetaPoly>) -> Result<Self> {
        if b.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: b.len() });
        }
        let space = b[0].space();
        Ok(GaugeCorrection { dim, b, numerator: vec![ThetaPoly::zero(space); dim * dim] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, k: usize) -> &ThetaPoly {
        &self.b[i * self.dim + k]
    }

    pub fn numerator(&self, i: usize, k: usize) -> &ThetaPoly {
        &self.numerator[i * self.dim + k]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|k| self.entry(i, k) == self.entry(k, i)))
    }
}

/// `M^{ik} = d_l(mu w^{ij} d_j w^{lk})`.
pub fn gauge_numerator(mu: &ThetaPoly, omega: &PoissonBivector) -> Vec<ThetaPoly> {
    let n = omega.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let mut acc = ThetaPoly::zero(omega.space());
            for l in 0..n {
                let mut inner = ThetaPoly::zero(omega.space());
                for j in 0..n {
                    inner = &inner + &(omega.entry(i, j) * &omega.entry(l, k).d(j));
                }
                acc = &acc + &(mu * &inner).d(l);
            }
            out.push(acc);
        }
    }
    out
}

/// `b^{ik} = M^{ik} / (48 mu)`; the measure must satisfy the divergence
/// condition and divide every `M^{ik}`.
pub fn gauge_b(measure: &Measure, omega: &PoissonBivector) -> Result<GaugeCorrection> {
    if !measure.is_valid() {
        return Err(Error::MeasureViolation(measure.defect.clone()));
    }
    let numerator = gauge_numerator(&measure.mu, omega);
    let mut b = Vec::with_capacity(numerator.len());
    let mut remainders = Vec::with_capacity(numerator.len());
    let mut exact = true;
    for m in &numerator {
        let (q, r) = m.div_rem(&measure.mu)?;
        exact &= r.is_zero();
        b.push(q.scale(&Scalar::ratio(1, 48)));
        remainders.push(r);
    }
    if !exact {
        return Err(Error::NonPolynomialGauge { numerator, remainder: remainders });
    }
    Ok(GaugeCorrection { dim: omega.dim(), b, numerator })
}

/// `Tr f = int mu f`.
pub fn trace(f: &GaussianFunction, measure: &Measure) -> Result<ExactIntegral> {
    gaussian_integrate(&f.mul_poly(&measure.mu)?)
}

/// Per-order defects of the trace functional on a pair `(f, g)`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicityReport {
    /// `Tr(f * g) - Tr(g * f)`.
    pub commutator: ExactIntegral,
    /// `Tr(f * g) - Tr(f g)`.
    pub trace_condition: ExactIntegral,
}

impl CyclicityReport {
    pub fn is_zero(&self) -> bool {
        self.commutator.is_zero() && self.trace_condition.is_zero()
    }
}

/// The trace built on a measure, with both the plain and the corrected product.
#[derive(Clone, Debug)]
pub struct TraceFunctional {
    pub measure: Measure,
    pub gauge: GaugeCorrection,
    pub star: StarProduct,
    pub star_prime: StarProduct,
}

/// Orders checked by the trace suites.
pub const TRACE_ORDER: u32 = 2;

impl TraceFunctional {
    pub fn new(omega: &PoissonBivector, mu: ThetaPoly) -> Result<Self> {
        let measure = Measure::new(mu, omega)?;
        let gauge = gauge_b(&measure, omega)?;
        let star = StarProduct::new(omega)?;
        let star_prime = star.with_gauge(&gauge)?;
        Ok(TraceFunctional { measure, gauge, star, star_prime })
    }

    pub fn trace(&self, f: &GaussianFunction) -> Result<ExactIntegral> {
        trace(f, &self.measure)
    }

    fn product(&self, corrected: bool) -> &StarProduct {
        if corrected {
            &self.star_prime
        } else {
            &self.star
        }
    }

    pub fn cyclicity_defect(&self, f: &GaussianFunction, g: &GaussianFunction, corrected: bool) -> Result<CyclicityReport> {
        let star = self.product(corrected);
        let fg = star.star_gaussian(f, g, TRACE_ORDER)?;
        let gf = star.star_gaussian(g, f, TRACE_ORDER)?;
        let tr_fg = self.trace(&fg)?;
        Ok(CyclicityReport {
            commutator: tr_fg.try_sub(&self.trace(&gf)?)?,
            trace_condition: tr_fg.try_sub(&self.trace(&f.try_mul(g)?)?)?,
        })
    }

    /// `Tr(conj(f *' phi) *' psi) - Tr(conj(phi) *' (f *' psi))` through `theta^2`.
    pub fn hermiticity_defect(&self, f: &ThetaPoly, phi: &GaussianFunction, psi: &GaussianFunction) -> Result<ExactIntegral> {
        if f.terms().any(|(_, c)| !c.is_real()) {
            return Err(Error::Invalid("hermiticity check needs a real polynomial".into()));
        }
        let s = &self.star_prime;
        let f = GaussianFunction::polynomial(f.clone())?;
        let lhs = s.star_gaussian(&s.star_gaussian(&f, phi, TRACE_ORDER)?.conj(), psi, TRACE_ORDER)?;
        let rhs = s.star_gaussian(&phi.conj(), &s.star_gaussian(&f, psi, TRACE_ORDER)?, TRACE_ORDER)?;
        self.trace(&lhs)?.try_sub(&self.trace(&rhs)?)
    }

    /// `int d_i f M^{ik} d_k g`, the integrand of the second-order trace obstruction.
    pub fn obstruction_integral(&self, f: &GaussianFunction, g: &GaussianFunction) -> Result<ExactIntegral> {
        let n = self.gauge.dim();
        let mut acc = GaussianFunction::new(ThetaPoly::zero(self.measure.mu.space()), f.weight() + g.weight())?;
        for i in 0..n {
            for k in 0..n {
                let m = self.gauge.numerator(i, k);
                if m.is_zero() {
                    continue;
                }
                acc = acc.try_add(&f.d(i).mul_poly(m)?.try_mul(&g.d(k))?)?;
            }
        }
        gaussian_integrate(&acc)
    }
}

/// Free-function form of [`TraceFunctional::cyclicity_defect`].
pub fn cyclicity_defect(
    f: &GaussianFunction,
    g: &GaussianFunction,
    omega: &PoissonBivector,
    mu: &ThetaPoly,
    corrected: bool,
) -> Result<CyclicityReport> {
    TraceFunctional::new(omega, mu.clone())?.cyclicity_defect(f, g, corrected)
}

/// `f *' g` through `theta^order` for the measure-derived gauge.
pub fn star_prime(f: &ThetaPoly, g: &ThetaPoly, omega: &PoissonBivector, mu: &ThetaPoly, order: u32) -> Result<ThetaPoly> {
    TraceFunctional::new(omega, mu.clone())?.star_prime.star(f, g, order)
}
