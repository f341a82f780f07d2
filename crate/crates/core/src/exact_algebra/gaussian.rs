//! Polynomial-times-Gaussian functions `P(x) exp(-k |x|^2)` and their exact
//! integrals over R^N.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{Scalar, ThetaPoly, VarSpace};
use crate::error::{Error, Result};

/// `prefactor * exp(-weight * |x|^2)`. Weight zero is a plain polynomial,
/// which can be multiplied and differentiated but not integrated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussianFunction {
    prefactor: ThetaPoly,
    weight: u32,
}

impl GaussianFunction {
    pub fn new(prefactor: ThetaPoly, weight: u32) -> Result<Self> {
        if prefactor.space().momenta {
            return Err(Error::NotCoordinateFunction);
        }
        Ok(GaussianFunction { prefactor, weight })
    }

    /// `P exp(-|x|^2)`.
    pub fn standard(prefactor: ThetaPoly) -> Result<Self> {
        GaussianFunction::new(prefactor, 1)
    }

    pub fn polynomial(p: ThetaPoly) -> Result<Self> {
        GaussianFunction::new(p, 0)
    }

    pub fn prefactor(&self) -> &ThetaPoly {
        &self.prefactor
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.prefactor.dim()
    }

    pub fn space(&self) -> VarSpace {
        self.prefactor.space()
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// `d_i` acting on the full function, expressed on the prefactor as
    /// `d_i P - 2 k x_i P`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, count: self.dim() });
        }
        let mut p = self.prefactor.d(i);
        if self.weight > 0 {
            let x = ThetaPoly::coord(self.space(), i);
            let k2 = Scalar::from_int(-2 * self.weight as i64);
            p.add_scaled(&(&x * &self.prefactor), &k2);
        }
        Ok(GaussianFunction { prefactor: p, weight: self.weight })
    }

    pub fn d(&self, i: usize) -> Self {
        self.partial(i).expect("coordinate index out of range")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(GaussianFunction {
            prefactor: self.prefactor.try_mul(&other.prefactor)?,
            weight: self.weight + other.weight,
        })
    }

    pub fn mul_poly(&self, p: &ThetaPoly) -> Result<Self> {
        Ok(GaussianFunction { prefactor: self.prefactor.try_mul(p)?, weight: self.weight })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight && !self.is_zero() && !other.is_zero() {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let weight = if self.is_zero() { other.weight } else { self.weight };
        Ok(GaussianFunction { prefactor: self.prefactor.try_add(&other.prefactor)?, weight })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        GaussianFunction { prefactor: self.prefactor.scale(c), weight: self.weight }
    }

    pub fn conj(&self) -> Self {
        GaussianFunction { prefactor: self.prefactor.conj(), weight: self.weight }
    }

    pub fn theta_slice(&self, n: u32) -> Self {
        GaussianFunction { prefactor: self.prefactor.theta_slice(n), weight: self.weight }
    }

    pub fn truncated(&self, n: u32) -> Self {
        GaussianFunction { prefactor: self.prefactor.truncated(n), weight: self.weight }
    }
}

impl fmt::Display for GaussianFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            0 => write!(f, "{}", self.prefactor),
            1 => write!(f, "({})*exp(-r^2)", self.prefactor),
            k => write!(f, "({})*exp(-{k}*r^2)", self.prefactor),
        }
    }
}

/// `sum_n theta^n c_n * (pi/weight)^(dim/2)` with exact `c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactIntegral {
    pub dim: usize,
    pub weight: u32,
    pub coefficients: BTreeMap<u32, Scalar>,
}

impl ExactIntegral {
    pub fn zero(dim: usize, weight: u32) -> Self {
        ExactIntegral { dim, weight, coefficients: BTreeMap::new() }
    }

    /// The rational factor multiplying `theta^n (pi/weight)^(dim/2)`.
    pub fn order(&self, n: u32) -> Scalar {
        self.coefficients.get(&n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(Zero::is_zero)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.scaled(&-Scalar::one()));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.weight != other.weight || self.dim != other.dim {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let mut out = self.clone();
        for (n, c) in &other.coefficients {
            let e = out.coefficients.entry(*n).or_default();
            *e -= c;
        }
        out.coefficients.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        for v in out.coefficients.values_mut() {
            *v = &*v * c;
        }
        out.coefficients.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for ExactIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (n, c) in &self.coefficients {
            terms.push(match n {
                0 => format!("({c})"),
                1 => format!("({c})*theta"),
                n => format!("({c})*theta^{n}"),
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "[{}]*(pi/{})^({}/2)", terms.join(" + "), self.weight, self.dim)
    }
}

/// `(2m-1)!! / (2k)^m`, the even moment of `exp(-k x^2)` in units of `sqrt(pi/k)`.
fn moment(m: u16, k: u32) -> BigRational {
    let mut num = BigInt::one();
    for j in 0..m as u64 {
        num *= BigInt::from(2 * j + 1);
    }
    let den = BigInt::from(2 * k as u64).pow(m as u32);
    BigRational::new(num, den)
}

/// Exact integral over R^N. Odd moments vanish; even moments are
/// `(2m-1)!!/(2k)^m` per axis, times the common `(pi/k)^(N/2)`.
pub fn gaussian_integrate(g: &GaussianFunction) -> Result<ExactIntegral> {
    let mut out = ExactIntegral::zero(g.dim(), g.weight);
    if g.is_zero() {
        return Ok(out);
    }
    if g.weight == 0 {
        return Err(Error::NotIntegrable);
    }
    for (m, c) in g.prefactor.terms() {
        if m.exps.iter().any(|e| e % 2 == 1) {
            continue;
        }
        let mut factor = BigRational::one();
        for &e in &m.exps {
            factor *= moment(e / 2, g.weight);
        }
        let e = out.coefficients.entry(m.theta).or_default();
        *e += &(c * &Scalar::real(factor));
    }
    out.coefficients.retain(|_, c| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str, n: usize, k: u32) -> GaussianFunction {
        GaussianFunction::new(ThetaPoly::parse(src, VarSpace::coords(n)).unwrap(), k).unwrap()
    }

    #[test]
    fn moments() {
        assert_eq!(gaussian_integrate(&g("1", 3, 1)).unwrap().order(0), Scalar::one());
        assert_eq!(gaussian_integrate(&g("x1^2", 1, 1)).unwrap().order(0), Scalar::ratio(1, 2));
        assert_eq!(gaussian_integrate(&g("x1^4*x2^2", 2, 2)).unwrap().order(0), Scalar::ratio(3, 64));
        assert!(gaussian_integrate(&g("x1*x2^2", 2, 1)).unwrap().is_zero());
        assert!(matches!(gaussian_integrate(&g("1", 2, 0)), Err(Error::NotIntegrable)));
    }

    #[test]
    fn total_derivative_integrates_to_zero() {
        let f = g("x1^3 + x1*x2^2 - 2", 2, 3);
        assert!(gaussian_integrate(&f.d(0)).unwrap().is_zero());
    }
}
