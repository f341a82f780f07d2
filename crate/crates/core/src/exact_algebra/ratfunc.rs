//! Quotients of polynomials with a theta-free denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::Serialize;

use super::{Scalar, ThetaPoly, VarSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RationalFunction {
    numerator: ThetaPoly,
    denominator: ThetaPoly,
}

impl RationalFunction {
    pub fn new(numerator: ThetaPoly, denominator: ThetaPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !denominator.is_theta_free() {
            return Err(Error::Invalid("denominator must be theta-free".into()));
        }
        if numerator.space() != denominator.space() {
            return Err(Error::DimensionMismatch {
                expected: numerator.space().nvars(),
                found: denominator.space().nvars(),
            });
        }
        Ok(RationalFunction { numerator, denominator }.normalized())
    }

    pub fn from_poly(p: ThetaPoly) -> Self {
        let denominator = ThetaPoly::one(p.space());
        RationalFunction { numerator: p, denominator }
    }

    pub fn zero(space: VarSpace) -> Self {
        RationalFunction::from_poly(ThetaPoly::zero(space))
    }

    pub fn constant(space: VarSpace, c: Scalar) -> Self {
        RationalFunction::from_poly(ThetaPoly::constant(space, c))
    }

    pub fn numerator(&self) -> &ThetaPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &ThetaPoly {
        &self.denominator
    }

    pub fn space(&self) -> VarSpace {
        self.numerator.space()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The polynomial this equals, when the denominator divides exactly.
    pub fn to_poly(&self) -> Option<ThetaPoly> {
        if let Some(c) = self.denominator.as_constant() {
            return Some(self.numerator.scale(&c.inv()?));
        }
        self.numerator.div_exact(&self.denominator).ok().flatten()
    }

    fn normalized(self) -> Self {
        if self.denominator.as_constant().is_some_and(|c| c.is_one()) {
            return self;
        }
        match self.to_poly() {
            Some(p) => RationalFunction::from_poly(p),
            None => self,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        RationalFunction { numerator: self.numerator.scale(c), denominator: self.denominator.clone() }
    }

    pub fn conj(&self) -> Self {
        RationalFunction { numerator: self.numerator.conj(), denominator: self.denominator.conj() }
    }

    pub fn theta_slice(&self, n: u32) -> Self {
        RationalFunction { numerator: self.numerator.theta_slice(n), denominator: self.denominator.clone() }
    }

    pub fn theta_shift(&self, n: u32) -> Self {
        RationalFunction { numerator: self.numerator.theta_shift(n), denominator: self.denominator.clone() }
    }

    pub fn with_trunc(self, n: u32) -> Self {
        RationalFunction { numerator: self.numerator.with_trunc(n), denominator: self.denominator.with_trunc(n) }
    }

    pub fn mul_poly(&self, p: &ThetaPoly) -> Self {
        RationalFunction { numerator: &self.numerator * p, denominator: self.denominator.clone() }.normalized()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.space() != other.space() {
            return Err(Error::DimensionMismatch { expected: self.space().nvars(), found: other.space().nvars() });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let (d1, d2) = (&self.denominator, &other.denominator);
        let (numerator, denominator) = if d1 == d2 {
            (&self.numerator + &other.numerator, d1.clone())
        } else if let Some(q) = d1.div_exact(d2)? {
            (&self.numerator + &(&other.numerator * &q), d1.clone())
        } else if let Some(q) = d2.div_exact(d1)? {
            (&(&self.numerator * &q) + &other.numerator, d2.clone())
        } else {
            (&(&self.numerator * d2) + &(&other.numerator * d1), d1 * d2)
        };
        Ok(RationalFunction { numerator, denominator }.normalized())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let numerator = self.numerator.try_mul(&other.numerator)?;
        let denominator = if other.denominator.as_constant().is_some_and(|c| c.is_one()) {
            self.denominator.clone()
        } else if self.denominator.as_constant().is_some_and(|c| c.is_one()) {
            other.denominator.clone()
        } else {
            &self.denominator * &other.denominator
        };
        Ok(RationalFunction { numerator, denominator }.normalized())
    }

    /// Partial derivative in the variable with global index `k`.
    pub fn partial(&self, k: usize) -> Result<Self> {
        let dn = self.numerator.partial(k)?;
        let dd = self.denominator.partial(k)?;
        if dd.is_zero() {
            return Ok(RationalFunction { numerator: dn, denominator: self.denominator.clone() }.normalized());
        }
        let numerator = &(&dn * &self.denominator) - &(&self.numerator * &dd);
        let denominator = &self.denominator * &self.denominator;
        Ok(RationalFunction { numerator, denominator }.normalized())
    }

    pub fn d(&self, k: usize) -> Self {
        self.partial(k).expect("variable index out of range")
    }
}

/// Equality of the represented functions, by cross-multiplication.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/({})", self.numerator, self.denominator)
        }
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.try_add(&-rhs).expect("dimension mismatch")
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.scale(&-Scalar::one())
    }
}

impl From<ThetaPoly> for RationalFunction {
    fn from(p: ThetaPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_rule_and_equality() {
        let s = VarSpace::coords(2);
        let mu = ThetaPoly::parse("1 + x1^2 + x2^2", s).unwrap();
        let f = RationalFunction::new(ThetaPoly::parse("x1", s).unwrap(), mu.clone()).unwrap();
        let expect = RationalFunction::new(ThetaPoly::parse("1 - x1^2 + x2^2", s).unwrap(), &mu * &mu).unwrap();
        assert_eq!(f.d(0), expect);
        let back = &f.mul_poly(&mu) - &RationalFunction::from_poly(ThetaPoly::parse("x1", s).unwrap());
        assert!(back.is_zero());
        assert!(f.mul_poly(&mu).to_poly().is_some());
    }
}
