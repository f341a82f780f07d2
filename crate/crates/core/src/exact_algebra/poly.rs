//! Theta-graded multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use super::Scalar;
use crate::error::{Error, Result};

/// Default truncation order for series-producing operations.
pub const DEFAULT_TRUNC: u32 = 3;

/// Truncation marker for polynomials known exactly.
pub const EXACT: u32 = u32::MAX;

pub type Exponents = SmallVec<[u16; 6]>;

/// The variables a polynomial lives over: coordinates `x1..xN` and,
/// optionally, momenta `p1..pN` (indices `N..2N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    pub coords: usize,
    pub momenta: bool,
}

impl VarSpace {
    pub fn coords(n: usize) -> Self {
        VarSpace { coords: n, momenta: false }
    }

    pub fn phase(n: usize) -> Self {
        VarSpace { coords: n, momenta: true }
    }

    pub fn nvars(&self) -> usize {
        if self.momenta {
            2 * self.coords
        } else {
            self.coords
        }
    }

    pub fn var_name(&self, k: usize) -> String {
        if k < self.coords {
            format!("x{}", k + 1)
        } else {
            format!("p{}", k - self.coords + 1)
        }
    }
}

/// `theta^theta * prod v_k^exps[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub theta: u32,
    pub exps: Exponents,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { theta: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            theta: self.theta + other.theta,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.theta > self.theta {
            return None;
        }
        let mut exps = Exponents::new();
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { theta: self.theta - other.theta, exps })
    }
}

/// Block order: theta power, then graded lex on the variables.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.theta
            .cmp(&other.theta)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the coordinates (and optionally momenta) with a
/// formal parameter `theta`, truncated above `theta^trunc`. Polynomials are
/// exact ([`EXACT`]) unless a truncation order is set explicitly; binary
/// operations keep the smaller order.
#[derive(Clone, Debug)]
pub struct ThetaPoly {
    space: VarSpace,
    trunc: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for ThetaPoly {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms == other.terms
    }
}

impl Eq for ThetaPoly {}

impl ThetaPoly {
    pub fn zero(space: VarSpace) -> Self {
        ThetaPoly { space, trunc: EXACT, terms: BTreeMap::new() }
    }

    pub fn constant(space: VarSpace, c: Scalar) -> Self {
        let mut p = ThetaPoly::zero(space);
        p.add_term(Monomial::one(space.nvars()), c);
        p
    }

    pub fn one(space: VarSpace) -> Self {
        ThetaPoly::constant(space, Scalar::one())
    }

    /// The variable with global index `k` (coordinates first, then momenta).
    pub fn var(space: VarSpace, k: usize) -> Self {
        assert!(k < space.nvars(), "variable index {k} out of range");
        let mut m = Monomial::one(space.nvars());
        m.exps[k] = 1;
        let mut p = ThetaPoly::zero(space);
        p.add_term(m, Scalar::one());
        p
    }

    pub fn coord(space: VarSpace, i: usize) -> Self {
        assert!(i < space.coords);
        ThetaPoly::var(space, i)
    }

    pub fn momentum(space: VarSpace, i: usize) -> Self {
        assert!(space.momenta && i < space.coords);
        ThetaPoly::var(space, space.coords + i)
    }

    pub fn theta_power(space: VarSpace, n: u32) -> Self {
        let mut m = Monomial::one(space.nvars());
        m.theta = n;
        let mut p = ThetaPoly::zero(space);
        p.add_term(m, Scalar::one());
        p
    }

    pub fn from_terms<I>(space: VarSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = ThetaPoly::zero(space);
        for (m, c) in terms {
            if m.exps.len() != space.nvars() {
                return Err(Error::DimensionMismatch { expected: space.nvars(), found: m.exps.len() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.coords
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Sets the truncation order, discarding terms above it.
    pub fn with_trunc(mut self, n: u32) -> Self {
        self.trunc = n;
        self.terms.retain(|m, _| m.theta <= n);
        self
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || m.theta > self.trunc {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.space.nvars()))
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.theta == 0 && m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn theta_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.theta).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_theta_free(&self) -> bool {
        self.terms.keys().all(|m| m.theta == 0)
    }

    pub fn is_momentum_free(&self) -> bool {
        let n = self.space.coords;
        self.terms.keys().all(|m| m.exps[n..].iter().all(|&e| e == 0))
    }

    /// Coefficient of `theta^n`, as a theta-free polynomial.
    pub fn theta_slice(&self, n: u32) -> ThetaPoly {
        let mut out = ThetaPoly { space: self.space, trunc: self.trunc, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m.theta == n {
                out.terms.insert(Monomial { theta: 0, exps: m.exps.clone() }, c.clone());
            }
        }
        out
    }

    /// Multiplies by `theta^n`, raising the truncation order if needed.
    pub fn theta_shift(&self, n: u32) -> ThetaPoly {
        let mut out = ThetaPoly::zero(self.space).with_trunc(self.trunc.saturating_add(n));
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m.theta += n;
            out.add_term(m, c.clone());
        }
        out
    }

    /// Terms up to and including `theta^n`.
    pub fn truncated(&self, n: u32) -> ThetaPoly {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.theta <= n);
        out
    }

    pub fn scale(&self, c: &Scalar) -> ThetaPoly {
        let mut out = ThetaPoly::zero(self.space).with_trunc(self.trunc);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    /// Complex conjugation of the coefficients.
    pub fn conj(&self) -> ThetaPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    fn check_space(&self, other: &ThetaPoly) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.nvars(),
                found: other.space.nvars(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.check_space(other)?;
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.terms.retain(|m, _| m.theta <= out.trunc);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.check_space(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = ThetaPoly::zero(self.space).with_trunc(trunc);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.theta + mb.theta > trunc {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn add_assign_ref(&mut self, other: &ThetaPoly) {
        assert_eq!(self.space, other.space, "dimension mismatch");
        self.trunc = self.trunc.min(other.trunc);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, other: &ThetaPoly, c: &Scalar) {
        assert_eq!(self.space, other.space, "dimension mismatch");
        self.trunc = self.trunc.min(other.trunc);
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn pow(&self, n: u32) -> ThetaPoly {
        let mut acc = ThetaPoly::one(self.space).with_trunc(self.trunc);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in the variable with global index `k`.
    pub fn partial(&self, k: usize) -> Result<ThetaPoly> {
        let count = self.space.nvars();
        if k >= count {
            return Err(Error::IndexOutOfRange { index: k, count });
        }
        let mut out = ThetaPoly::zero(self.space).with_trunc(self.trunc);
        for (m, c) in &self.terms {
            let e = m.exps[k];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.exps[k] = e - 1;
            out.terms.insert(m2, c * &Scalar::from_int(e as i64));
        }
        Ok(out)
    }

    /// `partial` for an index known to be in range. Panics otherwise.
    pub fn d(&self, k: usize) -> ThetaPoly {
        self.partial(k).expect("variable index out of range")
    }

    /// Repeated coordinate derivative `prod_i d_i^{alpha_i}`.
    pub fn d_multi(&self, alpha: &[u8]) -> ThetaPoly {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.d(i);
            }
        }
        out
    }

    /// Replaces every variable `v_k` by `images[k]`. The result lives in
    /// the images' space.
    pub fn substitute(&self, images: &[ThetaPoly]) -> Result<ThetaPoly> {
        let n = self.space.nvars();
        if images.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target = first.space;
        let mut trunc = self.trunc;
        for im in images {
            first.check_space(im)?;
            trunc = trunc.min(im.trunc);
        }
        let mut powers: Vec<Vec<ThetaPoly>> =
            vec![vec![ThetaPoly::one(target).with_trunc(trunc)]; n];
        let mut out = ThetaPoly::zero(target).with_trunc(trunc);
        let theta = ThetaPoly::theta_power(target, 1).with_trunc(trunc);
        for (m, c) in &self.terms {
            if m.theta > trunc {
                continue;
            }
            let mut term = ThetaPoly::constant(target, c.clone()).with_trunc(trunc);
            for _ in 0..m.theta {
                term = &term * &theta;
            }
            for (k, &e) in m.exps.iter().enumerate() {
                let e = e as usize;
                while powers[k].len() <= e {
                    let next = powers[k].last().unwrap() * &images[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    term = &term * &powers[k][e];
                }
            }
            out.add_assign_ref(&term);
        }
        Ok(out)
    }

    /// Embeds a coordinate polynomial into phase space.
    pub fn to_phase_space(&self) -> ThetaPoly {
        if self.space.momenta {
            return self.clone();
        }
        let space = VarSpace::phase(self.space.coords);
        let mut out = ThetaPoly::zero(space).with_trunc(self.trunc);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.extend(std::iter::repeat(0).take(self.space.coords));
            out.terms.insert(Monomial { theta: m.theta, exps }, c.clone());
        }
        out
    }

    /// Drops the momentum slots; fails if any momentum appears.
    pub fn to_coord_space(&self) -> Result<ThetaPoly> {
        if !self.space.momenta {
            return Ok(self.clone());
        }
        if !self.is_momentum_free() {
            return Err(Error::NotCoordinateFunction);
        }
        let n = self.space.coords;
        let mut out = ThetaPoly::zero(VarSpace::coords(n)).with_trunc(self.trunc);
        for (m, c) in &self.terms {
            let exps = m.exps[..n].iter().copied().collect();
            out.terms.insert(Monomial { theta: m.theta, exps }, c.clone());
        }
        Ok(out)
    }

    /// Splits each term into its momentum multi-index and the remaining
    /// theta/coordinate polynomial (in coordinate space).
    pub fn split_momenta(&self) -> Result<BTreeMap<Vec<u8>, ThetaPoly>> {
        if !self.space.momenta {
            return Err(Error::MissingMomenta);
        }
        let n = self.space.coords;
        let mut out: BTreeMap<Vec<u8>, ThetaPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u8> = m.exps[n..].iter().map(|&e| e as u8).collect();
            let mono = Monomial { theta: m.theta, exps: m.exps[..n].iter().copied().collect() };
            out.entry(key)
                .or_insert_with(|| ThetaPoly::zero(VarSpace::coords(n)).with_trunc(self.trunc))
                .add_term(mono, c.clone());
        }
        Ok(out)
    }

    /// Leading term under the block theta / graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division by a single theta-free divisor.
    /// Returns `(quotient, remainder)`; the remainder is zero exactly when
    /// the divisor divides `self`.
    pub fn div_rem(&self, divisor: &ThetaPoly) -> Result<(ThetaPoly, ThetaPoly)> {
        self.check_space(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !divisor.is_theta_free() {
            return Err(Error::Invalid("divisor must be theta-free".into()));
        }
        let (lm, lc) = divisor.leading_term().unwrap();
        let (lm, lc_inv) = (lm.clone(), lc.inv().unwrap());
        let mut rest = self.clone();
        let mut quot = ThetaPoly::zero(self.space).with_trunc(self.trunc);
        let mut rem = ThetaPoly::zero(self.space).with_trunc(self.trunc);
        while let Some((m, c)) = rest.leading_term() {
            let (m, c) = (m.clone(), c.clone());
            match m.div(&lm) {
                Some(q) => {
                    let coeff = &c * &lc_inv;
                    let mut step = ThetaPoly::zero(self.space).with_trunc(self.trunc);
                    step.add_term(q, coeff);
                    quot.add_assign_ref(&step);
                    rest = &rest - &(&step * divisor);
                }
                None => {
                    rest.terms.remove(&m);
                    rem.add_term(m, c);
                }
            }
        }
        Ok((quot, rem))
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &ThetaPoly) -> Result<Option<ThetaPoly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        match m.theta {
            0 => {}
            1 => parts.push("theta".to_string()),
            t => parts.push(format!("theta^{t}")),
        }
        for (k, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.space.var_name(k)),
                e => parts.push(format!("{}^{e}", self.space.var_name(k))),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mono = self.monomial_text(m);
            let zero = num_rational::BigRational::zero();
            let negative = if c.re().is_zero() { c.im() < &zero } else { c.is_real() && c.re() < &zero };
            let (neg, mag) = if negative {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let coeff = if mag == Scalar::i() {
                "i".to_string()
            } else if !mag.is_real() && !mag.re().is_zero() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    coefficient: &'a Scalar,
    theta: u32,
    exponents: &'a [u16],
}

/// Serialized as the term list in ascending monomial order.
impl Serialize for ThetaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRecord { coefficient: c, theta: m.theta, exponents: &m.exps })?;
        }
        seq.end()
    }
}

impl<'a> Add<&'a ThetaPoly> for &'a ThetaPoly {
    type Output = ThetaPoly;
    /// Panics on mismatched spaces; see [`ThetaPoly::try_add`].
    fn add(self, rhs: &ThetaPoly) -> ThetaPoly {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a ThetaPoly> for &'a ThetaPoly {
    type Output = ThetaPoly;
    fn sub(self, rhs: &ThetaPoly) -> ThetaPoly {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl<'a> Mul<&'a ThetaPoly> for &'a ThetaPoly {
    type Output = ThetaPoly;
    fn mul(self, rhs: &ThetaPoly) -> ThetaPoly {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &ThetaPoly {
    type Output = ThetaPoly;
    fn neg(self) -> ThetaPoly {
        self.scale(&-Scalar::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ThetaPoly> for ThetaPoly {
            type Output = ThetaPoly;
            fn $m(self, rhs: ThetaPoly) -> ThetaPoly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a ThetaPoly> for ThetaPoly {
            type Output = ThetaPoly;
            fn $m(self, rhs: &ThetaPoly) -> ThetaPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ThetaPoly {
    type Output = ThetaPoly;
    fn neg(self) -> ThetaPoly {
        -&self
    }
}
