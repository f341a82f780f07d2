//! Theta-graded linear differential operators with rational coefficients,
//! normal ordered (coefficients to the left of derivatives).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_algebra::{GaussianFunction, RationalFunction, Scalar, ThetaPoly, VarSpace, EXACT};

/// Derivative multi-index `alpha`, one count per coordinate.
pub type MultiIndex = Vec<u8>;

/// `sum theta^s c_{s,alpha}(x) d^alpha`.
#[derive(Clone, Debug)]
pub struct DiffOperator {
    dim: usize,
    trunc: u32,
    terms: BTreeMap<(u32, MultiIndex), RationalFunction>,
}

fn binomial(n: u8, k: u8) -> i64 {
    let mut acc = 1i64;
    for j in 0..k as i64 {
        acc = acc * (n as i64 - j) / (j + 1);
    }
    acc
}

/// All `gamma <= alpha` componentwise.
fn sub_indices(alpha: &[u8]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut p = prefix.clone();
                p.push(g);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub fn unit_index(dim: usize, i: usize) -> MultiIndex {
    let mut a = vec![0; dim];
    a[i] = 1;
    a
}

pub fn add_indices(a: &[u8], b: &[u8]) -> MultiIndex {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl DiffOperator {
    pub fn zero(dim: usize) -> Self {
        DiffOperator { dim, trunc: EXACT, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        DiffOperator::multiplication(&ThetaPoly::one(VarSpace::coords(dim)))
    }

    /// Multiplication by a coordinate polynomial, which may carry theta.
    pub fn multiplication(f: &ThetaPoly) -> Self {
        let dim = f.dim();
        let mut op = DiffOperator { dim, trunc: f.trunc(), terms: BTreeMap::new() };
        let zero = vec![0; dim];
        for s in 0..=f.theta_degree().unwrap_or(0) {
            let slice = f.theta_slice(s).with_trunc(EXACT);
            op.add_term(s, zero.clone(), RationalFunction::from_poly(slice));
        }
        op
    }

    pub fn multiplication_rational(r: &RationalFunction) -> Self {
        let dim = r.space().coords;
        let mut op = DiffOperator::zero(dim);
        let zero = vec![0; dim];
        for s in 0..=r.numerator().theta_degree().unwrap_or(0) {
            op.add_term(s, zero.clone(), r.theta_slice(s).with_trunc(EXACT));
        }
        op
    }

    /// `d_i`.
    pub fn derivative(dim: usize, i: usize) -> Self {
        let mut op = DiffOperator::zero(dim);
        op.add_term(0, unit_index(dim, i), RationalFunction::constant(VarSpace::coords(dim), Scalar::one()));
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::coords(self.dim)
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_trunc(mut self, n: u32) -> Self {
        self.trunc = n;
        self.terms.retain(|(s, _), _| *s <= n);
        self
    }

    /// Adds `theta^s c d^alpha`; `c` must be theta-free.
    pub fn add_term(&mut self, s: u32, alpha: MultiIndex, c: RationalFunction) {
        assert_eq!(alpha.len(), self.dim, "multi-index length");
        if c.is_zero() || s > self.trunc {
            return;
        }
        match self.terms.entry((s, alpha)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_poly_term(&mut self, s: u32, alpha: MultiIndex, c: ThetaPoly) {
        self.add_term(s, alpha, RationalFunction::from_poly(c));
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, MultiIndex), &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: u32, alpha: &[u8]) -> Option<&RationalFunction> {
        self.terms.get(&(s, alpha.to_vec()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order present.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, a)| a.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn theta_slice(&self, s: u32) -> DiffOperator {
        let mut out = DiffOperator::zero(self.dim);
        for ((t, a), c) in &self.terms {
            if *t == s {
                out.terms.insert((0, a.clone()), c.clone());
            }
        }
        out
    }

    pub fn theta_shift(&self, n: u32) -> DiffOperator {
        let mut out = DiffOperator::zero(self.dim).with_trunc(self.trunc.saturating_add(n));
        for ((t, a), c) in &self.terms {
            out.terms.insert((t + n, a.clone()), c.clone());
        }
        out
    }

    pub fn truncated(&self, n: u32) -> DiffOperator {
        self.clone().with_trunc(n.min(self.trunc))
    }

    pub fn scale(&self, k: &Scalar) -> DiffOperator {
        let mut out = DiffOperator::zero(self.dim).with_trunc(self.trunc);
        if k.is_zero() {
            return out;
        }
        for (key, c) in &self.terms {
            out.terms.insert(key.clone(), c.scale(k));
        }
        out
    }

    fn check(&self, other: &DiffOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.check(other)?;
        let mut out = self.clone().with_trunc(self.trunc.min(other.trunc));
        for ((s, a), c) in &other.terms {
            out.add_term(*s, a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.try_add(&other.scale(&-Scalar::one()))
    }

    /// `self o other`, expanding `d^alpha (c g) = sum_gamma C(alpha,gamma) d^gamma c d^{alpha-gamma} g`.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.check(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = DiffOperator::zero(self.dim).with_trunc(trunc);
        let mut cache: HashMap<(usize, MultiIndex), RationalFunction> = HashMap::new();
        let other_terms: Vec<_> = other.terms.iter().collect();
        for ((s, alpha), a) in &self.terms {
            let subs = sub_indices(alpha);
            for (idx, ((t, beta), b)) in other_terms.iter().enumerate() {
                if s + t > trunc {
                    continue;
                }
                for gamma in &subs {
                    let db = cache
                        .entry((idx, gamma.clone()))
                        .or_insert_with(|| {
                            let mut r = (*b).clone();
                            for (i, &g) in gamma.iter().enumerate() {
                                for _ in 0..g {
                                    r = r.d(i);
                                }
                            }
                            r
                        })
                        .clone();
                    if db.is_zero() {
                        continue;
                    }
                    let weight: i64 = alpha.iter().zip(gamma).map(|(&x, &g)| binomial(x, g)).product();
                    let rest: MultiIndex =
                        alpha.iter().zip(gamma).zip(beta.iter()).map(|((&x, &g), &y)| x - g + y).collect();
                    let coeff = (a * &db).scale(&Scalar::from_int(weight));
                    out.add_term(s + t, rest, coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    /// Applies the operator to a rational function.
    pub fn apply_rational(&self, f: &RationalFunction) -> Result<RationalFunction> {
        if f.space() != self.space() {
            return Err(Error::DimensionMismatch { expected: self.dim, found: f.space().coords });
        }
        let mut derivs: HashMap<MultiIndex, RationalFunction> = HashMap::new();
        let mut out = RationalFunction::zero(self.space());
        for ((s, alpha), c) in &self.terms {
            let d = derivs
                .entry(alpha.clone())
                .or_insert_with(|| {
                    let mut r = f.clone();
                    for (i, &a) in alpha.iter().enumerate() {
                        for _ in 0..a {
                            r = r.d(i);
                        }
                    }
                    r
                })
                .clone();
            if d.is_zero() {
                continue;
            }
            out = &out + &(c * &d).theta_shift(*s);
        }
        Ok(out.with_trunc(self.trunc.min(f.numerator().trunc())))
    }

    /// Applies the operator to a polynomial. Fails if a rational coefficient
    /// leaves a non-polynomial result.
    pub fn apply(&self, f: &ThetaPoly) -> Result<ThetaPoly> {
        let r = self.apply_rational(&RationalFunction::from_poly(f.clone()))?;
        r.to_poly().ok_or_else(|| Error::NotPolynomial(r.to_string()))
    }

    /// Applies the operator to `P exp(-k|x|^2)`; coefficients must be polynomial.
    pub fn apply_gaussian(&self, g: &GaussianFunction) -> Result<GaussianFunction> {
        let mut derivs: HashMap<MultiIndex, GaussianFunction> = HashMap::new();
        let mut out = GaussianFunction::new(ThetaPoly::zero(self.space()), g.weight())?;
        for ((s, alpha), c) in &self.terms {
            let c = c.to_poly().ok_or_else(|| Error::NotPolynomial(c.to_string()))?;
            let d = derivs
                .entry(alpha.clone())
                .or_insert_with(|| {
                    let mut r = g.clone();
                    for (i, &a) in alpha.iter().enumerate() {
                        for _ in 0..a {
                            r = r.d(i);
                        }
                    }
                    r
                })
                .clone();
            out = out.try_add(&d.mul_poly(&c.theta_shift(*s))?)?;
        }
        Ok(out.truncated(self.trunc))
    }

    /// `e^{i k.x} A e^{-i k.x}` evaluated on constants: the theta-series
    /// `sum theta^s c_alpha (-i k)^alpha`.
    pub fn plane_wave_symbol(&self, k: &[Scalar]) -> Result<RationalFunction> {
        if k.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: k.len() });
        }
        let mik: Vec<Scalar> = k.iter().map(|x| -x.mul_i()).collect();
        let mut out = RationalFunction::zero(self.space());
        for ((s, alpha), c) in &self.terms {
            let mut w = Scalar::one();
            for (x, &a) in mik.iter().zip(alpha) {
                w = &w * &x.pow(a as u32);
            }
            out = &out + &c.scale(&w).theta_shift(*s);
        }
        Ok(out)
    }

    /// Complex conjugate of the coefficients: `conj(A f) = conj(A) conj(f)`.
    pub fn conj(&self) -> DiffOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }
}

impl PartialEq for DiffOperator {
    fn eq(&self, other: &Self) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

fn index_text(alpha: &[u8]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("d{}", i + 1)),
            a => parts.push(format!("d{}^{a}", i + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((s, a), c)| {
                let th = match s {
                    0 => String::new(),
                    1 => "theta*".into(),
                    s => format!("theta^{s}*"),
                };
                let d = index_text(a);
                if d.is_empty() {
                    format!("{th}({c})")
                } else {
                    format!("{th}({c})*{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct OpTermRecord<'a> {
    theta: u32,
    derivative: &'a [u8],
    coefficient: String,
}

/// Sorted term list of `(theta power, multi-index, coefficient)`.
impl Serialize for DiffOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((t, a), c) in &self.terms {
            seq.serialize_element(&OpTermRecord { theta: *t, derivative: a, coefficient: c.to_string() })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, n: usize) -> DiffOperator {
        DiffOperator::multiplication(&ThetaPoly::coord(VarSpace::coords(n), i))
    }

    #[test]
    fn canonical_commutators() {
        let d1 = DiffOperator::derivative(2, 0);
        let d2 = DiffOperator::derivative(2, 1);
        assert_eq!(d1.commutator(&x(0, 2)).unwrap(), DiffOperator::identity(2));
        assert!(d1.commutator(&d2).unwrap().is_zero());
        assert!(d2.commutator(&x(0, 2)).unwrap().is_zero());
    }

    #[test]
    fn apply_minus_i_d() {
        let s = VarSpace::coords(1);
        let op = DiffOperator::derivative(1, 0).scale(&-Scalar::i());
        let f = ThetaPoly::parse("x1^2", s).unwrap();
        assert_eq!(op.apply(&f).unwrap(), ThetaPoly::parse("-2*i*x1", s).unwrap());
        assert_eq!(DiffOperator::identity(1).apply(&f).unwrap(), f);
    }

    #[test]
    fn sub_indices_enumerates_box() {
        assert_eq!(sub_indices(&[1, 2]).len(), 6);
        assert_eq!(binomial(4, 2), 6);
    }
}
