//! The bidifferential star product through third order in theta.

use std::collections::{BTreeMap, HashMap};

use super::GaugeCorrection;
use crate::error::{Error, Result};
use crate::exact_algebra::{GaussianFunction, Scalar, ThetaPoly, VarSpace, EXACT};
use crate::operators::{unit_index, DiffOperator, MultiIndex};
use crate::poisson::PoissonBivector;

/// Highest implemented order.
pub const MAX_STAR_ORDER: u32 = 3;

/// One order of the product: `(alpha, beta) -> c(x)` meaning
/// `c d^alpha f d^beta g`.
pub type Bidifferential = BTreeMap<(MultiIndex, MultiIndex), ThetaPoly>;

/// `f * g = sum_n theta^n B_n(f, g)` for a Poisson bivector `omega`.
#[derive(Clone, Debug)]
pub struct StarProduct {
    omega: PoissonBivector,
    slices: Vec<Bidifferential>,
    gauge: Option<GaugeCorrection>,
}

fn push(slice: &mut Bidifferential, alpha: MultiIndex, beta: MultiIndex, c: ThetaPoly) {
    if c.is_zero() {
        return;
    }
    let key = (alpha, beta);
    let sum = match slice.get(&key) {
        Some(v) => v + &c,
        None => c,
    };
    if sum.is_zero() {
        slice.remove(&key);
    } else {
        slice.insert(key, sum);
    }
}

fn idx(dim: usize, list: &[usize]) -> MultiIndex {
    let mut a = vec![0u8; dim];
    for &i in list {
        a[i] += 1;
    }
    a
}

impl StarProduct {
    /// Builds the product for a Poisson bivector.
    pub fn new(omega: &PoissonBivector) -> Result<Self> {
        let defect = omega.jacobi_defect();
        if !defect.is_zero() {
            return Err(Error::NotPoisson(Box::new(defect)));
        }
        Ok(Self::build(omega))
    }

    fn build(omega: &PoissonBivector) -> Self {
        let n = omega.dim();
        let space = omega.space();
        let w = |i: usize, j: usize| omega.entry(i, j);
        let dw: Vec<ThetaPoly> = (0..n * n * n).map(|k| w(k / (n * n), (k / n) % n).d(k % n)).collect();
        let dw = |i: usize, j: usize, l: usize| &dw[(i * n + j) * n + l];
        let ddw = |i: usize, j: usize, l: usize, m: usize| dw(i, j, l).d(m);
        let r = |a: i64, b: i64| Scalar::ratio(a, b);
        let mut slices = vec![Bidifferential::new(); 4];

        let zero = vec![0u8; n];
        push(&mut slices[0], zero.clone(), zero, ThetaPoly::one(space));

        let half_i = Scalar::complex(0, 1, 1, 2);
        for i in 0..n {
            for j in 0..n {
                push(&mut slices[1], unit_index(n, i), unit_index(n, j), w(i, j).scale(&half_i));
            }
        }

        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let c = (w(i, j) * w(k, l)).scale(&r(-1, 8));
                        push(&mut slices[2], idx(n, &[i, k]), idx(n, &[j, l]), c);
                        let c = (w(i, j) * dw(k, l, j)).scale(&r(-1, 12));
                        push(&mut slices[2], idx(n, &[i, k]), idx(n, &[l]), c.clone());
                        push(&mut slices[2], idx(n, &[k]), idx(n, &[i, l]), -&c);
                    }
                }
            }
        }

        let pref = Scalar::complex(0, 1, -1, 8);
        let s3 = pref.clone() * r(1, 3);
        let s6 = pref * r(1, 6);
        // antisymmetrised pair: c (d^a f d^b g - d^a g d^b f)
        let pair = |slice: &mut Bidifferential, a: MultiIndex, b: MultiIndex, c: ThetaPoly| {
            push(slice, a.clone(), b.clone(), c.clone());
            push(slice, b, a, -&c);
        };
        let mut s = std::mem::take(&mut slices[3]);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            for f in 0..n {
                                // T1: w^{nl} d_l w^{mk} d_n d_m w^{ij}, (n,l,m,k,i,j) = (a,b,c,d,e,f)
                                let t1 = &(w(a, b) * dw(c, d, b)) * &ddw(e, f, a, c);
                                pair(&mut s, idx(n, &[e]), idx(n, &[f, d]), t1.scale(&s3));
                                // T2: w^{nk} d_n w^{jm} d_m w^{il}, (n,k,j,m,i,l)
                                let t2 = &(w(a, b) * dw(c, d, a)) * dw(e, f, d);
                                pair(&mut s, idx(n, &[e, c]), idx(n, &[b, f]), t2.scale(&s6));
                                // T3: w^{ln} d_l w^{jm} w^{ik}, (l,n,j,m,i,k)
                                let t3 = &(w(a, b) * dw(c, d, a)) * w(e, f);
                                pair(&mut s, idx(n, &[e, c]), idx(n, &[f, b, d]), t3.scale(&s3));
                                // T4: w^{jl} w^{im} w^{kn}, (j,l,i,m,k,n)
                                let t4 = &(w(a, b) * w(c, d)) * w(e, f);
                                push(&mut s, idx(n, &[c, a, e]), idx(n, &[b, f, d]), t4.scale(&s6));
                                // T5: w^{nk} w^{ml} d_n d_m w^{ij}, (n,k,m,l,i,j)
                                let t5 = &(w(a, b) * w(c, d)) * &ddw(e, f, a, c);
                                pair(&mut s, idx(n, &[e]), idx(n, &[f, b, d]), t5.scale(&s6));
                            }
                        }
                    }
                }
            }
        }
        slices[3] = s;
        StarProduct { omega: omega.clone(), slices, gauge: None }
    }

    /// The gauge-corrected product `f *' g = f * g - 2 theta^2 b^{ik} d_i f d_k g`.
    pub fn with_gauge(&self, b: &GaugeCorrection) -> Result<StarProduct> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
        let mut out = self.clone();
        for i in 0..n {
            for k in 0..n {
                let c = b.entry(i, k).scale(&Scalar::from_int(-2));
                push(&mut out.slices[2], unit_index(n, i), unit_index(n, k), c);
            }
        }
        out.gauge = Some(b.clone());
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn omega(&self) -> &PoissonBivector {
        &self.omega
    }

    pub fn gauge(&self) -> Option<&GaugeCorrection> {
        self.gauge.as_ref()
    }

    pub fn slice(&self, order: u32) -> &Bidifferential {
        &self.slices[order as usize]
    }

    fn check_order(order: u32) -> Result<()> {
        if order > MAX_STAR_ORDER {
            return Err(Error::UnsupportedOrder { requested: order, max: MAX_STAR_ORDER });
        }
        Ok(())
    }

    /// `f * g` truncated at `theta^order` on the Gaussian class (weight zero
    /// is plain polynomials).
    pub fn star_gaussian(&self, f: &GaussianFunction, g: &GaussianFunction, order: u32) -> Result<GaussianFunction> {
        Self::check_order(order)?;
        if f.dim() != self.dim() || g.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.dim().max(g.dim()) });
        }
        let mut df = DerivativeCache::new(f);
        let mut dg = DerivativeCache::new(g);
        let space = VarSpace::coords(self.dim());
        let mut acc = ThetaPoly::zero(space).with_trunc(order);
        for n in 0..=order {
            for ((alpha, beta), c) in &self.slices[n as usize] {
                let a = df.get(alpha);
                if a.is_zero() {
                    continue;
                }
                let b = dg.get(beta);
                if b.is_zero() {
                    continue;
                }
                let ca = c.theta_shift(n).with_trunc(order) * a.prefactor();
                acc.add_assign_ref(&(&ca * b.prefactor()));
            }
        }
        GaussianFunction::new(acc, f.weight() + g.weight())
    }

    /// `f * g` on polynomials, truncated at `theta^order`.
    pub fn star(&self, f: &ThetaPoly, g: &ThetaPoly, order: u32) -> Result<ThetaPoly> {
        let fg = self.star_gaussian(&GaussianFunction::polynomial(f.clone())?, &GaussianFunction::polynomial(g.clone())?, order)?;
        Ok(fg.prefactor().clone())
    }

    /// `(f * g) * h - f * (g * h)` through `theta^order`.
    pub fn assoc_defect(&self, f: &ThetaPoly, g: &ThetaPoly, h: &ThetaPoly, order: u32) -> Result<ThetaPoly> {
        let left = self.star(&self.star(f, g, order)?, h, order)?;
        let right = self.star(f, &self.star(g, h, order)?, order)?;
        left.try_sub(&right)
    }

    /// The operator `g -> f * g` through `theta^order`.
    pub fn left_operator(&self, f: &ThetaPoly, order: u32) -> Result<DiffOperator> {
        Self::check_order(order)?;
        let n = self.dim();
        let f = GaussianFunction::polynomial(f.clone())?;
        let mut df = DerivativeCache::new(&f);
        let mut op = DiffOperator::zero(n).with_trunc(order);
        for k in 0..=order {
            for ((alpha, beta), c) in &self.slices[k as usize] {
                let a = df.get(alpha);
                if a.is_zero() {
                    continue;
                }
                let coeff = c * a.prefactor();
                for s in 0..=coeff.theta_degree().unwrap_or(0) {
                    if k + s <= order {
                        op.add_poly_term(k + s, beta.clone(), coeff.theta_slice(s).with_trunc(EXACT));
                    }
                }
            }
        }
        Ok(op)
    }

    /// The operator `g -> g * f` through `theta^order`.
    pub fn right_operator(&self, f: &ThetaPoly, order: u32) -> Result<DiffOperator> {
        Self::check_order(order)?;
        let n = self.dim();
        let f = GaussianFunction::polynomial(f.clone())?;
        let mut df = DerivativeCache::new(&f);
        let mut op = DiffOperator::zero(n).with_trunc(order);
        for k in 0..=order {
            for ((alpha, beta), c) in &self.slices[k as usize] {
                let b = df.get(beta);
                if b.is_zero() {
                    continue;
                }
                let coeff = c * b.prefactor();
                for s in 0..=coeff.theta_degree().unwrap_or(0) {
                    if k + s <= order {
                        op.add_poly_term(k + s, alpha.clone(), coeff.theta_slice(s).with_trunc(EXACT));
                    }
                }
            }
        }
        Ok(op)
    }
}

/// Memoised `d^alpha f`.
struct DerivativeCache {
    base: GaussianFunction,
    memo: HashMap<MultiIndex, GaussianFunction>,
}

impl DerivativeCache {
    fn new(f: &GaussianFunction) -> Self {
        DerivativeCache { base: f.clone(), memo: HashMap::new() }
    }

    fn get(&mut self, alpha: &MultiIndex) -> &GaussianFunction {
        if !self.memo.contains_key(alpha) {
            let value = match alpha.iter().position(|&a| a > 0) {
                None => self.base.clone(),
                Some(i) => {
                    let mut lower = alpha.clone();
                    lower[i] -= 1;
                    self.get(&lower).d(i)
                }
            };
            self.memo.insert(alpha.clone(), value);
        }
        &self.memo[alpha]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_commute_to_omega() {
        let w = PoissonBivector::fuzzy_sphere();
        let s = StarProduct::new(&w).unwrap();
        let sp = w.space();
        let x = |i| ThetaPoly::coord(sp, i);
        let xy = s.star(&x(0), &x(1), 3).unwrap();
        let expect = &(&x(0) * &x(1)) + &x(2).scale(&Scalar::complex(0, 1, 1, 2)).theta_shift(1);
        assert_eq!(xy, expect);
    }

    #[test]
    fn order_four_is_rejected() {
        let s = StarProduct::new(&PoissonBivector::fuzzy_sphere()).unwrap();
        let one = ThetaPoly::one(VarSpace::coords(3));
        assert!(matches!(s.star(&one, &one, 4), Err(Error::UnsupportedOrder { .. })));
    }
}
