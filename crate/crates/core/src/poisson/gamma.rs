//! Order-by-order construction of the Darboux map
//! `x^i = y^i + sum_n theta^n Gamma^{i j1..jn}(y) pi_j1..pi_jn`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_bracket, PoissonBivector};
use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, ThetaPoly, VarSpace, EXACT};

/// The tensors `Gamma^{i(n)}` for `n = 1..=max_order`, stored contracted
/// with momenta as `X_n^i(y, pi)`.
#[derive(Clone, Debug)]
pub struct GammaTower {
    omega: PoissonBivector,
    max_order: u32,
    contracted: Vec<Vec<ThetaPoly>>,
    sources: Vec<Vec<ThetaPoly>>,
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Solves, for each `n`, `dX_n^j/dpi_i - dX_n^i/dpi_j = G^{ij}` with
/// `G^{ij} = [theta^{n-1}] omega^{ij}(y + sum_{m<n} theta^m X_m) - sum_{m=1}^{n-1} {X_{n-m}^i, X_m^j}`
/// in the gauge `X_n^j = (1/(n+1)) pi_a G^{aj}`.
pub fn build_gamma(omega: &PoissonBivector, max_order: u32) -> Result<GammaTower> {
    let defect = omega.jacobi_defect();
    if !defect.is_zero() {
        return Err(Error::NotPoisson(Box::new(defect)));
    }
    let n = omega.dim();
    let phase = VarSpace::phase(n);
    let ys: Vec<ThetaPoly> = (0..n).map(|i| ThetaPoly::coord(phase, i)).collect();
    let pis: Vec<ThetaPoly> = (0..n).map(|i| ThetaPoly::momentum(phase, i)).collect();
    let mut contracted: Vec<Vec<ThetaPoly>> = Vec::new();
    let mut sources = Vec::new();
    for order in 1..=max_order {
        let trunc = order - 1;
        let xs: Vec<ThetaPoly> = (0..n)
            .map(|i| {
                let mut x = ys[i].clone().with_trunc(trunc);
                for (m, xm) in contracted.iter().enumerate() {
                    x.add_assign_ref(&xm[i].theta_shift(m as u32 + 1).with_trunc(trunc));
                }
                x
            })
            .collect();
        let mut g = vec![ThetaPoly::zero(phase); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let w = omega.entry(i, j);
                let mut gij = if w.is_zero() {
                    ThetaPoly::zero(phase)
                } else {
                    w.substitute(&xs)?.theta_slice(trunc).with_trunc(EXACT)
                };
                for m in 1..order {
                    let a = &contracted[(order - m - 1) as usize];
                    let b = &contracted[(m - 1) as usize];
                    gij = &gij - &canonical_bracket(&a[i], &b[j])?;
                }
                g[j * n + i] = -&gij;
                g[i * n + j] = gij;
            }
        }
        let inv = Scalar::ratio(1, order as i64 + 1);
        let xn: Vec<ThetaPoly> = (0..n)
            .map(|j| {
                let mut acc = ThetaPoly::zero(phase);
                for a in 0..n {
                    let gaj = &g[a * n + j];
                    if !gaj.is_zero() {
                        acc.add_assign_ref(&(&pis[a] * gaj));
                    }
                }
                acc.scale(&inv)
            })
            .collect();
        contracted.push(xn);
        sources.push(g);
    }
    Ok(GammaTower { omega: omega.clone(), max_order, contracted, sources })
}

impl GammaTower {
    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn omega(&self) -> &PoissonBivector {
        &self.omega
    }

    /// `X_n^i = Gamma^{i(n)} pi^n`, a theta-free phase-space polynomial.
    pub fn contracted(&self, n: u32, i: usize) -> &ThetaPoly {
        &self.contracted[(n - 1) as usize][i]
    }

    /// The source `G^{ij}` of order `n`, contracted with `n - 1` momenta.
    pub fn source(&self, n: u32, i: usize, j: usize) -> &ThetaPoly {
        &self.sources[(n - 1) as usize][i * self.dim() + j]
    }

    /// The symmetric component `Gamma^{i j1..jn}(y)` as a coordinate polynomial.
    pub fn component(&self, i: usize, js: &[usize]) -> ThetaPoly {
        let n = self.dim();
        let order = js.len() as u32;
        let space = VarSpace::coords(n);
        if order == 0 || order > self.max_order {
            return ThetaPoly::zero(space);
        }
        let mut alpha = vec![0u8; n];
        for &j in js {
            alpha[j] += 1;
        }
        let split = self.contracted(order, i).split_momenta().expect("phase-space polynomial");
        match split.get(&alpha) {
            None => ThetaPoly::zero(space),
            Some(p) => {
                let num: i64 = alpha.iter().map(|&a| factorial(a as u32)).product();
                p.scale(&Scalar::ratio(num, factorial(order)))
            }
        }
    }

    /// Nonzero components of order `n`, keyed by `(i, sorted j1..jn)`.
    pub fn order_tensor(&self, order: u32) -> BTreeMap<(usize, Vec<usize>), ThetaPoly> {
        let n = self.dim();
        let mut out = BTreeMap::new();
        for i in 0..n {
            let split = self.contracted(order, i).split_momenta().expect("phase-space polynomial");
            for alpha in split.keys() {
                let js: Vec<usize> =
                    alpha.iter().enumerate().flat_map(|(j, &a)| std::iter::repeat(j).take(a as usize)).collect();
                let c = self.component(i, &js);
                if !c.is_zero() {
                    out.insert((i, js), c);
                }
            }
        }
        out
    }

    /// `dX_n^j/dpi_i - dX_n^i/dpi_j - G^{ij}` for every pair; identically zero.
    pub fn antisymmetry_residual(&self, order: u32) -> Vec<ThetaPoly> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let lhs = &self.contracted(order, j).d(n + i) - &self.contracted(order, i).d(n + j);
                out.push(&lhs - self.source(order, i, j));
            }
        }
        out
    }
}

#[derive(Serialize)]
struct ComponentRecord {
    i: usize,
    j: Vec<usize>,
    value: String,
}

impl Serialize for GammaTower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let orders: BTreeMap<u32, Vec<ComponentRecord>> = (1..=self.max_order)
            .map(|n| {
                let comps = self
                    .order_tensor(n)
                    .into_iter()
                    .map(|((i, js), p)| ComponentRecord {
                        i: i + 1,
                        j: js.iter().map(|j| j + 1).collect(),
                        value: p.to_string(),
                    })
                    .collect();
                (n, comps)
            })
            .collect();
        orders.serialize(s)
    }
}
