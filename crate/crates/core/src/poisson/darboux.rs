//! The assembled Darboux map, its defining-property checks, and the
//! induced phase-space brackets.

use serde::Serialize;

use super::{canonical_bracket, GammaTower, PoissonBivector};
use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, ThetaPoly, VarSpace};

/// `x^i(y, pi)` and `p_i(y, pi)` as theta-series truncated at `order`.
#[derive(Clone, Debug, Serialize)]
pub struct DarbouxMap {
    pub dim: usize,
    pub order: u32,
    pub x_of: Vec<ThetaPoly>,
    pub p_of: Vec<ThetaPoly>,
}

/// `x^i = y^i + sum_n theta^n X_n^i`, `p_i = pi_i`.
pub fn assemble_darboux(tower: &GammaTower) -> DarbouxMap {
    let n = tower.dim();
    let order = tower.max_order();
    let phase = VarSpace::phase(n);
    let x_of = (0..n)
        .map(|i| {
            let mut x = ThetaPoly::coord(phase, i).with_trunc(order);
            for k in 1..=order {
                x.add_assign_ref(&tower.contracted(k, i).theta_shift(k));
            }
            x
        })
        .collect();
    let p_of = (0..n).map(|i| ThetaPoly::momentum(phase, i).with_trunc(order)).collect();
    DarbouxMap { dim: n, order, x_of, p_of }
}

/// Inverts `x = y + sum theta^n X_n(y, pi)`, `p = pi - theta j(y, pi)` through
/// `theta^trunc` by fixed-point iteration. Returns the images of `(y, pi)` in
/// terms of `(x, p)`.
fn invert(map_x: &[ThetaPoly], j1: Option<&[ThetaPoly]>, trunc: u32) -> Result<Vec<ThetaPoly>> {
    let n = map_x.len();
    let phase = VarSpace::phase(n);
    let xs: Vec<ThetaPoly> = (0..2 * n).map(|k| ThetaPoly::var(phase, k).with_trunc(trunc)).collect();
    // corrections x^i - y^i as functions of (y, pi)
    let deltas: Vec<ThetaPoly> =
        (0..n).map(|i| (&map_x[i] - &ThetaPoly::coord(phase, i)).truncated(trunc)).collect();
    let mut images = xs.clone();
    for _ in 0..=trunc {
        let mut next = Vec::with_capacity(2 * n);
        for i in 0..n {
            next.push(&xs[i] - &deltas[i].substitute(&images)?);
        }
        for i in 0..n {
            let mut pi = xs[n + i].clone();
            if let Some(j) = j1 {
                pi = &pi + &j[i].substitute(&images)?.theta_shift(1).with_trunc(trunc);
            }
            next.push(pi);
        }
        images = next;
    }
    Ok(images)
}

/// `delta^{ij}(x,p)` as printed: `+ (theta/2) d_j w^{il} p_l` at first order.
pub fn delta_printed(omega: &PoissonBivector) -> Vec<ThetaPoly> {
    delta_closed_form(omega, Scalar::ratio(1, 2))
}

/// `delta^{ij}(x,p)` of the constructed map: `- (theta/2) d_j w^{il} p_l` at
/// first order, same second order.
pub fn delta_expected(omega: &PoissonBivector) -> Vec<ThetaPoly> {
    delta_closed_form(omega, Scalar::ratio(-1, 2))
}

fn delta_closed_form(omega: &PoissonBivector, first: Scalar) -> Vec<ThetaPoly> {
    let n = omega.dim();
    let phase = VarSpace::phase(n);
    let w = |i: usize, j: usize| omega.entry(i, j).to_phase_space();
    let p = |l: usize| ThetaPoly::momentum(phase, l);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut d = if i == j { ThetaPoly::one(phase) } else { ThetaPoly::zero(phase) };
            d = d.with_trunc(2);
            let mut t1 = ThetaPoly::zero(phase);
            for l in 0..n {
                t1.add_assign_ref(&(&w(i, l).d(j) * &p(l)));
            }
            d.add_assign_ref(&t1.scale(&first).theta_shift(1));
            let mut t2 = ThetaPoly::zero(phase);
            for l in 0..n {
                for m in 0..n {
                    let pp = &p(l) * &p(m);
                    let mut c = ThetaPoly::zero(phase);
                    for k in 0..n {
                        c.add_scaled(&(&w(k, l).d(j) * &w(i, m).d(k)), &Scalar::ratio(1, 12));
                        c.add_scaled(&(&w(l, k) * &w(i, m).d(j).d(k)), &Scalar::ratio(1, 6));
                    }
                    t2.add_assign_ref(&(&c * &pp));
                }
            }
            d.add_assign_ref(&t2.theta_shift(2));
            out.push(d);
        }
    }
    out
}

/// Result of [`verify_darboux`]. Matrices are row-major `N x N`.
#[derive(Clone, Debug, Serialize)]
pub struct DarbouxReport {
    pub order: u32,
    /// `{x^i,x^j} - theta w^{ij}(x(y,pi))` through `theta^order`.
    pub xx_defect: Vec<ThetaPoly>,
    /// `{p_i,p_j}`.
    pub pp_defect: Vec<ThetaPoly>,
    /// `{x^i,p_j}` re-expressed in `(x,p)` through `theta^min(order,2)`.
    pub delta: Vec<ThetaPoly>,
    /// `delta` minus [`delta_printed`].
    pub delta_vs_printed: Vec<ThetaPoly>,
    /// `delta` minus [`delta_expected`].
    pub delta_vs_expected: Vec<ThetaPoly>,
}

impl DarbouxReport {
    pub fn brackets_hold(&self) -> bool {
        self.xx_defect.iter().chain(&self.pp_defect).all(ThetaPoly::is_zero)
    }
}

pub fn verify_darboux(map: &DarbouxMap, omega: &PoissonBivector, order: u32) -> Result<DarbouxReport> {
    if order > map.order {
        return Err(Error::Invalid(format!("map built to order {} but {order} requested", map.order)));
    }
    let n = map.dim;
    if omega.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: omega.dim() });
    }
    let xs: Vec<ThetaPoly> = map.x_of.iter().map(|x| x.truncated(order).with_trunc(order)).collect();
    let mut xx_defect = Vec::with_capacity(n * n);
    let mut pp_defect = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let lhs = canonical_bracket(&xs[i], &xs[j])?;
            let rhs = omega.entry(i, j).substitute(&xs)?.theta_shift(1).with_trunc(order);
            xx_defect.push(&lhs - &rhs);
            pp_defect.push(canonical_bracket(&map.p_of[i], &map.p_of[j])?);
        }
    }
    let t = order.min(2);
    let xt: Vec<ThetaPoly> = map.x_of.iter().map(|x| x.truncated(t).with_trunc(t)).collect();
    let inverse = invert(&xt, None, t)?;
    let mut delta = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = canonical_bracket(&xt[i], &map.p_of[j].clone().with_trunc(t))?;
            delta.push(d.substitute(&inverse)?);
        }
    }
    let diff = |reference: Vec<ThetaPoly>| -> Vec<ThetaPoly> {
        delta.iter().zip(reference).map(|(d, r)| d - &r.truncated(t)).collect()
    };
    let delta_vs_printed = diff(delta_printed(omega));
    let delta_vs_expected = diff(delta_expected(omega));
    Ok(DarbouxReport { order, xx_defect, pp_defect, delta, delta_vs_printed, delta_vs_expected })
}

/// Brackets of a Darboux map with momenta `p_i = pi_i - theta j1_i(y,pi)`,
/// through `theta^2`, in `(x,p)` variables.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralBrackets {
    pub dim: usize,
    /// `{x^i,x^j}`, equal to `theta w^{ij}(x)` through `theta^2`.
    pub xx: Vec<ThetaPoly>,
    /// `delta^{ij}(x,p) = {x^i,p_j}`.
    pub delta: Vec<ThetaPoly>,
    /// `varpi^{ij}(x,p) = {p_i,p_j}`.
    pub varpi: Vec<ThetaPoly>,
}

impl GeneralBrackets {
    /// The `2N x 2N` bracket matrix of `(x, p)`.
    pub fn full_matrix(&self) -> Vec<Vec<ThetaPoly>> {
        let n = self.dim;
        let mut out = vec![Vec::with_capacity(2 * n); 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let v = match (a < n, b < n) {
                    (true, true) => self.xx[a * n + b].clone(),
                    (true, false) => self.delta[a * n + (b - n)].clone(),
                    (false, true) => -&self.delta[b * n + (a - n)],
                    (false, false) => self.varpi[(a - n) * n + (b - n)].clone(),
                };
                out[a].push(v);
            }
        }
        out
    }
}

pub fn general_brackets(omega: &PoissonBivector, j1: &[ThetaPoly]) -> Result<GeneralBrackets> {
    let n = omega.dim();
    if j1.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: j1.len() });
    }
    let phase = VarSpace::phase(n);
    let j1: Vec<ThetaPoly> = j1
        .iter()
        .map(|j| {
            let j = j.to_phase_space();
            if j.space() != phase {
                return Err(Error::DimensionMismatch { expected: phase.nvars(), found: j.space().nvars() });
            }
            if !j.is_theta_free() {
                return Err(Error::Invalid("gauge vector must be theta-free".into()));
            }
            Ok(j)
        })
        .collect::<Result<_>>()?;
    let tower = super::build_gamma(omega, 2)?;
    let map = assemble_darboux(&tower);
    let t = 2;
    let xs: Vec<ThetaPoly> = map.x_of.iter().map(|x| x.clone().with_trunc(t)).collect();
    let ps: Vec<ThetaPoly> = (0..n)
        .map(|i| &ThetaPoly::momentum(phase, i).with_trunc(t) - &j1[i].theta_shift(1).with_trunc(t))
        .collect();
    let inverse = invert(&xs, Some(&j1), t)?;
    let mut xx = Vec::new();
    let mut delta = Vec::new();
    let mut varpi = Vec::new();
    for i in 0..n {
        for j in 0..n {
            xx.push(canonical_bracket(&xs[i], &xs[j])?.substitute(&inverse)?);
            delta.push(canonical_bracket(&xs[i], &ps[j])?.substitute(&inverse)?);
            varpi.push(canonical_bracket(&ps[i], &ps[j])?.substitute(&inverse)?);
        }
    }
    Ok(GeneralBrackets { dim: n, xx, delta, varpi })
}

/// `Omega^{as} d_s Omega^{bc} + Omega^{cs} d_s Omega^{ab} + Omega^{bs} d_s Omega^{ca}`
/// for a phase-space bracket matrix; returns the nonzero components.
pub fn phase_space_jacobi(omega: &[Vec<ThetaPoly>]) -> Vec<((usize, usize, usize), ThetaPoly)> {
    let m = omega.len();
    let term = |a: usize, b: usize, c: usize| {
        let mut acc = ThetaPoly::zero(omega[0][0].space());
        for s in 0..m {
            if !omega[a][s].is_zero() {
                let d = omega[b][c].d(s);
                if !d.is_zero() {
                    acc.add_assign_ref(&(&omega[a][s] * &d));
                }
            }
        }
        acc
    };
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let v = &(&term(a, b, c) + &term(c, a, b)) + &term(b, c, a);
                if !v.is_zero() {
                    out.push(((a, b, c), v));
                }
            }
        }
    }
    out
}
