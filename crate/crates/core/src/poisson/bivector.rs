//! Antisymmetric polynomial bivectors and the Jacobi identity.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_algebra::{Scalar, ThetaPoly, VarSpace};

/// `omega^{ij}(x)`: an N x N antisymmetric matrix of theta-free
/// coordinate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonBivector {
    dim: usize,
    entries: Vec<ThetaPoly>,
}

/// Levi-Civita symbol on three indices.
pub fn epsilon(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

impl PoissonBivector {
    /// Builds the bivector from off-diagonal entries `(i, j, omega^{ij})`
    /// (zero-based). Either ordering of a pair is accepted; the transpose is
    /// filled in by antisymmetry. Diagonal or repeated pairs are rejected.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, ThetaPoly)]) -> Result<Self> {
        let space = VarSpace::coords(dim);
        let mut m = vec![ThetaPoly::zero(space); dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, p) in entries {
            let (i, j) = (*i, *j);
            let bad = |reason: &str| Error::InvalidBivector { i, j, reason: reason.into() };
            if i >= dim || j >= dim {
                return Err(bad("index out of range"));
            }
            if i == j {
                return Err(bad("diagonal entries must vanish"));
            }
            if p.space() != space {
                return Err(bad("entry is not a coordinate polynomial of the right dimension"));
            }
            if !p.is_theta_free() {
                return Err(bad("entry depends on theta"));
            }
            let (a, b, v) = if i < j { (i, j, p.clone()) } else { (j, i, -p) };
            if seen[a * dim + b] {
                return Err(bad("pair given more than once"));
            }
            seen[a * dim + b] = true;
            m[b * dim + a] = -&v;
            m[a * dim + b] = v;
        }
        Ok(PoissonBivector { dim, entries: m })
    }

    /// Full matrix form; must be antisymmetric.
    pub fn from_matrix(rows: Vec<Vec<ThetaPoly>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for j in 0..dim {
                if row[j] != -&rows[j][i] {
                    return Err(Error::InvalidBivector { i, j, reason: "not antisymmetric".into() });
                }
                if i < j && !row[j].is_zero() {
                    entries.push((i, j, row[j].clone()));
                }
            }
        }
        PoissonBivector::from_entries(dim, &entries)
    }

    /// `omega^{ij} = eps^{ijk} x_k`.
    pub fn fuzzy_sphere() -> Self {
        let s = VarSpace::coords(3);
        let x = |k| ThetaPoly::coord(s, k);
        PoissonBivector::from_entries(3, &[(0, 1, x(2)), (1, 2, x(0)), (2, 0, x(1))]).unwrap()
    }

    /// Constant bivector from its strict upper triangle, row by row.
    pub fn constant(dim: usize, upper: &[Scalar]) -> Result<Self> {
        let s = VarSpace::coords(dim);
        let mut entries = Vec::new();
        let mut it = upper.iter();
        for i in 0..dim {
            for j in i + 1..dim {
                let c = it.next().ok_or(Error::DimensionMismatch { expected: dim * (dim - 1) / 2, found: upper.len() })?;
                entries.push((i, j, ThetaPoly::constant(s, c.clone())));
            }
        }
        PoissonBivector::from_entries(dim, &entries)
    }

    /// `omega^{ij} = eps^{ijk} d_k C` in three dimensions, Poisson for any `C`.
    pub fn nambu(casimir: &ThetaPoly) -> Result<Self> {
        if casimir.space() != VarSpace::coords(3) {
            return Err(Error::DimensionMismatch { expected: 3, found: casimir.dim() });
        }
        let d = |k| casimir.d(k);
        PoissonBivector::from_entries(3, &[(0, 1, d(2)), (1, 2, d(0)), (2, 0, d(1))])
    }

    pub fn zero(dim: usize) -> Self {
        PoissonBivector::from_entries(dim, &[]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::coords(self.dim)
    }

    pub fn entry(&self, i: usize, j: usize) -> &ThetaPoly {
        &self.entries[i * self.dim + j]
    }

    /// Strict upper-triangle entries that are nonzero.
    pub fn upper_entries(&self) -> Vec<(usize, usize, &ThetaPoly)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let p = self.entry(i, j);
                if !p.is_zero() {
                    out.push((i, j, p));
                }
            }
        }
        out
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|p| p.as_constant().is_some())
    }

    /// `J^{ijk} = w^{il} d_l w^{jk} + w^{kl} d_l w^{ij} + w^{jl} d_l w^{ki}`.
    pub fn jacobi_defect(&self) -> JacobiDefect {
        let n = self.dim;
        let grads: Vec<Vec<ThetaPoly>> =
            self.entries.iter().map(|p| (0..n).map(|l| p.d(l)).collect()).collect();
        let dw = |i: usize, j: usize, l: usize| &grads[i * n + j][l];
        let term = |a: usize, b: usize, c: usize| {
            let mut acc = ThetaPoly::zero(self.space());
            for l in 0..n {
                let w = self.entry(a, l);
                if !w.is_zero() {
                    acc.add_assign_ref(&(w * dw(b, c, l)));
                }
            }
            acc
        };
        let mut components = vec![ThetaPoly::zero(self.space()); n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v = &(&term(i, j, k) + &term(k, i, j)) + &term(j, k, i);
                    let neg = -&v;
                    for (a, b, c, val) in [
                        (i, j, k, &v),
                        (j, k, i, &v),
                        (k, i, j, &v),
                        (j, i, k, &neg),
                        (i, k, j, &neg),
                        (k, j, i, &neg),
                    ] {
                        components[(a * n + b) * n + c] = val.clone();
                    }
                }
            }
        }
        JacobiDefect { dim: n, components }
    }

    pub fn is_poisson(&self) -> bool {
        self.jacobi_defect().is_zero()
    }

    /// `sum_l w^{il} v_l`.
    pub fn contract(&self, i: usize, v: &[ThetaPoly]) -> ThetaPoly {
        let mut acc = ThetaPoly::zero(v[0].space());
        for (l, vl) in v.iter().enumerate() {
            let w = self.entry(i, l);
            if !w.is_zero() {
                acc.add_assign_ref(&(&w.to_phase_space_like(vl) * vl));
            }
        }
        acc
    }
}

impl ThetaPoly {
    /// Embeds a coordinate polynomial into the space of `like`.
    pub(crate) fn to_phase_space_like(&self, like: &ThetaPoly) -> ThetaPoly {
        if like.space().momenta && !self.space().momenta {
            self.to_phase_space()
        } else {
            self.clone()
        }
    }
}

/// The totally antisymmetric Jacobi defect tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDefect {
    dim: usize,
    components: Vec<ThetaPoly>,
}

impl JacobiDefect {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> &ThetaPoly {
        &self.components[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ThetaPoly::is_zero)
    }

    /// Nonzero independent components `(i, j, k)` with `i < j < k`.
    pub fn nonzero(&self) -> Vec<((usize, usize, usize), &ThetaPoly)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let c = self.component(i, j, k);
                    if !c.is_zero() {
                        out.push(((i, j, k), c));
                    }
                }
            }
        }
        out
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero().len()
    }
}

#[derive(Serialize)]
struct ComponentRecord<'a> {
    index: [usize; 3],
    value: String,
    terms: &'a ThetaPoly,
}

/// One-based independent nonzero components.
impl Serialize for JacobiDefect {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nz = self.nonzero();
        let mut seq = s.serialize_seq(Some(nz.len()))?;
        for ((i, j, k), p) in nz {
            seq.serialize_element(&ComponentRecord { index: [i + 1, j + 1, k + 1], value: p.to_string(), terms: p })?;
        }
        seq.end()
    }
}

impl Serialize for PoissonBivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let up = self.upper_entries();
        let mut seq = s.serialize_seq(Some(up.len()))?;
        for (i, j, p) in up {
            seq.serialize_element(&(i + 1, j + 1, p.to_string()))?;
        }
        seq.end()
    }
}
