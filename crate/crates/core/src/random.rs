//! Seeded generation of bounded random polynomials for property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact_algebra::{GaussianFunction, Monomial, Scalar, ThetaPoly, VarSpace};

/// Bounds on generated polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerBounds {
    pub max_degree: u16,
    /// Integer coefficient parts lie in `[-height, height]`.
    pub height: i64,
    pub max_terms: usize,
    pub complex: bool,
}

impl Default for SamplerBounds {
    fn default() -> Self {
        SamplerBounds { max_degree: 3, height: 3, max_terms: 4, complex: false }
    }
}

pub struct PolySampler {
    rng: ChaCha8Rng,
    bounds: SamplerBounds,
}

impl PolySampler {
    pub fn new(seed: u64) -> Self {
        PolySampler::with_bounds(seed, SamplerBounds::default())
    }

    pub fn with_bounds(seed: u64, bounds: SamplerBounds) -> Self {
        PolySampler { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn bounds(&self) -> SamplerBounds {
        self.bounds
    }

    fn coefficient(&mut self) -> Scalar {
        let h = self.bounds.height;
        let mut re = 0;
        while re == 0 {
            re = self.rng.random_range(-h..=h);
        }
        let im = if self.bounds.complex { self.rng.random_range(-h..=h) } else { 0 };
        Scalar::complex(re, 1, im, 1)
    }

    fn monomial(&mut self, space: VarSpace) -> Monomial {
        let degree = self.rng.random_range(0..=self.bounds.max_degree);
        let mut m = Monomial::one(space.nvars());
        for _ in 0..degree {
            let k = self.rng.random_range(0..space.coords);
            m.exps[k] += 1;
        }
        m
    }

    /// An integer in `[-height, height]`.
    pub fn integer(&mut self) -> i64 {
        let h = self.bounds.height;
        self.rng.random_range(-h..=h)
    }

    /// A nonzero theta-free coordinate polynomial.
    pub fn poly(&mut self, space: VarSpace) -> ThetaPoly {
        loop {
            let terms = self.rng.random_range(1..=self.bounds.max_terms);
            let items: Vec<(Monomial, Scalar)> = (0..terms).map(|_| (self.monomial(space), self.coefficient())).collect();
            let p = ThetaPoly::from_terms(space, items).expect("consistent space");
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// `P exp(-|x|^2)` with a random prefactor.
    pub fn gaussian(&mut self, dim: usize) -> GaussianFunction {
        GaussianFunction::standard(self.poly(VarSpace::coords(dim))).expect("coordinate polynomial")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let s = VarSpace::coords(3);
        let a: Vec<_> = (0..5).scan(PolySampler::new(7), |g, _| Some(g.poly(s))).collect();
        let b: Vec<_> = (0..5).scan(PolySampler::new(7), |g, _| Some(g.poly(s))).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.total_degree().unwrap() <= 3 && p.len() <= 4));
    }
}
