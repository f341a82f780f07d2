//! Benchmark fixtures.

use ncstar_core::random::PolySampler;
use ncstar_core::{PoissonBivector, ThetaPoly, VarSpace};

pub fn fixtures() -> Vec<(&'static str, PoissonBivector)> {
    let s = VarSpace::coords(3);
    let c = ThetaPoly::parse("x1^2*x2 + x3^3", s).expect("valid polynomial");
    vec![
        ("fuzzy", PoissonBivector::fuzzy_sphere()),
        ("nambu", PoissonBivector::nambu(&c).expect("three dimensions")),
    ]
}

pub fn triple(seed: u64) -> [ThetaPoly; 3] {
    let mut gen = PolySampler::new(seed);
    let s = VarSpace::coords(3);
    [gen.poly(s), gen.poly(s), gen.poly(s)]
}
