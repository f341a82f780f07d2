#![allow(clippy::needless_range_loop)]

use ncstar_core::exact_algebra::{RationalFunction, Scalar, ThetaPoly, VarSpace};
use ncstar_core::operators::{
    a_tensor, add_indices, build_gamma1, build_phat, build_xhat, subalgebra_defect, unit_index, xp_defect,
    DiffOperator, Gamma1Tensor,
};
use ncstar_core::poisson::{build_gamma, PoissonBivector};
use ncstar_core::random::PolySampler;
use ncstar_core::star::{Measure, StarProduct};

fn poly(src: &str, n: usize) -> ThetaPoly {
    ThetaPoly::parse(src, VarSpace::coords(n)).unwrap()
}

fn bivectors() -> Vec<PoissonBivector> {
    vec![
        PoissonBivector::fuzzy_sphere(),
        PoissonBivector::from_entries(2, &[(0, 1, poly("x1*x2", 2))]).unwrap(),
        PoissonBivector::from_entries(2, &[(0, 1, poly("x1^2*x2 + x2^3", 2))]).unwrap(),
        PoissonBivector::nambu(&poly("x1^2*x2 + x3^3", 3)).unwrap(),
    ]
}

fn xhat(w: &PoissonBivector, g1: &Gamma1Tensor) -> Vec<DiffOperator> {
    build_xhat(&build_gamma(w, 3).unwrap(), g1, 3).unwrap()
}

#[test]
fn coordinate_operators_act_as_left_star_multiplication() {
    let mut gen = PolySampler::new(21);
    for w in bivectors() {
        let star = StarProduct::new(&w).unwrap();
        let xs = xhat(&w, &build_gamma1(&w));
        for (i, op) in xs.iter().enumerate() {
            let xi = ThetaPoly::coord(w.space(), i);
            assert_eq!(op, &star.left_operator(&xi, 3).unwrap());
            let g = gen.poly(w.space());
            assert_eq!(op.apply(&g).unwrap(), star.star(&xi, &g, 3).unwrap());
            assert_eq!(op.apply(&ThetaPoly::one(w.space())).unwrap(), xi);
        }
    }
}

#[test]
fn subalgebra_closes_with_gamma1() {
    for w in bivectors() {
        let star = StarProduct::new(&w).unwrap();
        let g1 = build_gamma1(&w);
        assert!(g1.constraint_residual(&w, &Scalar::ratio(1, 16)).iter().all(ThetaPoly::is_zero));
        for (_, d) in subalgebra_defect(&xhat(&w, &g1), &star, 3).unwrap() {
            assert!(d.is_zero(), "{d}");
        }
    }
}

#[test]
fn residual_without_gamma1_is_a_tensor_over_eight() {
    for w in bivectors() {
        let n = w.dim();
        let star = StarProduct::new(&w).unwrap();
        let a = a_tensor(&w);
        for ((i, j), d) in subalgebra_defect(&xhat(&w, &Gamma1Tensor::zero(n)), &star, 3).unwrap() {
            let mut expect = DiffOperator::zero(n);
            for l in 0..n {
                expect.add_poly_term(3, unit_index(n, l), a[(i * n + j) * n + l].scale(&Scalar::complex(0, 1, 1, 8)));
            }
            assert_eq!(d, expect);
        }
    }
}

#[test]
fn gamma1_vanishes_for_linear_and_constant_bivectors() {
    assert!(build_gamma1(&PoissonBivector::fuzzy_sphere()).is_zero());
    let c = PoissonBivector::constant(2, &[Scalar::from_int(3)]).unwrap();
    assert!(build_gamma1(&c).is_zero());
    assert!(!build_gamma1(&bivectors()[1]).is_zero());
}

#[test]
fn constant_bivector_commutator_is_i_theta_omega() {
    let w = PoissonBivector::constant(3, &[Scalar::from_int(1), Scalar::from_int(2), Scalar::ratio(1, 2)]).unwrap();
    let xs = xhat(&w, &Gamma1Tensor::zero(3));
    for i in 0..3 {
        for j in 0..3 {
            let c = xs[i].commutator(&xs[j]).unwrap();
            let expect = DiffOperator::multiplication(&w.entry(i, j).scale(&Scalar::i()).theta_shift(1));
            assert_eq!(c, expect);
        }
    }
}

#[test]
fn first_order_xhat_for_fuzzy_sphere() {
    let w = PoissonBivector::fuzzy_sphere();
    let x1 = &xhat(&w, &build_gamma1(&w))[0];
    let s1 = x1.theta_slice(1);
    // (i/2) eps^{1lk} x_k d_l = (i/2)(x3 d2 - x2 d3)
    let mut expect = DiffOperator::zero(3);
    let hi = Scalar::complex(0, 1, 1, 2);
    expect.add_poly_term(0, unit_index(3, 1), poly("x3", 3).scale(&hi));
    expect.add_poly_term(0, unit_index(3, 2), poly("-x2", 3).scale(&hi));
    assert_eq!(s1, expect);
}

#[test]
fn second_order_coefficient_is_minus_gamma() {
    let w = bivectors()[3].clone();
    let t = build_gamma(&w, 3).unwrap();
    let x = build_xhat(&t, &build_gamma1(&w), 3).unwrap();
    for i in 0..3 {
        for l in 0..3 {
            for m in l..3 {
                let mult = if l == m { 1 } else { 2 };
                let expect = t.component(i, &[l, m]).scale(&Scalar::from_int(-mult));
                let got = x[i]
                    .coefficient(2, &add_indices(&unit_index(3, l), &unit_index(3, m)))
                    .cloned()
                    .unwrap_or_else(|| RationalFunction::zero(w.space()));
                assert_eq!(got, RationalFunction::from_poly(expect));
            }
        }
    }
}

#[test]
fn momenta_commute_and_match_xp_relation() {
    let w = PoissonBivector::fuzzy_sphere();
    for mu in ["1", "1 + x1^2 + x2^2 + x3^2", "x1^2 + x2^2 + x3^2"] {
        let m = Measure::new(poly(mu, 3), &w).unwrap();
        let p = build_phat(&m);
        for i in 0..3 {
            for j in 0..3 {
                assert!(p[i].commutator(&p[j]).unwrap().is_zero());
            }
        }
        let xs = xhat(&w, &build_gamma1(&w));
        assert!(xp_defect(&xs, &p, &w, &m).unwrap().iter().all(DiffOperator::is_zero));
    }
}

#[test]
fn xp_relation_requires_invariant_measure() {
    let w = PoissonBivector::nambu(&poly("x1^2*x2 + x3^3", 3)).unwrap();
    let xs = build_xhat(&build_gamma(&w, 1).unwrap(), &Gamma1Tensor::zero(3), 1).unwrap();
    let m = Measure::new(poly("1", 3), &w).unwrap();
    assert!(m.is_valid());
    assert!(xp_defect(&xs, &build_phat(&m), &w, &m).unwrap().iter().all(DiffOperator::is_zero));

    let w = PoissonBivector::from_entries(2, &[(0, 1, poly("x1^2 + x2", 2))]).unwrap();
    let xs = build_xhat(&build_gamma(&w, 1).unwrap(), &Gamma1Tensor::zero(2), 1).unwrap();
    let m = Measure::new(poly("1 + x1^2", 2), &w).unwrap();
    assert!(!m.is_valid());
    assert!(!xp_defect(&xs, &build_phat(&m), &w, &m).unwrap().iter().all(DiffOperator::is_zero));
}

#[test]
fn composition_is_associative_and_commutator_satisfies_jacobi() {
    let s = VarSpace::coords(2);
    let mut gen = PolySampler::new(2);
    let random_op = |gen: &mut PolySampler| {
        let mut op = DiffOperator::zero(2);
        for (k, alpha) in [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().enumerate() {
            op.add_poly_term((k % 2) as u32, alpha, gen.poly(s));
        }
        op.with_trunc(3)
    };
    let (a, b, c) = (random_op(&mut gen), random_op(&mut gen), random_op(&mut gen));
    assert_eq!(a.compose(&b.compose(&c).unwrap()).unwrap(), a.compose(&b).unwrap().compose(&c).unwrap());
    let j = a
        .commutator(&b.commutator(&c).unwrap())
        .unwrap()
        .try_add(&b.commutator(&c.commutator(&a).unwrap()).unwrap())
        .unwrap()
        .try_add(&c.commutator(&a.commutator(&b).unwrap()).unwrap())
        .unwrap();
    assert!(j.is_zero());
}
