use ncstar_core::exact_algebra::{Scalar, ThetaPoly, VarSpace};
use ncstar_core::poisson::{
    assemble_darboux, build_gamma, canonical_bracket, general_brackets, phase_space_jacobi, verify_darboux,
    PoissonBivector,
};
use ncstar_core::Error;

fn poly(src: &str, n: usize) -> ThetaPoly {
    ThetaPoly::parse(src, VarSpace::coords(n)).unwrap()
}

fn quadratic_2d() -> PoissonBivector {
    PoissonBivector::from_entries(2, &[(0, 1, poly("x1*x2", 2))]).unwrap()
}

fn nambu() -> PoissonBivector {
    PoissonBivector::nambu(&poly("x1^2*x2 + x3^3", 3)).unwrap()
}

/// (1/24)(w^{mk} d_m w^{ij} + w^{mj} d_m w^{ik}) evaluated by brute force.
fn second_order_closed_form(w: &PoissonBivector, i: usize, j: usize, k: usize) -> ThetaPoly {
    let n = w.dim();
    let mut acc = ThetaPoly::zero(w.space());
    for m in 0..n {
        acc = &acc + &(w.entry(m, k) * &w.entry(i, j).d(m));
        acc = &acc + &(w.entry(m, j) * &w.entry(i, k).d(m));
    }
    acc.scale(&Scalar::ratio(1, 24))
}

#[test]
fn jacobi_defect_of_non_poisson_sample() {
    let w = PoissonBivector::from_entries(3, &[(0, 1, poly("x2", 3)), (1, 2, poly("x3", 3)), (2, 0, poly("x1", 3))])
        .unwrap();
    let d = w.jacobi_defect();
    let nz = d.nonzero();
    assert_eq!(nz.len(), 1);
    // J^{123} = w^{13} + w^{32} + w^{21} = -x1 - x3 - x2
    let (idx, v) = nz[0];
    assert_eq!(idx, (0, 1, 2));
    assert_eq!(v, &poly("-x1 - x2 - x3", 3));
    assert!(matches!(build_gamma(&w, 2), Err(Error::NotPoisson(_))));
}

#[test]
fn second_order_gamma_matches_closed_form() {
    for w in [PoissonBivector::fuzzy_sphere(), quadratic_2d(), nambu()] {
        let t = build_gamma(&w, 2).unwrap();
        let n = w.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(t.component(i, &[j, k]), second_order_closed_form(&w, i, j, k), "{i}{j}{k}");
                }
            }
        }
    }
}

#[test]
fn trailing_indices_are_symmetric_and_antisymmetric_part_is_sourced() {
    for w in [PoissonBivector::fuzzy_sphere(), quadratic_2d(), nambu()] {
        let t = build_gamma(&w, 4).unwrap();
        let n = w.dim();
        for i in 0..n {
            for (a, b, c) in [(0, 1, 1), (1, 0, 1), (1, 1, 0)] {
                if c < n {
                    assert_eq!(t.component(i, &[a, b, c]), t.component(i, &[c, b, a]));
                }
            }
        }
        for order in 1..=4 {
            assert!(t.antisymmetry_residual(order).iter().all(ThetaPoly::is_zero));
        }
    }
}

#[test]
fn darboux_brackets_vanish_through_fourth_order() {
    for w in [PoissonBivector::fuzzy_sphere(), quadratic_2d(), nambu()] {
        let map = assemble_darboux(&build_gamma(&w, 4).unwrap());
        let r = verify_darboux(&map, &w, 4).unwrap();
        assert!(r.brackets_hold());
        assert!(r.delta_vs_expected.iter().all(ThetaPoly::is_zero));
    }
}

#[test]
fn printed_delta_differs_only_at_first_order() {
    let w = PoissonBivector::fuzzy_sphere();
    let map = assemble_darboux(&build_gamma(&w, 2).unwrap());
    let r = verify_darboux(&map, &w, 2).unwrap();
    assert!(r.delta_vs_printed.iter().any(|d| !d.is_zero()));
    for d in &r.delta_vs_printed {
        assert!(d.theta_slice(0).is_zero());
        assert!(d.theta_slice(2).is_zero());
    }
    // -(theta/2) d_2 w^{13} p_3 = (theta/2) p_3
    let s = VarSpace::phase(3);
    assert_eq!(r.delta[1].theta_slice(1), ThetaPoly::parse("1/2*p3", s).unwrap());
}

#[test]
fn constant_bivector_map_is_exactly_linear() {
    let w = PoissonBivector::constant(3, &[Scalar::from_int(2), Scalar::ratio(-1, 3), Scalar::from_int(5)]).unwrap();
    let map = assemble_darboux(&build_gamma(&w, 3).unwrap());
    let s = VarSpace::phase(3);
    let expect = ThetaPoly::parse("x1 - 1/2*theta*(2*p2 - 1/3*p3)", s).unwrap();
    assert_eq!(map.x_of[0], expect);
}

#[test]
fn general_brackets_reduce_and_satisfy_jacobi() {
    let w = PoissonBivector::fuzzy_sphere();
    let s = VarSpace::phase(3);
    let zero = vec![ThetaPoly::zero(s); 3];
    let g0 = general_brackets(&w, &zero).unwrap();
    let map = assemble_darboux(&build_gamma(&w, 2).unwrap());
    let r = verify_darboux(&map, &w, 2).unwrap();
    assert_eq!(g0.delta, r.delta);
    assert!(g0.varpi.iter().all(ThetaPoly::is_zero));
    assert!(phase_space_jacobi(&g0.full_matrix()).is_empty());

    // gradient gauge: no first-order varpi
    let f = ThetaPoly::parse("x1^2*x2 + x3", s).unwrap();
    let grad: Vec<ThetaPoly> = (0..3).map(|i| f.d(i)).collect();
    let g = general_brackets(&w, &grad).unwrap();
    assert!(g.varpi.iter().all(|v| v.theta_slice(1).is_zero()));

    // momentum-dependent gauge
    let j1: Vec<ThetaPoly> =
        ["x2*p1", "p1*p3 + x1", "x3^2"].iter().map(|t| ThetaPoly::parse(t, s).unwrap()).collect();
    let g = general_brackets(&w, &j1).unwrap();
    assert!(g.varpi.iter().any(|v| !v.is_zero()));
    assert!(phase_space_jacobi(&g.full_matrix()).is_empty());
}

#[test]
fn canonical_bracket_antisymmetry() {
    let s = VarSpace::phase(2);
    let f = ThetaPoly::parse("x1*p2^2 + 3*x2*p1 - theta*x1^2", s).unwrap();
    let g = ThetaPoly::parse("p1*p2*x2 - x1^3 + i*p2", s).unwrap();
    assert_eq!(canonical_bracket(&f, &g).unwrap(), -canonical_bracket(&g, &f).unwrap());
}
