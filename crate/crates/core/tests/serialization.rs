use ncstar_core::exact_algebra::{Scalar, ThetaPoly, VarSpace};
use ncstar_core::operators::DiffOperator;
use ncstar_core::poisson::{build_gamma, PoissonBivector};
use serde_json::json;

#[test]
fn scalars_are_canonical_strings() {
    let cases = [
        (Scalar::ratio(6, -4), "-3/2"),
        (Scalar::from_int(0), "0"),
        (Scalar::complex(1, 2, -1, 3), "1/2-1/3*i"),
        (Scalar::complex(0, 1, 2, 1), "2*i"),
    ];
    for (s, text) in cases {
        assert_eq!(serde_json::to_value(&s).unwrap(), json!(text));
        let back: Scalar = serde_json::from_value(json!(text)).unwrap();
        assert_eq!(back, s);
    }
}

#[test]
fn polynomials_are_sorted_term_lists() {
    let p = ThetaPoly::parse("x2 + 3*theta*x1^2 - 1/2", VarSpace::coords(2)).unwrap();
    let v = serde_json::to_value(&p).unwrap();
    assert_eq!(
        v,
        json!([
            { "coefficient": "-1/2", "theta": 0, "exponents": [0, 0] },
            { "coefficient": "1", "theta": 0, "exponents": [0, 1] },
            { "coefficient": "3", "theta": 1, "exponents": [2, 0] },
        ])
    );
}

#[test]
fn operators_and_tensors_serialize() {
    let s = VarSpace::coords(2);
    let mut op = DiffOperator::zero(2);
    op.add_poly_term(1, vec![1, 0], ThetaPoly::parse("x2", s).unwrap());
    let v = serde_json::to_value(&op).unwrap();
    assert!(v.is_array());
    assert_eq!(v.as_array().unwrap().len(), 1);

    let tower = build_gamma(&PoissonBivector::fuzzy_sphere(), 2).unwrap();
    let v = serde_json::to_value(&tower).unwrap();
    assert!(v["1"].as_array().unwrap().iter().any(|c| c["i"] == 1 && c["j"] == json!([2]) && c["value"] == "-1/2*x3"));
}
