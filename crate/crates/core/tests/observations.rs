//! Empirical facts about the test varieties that the theory leaves open.

use cido_core::acceptance::{fermat_cubic, fermat_quintic, phi_exact, phi_suite, quadric_pair, quadric_triple};
use cido_core::deforms::FormContext;
use cido_core::hodge::primitive_hodge_numbers;
use cido_core::jacring::{build_dwork, milnor_basis};
use cido_core::qpoly::RingSpec;

fn line_section_of_cubic() -> RingSpec {
    RingSpec::from_strings(3, &["x0 + 2*x1 + 3*x2 + 5*x3", "x0^3 + x1^3 + x2^3 + x3^3"]).unwrap()
}

#[test]
fn top_weight_is_n_minus_k() {
    for spec in [fermat_cubic(), quadric_pair(), fermat_quintic(), quadric_triple(), line_section_of_cubic()] {
        let basis = milnor_basis(&build_dwork(&spec)).unwrap();
        assert_eq!(basis.max_weight(), Some(spec.n() - spec.k()));
    }
}

#[test]
fn weight_dims_match_primitive_hodge_numbers() {
    for spec in [fermat_cubic(), quadric_pair(), fermat_quintic(), quadric_triple(), line_section_of_cubic()] {
        let basis = milnor_basis(&build_dwork(&spec)).unwrap();
        let dims: Vec<i64> = basis.weight_dims().iter().map(|&d| d as i64).collect();
        assert_eq!(dims, primitive_hodge_numbers(&spec).unwrap().primitive);
    }
}

#[test]
fn phi_equals_alpha_exactly_when_degrees_agree() {
    for spec in [fermat_cubic(), quadric_pair(), quadric_triple()] {
        let dwork = build_dwork(&spec);
        let basis = milnor_basis(&dwork).unwrap();
        let ctx = FormContext::new(&dwork);
        assert!(phi_exact(&ctx, &basis).unwrap().iter().all(|(_, ok)| *ok));
    }
}

#[test]
fn phi_differs_from_alpha_in_dx_top_when_degrees_differ() {
    let dwork = build_dwork(&line_section_of_cubic());
    let basis = milnor_basis(&dwork).unwrap();
    let ctx = FormContext::new(&dwork);
    assert!(phi_suite(&ctx, &basis).unwrap().pass());
    assert!(phi_exact(&ctx, &basis).unwrap().iter().all(|(_, ok)| !*ok));
}
