use super::*;
use crate::jacring::build_dwork;
use crate::qpoly::{rat, Monomial, Polynomial, Rational, RingSpec};

fn ctx(n: usize, gens: &[&str]) -> FormContext {
    FormContext::new(&build_dwork(&RingSpec::from_strings(n, gens).unwrap()))
}

fn cubic() -> FormContext {
    ctx(2, &["x0^3 + x1^3 + x2^3"])
}

fn ci22() -> FormContext {
    ctx(3, &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3"])
}

fn poly(c: &FormContext, s: &str) -> Polynomial {
    c.dwork().spec().parse(s).unwrap()
}

fn fun(c: &FormContext, s: &str, denom: Vec<u32>) -> Form {
    Form::function(RationalSection::new(poly(c, s), denom))
}

fn mono(c: &FormContext, s: &str) -> Monomial {
    poly(c, s).leading_term().unwrap().0.clone()
}

#[test]
fn quotient_rule() {
    let c = cubic();
    let nv = c.nvars();
    let inv_s = fun(&c, "1", vec![0, 1]);
    let ds = Form::polynomial(c.dwork().potential().clone(), 1).d(&c);
    let expected = ds.mul_section(&RationalSection::new(Polynomial::from_int(nv, -1), vec![0, 2]));
    assert!(inv_s.d(&c).equals(&expected, &c));

    let f = fun(&c, "x0", vec![0, 0]).wedge(&Form::dq(nv, 1, 2), &c);
    assert!(f.d(&c).equals(&Form::basis(nv, 1, vec![1, 2]), &c));
    assert!(f.d(&c).d(&c).is_zero());
}

#[test]
fn wedge_signs() {
    let c = cubic();
    let nv = c.nvars();
    let (dx0, dx1) = (Form::dq(nv, 1, 1), Form::dq(nv, 1, 2));
    assert!(dx0.wedge(&dx1, &c).equals(&dx1.wedge(&dx0, &c).neg(), &c));
    assert!(dx0.wedge(&dx0, &c).is_zero());
    let a = dx1.mul_poly(&poly(&c, "x0"));
    let b = dx0.mul_poly(&poly(&c, "x1"));
    let expected = Form::basis(nv, 1, vec![1, 2]).mul_poly(&poly(&c, "-x0*x1"));
    assert!(a.wedge(&b, &c).equals(&expected, &c));
}

#[test]
fn interior_product() {
    let c = cubic();
    let nv = c.nvars();
    let v: Vec<Polynomial> = ["y1", "x0^2", "x1 + x2", "3"].iter().map(|s| poly(&c, s)).collect();
    let f = Form::basis(nv, 1, vec![1, 2]);
    let expected = Form::dq(nv, 1, 2)
        .mul_poly(&v[1])
        .sub(&Form::dq(nv, 1, 1).mul_poly(&v[2]), &c);
    assert!(f.contract(&v, &c).equals(&expected, &c));
    let g = Form::basis(nv, 1, vec![0, 1, 3]);
    assert!(g.contract(&v, &c).contract(&v, &c).is_zero());
}

#[test]
fn euler_forms() {
    let c = ctx(1, &["x0^2 + x1^2"]);
    let nv = c.nvars();
    let expected = Form::dq(nv, 1, 2)
        .mul_poly(&poly(&c, "x0"))
        .sub(&Form::dq(nv, 1, 1).mul_poly(&poly(&c, "x1")), &c);
    assert!(omega_x(&c).equals(&expected, &c));
    assert!(omega_y(&c).equals(&Form::polynomial(poly(&c, "-y1"), 1), &c));

    let c = ci22();
    assert_eq!(omega_x(&c).bidegree(&c), Some(crate::qpoly::Bidegree::new(4, 0)));
    assert_eq!(omega_y(&c).bidegree(&c), Some(crate::qpoly::Bidegree::new(-4, 2)));
}

#[test]
fn named_forms_at_low_weight() {
    let c = cubic();
    let one = Monomial::one(c.nvars());
    let alpha = alpha_form(&rat(1), &one, &c).unwrap();
    let expected = omega_x(&c).mul_section(&RationalSection::new(poly(&c, "-y1"), vec![0, 1]));
    assert!(alpha.equals(&expected, &c));
    assert_eq!(alpha.bidegree(&c), Some(crate::qpoly::Bidegree::ZERO));

    let beta = beta_form(&rat(1), &one, &c).unwrap();
    let expected = omega_x(&c).mul_section(&RationalSection::new(poly(&c, "-1"), vec![1, 0]));
    assert!(beta.equals(&expected, &c));
    // the printed formula for ω carries (-1)^{|i|+k-1}, so at k = 1, i = 0 it is -β
    assert!(omega_rep(&rat(1), &one, &c).unwrap().equals(&beta.neg(), &c));

    let c = ci22();
    let u = mono(&c, "x0");
    let w = omega_rep(&rat(1), &Monomial::one(c.nvars()), &c);
    assert!(matches!(omega_rep(&rat(1), &u, &c), Err(crate::Error::BidegreeMismatch { .. })));
    let expected = omega_x(&c).mul_section(&RationalSection::new(poly(&c, "-1"), vec![1, 1, 0]));
    assert!(w.unwrap().equals(&expected, &c));

    let v = mono(&c, "y1*x0^2");
    let beta = beta_form(&rat(1), &v, &c).unwrap();
    let expected = omega_x(&c).mul_section(&RationalSection::new(poly(&c, "x0^2"), vec![2, 1, 0]));
    assert!(beta.equals(&expected, &c));
    for f in [&beta, &alpha_form(&rat(1), &v, &c).unwrap(), &omega_rep(&rat(1), &v, &c).unwrap()] {
        assert_eq!(f.bidegree(&c), Some(crate::qpoly::Bidegree::ZERO));
    }
}

#[test]
fn mu_and_rho() {
    let c = cubic();
    let nv = c.nvars();
    let top = Form::basis(nv, 1, (0..nv).collect());
    assert!(mu(&Polynomial::one(nv), &c).equals(&top.neg(), &c));
    let r = rho(&top.mul_poly(&poly(&c, "y1*x0*x1*x2")), &c).unwrap();
    let expected = top.mul_section(&RationalSection::new(poly(&c, "-y1*x0*x1*x2"), vec![0, 2]));
    assert!(r.equals(&expected, &c));
}

#[test]
fn phi_matches_alpha_mod_dx_top() {
    for c in [cubic(), ci22()] {
        let basis = crate::jacring::milnor_basis(c.dwork()).unwrap();
        for v in basis.monomials() {
            let p = Polynomial::monomial(v.clone());
            let alpha = alpha_form(&rat(1), v, &c).unwrap();
            let phi = phi_form(&p, &c).unwrap();
            assert!(phi.sub(&alpha, &c).mod_dx_top().is_zero());
            let left = phi_form_left(&p, &c).unwrap();
            assert!(left.add(&alpha, &c).mod_dx_top().is_zero());
        }
    }
}

#[test]
fn dx_top_truncation() {
    let c = ci22();
    let nv = c.nvars();
    let f = Form::basis(nv, 2, vec![0, 2, 3, 4, 5]);
    assert!(f.mod_dx_top().is_zero());
    let g = omega_x(&c).wedge(&omega_y(&c), &c);
    assert!(g.mod_dx_top().equals(&g, &c));
    let h = f.add(&g, &c).mod_dx_top();
    assert!(h.mod_dx_top().equals(&h, &c));
}

#[test]
fn sigma_pullback() {
    let c = ci22();
    let s = Form::polynomial(c.dwork().potential().clone(), 2);
    assert!(pullback_sigma(&s, &c).equals(&Form::constant(c.nvars(), 2, rat(2)), &c));
    let t = fun(&c, "y1*x0^2 + y1*x1^2 + y1*x2^2 + y1*x3^2", vec![0, 0, 1]);
    assert!(pullback_sigma(&t, &c).equals(&Form::constant(c.nvars(), 2, Rational::new(1.into(), 2.into())), &c));

    for c in [cubic(), ci22()] {
        let k = c.k();
        let basis = crate::jacring::milnor_basis(c.dwork()).unwrap();
        for v in basis.monomials() {
            let (i, _) = split_monomial(v, k);
            let w = omega_rep(&rat(1), v, &c).unwrap();
            let beta = beta_form(&sigma_ratio(&i, k), v, &c).unwrap();
            let pulled = pullback_sigma(&w, &c);
            assert!(pulled.equals(&beta, &c));
            let back = pullback_pr1(&beta, &c).unwrap();
            assert!(pullback_sigma(&back, &c).equals(&beta, &c));
        }
    }
}

#[test]
fn pole_orders() {
    let c = ci22();
    assert_eq!(fun(&c, "x0", vec![1, 1, 0]).pole_order(0, &c), 1);
    let g1x = &c.factor(0).clone() * &poly(&c, "x1");
    assert_eq!(Form::function(RationalSection::new(g1x, vec![2, 0, 0])).pole_order(0, &c), 1);
    assert_eq!(fun(&c, "x0", vec![0, 0, 3]).pole_order(1, &c), 0);
}

#[test]
fn theorem_scalars() {
    assert_eq!(theorem_factor(&[0, 0], 2), rat(-1));
    assert_eq!(theorem_factor(&[1], 1), rat(1));
    assert_eq!(sigma_ratio(&[0, 0], 2), rat(1));
    assert_eq!(sigma_ratio(&[1], 1), rat(-1));
}

#[test]
fn text_serialization() {
    let c = cubic();
    let alpha = alpha_form(&rat(1), &Monomial::one(c.nvars()), &c).unwrap();
    let text = alpha.to_text(&c);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().starts_with("-1 * (y1*x"));
    assert!(text.contains("/ (G1^0*S^1)"));
}
