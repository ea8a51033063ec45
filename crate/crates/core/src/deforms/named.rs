use num_bigint::BigInt;
use num_traits::One;

use super::{Form, FormContext, RationalSection};
use crate::error::{Error, Result};
use crate::qpoly::{Monomial, Polynomial, Rational};

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// `i_1! ⋯ i_k!`.
pub fn multi_factorial(i: &[u32]) -> Rational {
    i.iter().map(|&e| factorial(e)).product()
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn pow_neg_one(e: i64) -> Rational {
    sign(e.rem_euclid(2) == 1)
}

/// `y^i u ↦ (i, u)`; `u` keeps the full variable layout with zero y-exponents.
pub fn split_monomial(v: &Monomial, k: usize) -> (Vec<u32>, Monomial) {
    let e = v.exponents();
    let i = e[..k].to_vec();
    let mut u = e.to_vec();
    for x in u.iter_mut().take(k) {
        *x = 0;
    }
    (i, Monomial::new(u))
}

fn check_critical(v: &Monomial, ctx: &FormContext) -> Result<(Vec<u32>, Monomial)> {
    let spec = ctx.dwork().spec();
    let b = spec.bidegree(v);
    let (i, u) = split_monomial(v, ctx.k());
    let expected = ctx.dwork().critical_charge();
    if b.charge != expected {
        return Err(Error::BidegreeMismatch {
            expected: format!("({}, {})", expected, i.iter().sum::<u32>()),
            found: b.to_string(),
        });
    }
    Ok((i, u))
}

/// `Ω_x = sum_j (-1)^j x_j dx_0 ∧ ⋯ ∧ \hat{dx_j} ∧ ⋯ ∧ dx_n`.
pub fn omega_x(ctx: &FormContext) -> Form {
    euler_form(ctx, ctx.x_indices().collect(), 0)
}

/// `Ω_y = sum_{i=1}^k (-1)^i y_i dy_1 ∧ ⋯ ∧ \hat{dy_i} ∧ ⋯ ∧ dy_k`.
pub fn omega_y(ctx: &FormContext) -> Form {
    euler_form(ctx, (0..ctx.k()).collect(), 1)
}

fn euler_form(ctx: &FormContext, vars: Vec<usize>, first_sign: usize) -> Form {
    let (nv, k) = (ctx.nvars(), ctx.k());
    Form::from_terms(
        nv,
        k,
        vars.iter().enumerate().map(|(pos, &q)| {
            let mut key = vars.clone();
            key.remove(pos);
            let s = RationalSection::polynomial(Polynomial::var(nv, q), k)
                .scale(&sign((pos + first_sign) % 2 == 1));
            (key, s)
        }),
    )
}

/// `c (-1)^{n(k-1)+|i|} (k+|i|-1)! y^i u / S^{k+|i|} Ω_x ∧ Ω_y`.
pub fn alpha_form(c: &Rational, v: &Monomial, ctx: &FormContext) -> Result<Form> {
    let (i, _) = check_critical(v, ctx)?;
    let (n, k) = (ctx.n() as i64, ctx.k() as i64);
    let w: u32 = i.iter().sum();
    let coeff = c * pow_neg_one(n * (k - 1) + w as i64) * factorial(k as u32 + w - 1);
    let mut denom = vec![0; ctx.k() + 1];
    denom[ctx.s_index()] = k as u32 + w;
    let s = RationalSection::new(Polynomial::monomial(v.clone()).scale(&coeff), denom);
    Ok(omega_x(ctx).wedge(&omega_y(ctx), ctx).mul_section(&s))
}

/// `c (-1)^{|i|+1} i! u / (G_1^{i_1+1} ⋯ G_k^{i_k+1}) Ω_x`.
pub fn beta_form(c: &Rational, v: &Monomial, ctx: &FormContext) -> Result<Form> {
    let (i, u) = check_critical(v, ctx)?;
    let w: u32 = i.iter().sum();
    let coeff = c * pow_neg_one(w as i64 + 1) * multi_factorial(&i);
    let mut denom: Vec<u32> = i.iter().map(|e| e + 1).collect();
    denom.push(0);
    let s = RationalSection::new(Polynomial::monomial(u).scale(&coeff), denom);
    Ok(omega_x(ctx).mul_section(&s))
}

/// `c (-1)^{|i|+k-1} ((|i|+k-1)!/(k-1)!) y^i u / (G_1 ⋯ G_k S^{|i|}) Ω_x`.
pub fn omega_rep(c: &Rational, v: &Monomial, ctx: &FormContext) -> Result<Form> {
    let (i, _) = check_critical(v, ctx)?;
    let k = ctx.k() as u32;
    let w: u32 = i.iter().sum();
    let coeff = c * pow_neg_one((w + k - 1) as i64) * factorial(w + k - 1) / factorial(k - 1);
    let mut denom = vec![1; ctx.k()];
    denom.push(w);
    let s = RationalSection::new(Polynomial::monomial(v.clone()).scale(&coeff), denom);
    Ok(omega_x(ctx).mul_section(&s))
}

/// `μ(v) = -v dq_1 ∧ ⋯ ∧ dq_N`.
pub fn mu(v: &Polynomial, ctx: &FormContext) -> Form {
    let (nv, k) = (ctx.nvars(), ctx.k());
    Form::from_terms(
        nv,
        k,
        [((0..nv).collect(), RationalSection::polynomial(-v, k))],
    )
}

/// `ρ(x^u y^v dq_top) = (-1)^{|v|+k-1} (|v|+k-1)! x^u y^v / S^{|v|+k} dq_top`,
/// extended linearly over the monomials of a polynomial top form.
pub fn rho(f: &Form, ctx: &FormContext) -> Result<Form> {
    let (nv, k) = (ctx.nvars(), ctx.k());
    let top: Vec<usize> = (0..nv).collect();
    let mut out = RationalSection::zero(nv, k);
    for (key, s) in f.terms() {
        if key != &top || !s.is_polynomial() {
            return Err(Error::InvalidSpec(
                "rho expects a polynomial top-degree form".to_string(),
            ));
        }
        for (m, c) in s.numerator().terms() {
            let w: u32 = m.exponents()[..k].iter().sum();
            let e = w + k as u32 - 1;
            let coeff = c * pow_neg_one(e as i64) * factorial(e);
            let mut denom = vec![0; k + 1];
            denom[k] = w + k as u32;
            out = out.add(
                &RationalSection::new(Polynomial::term(m.clone(), coeff), denom),
                ctx,
            );
        }
    }
    Ok(Form::from_terms(nv, k, [(top, out)]))
}

/// `sum ch(q_i) q_i ∂/∂q_i`.
pub fn theta_ch_field(ctx: &FormContext) -> Vec<Polynomial> {
    let spec = ctx.dwork().spec();
    let nv = ctx.nvars();
    (0..nv)
        .map(|i| Polynomial::var(nv, i).scale(&Rational::from_integer(spec.var_bidegree(i).charge.into())))
        .collect()
}

/// `sum wt(q_i) q_i ∂/∂q_i`.
pub fn theta_wt_field(ctx: &FormContext) -> Vec<Polynomial> {
    let spec = ctx.dwork().spec();
    let nv = ctx.nvars();
    (0..nv)
        .map(|i| Polynomial::var(nv, i).scale(&Rational::from_integer(spec.var_bidegree(i).weight.into())))
        .collect()
}

/// `θ_wt ∘ θ_ch ∘ ρ ∘ μ`, with contractions read as right interior products.
///
/// With the left interior product of [`Form::contract`] this is
/// `ι_ch(ι_wt(ρ(μ(v))))`; the other nesting differs by a global sign.
pub fn phi_form(v: &Polynomial, ctx: &FormContext) -> Result<Form> {
    let top = rho(&mu(v, ctx), ctx)?;
    Ok(top
        .contract(&theta_wt_field(ctx), ctx)
        .contract(&theta_ch_field(ctx), ctx))
}

/// `ι_wt(ι_ch(ρ(μ(v))))`, the composite read with left interior products.
pub fn phi_form_left(v: &Polynomial, ctx: &FormContext) -> Result<Form> {
    let top = rho(&mu(v, ctx), ctx)?;
    Ok(top
        .contract(&theta_ch_field(ctx), ctx)
        .contract(&theta_wt_field(ctx), ctx))
}

pub fn mod_dx_top(f: &Form) -> Form {
    f.mod_dx_top()
}

/// Image of a section under `y_λ ↦ 1/G_λ`; `S ↦ k`.
fn sigma_section(s: &RationalSection, ctx: &FormContext) -> RationalSection {
    let (nv, k) = (ctx.nvars(), ctx.k());
    let mut out = RationalSection::zero(nv, k);
    for (m, c) in s.numerator().terms() {
        let (a, u) = split_monomial(m, k);
        let mut denom = a;
        denom.push(0);
        out = out.add(&RationalSection::new(Polynomial::term(u, c.clone()), denom), ctx);
    }
    let e = s.denom_exponents();
    let mut g_only = e[..k].to_vec();
    g_only.push(0);
    let s_pow = e[k];
    let kk = Rational::from_integer(BigInt::from(k)).pow(s_pow as i32);
    out.mul(&RationalSection::new(Polynomial::one(nv), g_only))
        .scale(&kk.recip())
}

/// Pullback along the section `(x, y) ↦ (x, 1/G_1, …, 1/G_k)`.
pub fn pullback_sigma(f: &Form, ctx: &FormContext) -> Form {
    let (nv, k) = (ctx.nvars(), ctx.k());
    let images: Vec<Form> = (0..nv)
        .map(|i| {
            if i >= k {
                return Form::dq(nv, k, i);
            }
            // d(1/G) = -dG/G^2
            let g = ctx.factor(i);
            let mut terms = Vec::new();
            for j in ctx.x_indices() {
                let dg = g.derivative(j);
                if dg.is_zero() {
                    continue;
                }
                let mut denom = vec![0; k + 1];
                denom[i] = 2;
                terms.push((vec![j], RationalSection::new(-&dg, denom)));
            }
            Form::from_terms(nv, k, terms)
        })
        .collect();
    let mut out = Form::zero(nv, k);
    for (key, s) in f.terms() {
        let mut term = Form::function(sigma_section(s, ctx));
        for &i in key {
            term = term.wedge(&images[i], ctx);
        }
        out = out.add(&term, ctx);
    }
    out.simplify(ctx)
}

/// Pullback along the projection to the `x`-coordinates.
pub fn pullback_pr1(f: &Form, ctx: &FormContext) -> Result<Form> {
    let k = ctx.k();
    let x_only = f.involves_only(|i| i >= k);
    let s_free = f.terms().values().all(|s| s.denom_exponents()[k] == 0);
    if !x_only || !s_free {
        return Err(Error::InvalidSpec(
            "pr1 pullback expects a form in the x-variables with G-denominators".to_string(),
        ));
    }
    Ok(f.clone())
}

/// `(-1)^k (|i|+k-1)! / (i! (k-1)! k^{|i|})`, the scalar in `σ^*ω = r β`.
pub fn sigma_ratio(i: &[u32], k: usize) -> Rational {
    let w: u32 = i.iter().sum();
    let k32 = k as u32;
    let kk = Rational::from_integer(BigInt::from(k)).pow(w as i32);
    pow_neg_one(k as i64) * factorial(w + k32 - 1) / (multi_factorial(i) * factorial(k32 - 1) * kk)
}

/// `i! (k-1)! k^{|i|} / ((-1)^{|i|+1} (|i|+k-1)!)`, the theorem's scalar.
pub fn theorem_factor(i: &[u32], k: usize) -> Rational {
    let w: u32 = i.iter().sum();
    let k32 = k as u32;
    let kk = Rational::from_integer(BigInt::from(k)).pow(w as i32);
    multi_factorial(i) * factorial(k32 - 1) * kk / (pow_neg_one(w as i64 + 1) * factorial(w + k32 - 1))
}
