//! Verification suites and the numbered acceptance criteria, shared by the
//! `cido verify` / `cido accept` commands and the `acceptance` test target.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cechdr::{homotopy_holds, random_cochain, random_form, verify_comparison_with, ComparisonReport};
use crate::deforms::{
    alpha_form, beta_form, omega_rep, phi_form, pullback_pr1, split_monomial, theorem_factor, FormContext,
};
use crate::error::Result;
use crate::groebner::certify_smooth_ci;
use crate::hodge::primitive_middle_dim;
use crate::jacring::{build_dwork, kernel_test_monomials, milnor_basis, DworkData, JacobianBasis, Reducer};
use crate::qpoly::{format_rational, Bidegree, Monomial, Polynomial, Rational, RingSpec};

pub fn fermat_cubic() -> RingSpec {
    RingSpec::from_strings(2, &["x0^3 + x1^3 + x2^3"]).expect("valid")
}

pub fn fermat_quintic() -> RingSpec {
    RingSpec::from_strings(4, &["x0^5 + x1^5 + x2^5 + x3^5 + x4^5"]).expect("valid")
}

/// A smooth intersection of two quadrics in `P^3` (an elliptic curve).
pub fn quadric_pair() -> RingSpec {
    RingSpec::from_strings(3, &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3"]).expect("valid")
}

/// Three quadrics in `P^4`, used where `k = 3` is needed.
pub fn quadric_triple() -> RingSpec {
    RingSpec::from_strings(
        4,
        &[
            "x0^2 + x1^2 + x2^2 + x3^2 + x4^2",
            "x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2 + 5*x4^2",
            "x0^2 + 4*x1^2 + 9*x2^2 + 16*x3^2 + 25*x4^2",
        ],
    )
    .expect("valid")
}

/// Outcome of a family of exact checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &str) -> Self {
        SuiteOutcome {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(label());
        }
    }
}

/// `reduce(D_i(a)) = 0` for every `i` and every admissible `a` with
/// `deg a <= c_G + 2 max d + 2`.
pub fn kernel_suite(dwork: &DworkData, basis: &JacobianBasis) -> Result<SuiteOutcome> {
    let spec = dwork.spec();
    let maxd = spec.degrees().iter().copied().max().unwrap_or(1) as i64;
    let bound = (dwork.critical_charge() + 2 * maxd + 2).max(0) as u32;
    let reducer = Reducer::new(dwork, basis);
    let mut jobs = Vec::new();
    for i in 0..dwork.nvars() {
        for a in kernel_test_monomials(dwork, i, bound) {
            jobs.push((i, a));
        }
    }
    let results: Vec<Result<bool>> = jobs
        .par_iter()
        .map(|(i, a)| {
            let v = dwork.twisted_derivative(*i, &Polynomial::monomial(a.clone()));
            Ok(reducer.reduce(&v)?.is_zero())
        })
        .collect();
    let mut out = SuiteOutcome::new("kernel");
    for ((i, a), r) in jobs.iter().zip(results) {
        let ok = r?;
        out.record(ok, || format!("D_{}({})", spec.vars().name(*i), spec.print_monomial(a)));
    }
    Ok(out)
}

/// `mod_dx_top(φ(v) - α(v)) = 0` on every basis monomial.
pub fn phi_suite(ctx: &FormContext, basis: &JacobianBasis) -> Result<SuiteOutcome> {
    let spec = ctx.dwork().spec();
    let one = Rational::from_integer(1.into());
    let mut out = SuiteOutcome::new("phi");
    for v in basis.monomials() {
        let phi = phi_form(&Polynomial::monomial(v.clone()), ctx)?;
        let alpha = alpha_form(&one, v, ctx)?;
        out.record(phi.sub(&alpha, ctx).mod_dx_top().is_zero(), || spec.print_monomial(v));
    }
    Ok(out)
}

/// `φ(v) = α(v)` without discarding `dx`-top terms, per basis monomial.
pub fn phi_exact(ctx: &FormContext, basis: &JacobianBasis) -> Result<Vec<(String, bool)>> {
    let spec = ctx.dwork().spec();
    let one = Rational::from_integer(1.into());
    basis
        .monomials()
        .map(|v| {
            let phi = phi_form(&Polynomial::monomial(v.clone()), ctx)?;
            Ok((spec.print_monomial(v), phi.equals(&alpha_form(&one, v, ctx)?, ctx)))
        })
        .collect()
}

/// `(d_↑ τ + τ d_↑) c = c` on seeded random cochains with pole order at most 1.
pub fn homotopy_suite(ctx: &FormContext, seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let k = ctx.k() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<_> = (0..cases)
        .map(|_| {
            let q = rng.gen_range(0..k);
            let p = rng.gen_range(0..=2);
            random_cochain(&mut rng, q, p, ctx)
        })
        .collect();
    let results: Vec<Result<bool>> = inputs.par_iter().map(|c| homotopy_holds(c, ctx)).collect();
    let mut out = SuiteOutcome::new(&format!("homotopy k={k}"));
    for (j, r) in results.into_iter().enumerate() {
        let ok = r?;
        out.record(ok, || format!("case {j}"));
    }
    Ok(out)
}

/// One comparison report per basis monomial, in basis order.
pub fn comparison_suite(ctx: &FormContext, basis: &JacobianBasis, twist: bool) -> Result<Vec<ComparisonReport>> {
    let monos: Vec<&Monomial> = basis.monomials().collect();
    monos
        .par_iter()
        .map(|v| verify_comparison_with(v, ctx, twist).map(|(r, _)| r))
        .collect()
}

/// `d^2 = 0`, Leibniz, `ι_V` antiderivation and `ι_V^2 = 0` on seeded random forms.
pub fn calculus_suite(ctx: &FormContext, seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = ctx.nvars();
    let inputs: Vec<_> = (0..cases)
        .map(|_| {
            let p = rng.gen_range(0..=2);
            let f = random_form(&mut rng, p, ctx);
            let pg = rng.gen_range(0..=2);
            let g = random_form(&mut rng, pg, ctx);
            let field: Vec<Polynomial> = (0..nv)
                .map(|_| {
                    let mut e = vec![0u32; nv];
                    e[rng.gen_range(0..nv)] += rng.gen_range(0..=1);
                    let c: i64 = rng.gen_range(-3..=3);
                    Polynomial::term(Monomial::new(e), Rational::from_integer(c.into()))
                })
                .collect();
            (p, f, g, field)
        })
        .collect();
    let results: Vec<Vec<&'static str>> = inputs
        .par_iter()
        .map(|(p, f, g, field)| {
            let mut bad = Vec::new();
            if !f.d(ctx).d(ctx).is_zero() {
                bad.push("d^2");
            }
            let sign = |h: crate::deforms::Form| if p % 2 == 1 { h.neg() } else { h };
            let lhs = f.wedge(g, ctx).d(ctx);
            let rhs = f.d(ctx).wedge(g, ctx).add(&sign(f.wedge(&g.d(ctx), ctx)), ctx);
            if !lhs.equals(&rhs, ctx) {
                bad.push("leibniz");
            }
            let lhs = f.wedge(g, ctx).contract(field, ctx);
            let rhs = f
                .contract(field, ctx)
                .wedge(g, ctx)
                .add(&sign(f.wedge(&g.contract(field, ctx), ctx)), ctx);
            if !lhs.equals(&rhs, ctx) {
                bad.push("contraction antiderivation");
            }
            if !f.contract(field, ctx).contract(field, ctx).is_zero() {
                bad.push("contraction squared");
            }
            bad
        })
        .collect();
    let mut out = SuiteOutcome::new("calculus");
    for (j, bad) in results.into_iter().enumerate() {
        out.record(bad.is_empty(), || format!("case {j}: {}", bad.join(", ")));
    }
    out
}

/// Bidegree `(0, 0)` of α, `pr_1^* β`, ω and φ on every basis monomial.
pub fn bidegree_suite(ctx: &FormContext, basis: &JacobianBasis) -> Result<SuiteOutcome> {
    let spec = ctx.dwork().spec();
    let one = Rational::from_integer(1.into());
    let mut out = SuiteOutcome::new("bidegree");
    for v in basis.monomials() {
        let forms = [
            ("alpha", alpha_form(&one, v, ctx)?),
            ("beta", pullback_pr1(&beta_form(&one, v, ctx)?, ctx)?),
            ("omega", omega_rep(&one, v, ctx)?),
            ("phi", phi_form(&Polynomial::monomial(v.clone()), ctx)?),
        ];
        for (name, f) in forms {
            out.record(f.bidegree(ctx) == Some(Bidegree::ZERO), || {
                format!("{name}({})", spec.print_monomial(v))
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: Option<u64>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let limit = match self.limit_ms {
            Some(l) => format!("{} ms / limit {} ms", self.elapsed_ms, l),
            None => format!("{} ms", self.elapsed_ms),
        };
        write!(
            f,
            "{} criterion {}: {} [{}] {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            limit,
            self.detail
        )
    }
}

struct Variety {
    dwork: DworkData,
    basis: JacobianBasis,
    ctx: FormContext,
}

fn prepare(spec: &RingSpec) -> Result<Variety> {
    let dwork = build_dwork(spec);
    let basis = milnor_basis(&dwork)?;
    let ctx = FormContext::new(&dwork);
    Ok(Variety { dwork, basis, ctx })
}

fn finish(id: u32, title: &str, limit_s: Option<u64>, start: Instant, body: Result<(bool, String)>) -> CriterionResult {
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let limit_ms = limit_s.map(|s| s * 1000);
    let (ok, detail) = match body {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = limit_ms.is_none_or(|l| elapsed_ms < l);
    let detail = if ok && !in_time {
        format!("{detail}; over time limit")
    } else {
        detail
    };
    CriterionResult {
        id,
        title: title.to_string(),
        pass: ok && in_time,
        detail,
        elapsed_ms,
        limit_ms,
    }
}

fn dims_criterion(spec: &RingSpec, dims: &[usize], oracle: i64, names: Option<&[&str]>) -> Result<(bool, String)> {
    let smooth = certify_smooth_ci(spec)?.smooth;
    let v = prepare(spec)?;
    let got = v.basis.weight_dims();
    let betti = primitive_middle_dim(spec)?;
    let mut ok = smooth && got == dims && betti.primitive_middle == oracle && v.basis.total_dim() as i64 == oracle;
    let mut detail = format!(
        "smooth={smooth} weight dims {got:?} total {} oracle chi={} primitive={}",
        v.basis.total_dim(),
        betti.euler,
        betti.primitive_middle
    );
    if let Some(names) = names {
        let printed: Vec<String> = v.basis.monomials().map(|m| spec.print_monomial(m)).collect();
        ok &= printed == names;
        detail.push_str(&format!(" basis {printed:?}"));
    }
    Ok((ok, detail))
}

pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let body = dims_criterion(&fermat_cubic(), &[1, 1], 2, Some(&["1", "y1*x0*x1*x2"]));
    finish(1, "Fermat cubic curve basis and Betti oracle", Some(1), start, body)
}

pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let body = dims_criterion(&fermat_quintic(), &[1, 101, 101, 1], 204, None).map(|(ok, d)| {
        let chi = primitive_middle_dim(&fermat_quintic()).map(|b| b.euler).unwrap_or(0);
        (ok && chi == -200, d)
    });
    finish(2, "Fermat quintic threefold basis and Betti oracle", Some(60), start, body)
}

pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let spec = quadric_pair();
    let body = (|| {
        let v = prepare(&spec)?;
        let betti = primitive_middle_dim(&spec)?;
        let smooth = certify_smooth_ci(&spec)?.smooth;
        let ok = smooth && v.basis.total_dim() == 2 && betti.euler == 0 && betti.primitive_middle == 2;
        Ok((
            ok,
            format!(
                "smooth={smooth} weight dims {:?} total {} oracle chi={} primitive={}",
                v.basis.weight_dims(),
                v.basis.total_dim(),
                betti.euler,
                betti.primitive_middle
            ),
        ))
    })();
    finish(3, "(2,2) complete-intersection curve in P^3", Some(30), start, body)
}

pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let body = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for spec in [fermat_cubic(), quadric_pair()] {
            let v = prepare(&spec)?;
            for r in comparison_suite(&v.ctx, &v.basis, false)? {
                let m = v.basis.monomials().find(|m| spec.print_monomial(m) == r.monomial).expect("basis monomial");
                let (i, _) = split_monomial(m, spec.k());
                let closed = format_rational(&theorem_factor(&i, spec.k()));
                let pass = r.all_pass() && r.factor == closed;
                ok &= pass;
                parts.push(format!(
                    "k={} {}: a={} b={} c={} factor={}",
                    spec.k(),
                    r.monomial,
                    r.check_a,
                    r.check_b,
                    r.check_c,
                    r.factor
                ));
            }
        }
        Ok((ok, parts.join("; ")))
    })();
    finish(4, "comparison identities (a), (b), (c) and theorem factor", Some(120), start, body)
}

pub fn criterion_5(seed: u64, cases: usize) -> CriterionResult {
    let start = Instant::now();
    let cases = cases.max(50);
    let body = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for spec in [quadric_pair(), quadric_triple()] {
            let ctx = FormContext::new(&build_dwork(&spec));
            let o = homotopy_suite(&ctx, seed, cases)?;
            ok &= o.pass();
            parts.push(format!("k={}: {}/{} identities hold", spec.k(), o.cases - o.failures.len(), o.cases));
        }
        Ok((ok, parts.join("; ")))
    })();
    finish(5, "homotopy identity d_up tau + tau d_up = id", Some(60), start, body)
}

pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let body = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for spec in [fermat_cubic(), quadric_pair()] {
            let v = prepare(&spec)?;
            let o = kernel_suite(&v.dwork, &v.basis)?;
            ok &= o.pass() && o.cases > 0;
            parts.push(format!("k={}: {} twisted derivatives, {} nonzero", spec.k(), o.cases, o.failures.len()));
        }
        Ok((ok, parts.join("; ")))
    })();
    finish(6, "twisted derivatives reduce to zero", Some(120), start, body)
}

pub fn criterion_7() -> CriterionResult {
    let start = Instant::now();
    let body = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for spec in [fermat_cubic(), quadric_pair()] {
            let v = prepare(&spec)?;
            let o = phi_suite(&v.ctx, &v.basis)?;
            ok &= o.pass();
            parts.push(format!("k={}: {}/{} agree", spec.k(), o.cases - o.failures.len(), o.cases));
        }
        Ok((ok, parts.join("; ")))
    })();
    finish(7, "phi_S agrees with alpha modulo dx-top", Some(60), start, body)
}

pub fn criterion_8() -> CriterionResult {
    let start = Instant::now();
    let body = (|| {
        let cubic = certify_smooth_ci(&fermat_cubic())?;
        let cusp = certify_smooth_ci(&RingSpec::from_strings(2, &["x0^3 - x1^2*x2"])?)?;
        let pair = certify_smooth_ci(&RingSpec::from_strings(2, &["x0^2", "x0*x1"])?)?;
        let ok = cubic.smooth && !cusp.smooth && cusp.witness.is_some() && !pair.smooth;
        Ok((
            ok,
            format!(
                "cubic smooth={}, cusp smooth={} witness={:?}, {{x0^2, x0*x1}} smooth={}",
                cubic.smooth, cusp.smooth, cusp.witness, pair.smooth
            ),
        ))
    })();
    finish(8, "smoothness gate", Some(10), start, body)
}

pub fn criterion_9(seed: u64, cases: usize) -> CriterionResult {
    let start = Instant::now();
    let cases = cases.max(200);
    let body = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for spec in [fermat_cubic(), quadric_pair()] {
            let v = prepare(&spec)?;
            let calc = calculus_suite(&v.ctx, seed, cases);
            let bideg = bidegree_suite(&v.ctx, &v.basis)?;
            ok &= calc.pass() && bideg.pass();
            parts.push(format!(
                "k={}: calculus {}/{} cases, bidegree {}/{} forms",
                spec.k(),
                calc.cases - calc.failures.len(),
                calc.cases,
                bideg.cases - bideg.failures.len(),
                bideg.cases
            ));
        }
        Ok((ok, parts.join("; ")))
    })();
    finish(9, "calculus identities and bidegree (0,0)", None, start, body)
}

pub fn run_all(seed: u64, cases: usize) -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(seed, cases),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(seed, cases),
    ]
}
