use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{FormContext, RationalSection};
use crate::qpoly::{format_rational, Bidegree, Polynomial, Rational};

/// `sum_I f_I dq_I` over strictly increasing index lists `I`.
#[derive(Clone, Debug)]
pub struct Form {
    nvars: usize,
    k: usize,
    terms: BTreeMap<Vec<usize>, RationalSection>,
}

/// Sign of moving the wedge `dq_I ∧ dq_J` into increasing order, with the
/// merged index list; `None` if `I` and `J` meet.
fn merge(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((inversions % 2 == 1, out))
}

impl Form {
    pub fn zero(nvars: usize, k: usize) -> Self {
        Form {
            nvars,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(s: RationalSection) -> Self {
        let nvars = s.numerator().nvars();
        let k = s.denom_exponents().len() - 1;
        Form::from_terms(nvars, k, [(Vec::new(), s)])
    }

    pub fn polynomial(p: Polynomial, k: usize) -> Self {
        Form::function(RationalSection::polynomial(p, k))
    }

    /// `dq_i`.
    pub fn dq(nvars: usize, k: usize, i: usize) -> Self {
        Form::from_terms(nvars, k, [(vec![i], RationalSection::one(nvars, k))])
    }

    /// `dq_{i_1} ∧ ⋯ ∧ dq_{i_m}` for increasing indices.
    pub fn basis(nvars: usize, k: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Form::from_terms(nvars, k, [(indices, RationalSection::one(nvars, k))])
    }

    pub fn from_terms<I>(nvars: usize, k: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, RationalSection)>,
    {
        let mut out = Form::zero(nvars, k);
        for (key, s) in terms {
            if !s.is_zero() {
                out.terms.insert(key, s);
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, RationalSection> {
        &self.terms
    }

    pub fn coefficient(&self, key: &[usize]) -> Option<&RationalSection> {
        self.terms.get(key)
    }

    /// Form degree; `None` for the zero form.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Vec::len)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(RationalSection::is_zero)
    }

    fn add_term(&mut self, key: Vec<usize>, s: RationalSection, ctx: &FormContext) {
        if s.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(old) => {
                let sum = old.add(&s, ctx);
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, s);
            }
        }
    }

    pub fn add(&self, other: &Form, ctx: &FormContext) -> Form {
        let mut out = self.clone();
        for (key, s) in &other.terms {
            out.add_term(key.clone(), s.clone(), ctx);
        }
        out
    }

    pub fn sub(&self, other: &Form, ctx: &FormContext) -> Form {
        self.add(&other.neg(), ctx)
    }

    pub fn neg(&self) -> Form {
        self.map_sections(|s| s.neg())
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.nvars, self.k);
        }
        self.map_sections(|s| s.scale(c))
    }

    pub fn mul_section(&self, f: &RationalSection) -> Form {
        self.map_sections(|s| s.mul(f))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Form {
        self.map_sections(|s| s.mul_poly(p))
    }

    fn map_sections<F: Fn(&RationalSection) -> RationalSection>(&self, f: F) -> Form {
        Form::from_terms(
            self.nvars,
            self.k,
            self.terms.iter().map(|(key, s)| (key.clone(), f(s))),
        )
    }

    pub fn wedge(&self, other: &Form, ctx: &FormContext) -> Form {
        let mut out = Form::zero(self.nvars, self.k);
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                if let Some((neg, key)) = merge(a, b) {
                    let p = s.mul(t);
                    out.add_term(key, if neg { p.neg() } else { p }, ctx);
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self, ctx: &FormContext) -> Form {
        let mut out = Form::zero(self.nvars, self.k);
        for (key, s) in &self.terms {
            for i in 0..self.nvars {
                if key.contains(&i) {
                    continue;
                }
                let ds = s.derivative(i, ctx);
                if ds.is_zero() {
                    continue;
                }
                let pos = key.iter().filter(|&&j| j < i).count();
                let mut new_key = key.clone();
                new_key.insert(pos, i);
                out.add_term(new_key, if pos % 2 == 1 { ds.neg() } else { ds }, ctx);
            }
        }
        out
    }

    /// Interior product with `sum_i field[i] ∂/∂q_i`, contracting the
    /// leftmost slot first.
    pub fn contract(&self, field: &[Polynomial], ctx: &FormContext) -> Form {
        assert_eq!(field.len(), self.nvars, "vector field arity");
        let mut out = Form::zero(self.nvars, self.k);
        for (key, s) in &self.terms {
            for (r, &i) in key.iter().enumerate() {
                if field[i].is_zero() {
                    continue;
                }
                let mut new_key = key.clone();
                new_key.remove(r);
                let t = s.mul_poly(&field[i]);
                out.add_term(new_key, if r % 2 == 1 { t.neg() } else { t }, ctx);
            }
        }
        out
    }

    /// Drops every term containing all of `dx_0, …, dx_n`.
    pub fn mod_dx_top(&self) -> Form {
        let xs: Vec<usize> = (self.k..self.nvars).collect();
        Form::from_terms(
            self.nvars,
            self.k,
            self.terms
                .iter()
                .filter(|(key, _)| !xs.iter().all(|x| key.contains(x)))
                .map(|(key, s)| (key.clone(), s.clone())),
        )
    }

    pub fn simplify(&self, ctx: &FormContext) -> Form {
        self.map_sections(|s| s.simplify(ctx))
    }

    /// Exact equality, coefficientwise by cross-multiplication.
    pub fn equals(&self, other: &Form, ctx: &FormContext) -> bool {
        let keys: std::collections::BTreeSet<&Vec<usize>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|key| match (self.terms.get(key), other.terms.get(key)) {
            (Some(a), Some(b)) => a.equals(b, ctx),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }

    /// Common bidegree of all terms, counting `dq_i` with the bidegree of `q_i`.
    pub fn bidegree(&self, ctx: &FormContext) -> Option<Bidegree> {
        let spec = ctx.dwork().spec();
        let mut out = None;
        for (key, s) in &self.terms {
            let mut b = s.bidegree(ctx)?;
            for &i in key {
                b = b + spec.var_bidegree(i);
            }
            match out {
                None => out = Some(b),
                Some(prev) if prev != b => return None,
                _ => {}
            }
        }
        out
    }

    /// Largest remaining `G_λ` exponent over all terms.
    pub fn pole_order(&self, lambda: usize, ctx: &FormContext) -> u32 {
        self.terms
            .values()
            .map(|s| s.pole_order(lambda, ctx))
            .max()
            .unwrap_or(0)
    }

    /// Only the variables listed in `vars` occur, in coefficients or differentials.
    pub fn involves_only(&self, allowed: impl Fn(usize) -> bool) -> bool {
        self.terms.iter().all(|(key, s)| {
            key.iter().all(|&i| allowed(i))
                && s.numerator()
                    .monomials()
                    .all(|m| m.exponents().iter().enumerate().all(|(i, &e)| e == 0 || allowed(i)))
        })
    }

    fn normalized_terms(&self, ctx: &FormContext) -> Vec<(Vec<usize>, Rational, RationalSection)> {
        self.simplify(ctx)
            .terms
            .into_iter()
            .map(|(key, s)| {
                let c = s.leading_coefficient();
                let monic = s.scale(&c.recip());
                (key, c, monic)
            })
            .collect()
    }

    fn wedge_name(key: &[usize], ctx: &FormContext) -> Vec<String> {
        let vars = ctx.dwork().spec().vars();
        key.iter().map(|&i| format!("d{}", vars.name(i))).collect()
    }

    fn denominator_text(s: &RationalSection, ctx: &FormContext) -> String {
        s.denom_exponents()
            .iter()
            .enumerate()
            .map(|(j, e)| format!("{}^{}", ctx.factor_name(j), e))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// One line per term, `coeff * (num) / (G1^a*…*S^b) dq_i^dq_j`, after
    /// cancellation and with monic numerators.
    pub fn to_text(&self, ctx: &FormContext) -> String {
        let spec = ctx.dwork().spec();
        let terms = self.normalized_terms(ctx);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::with_capacity(terms.len());
        for (key, c, s) in terms {
            let mut line = format!(
                "{} * ({}) / ({})",
                format_rational(&c),
                spec.print(s.numerator()),
                Self::denominator_text(&s, ctx)
            );
            if !key.is_empty() {
                line.push(' ');
                line.push_str(&Self::wedge_name(&key, ctx).join("^"));
            }
            lines.push(line);
        }
        lines.join("\n")
    }

    pub fn to_json(&self, ctx: &FormContext) -> FormJson {
        let spec = ctx.dwork().spec();
        let terms = self
            .normalized_terms(ctx)
            .into_iter()
            .map(|(key, c, s)| TermJson {
                differentials: Self::wedge_name(&key, ctx),
                coefficient: format_rational(&c),
                numerator: spec.print(s.numerator()),
                denominator: s
                    .denom_exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| (ctx.factor_name(j), e))
                    .collect(),
            })
            .collect();
        FormJson {
            degree: self.degree().unwrap_or(0),
            terms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub differentials: Vec<String>,
    pub coefficient: String,
    pub numerator: String,
    pub denominator: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

pub fn d(f: &Form, ctx: &FormContext) -> Form {
    f.d(ctx)
}

pub fn wedge(a: &Form, b: &Form, ctx: &FormContext) -> Form {
    a.wedge(b, ctx)
}

pub fn contract(f: &Form, field: &[Polynomial], ctx: &FormContext) -> Form {
    f.contract(field, ctx)
}

impl Form {
    /// The constant 0-form `c`.
    pub fn constant(nvars: usize, k: usize, c: Rational) -> Form {
        Form::function(RationalSection::constant(nvars, k, c))
    }

    pub fn one(nvars: usize, k: usize) -> Form {
        Form::constant(nvars, k, Rational::one())
    }
}
