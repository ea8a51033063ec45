//! Buchberger's algorithm over the rationals (graded reverse lex) and the
//! smoothness certificate for complete intersections.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qpoly::{Monomial, Polynomial, Rational, RingSpec};

/// Terms sorted by descending grevlex.
#[derive(Clone, Debug, PartialEq)]
struct GPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl GPoly {
    fn from_poly(p: &Polynomial) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp_grevlex(&a.0));
        GPoly { terms }
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(nvars, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_constant(&self) -> bool {
        !self.terms.is_empty() && self.terms[0].0.is_one()
    }

    fn monic(mut self) -> Self {
        if let Some(lc) = self.terms.first().map(|t| t.1.clone()) {
            let inv = lc.recip();
            for t in &mut self.terms {
                t.1 *= &inv;
            }
        }
        self
    }

    /// `self - c * m * other`.
    fn sub_scaled(&self, c: &Rational, m: &Monomial, other: &GPoly) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = other.terms.iter().map(|(u, a)| (u.mul(m), a * c));
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => x.0.cmp_grevlex(&y.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => {
                    let (u, v) = b.next().unwrap();
                    out.push((u, -v));
                }
                Ordering::Equal => {
                    let (u, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let v = x - y;
                    if !v.is_zero() {
                        out.push((u, v));
                    }
                }
            }
        }
        GPoly { terms: out }
    }
}

fn s_poly(f: &GPoly, g: &GPoly) -> GPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l).unwrap();
    let mg = g.lm().quotient_of(&l).unwrap();
    let cf = f.terms[0].1.recip();
    let cg = g.terms[0].1.recip();
    let a = GPoly { terms: vec![] }.sub_scaled(&-cf, &mf, f);
    a.sub_scaled(&cg, &mg, g)
}

/// Full reduction of every term of `f` by `basis`.
fn reduce(f: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut rem = Vec::new();
    let mut cur = f.clone();
    while let Some((m, c)) = cur.terms.first().cloned() {
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m).unwrap();
                let coef = &c / &g.terms[0].1;
                cur = cur.sub_scaled(&coef, &q, g);
            }
            None => {
                rem.push((m, c));
                cur.terms.remove(0);
            }
        }
    }
    GPoly { terms: rem }
}

/// Reduced Groebner basis for graded reverse lex.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    nvars: usize,
    basis: Vec<GPoly>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> Vec<Polynomial> {
        self.basis.iter().map(|g| g.to_poly(self.nvars)).collect()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// The ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(GPoly::is_constant)
    }
}

pub fn buchberger(gens: &[Polynomial]) -> GroebnerBasis {
    let nvars = gens.first().map_or(0, Polynomial::nvars);
    let mut basis: Vec<GPoly> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let add = |g: GPoly, basis: &mut Vec<GPoly>, pending: &mut BTreeSet<(usize, usize)>| {
        let j = basis.len();
        basis.push(g);
        for i in 0..j {
            pending.insert((i, j));
        }
    };

    for g in gens {
        let g = reduce(&GPoly::from_poly(g), &basis);
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return unit(nvars);
        }
        add(g.monic(), &mut basis, &mut pending);
    }

    while let Some(&(i, j)) = pending.iter().min_by(|a, b| {
        let la = basis[a.0].lm().lcm(basis[a.1].lm());
        let lb = basis[b.0].lm().lcm(basis[b.1].lm());
        la.cmp_grevlex(&lb).then(a.cmp(b))
    }) {
        pending.remove(&(i, j));
        let (fi, fj) = (&basis[i], &basis[j]);
        if fi.lm().is_coprime(fj.lm()) {
            continue;
        }
        let l = fi.lm().lcm(fj.lm());
        let chain = (0..basis.len()).any(|m| {
            m != i
                && m != j
                && basis[m].lm().divides(&l)
                && !pending.contains(&(i.min(m), i.max(m)))
                && !pending.contains(&(j.min(m), j.max(m)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_poly(fi, fj), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return unit(nvars);
        }
        add(r.monic(), &mut basis, &mut pending);
    }

    // minimalize, then interreduce
    let mut minimal: Vec<GPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = GPoly {
            terms: vec![minimal[i].terms[0].clone()],
        };
        let tail = GPoly {
            terms: minimal[i].terms[1..].to_vec(),
        };
        let mut g = reduce(&tail, &others);
        g.terms.insert(0, lead.terms[0].clone());
        reduced.push(g.monic());
    }
    reduced.sort_by(|a, b| b.lm().cmp_grevlex(a.lm()));
    GroebnerBasis {
        nvars,
        basis: reduced,
    }
}

fn unit(nvars: usize) -> GroebnerBasis {
    GroebnerBasis {
        nvars,
        basis: vec![GPoly::from_poly(&Polynomial::one(nvars))],
    }
}

pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    reduce(&GPoly::from_poly(p), &gb.basis).to_poly(p.nvars())
}

/// `f` lies in the radical of `<gens>` iff `1 in <gens, 1 - t f>` with a fresh `t`.
pub fn radical_membership(f: &Polynomial, gens: &[Polynomial]) -> bool {
    let nvars = f.nvars();
    let t = Polynomial::var(nvars + 1, nvars);
    let one = Polynomial::one(nvars + 1);
    let mut ext: Vec<Polynomial> = gens.iter().map(|g| g.extend_vars(1)).collect();
    ext.push(&one - &(&t * &f.extend_vars(1)));
    buchberger(&ext).is_unit()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// First x-variable not in the radical of the singular-locus ideal.
    pub witness: Option<String>,
    pub ideal_generators: usize,
}

/// Determinant by permutation expansion (k is tiny).
fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    let nvars = m[0][0].nvars();
    let mut acc = Polynomial::zero(nvars);
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut term = Polynomial::one(nvars);
        for (r, &c) in p.iter().enumerate() {
            term = &term * &m[r][c];
            if term.is_zero() {
                return;
            }
        }
        let inversions = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .filter(|&(a, b)| p[a] > p[b])
            .count();
        if inversions % 2 == 1 {
            term = -term;
        }
        acc = &acc + &term;
    });
    acc
}

fn permute(p: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if start == p.len() {
        f(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute(p, start + 1, f);
        p.swap(start, i);
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// The generators `G_i` plus every maximal minor of the x-Jacobian matrix.
pub fn singular_locus_ideal(spec: &RingSpec) -> Vec<Polynomial> {
    let vars = spec.vars();
    let jac: Vec<Vec<Polynomial>> = spec
        .generators()
        .iter()
        .map(|g| vars.x_range().map(|j| g.derivative(j)).collect())
        .collect();
    let mut ideal: Vec<Polynomial> = spec.generators().to_vec();
    for cols in subsets(spec.n() + 1, spec.k()) {
        let minor: Vec<Vec<Polynomial>> = jac
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let det = determinant(&minor);
        if !det.is_zero() {
            ideal.push(det);
        }
    }
    ideal
}

/// Smooth iff every `x_j` lies in the radical of the singular-locus ideal, i.e.
/// the affine cone is smooth away from the origin.
pub fn certify_smooth_ci(spec: &RingSpec) -> Result<SmoothnessReport> {
    if let Some(i) = spec.generators().iter().position(Polynomial::is_zero) {
        return Err(Error::DegenerateInput(i + 1));
    }
    let ideal = singular_locus_ideal(spec);
    let vars = spec.vars();
    let witness = vars
        .x_range()
        .find(|&j| !radical_membership(&Polynomial::var(spec.nvars(), j), &ideal))
        .map(|j| vars.name(j));
    Ok(SmoothnessReport {
        smooth: witness.is_none(),
        witness,
        ideal_generators: ideal.len(),
    })
}

impl GroebnerBasis {
    pub fn contains(&self, p: &Polynomial) -> bool {
        normal_form(p, self).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{parse_poly, Vars};

    fn v() -> Vars {
        Vars::new(2, 1)
    }

    fn p(s: &str) -> Polynomial {
        parse_poly(s, &v()).unwrap()
    }

    fn gb(gens: &[&str]) -> Vec<Polynomial> {
        buchberger(&gens.iter().map(|s| p(s)).collect::<Vec<_>>()).generators()
    }

    #[test]
    fn already_reduced() {
        let g = gb(&["x0^2", "x1"]);
        assert_eq!(g.len(), 2);
        assert!(g.contains(&p("x0^2")) && g.contains(&p("x1")));
    }

    #[test]
    fn linear_interreduction() {
        let g = gb(&["x0", "x0 + x1"]);
        assert_eq!(g.len(), 2);
        assert!(g.contains(&p("x0")) && g.contains(&p("x1")));
    }

    #[test]
    fn unit_ideal() {
        assert_eq!(gb(&["x0*x1 - 1", "x0^2"]), vec![p("1")]);
    }

    #[test]
    fn normal_forms() {
        let b = buchberger(&[p("x0")]);
        assert!(normal_form(&p("x0^2"), &b).is_zero());
        assert_eq!(normal_form(&p("x1"), &b), p("x1"));
        let b = buchberger(&[p("x0^2 - x1")]);
        assert_eq!(normal_form(&p("x0^2 + x1"), &b), p("2*x1"));
    }

    #[test]
    fn radicals() {
        assert!(radical_membership(&p("x0"), &[p("x0^2")]));
        assert!(!radical_membership(&p("x1"), &[p("x0^2")]));
        assert!(radical_membership(&p("x0 + x1"), &[p("x0^2"), p("x1^2")]));
    }

    #[test]
    fn smoothness_examples() {
        let cubic = RingSpec::from_strings(2, &["x0^3 + x1^3 + x2^3"]).unwrap();
        assert!(certify_smooth_ci(&cubic).unwrap().smooth);
        let cusp = RingSpec::from_strings(2, &["x0^3 - x1^2*x2"]).unwrap();
        let r = certify_smooth_ci(&cusp).unwrap();
        assert!(!r.smooth);
        assert_eq!(r.witness.as_deref(), Some("x2"));
        let degenerate = RingSpec::from_strings(2, &["x0^2", "x0*x1"]).unwrap();
        assert!(!certify_smooth_ci(&degenerate).unwrap().smooth);
        let zero = RingSpec::from_strings(2, &["0"]).unwrap();
        assert!(matches!(certify_smooth_ci(&zero), Err(Error::DegenerateInput(1))));
    }
}
