//! Exact rational polynomials in the bigraded ring `Q[y1..yk, x0..xn]`.
//!
//! Variables are laid out as `q_1 = y1, ..., q_k = yk, q_{k+1} = x0, ..., q_N = xn`
//! (zero-based index `i < k` is `y_{i+1}`, index `k + j` is `x_j`). Each `y_i`
//! carries charge `-d_i` and weight 1, each `x_j` charge 1 and weight 0.

mod monomial;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::Polynomial;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Prints `3`, `-1/2`, ...
pub fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(Rational::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub charge: i64,
    pub weight: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree {
        charge: 0,
        weight: 0,
    };

    pub fn new(charge: i64, weight: i64) -> Self {
        Bidegree { charge, weight }
    }

    pub fn scale(self, e: i64) -> Bidegree {
        Bidegree::new(self.charge * e, self.weight * e)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.charge + o.charge, self.weight + o.weight)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.charge - o.charge, self.weight - o.weight)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ch {}, wt {})", self.charge, self.weight)
    }
}

/// Variable layout: how many `y`s and `x`s, and what they are called.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vars {
    pub n: usize,
    pub k: usize,
}

impl Vars {
    pub fn new(n: usize, k: usize) -> Self {
        Vars { n, k }
    }

    /// `N = n + k + 1`.
    pub fn count(&self) -> usize {
        self.n + self.k + 1
    }

    pub fn y(&self, i: usize) -> usize {
        debug_assert!(i < self.k);
        i
    }

    pub fn x(&self, j: usize) -> usize {
        debug_assert!(j <= self.n);
        self.k + j
    }

    pub fn is_y(&self, index: usize) -> bool {
        index < self.k
    }

    pub fn name(&self, index: usize) -> String {
        if index < self.k {
            format!("y{}", index + 1)
        } else {
            format!("x{}", index - self.k)
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        let (head, tail) = name.split_at(1);
        let num: usize = tail.parse().ok()?;
        if tail.len() > 1 && tail.starts_with('0') {
            return None;
        }
        match head {
            "y" if num >= 1 && num <= self.k => Some(num - 1),
            "x" if num <= self.n => Some(self.k + num),
            _ => None,
        }
    }

    /// The index range of the x-variables.
    pub fn x_range(&self) -> std::ops::Range<usize> {
        self.k..self.count()
    }
}

/// Ambient data: `n`, the generators `G_1..G_k` and their degrees.
#[derive(Clone, Debug)]
pub struct RingSpec {
    vars: Vars,
    degrees: Vec<u32>,
    generators: Vec<Polynomial>,
}

impl RingSpec {
    /// Validates that each generator is a homogeneous x-only polynomial.
    /// Zero generators are accepted here and rejected by the smoothness gate.
    pub fn new(n: usize, generators: Vec<Polynomial>) -> Result<Self> {
        let k = generators.len();
        if k == 0 {
            return Err(Error::InvalidSpec("at least one polynomial is required".into()));
        }
        if k > n {
            return Err(Error::InvalidSpec(format!(
                "k = {k} polynomials exceed projective dimension n = {n}"
            )));
        }
        let vars = Vars::new(n, k);
        let mut degrees = Vec::with_capacity(k);
        for (i, g) in generators.iter().enumerate() {
            if g.nvars() != vars.count() {
                return Err(Error::InvalidSpec(format!("G{} has the wrong arity", i + 1)));
            }
            if g.monomials().any(|m| m.exponents()[..k].iter().any(|&e| e > 0)) {
                return Err(Error::InvalidSpec(format!("G{} involves y-variables", i + 1)));
            }
            let d = g.total_degree().unwrap_or(0);
            if g.monomials().any(|m| m.degree() != d) {
                return Err(Error::InvalidSpec(format!("G{} is not homogeneous", i + 1)));
            }
            if !g.is_zero() && d == 0 {
                return Err(Error::InvalidSpec(format!("G{} is a nonzero constant", i + 1)));
            }
            degrees.push(d);
        }
        Ok(RingSpec {
            vars,
            degrees,
            generators,
        })
    }

    pub fn from_strings<S: AsRef<str>>(n: usize, polys: &[S]) -> Result<Self> {
        let vars = Vars::new(n, polys.len());
        let gens = polys
            .iter()
            .map(|s| parse_poly(s.as_ref(), &vars))
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(n, gens)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn n(&self) -> usize {
        self.vars.n
    }

    pub fn k(&self) -> usize {
        self.vars.k
    }

    pub fn nvars(&self) -> usize {
        self.vars.count()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// `c_G = sum d_i - (n + 1)`.
    pub fn critical_charge(&self) -> i64 {
        self.degrees.iter().map(|&d| d as i64).sum::<i64>() - (self.vars.n as i64 + 1)
    }

    pub fn var_bidegree(&self, index: usize) -> Bidegree {
        if self.vars.is_y(index) {
            Bidegree::new(-(self.degrees[index] as i64), 1)
        } else {
            Bidegree::new(1, 0)
        }
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        bidegree(m, self)
    }

    /// The common bidegree of all terms, if there is one (`None` for zero too).
    pub fn poly_bidegree(&self, p: &Polynomial) -> Option<Bidegree> {
        let mut it = p.monomials().map(|m| self.bidegree(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Splits a polynomial into its weight components (ascending weight).
    pub fn weight_components(&self, p: &Polynomial) -> Vec<(i64, Polynomial)> {
        let mut out: std::collections::BTreeMap<i64, Polynomial> = Default::default();
        for (m, c) in p.terms() {
            let w = self.bidegree(m).weight;
            out.entry(w)
                .or_insert_with(|| Polynomial::zero(p.nvars()))
                .add_term(m.clone(), c.clone());
        }
        out.into_iter().collect()
    }

    pub fn print(&self, p: &Polynomial) -> String {
        print_poly(p, &self.vars)
    }

    pub fn print_monomial(&self, m: &Monomial) -> String {
        print_monomial(m, &self.vars)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse_poly(text, &self.vars)
    }
}

/// `charge = sum x-exponents - sum d_i * (y_i exponent)`, `weight = sum y-exponents`.
pub fn bidegree(m: &Monomial, spec: &RingSpec) -> Bidegree {
    let k = spec.k();
    let e = m.exponents();
    let ydeg: i64 = e[..k].iter().map(|&v| v as i64).sum();
    let ycharge: i64 = e[..k]
        .iter()
        .zip(spec.degrees())
        .map(|(&v, &d)| v as i64 * d as i64)
        .sum();
    let xdeg: i64 = e[k..].iter().map(|&v| v as i64).sum();
    Bidegree::new(xdeg - ycharge, ydeg)
}

/// All monomials of bidegree `b`, in descending graded-lex order.
pub fn enumerate_monomials(b: Bidegree, spec: &RingSpec) -> Vec<Monomial> {
    let mut out = Vec::new();
    if b.weight < 0 {
        return out;
    }
    let k = spec.k();
    let nx = spec.n() + 1;
    for yexp in compositions(b.weight as u32, k) {
        let ycharge: i64 = yexp
            .iter()
            .zip(spec.degrees())
            .map(|(&v, &d)| v as i64 * d as i64)
            .sum();
        let xdeg = b.charge + ycharge;
        if xdeg < 0 {
            continue;
        }
        for xexp in compositions(xdeg as u32, nx) {
            let mut e = yexp.clone();
            e.extend(xexp);
            out.push(Monomial::new(e));
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// All exponent vectors of length `parts` summing to `total`.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=total).rev() {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

pub fn print_monomial(m: &Monomial, vars: &Vars) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars.name(i)
            } else {
                format!("{}^{}", vars.name(i), e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Canonical form: descending graded-lex, explicit `*` and `^`.
pub fn print_poly(p: &Polynomial, vars: &Vars) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            s.push_str(&format_rational(&abs));
        } else {
            if !abs.is_one() {
                s.push_str(&format_rational(&abs));
                s.push('*');
            }
            s.push_str(&print_monomial(m, vars));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> RingSpec {
        RingSpec::from_strings(2, &["x0^3 + x1^3 + x2^3"]).unwrap()
    }

    #[test]
    fn bidegree_of_variables() {
        let spec = cubic();
        assert_eq!(spec.var_bidegree(0), Bidegree::new(-3, 1));
        assert_eq!(spec.var_bidegree(1), Bidegree::new(1, 0));
        let conic = RingSpec::from_strings(2, &["x0^2 + x1^2 + x2^2"]).unwrap();
        let m = Monomial::new(vec![1, 2, 0, 0]);
        assert_eq!(conic.bidegree(&m), Bidegree::new(0, 1));
    }

    #[test]
    fn enumerate_small_slices() {
        let spec = cubic();
        assert_eq!(
            enumerate_monomials(Bidegree::new(0, 0), &spec),
            vec![Monomial::one(4)]
        );
        let w1 = enumerate_monomials(Bidegree::new(0, 1), &spec);
        assert_eq!(w1.len(), 10);
        assert!(w1.iter().all(|m| m.exponents()[0] == 1 && m.degree() == 4));
        assert!(w1.windows(2).all(|p| p[0] > p[1]));
        assert!(enumerate_monomials(Bidegree::new(-1, 0), &spec).is_empty());
    }

    #[test]
    fn spec_validation() {
        assert!(RingSpec::from_strings(2, &["x0^2 + x1"]).is_err());
        assert!(RingSpec::from_strings(1, &["x0", "x1"]).is_err());
        let spec = RingSpec::from_strings(3, &["x0^3 + x1^3 + x2^3 + x3^3", "x0*x1 + x2*x3"]).unwrap();
        assert_eq!(spec.degrees(), &[3, 2]);
        assert_eq!(spec.critical_charge(), 1);
        assert_eq!(spec.nvars(), 6);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 0).len(), 1);
        assert!(compositions(1, 0).is_empty());
    }

    #[test]
    fn printing_is_canonical() {
        let spec = cubic();
        let p = spec.parse("-x2 + 3/2*x0^2*y1 - 1 + x0*x1").unwrap();
        assert_eq!(spec.print(&p), "3/2*y1*x0^2 + x0*x1 - x2 - 1");
    }
}
