use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::Rational;

/// Sparse polynomial over the rationals. Zero coefficients are never stored,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::term(Monomial::var(nvars, index), Rational::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    /// Largest term under graded-lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Polynomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(u, a)| (u.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let lowered = m.lower(index).expect("positive exponent");
            out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let t = lm.quotient_of(m)?;
            let q = c / &lc;
            rem.add_assign_scaled(&divisor.mul_monomial(&t, &Rational::one()), &-q.clone());
            quot.add_term(t, q);
        }
        Some(quot)
    }

    /// Substitutes rational values for every variable.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-embeds in a ring with `extra` additional trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extend(extra), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms whose monomial satisfies `pred`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, pred: F) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn has_negative_leading(&self) -> bool {
        self.leading_term().is_some_and(|(_, c)| c.is_negative())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m, a) in &self.terms {
            for (u, b) in &rhs.terms {
                *acc.entry(m.mul(u)).or_insert_with(Rational::zero) += a * b;
            }
        }
        let mut terms: Vec<(Monomial, Rational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Polynomial {
            nvars: self.nvars,
            terms: terms.into_iter().collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn derivative_of_cube() {
        let x = Polynomial::var(2, 0);
        let d = x.pow(3).derivative(0);
        assert_eq!(d, Polynomial::term(Monomial::new(vec![2, 0]), r(3)));
        assert!(Polynomial::from_int(2, 7).derivative(1).is_zero());
    }

    #[test]
    fn exact_division() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let f = &(&x + &y) * &(&x - &y);
        assert_eq!(f.div_exact(&(&x + &y)), Some(&x - &y));
        assert_eq!((&f + &Polynomial::one(2)).div_exact(&(&x + &y)), None);
    }

    #[test]
    fn evaluate_point() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let f = &(&x * &x) - &y;
        assert_eq!(f.evaluate(&[r(3), r(4)]), r(5));
    }
}
