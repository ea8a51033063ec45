use num_traits::{One, Zero};

use super::FormContext;
use crate::qpoly::{Bidegree, Polynomial, Rational};

/// `numerator / (G_1^{e_1} ⋯ G_k^{e_k} S^{e_{k+1}})`.
#[derive(Clone, Debug)]
pub struct RationalSection {
    numerator: Polynomial,
    denom: Vec<u32>,
}

impl RationalSection {
    pub fn new(numerator: Polynomial, denom: Vec<u32>) -> Self {
        if numerator.is_zero() {
            let len = denom.len();
            return RationalSection {
                numerator,
                denom: vec![0; len],
            };
        }
        RationalSection { numerator, denom }
    }

    pub fn polynomial(p: Polynomial, k: usize) -> Self {
        RationalSection::new(p, vec![0; k + 1])
    }

    pub fn constant(nvars: usize, k: usize, c: Rational) -> Self {
        RationalSection::polynomial(Polynomial::constant(nvars, c), k)
    }

    pub fn zero(nvars: usize, k: usize) -> Self {
        RationalSection::polynomial(Polynomial::zero(nvars), k)
    }

    pub fn one(nvars: usize, k: usize) -> Self {
        RationalSection::constant(nvars, k, Rational::one())
    }

    /// `1 / F_j^e`.
    pub fn inverse_factor(nvars: usize, k: usize, j: usize, e: u32) -> Self {
        let mut denom = vec![0; k + 1];
        denom[j] = e;
        RationalSection::new(Polynomial::one(nvars), denom)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denom_exponents(&self) -> &[u32] {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.iter().all(|&e| e == 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalSection::new(self.numerator.scale(c), self.denom.clone())
    }

    pub fn neg(&self) -> Self {
        RationalSection::new(-&self.numerator, self.denom.clone())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        RationalSection::new(&self.numerator * p, self.denom.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let denom = self
            .denom
            .iter()
            .zip(&other.denom)
            .map(|(a, b)| a + b)
            .collect();
        RationalSection::new(&self.numerator * &other.numerator, denom)
    }

    /// Sum over the common denominator with exponentwise maxima.
    pub fn add(&self, other: &Self, ctx: &FormContext) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let denom: Vec<u32> = self
            .denom
            .iter()
            .zip(&other.denom)
            .map(|(a, b)| *a.max(b))
            .collect();
        let lifted = |s: &Self| {
            let extra: Vec<u32> = denom.iter().zip(&s.denom).map(|(e, a)| e - a).collect();
            lift(&s.numerator, &extra, ctx)
        };
        RationalSection::new(&lifted(self) + &lifted(other), denom)
    }

    pub fn sub(&self, other: &Self, ctx: &FormContext) -> Self {
        self.add(&other.neg(), ctx)
    }

    /// `p/D == p'/D'` iff `p D' == p' D`; the common factor `gcd(D, D')`
    /// is cancelled from both sides before multiplying.
    pub fn equals(&self, other: &Self, ctx: &FormContext) -> bool {
        let extra_self: Vec<u32> = self
            .denom
            .iter()
            .zip(&other.denom)
            .map(|(a, b)| b.saturating_sub(*a))
            .collect();
        let extra_other: Vec<u32> = self
            .denom
            .iter()
            .zip(&other.denom)
            .map(|(a, b)| a.saturating_sub(*b))
            .collect();
        let lhs = lift(&self.numerator, &extra_self, ctx);
        let rhs = lift(&other.numerator, &extra_other, ctx);
        lhs == rhs
    }

    /// Cancels factor powers that divide the numerator.
    pub fn simplify(&self, ctx: &FormContext) -> Self {
        let mut num = self.numerator.clone();
        let mut denom = self.denom.clone();
        if num.is_zero() {
            return RationalSection::new(num, denom);
        }
        for (j, e) in denom.iter_mut().enumerate() {
            while *e > 0 {
                match num.div_exact(ctx.factor(j)) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        RationalSection::new(num, denom)
    }

    /// Exponent of `G_λ` left after cancelling against the numerator.
    pub fn pole_order(&self, lambda: usize, ctx: &FormContext) -> u32 {
        let mut e = self.denom[lambda];
        let mut num = self.numerator.clone();
        while e > 0 {
            match num.div_exact(ctx.factor(lambda)) {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        e
    }

    /// `∂/∂q_i` by the quotient rule, over `D` times each factor that
    /// both occurs in `D` and depends on `q_i`.
    pub fn derivative(&self, i: usize, ctx: &FormContext) -> Self {
        let moving: Vec<(usize, u32, Polynomial)> = self
            .denom
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| (j, e, ctx.factor(j).derivative(i)))
            .filter(|(_, _, df)| !df.is_zero())
            .collect();
        let dn = self.numerator.derivative(i);
        if moving.is_empty() {
            return RationalSection::new(dn, self.denom.clone());
        }
        let mut denom = self.denom.clone();
        let mut numerator = dn;
        for (j, e, df) in &moving {
            // a/D + b/F_j  ->  (a F_j + b)/(D F_j), with b = -e N ∂F_j / D
            numerator = &numerator * ctx.factor(*j);
            let b = (&self.numerator * df).scale(&Rational::from_integer((-(*e as i64)).into()));
            let others: Vec<u32> = moving
                .iter()
                .map(|(l, _, _)| *l)
                .filter(|l| l < j)
                .fold(vec![0; denom.len()], |mut acc, l| {
                    acc[l] = 1;
                    acc
                });
            numerator = &numerator + &lift(&b, &others, ctx);
            denom[*j] += 1;
        }
        RationalSection::new(numerator, denom)
    }

    /// Bidegree of the quotient; `None` for zero or an inhomogeneous numerator.
    pub fn bidegree(&self, ctx: &FormContext) -> Option<Bidegree> {
        let mut b = ctx.dwork().spec().poly_bidegree(&self.numerator)?;
        for (j, &e) in self.denom.iter().enumerate() {
            b = b - ctx.factor_bidegree(j).scale(e as i64);
        }
        Some(b)
    }

    /// Leading coefficient of the numerator, used to normalize printing.
    pub fn leading_coefficient(&self) -> Rational {
        self.numerator
            .leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// `p * prod_j F_j^{extra_j}`.
fn lift(p: &Polynomial, extra: &[u32], ctx: &FormContext) -> Polynomial {
    if extra.iter().all(|&e| e == 0) {
        return p.clone();
    }
    p * &ctx.denominator(extra)
}
