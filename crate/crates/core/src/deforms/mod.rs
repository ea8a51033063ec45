//! Rational differential forms on `A` localized at `G_1, …, G_k, S`.
//!
//! Every denominator is a monomial in the fixed factor list
//! `[G_1, …, G_k, S]`, so sums, products and derivatives never leave the
//! representation and no rational-function gcd is needed.

mod form;
mod named;
mod section;

use std::collections::HashMap;
use std::sync::Mutex;

pub use form::{d, wedge, contract, Form, FormJson, TermJson};
pub use named::*;
pub use section::RationalSection;

use crate::jacring::DworkData;
use crate::qpoly::{Bidegree, Polynomial};

/// The factor list together with a cache of its powers.
pub struct FormContext {
    dwork: DworkData,
    factors: Vec<Polynomial>,
    powers: Mutex<HashMap<(usize, u32), Polynomial>>,
}

impl FormContext {
    pub fn new(dwork: &DworkData) -> Self {
        let mut factors: Vec<Polynomial> = dwork.spec().generators().to_vec();
        factors.push(dwork.potential().clone());
        FormContext {
            dwork: dwork.clone(),
            factors,
            powers: Mutex::new(HashMap::new()),
        }
    }

    pub fn dwork(&self) -> &DworkData {
        &self.dwork
    }

    pub fn k(&self) -> usize {
        self.dwork.k()
    }

    pub fn n(&self) -> usize {
        self.dwork.n()
    }

    pub fn nvars(&self) -> usize {
        self.dwork.nvars()
    }

    /// Index of `S` in the factor list.
    pub fn s_index(&self) -> usize {
        self.k()
    }

    pub fn factor(&self, j: usize) -> &Polynomial {
        &self.factors[j]
    }

    pub fn factor_bidegree(&self, j: usize) -> Bidegree {
        if j == self.k() {
            Bidegree::new(0, 1)
        } else {
            Bidegree::new(self.dwork.spec().degrees()[j] as i64, 0)
        }
    }

    pub fn factor_pow(&self, j: usize, e: u32) -> Polynomial {
        match e {
            0 => return Polynomial::one(self.nvars()),
            1 => return self.factors[j].clone(),
            _ => {}
        }
        if let Some(p) = self.powers.lock().unwrap().get(&(j, e)) {
            return p.clone();
        }
        let p = &self.factor_pow(j, e - 1) * &self.factors[j];
        self.powers.lock().unwrap().insert((j, e), p.clone());
        p
    }

    /// `prod_j F_j^{e_j}`.
    pub fn denominator(&self, exps: &[u32]) -> Polynomial {
        let mut out = Polynomial::one(self.nvars());
        for (j, &e) in exps.iter().enumerate() {
            if e > 0 {
                out = &out * &self.factor_pow(j, e);
            }
        }
        out
    }

    pub fn factor_name(&self, j: usize) -> String {
        if j == self.k() {
            "S".to_string()
        } else {
            format!("G{}", j + 1)
        }
    }

    /// Variable indices of `x_0, …, x_n`.
    pub fn x_indices(&self) -> std::ops::Range<usize> {
        self.k()..self.nvars()
    }
}

#[cfg(test)]
mod tests;
