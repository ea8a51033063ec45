//! The Dwork potential `S = sum y_l G_l`, the standard-monomial basis of
//! `A_{c_G} / (A_{c_G} ∩ Jac(S))`, and Griffiths–Dwork reduction modulo the
//! twisted Jacobian module `K_G = sum_i (d/dq_i + dS/dq_i) A`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{SliceIndex, SpanEchelon};
use crate::qpoly::{enumerate_monomials, Bidegree, Monomial, Polynomial, Rational, RingSpec};

#[derive(Clone, Debug)]
pub struct DworkData {
    spec: RingSpec,
    potential: Polynomial,
    critical_charge: i64,
    partials: Vec<Polynomial>,
}

impl DworkData {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// `S`.
    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    /// `c_G`.
    pub fn critical_charge(&self) -> i64 {
        self.critical_charge
    }

    /// `dS/dq_i` for every variable, in variable order.
    pub fn partials(&self) -> &[Polynomial] {
        &self.partials
    }

    pub fn nvars(&self) -> usize {
        self.spec.nvars()
    }

    pub fn k(&self) -> usize {
        self.spec.k()
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Bidegree of `dS/dq_i`, which is `(0, 1) - bidegree(q_i)`.
    pub fn partial_bidegree(&self, i: usize) -> Bidegree {
        Bidegree::new(0, 1) - self.spec.var_bidegree(i)
    }

    /// `D_i(a) = da/dq_i + (dS/dq_i) a`.
    pub fn twisted_derivative(&self, i: usize, a: &Polynomial) -> Polynomial {
        &a.derivative(i) + &(&self.partials[i] * a)
    }
}

pub fn build_dwork(spec: &RingSpec) -> DworkData {
    let nv = spec.nvars();
    let vars = spec.vars();
    let mut s = Polynomial::zero(nv);
    for (l, g) in spec.generators().iter().enumerate() {
        s = &s + &(&Polynomial::var(nv, vars.y(l)) * g);
    }
    let partials = (0..nv).map(|i| s.derivative(i)).collect();
    DworkData {
        spec: spec.clone(),
        potential: s,
        critical_charge: spec.critical_charge(),
        partials,
    }
}

/// The products `(dS/dq_i) * m` spanning `Jac(S)` inside one slice, as
/// `(i, m)` pairs, sparsest first.
fn jacobian_generators(dwork: &DworkData, slice: Bidegree) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for i in 0..dwork.nvars() {
        if dwork.partials[i].is_zero() {
            continue;
        }
        let target = slice - dwork.partial_bidegree(i);
        for m in enumerate_monomials(target, dwork.spec()) {
            out.push((i, m));
        }
    }
    out.sort_by_key(|(i, _)| dwork.partials[*i].len());
    out
}

fn span_polys(dwork: &DworkData, gens: &[(usize, Monomial)]) -> Vec<Polynomial> {
    gens.iter()
        .map(|(i, m)| dwork.partials[*i].mul_monomial(m, &Rational::from_integer(1.into())))
        .collect()
}

/// One weight slice `A_{c_G,(w)}` with its Jacobian span in echelon form.
#[derive(Debug)]
struct WeightSlice {
    index: SliceIndex,
    echelon: SpanEchelon,
    generators: Vec<(usize, Monomial)>,
}

impl WeightSlice {
    fn build(dwork: &DworkData, weight: i64, track: bool) -> Result<Self> {
        let b = Bidegree::new(dwork.critical_charge, weight);
        let index = SliceIndex::new(enumerate_monomials(b, dwork.spec()));
        let generators = jacobian_generators(dwork, b);
        let mut echelon = SpanEchelon::new(index.len(), track);
        for p in span_polys(dwork, &generators) {
            echelon.insert(index.to_row(&p)?);
        }
        Ok(WeightSlice {
            index,
            echelon,
            generators,
        })
    }

    fn standard_monomials(&self) -> Vec<Monomial> {
        self.index
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.echelon.is_pivot(*i))
            .map(|(_, m)| m.clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianBasis {
    per_weight: BTreeMap<usize, Vec<Monomial>>,
    total_dim: usize,
}

impl JacobianBasis {
    pub fn from_parts(per_weight: BTreeMap<usize, Vec<Monomial>>) -> Self {
        let total_dim = per_weight.values().map(Vec::len).sum();
        JacobianBasis {
            per_weight,
            total_dim,
        }
    }

    pub fn per_weight(&self) -> &BTreeMap<usize, Vec<Monomial>> {
        &self.per_weight
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Dimensions for weights `0..=max`, including zeros.
    pub fn weight_dims(&self) -> Vec<usize> {
        let max = self.max_weight().unwrap_or(0);
        (0..=max)
            .map(|w| self.per_weight.get(&w).map_or(0, Vec::len))
            .collect()
    }

    /// Largest weight with a nonzero slice.
    pub fn max_weight(&self) -> Option<usize> {
        self.per_weight
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(w, _)| *w)
            .max()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.per_weight.values().flatten()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials().any(|u| u == m)
    }
}

/// Standard monomials of every weight slice of `A_{c_G} / (A_{c_G} ∩ Jac(S))`.
///
/// Weights `0..=n` are computed; weight `n + 1` is probed and must vanish.
pub fn milnor_basis(dwork: &DworkData) -> Result<JacobianBasis> {
    let n = dwork.n();
    let slices: Vec<(usize, Vec<Monomial>)> = (0..=n)
        .into_par_iter()
        .map(|w| Ok((w, WeightSlice::build(dwork, w as i64, false)?.standard_monomials())))
        .collect::<Result<_>>()?;
    let guard = WeightSlice::build(dwork, n as i64 + 1, false)?;
    if !guard.standard_monomials().is_empty() {
        return Err(Error::WeightCapExceeded { weight: n + 1, n });
    }
    Ok(JacobianBasis::from_parts(
        slices.into_iter().filter(|(_, v)| !v.is_empty()).collect(),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep {
    pub weight: i64,
    /// The part of the weight component already in the basis span.
    pub basis_part: Polynomial,
    /// `-sum c_j dm_j/dq_{i_j}` replacing the Jacobian part.
    pub replacement: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult {
    pub coordinates: BTreeMap<Monomial, Rational>,
    pub steps: Vec<ReductionStep>,
}

impl ReductionResult {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_empty()
    }

    pub fn coordinate(&self, m: &Monomial) -> Rational {
        self.coordinates.get(m).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Griffiths–Dwork reducer with per-weight slices built on demand.
pub struct Reducer<'a> {
    dwork: &'a DworkData,
    basis: &'a JacobianBasis,
    slices: Mutex<HashMap<i64, Arc<WeightSlice>>>,
}

impl<'a> Reducer<'a> {
    pub fn new(dwork: &'a DworkData, basis: &'a JacobianBasis) -> Self {
        Reducer {
            dwork,
            basis,
            slices: Mutex::new(HashMap::new()),
        }
    }

    fn slice(&self, weight: i64) -> Result<Arc<WeightSlice>> {
        if let Some(s) = self.slices.lock().unwrap().get(&weight) {
            return Ok(Arc::clone(s));
        }
        let built = WeightSlice::build(self.dwork, weight, true)?;
        let expected = self
            .basis
            .per_weight()
            .get(&(weight as usize))
            .cloned()
            .unwrap_or_default();
        if built.standard_monomials() != expected {
            return Err(Error::InvalidSpec(format!(
                "basis does not match the standard monomials of weight {weight}"
            )));
        }
        let arc = Arc::new(built);
        self.slices
            .lock()
            .unwrap()
            .insert(weight, Arc::clone(&arc));
        Ok(arc)
    }

    /// Coordinates of `v` in the Jacobian basis modulo `K_G`.
    ///
    /// Each round takes the top-weight component `r`, splits off its standard
    /// part, writes the rest as `sum c_j (dS/dq_{i_j}) m_j` and replaces it by
    /// `-sum c_j dm_j/dq_{i_j}`, which is congruent modulo `K_G` and has
    /// weight one less.
    pub fn reduce(&self, v: &Polynomial) -> Result<ReductionResult> {
        let spec = self.dwork.spec();
        for m in v.monomials() {
            let b = spec.bidegree(m);
            if b.charge != self.dwork.critical_charge {
                return Err(Error::BidegreeMismatch {
                    expected: format!("charge {}", self.dwork.critical_charge),
                    found: b.to_string(),
                });
            }
        }
        let nv = self.dwork.nvars();
        let mut coordinates: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut steps = Vec::new();
        let mut cur = v.clone();
        while !cur.is_zero() {
            let mut comps = spec.weight_components(&cur);
            let (w, top) = comps.pop().expect("nonzero");
            let rest = comps
                .into_iter()
                .fold(Polynomial::zero(nv), |acc, (_, p)| &acc + &p);
            let slice = self.slice(w)?;
            let row = slice.index.to_row(&top)?;
            let (rem, coeffs) = slice.echelon.reduce(&row);
            let basis_part = slice.index.to_poly(nv, &rem);
            for (m, c) in basis_part.terms() {
                let e = coordinates.entry(m.clone()).or_insert_with(Rational::zero);
                *e += c;
                if e.is_zero() {
                    coordinates.remove(m);
                }
            }
            let mut replacement = Polynomial::zero(nv);
            for (c, (i, m)) in coeffs.iter().zip(&slice.generators) {
                if c.is_zero() {
                    continue;
                }
                replacement.add_assign_scaled(&Polynomial::monomial(m.clone()).derivative(*i), &-c.clone());
            }
            // sanity: the split must be exact
            let mut check = basis_part.clone();
            for (c, (i, m)) in coeffs.iter().zip(&slice.generators) {
                check.add_assign_scaled(&self.dwork.partials[*i].mul_monomial(m, c), &Rational::from_integer(1.into()));
            }
            if check != top {
                return Err(Error::DecompositionFailure(spec.print(&(&top - &basis_part))));
            }
            steps.push(ReductionStep {
                weight: w,
                basis_part,
                replacement: replacement.clone(),
            });
            cur = &rest + &replacement;
        }
        Ok(ReductionResult { coordinates, steps })
    }
}

pub fn griffiths_dwork_reduce(
    v: &Polynomial,
    dwork: &DworkData,
    basis: &JacobianBasis,
) -> Result<ReductionResult> {
    Reducer::new(dwork, basis).reduce(v)
}

/// Every monomial `a` for which `D_i(a)` lands in `A_{c_G}`, with
/// `deg a <= max_degree`.
pub fn kernel_test_monomials(dwork: &DworkData, i: usize, max_degree: u32) -> Vec<Monomial> {
    let spec = dwork.spec();
    let charge = dwork.critical_charge + spec.var_bidegree(i).charge;
    let mut out = Vec::new();
    // total degree grows with the weight, so the loop is finite
    for w in 0..=max_degree as i64 {
        let slice = enumerate_monomials(Bidegree::new(charge, w), spec);
        let min_deg = slice.iter().map(Monomial::degree).min();
        if let Some(d) = min_deg {
            if d > max_degree && w > 0 {
                break;
            }
        }
        out.extend(slice.into_iter().filter(|m| m.degree() <= max_degree));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, ratio};

    fn cubic() -> DworkData {
        build_dwork(&RingSpec::from_strings(2, &["x0^3 + x1^3 + x2^3"]).unwrap())
    }

    #[test]
    fn critical_charges() {
        let q = RingSpec::from_strings(4, &["x0^5 + x1^5 + x2^5 + x3^5 + x4^5"]).unwrap();
        assert_eq!(build_dwork(&q).critical_charge(), 0);
        let ci = RingSpec::from_strings(
            3,
            &["x0^3 + x1^3 + x2^3 + x3^3", "x0^3 - x1^3 + 2*x2^3 - 2*x3^3"],
        )
        .unwrap();
        let d = build_dwork(&ci);
        assert_eq!(d.critical_charge(), 2);
        assert_eq!(&d.partials()[1], &ci.generators()[1]);
        let y1 = Polynomial::var(6, 0);
        let y2 = Polynomial::var(6, 1);
        let s = &(&y1 * &ci.generators()[0]) + &(&y2 * &ci.generators()[1]);
        assert_eq!(d.potential(), &s);
    }

    #[test]
    fn fermat_cubic_basis() {
        let d = cubic();
        let b = milnor_basis(&d).unwrap();
        assert_eq!(b.total_dim(), 2);
        assert_eq!(b.weight_dims(), vec![1, 1]);
        let spec = d.spec();
        assert_eq!(spec.print_monomial(&b.per_weight()[&0][0]), "1");
        assert_eq!(spec.print_monomial(&b.per_weight()[&1][0]), "y1*x0*x1*x2");
    }

    #[test]
    fn conic_has_no_primitive_cohomology() {
        let d = build_dwork(&RingSpec::from_strings(2, &["x0^2 + x1^2 + x2^2"]).unwrap());
        assert_eq!(d.critical_charge(), -1);
        assert_eq!(milnor_basis(&d).unwrap().total_dim(), 0);
    }

    #[test]
    fn reduction_examples() {
        let d = cubic();
        let b = milnor_basis(&d).unwrap();
        let spec = d.spec();
        let u = spec.parse("y1*x0*x1*x2").unwrap();
        let r = griffiths_dwork_reduce(&u, &d, &b).unwrap();
        assert_eq!(r.coordinates.len(), 1);
        assert_eq!(r.coordinate(u.leading_term().unwrap().0), rat(1));

        let v = spec.parse("y1*x0^3").unwrap();
        let r = griffiths_dwork_reduce(&v, &d, &b).unwrap();
        assert_eq!(r.coordinates.len(), 1);
        assert_eq!(r.coordinate(&Monomial::one(4)), ratio(-1, 3));

        let bad = spec.parse("x0").unwrap();
        assert!(matches!(
            griffiths_dwork_reduce(&bad, &d, &b),
            Err(Error::BidegreeMismatch { .. })
        ));
    }

    #[test]
    fn twisted_derivatives_reduce_to_zero() {
        let d = cubic();
        let b = milnor_basis(&d).unwrap();
        let red = Reducer::new(&d, &b);
        for i in 0..d.nvars() {
            for a in kernel_test_monomials(&d, i, 8) {
                let v = d.twisted_derivative(i, &Polynomial::monomial(a));
                assert!(red.reduce(&v).unwrap().is_zero());
            }
        }
    }
}
