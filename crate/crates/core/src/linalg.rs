//! Exact linear algebra over the rationals inside a finite monomial slice.
//!
//! Columns are always ordered by descending graded-lex, so the pivot of a row
//! is its largest monomial and the non-pivot columns are the standard
//! monomials of the quotient.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qpoly::{Monomial, Polynomial, Rational};

/// Dense matrix whose columns are labelled by slice monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatrix {
    pub columns: Vec<Monomial>,
    pub rows: Vec<Vec<Rational>>,
}

impl SliceMatrix {
    pub fn new(columns: Vec<Monomial>, rows: Vec<Vec<Rational>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        SliceMatrix { columns, rows }
    }

    /// Coordinates of `polys` with respect to `columns`.
    pub fn from_polys(columns: Vec<Monomial>, polys: &[Polynomial]) -> Result<Self> {
        let index: HashMap<&Monomial, usize> =
            columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::with_capacity(polys.len());
        for p in polys {
            let mut row = vec![Rational::zero(); columns.len()];
            for (m, c) in p.terms() {
                let &i = index.get(m).ok_or_else(|| Error::SupportViolation {
                    monomial: format!("{m}"),
                })?;
                row[i] = c.clone();
            }
            rows.push(row);
        }
        Ok(SliceMatrix { columns, rows })
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).1.len()
    }
}

/// Reduced row-echelon form; zero rows are dropped.
pub fn row_reduce(m: &SliceMatrix) -> (SliceMatrix, Vec<usize>) {
    let mut rows = m.rows.clone();
    let ncols = m.columns.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (
        SliceMatrix {
            columns: m.columns.clone(),
            rows,
        },
        pivots,
    )
}

type SparseRow = Vec<(usize, Rational)>;

/// `a - f * b` on sorted sparse rows.
fn axpy(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn combo_axpy(a: &mut BTreeMap<usize, Rational>, f: &Rational, b: &BTreeMap<usize, Rational>) {
    for (&k, v) in b {
        let e = a.entry(k).or_insert_with(Rational::zero);
        *e -= f * v;
        if e.is_zero() {
            a.remove(&k);
        }
    }
}

/// Incremental sparse row echelon form over a fixed column set.
///
/// Each pivot row optionally remembers which combination of the inserted
/// rows produced it, which turns membership tests into explicit solutions.
#[derive(Clone, Debug)]
pub struct SpanEchelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_of: HashMap<usize, usize>,
    combos: Option<Vec<BTreeMap<usize, Rational>>>,
    inserted: usize,
}

impl SpanEchelon {
    pub fn new(ncols: usize, track_combinations: bool) -> Self {
        SpanEchelon {
            ncols,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
            combos: track_combinations.then(Vec::new),
            inserted: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot_of.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Adds a row (sorted by column, no zeros). Returns whether it was independent.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let mut combo = BTreeMap::new();
        combo.insert(id, Rational::one());
        while let Some((lead, f)) = row.first().cloned() {
            match self.pivot_of.get(&lead) {
                Some(&r) => {
                    row = axpy(&row, &f, &self.rows[r]);
                    if let Some(combos) = &self.combos {
                        combo_axpy(&mut combo, &f, &combos[r]);
                    }
                }
                None => {
                    let inv = f.recip();
                    for e in row.iter_mut() {
                        e.1 *= &inv;
                    }
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    if let Some(combos) = &mut self.combos {
                        for v in combo.values_mut() {
                            *v *= &inv;
                        }
                        combos.push(combo);
                    }
                    return true;
                }
            }
        }
        false
    }

    /// Eliminates every pivot column from `target`.
    ///
    /// Returns the remainder (supported on non-pivot columns) and, when
    /// combinations are tracked, coefficients `c` over the inserted rows with
    /// `target = remainder + sum c_j row_j`. Dependent rows get coefficient 0.
    pub fn reduce(&self, target: &SparseRow) -> (SparseRow, Vec<Rational>) {
        let mut t: BTreeMap<usize, Rational> = target.iter().cloned().collect();
        let mut coeffs = BTreeMap::new();
        let mut cursor = 0;
        loop {
            let next = t
                .range(cursor..)
                .find(|(c, _)| self.pivot_of.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, f)) = next else { break };
            let r = self.pivot_of[&col];
            for (c, v) in &self.rows[r] {
                let e = t.entry(*c).or_insert_with(Rational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    t.remove(c);
                }
            }
            if let Some(combos) = &self.combos {
                for (&j, v) in &combos[r] {
                    let e = coeffs.entry(j).or_insert_with(Rational::zero);
                    *e += &f * v;
                }
            }
            cursor = col + 1;
        }
        let mut dense = vec![Rational::zero(); if self.combos.is_some() { self.inserted } else { 0 }];
        for (j, v) in coeffs {
            dense[j] = v;
        }
        (t.into_iter().collect(), dense)
    }
}

/// Column lookup for a slice in descending graded-lex order.
#[derive(Clone, Debug)]
pub struct SliceIndex {
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl SliceIndex {
    pub fn new(columns: Vec<Monomial>) -> Self {
        let index = columns
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        SliceIndex { columns, index }
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn to_row(&self, p: &Polynomial) -> Result<SparseRow> {
        let mut row = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let i = self.position(m).ok_or_else(|| Error::SupportViolation {
                monomial: format!("{m}"),
            })?;
            row.push((i, c.clone()));
        }
        row.sort_unstable_by_key(|e| e.0);
        Ok(row)
    }

    pub fn to_poly(&self, nvars: usize, row: &SparseRow) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            row.iter().map(|(i, c)| (self.columns[*i].clone(), c.clone())),
        )
    }
}

/// Standard monomials of `span(slice) / span(spanning)`.
pub fn quotient_basis(slice: &[Monomial], spanning: &[Polynomial]) -> Result<Vec<Monomial>> {
    let mut cols = slice.to_vec();
    cols.sort_unstable_by(|a, b| b.cmp(a));
    let idx = SliceIndex::new(cols);
    let mut ech = SpanEchelon::new(idx.len(), false);
    for p in spanning {
        ech.insert(idx.to_row(p)?);
    }
    Ok(idx
        .columns()
        .iter()
        .enumerate()
        .filter(|(i, _)| !ech.is_pivot(*i))
        .map(|(_, m)| m.clone())
        .collect())
}

/// Coefficients `c` with `target = sum c_i spanning_i`, free variables zeroed.
pub fn solve_membership(target: &Polynomial, spanning: &[Polynomial]) -> Option<Vec<Rational>> {
    let mut cols: Vec<Monomial> = target
        .monomials()
        .chain(spanning.iter().flat_map(|p| p.monomials()))
        .cloned()
        .collect();
    cols.sort_unstable_by(|a, b| b.cmp(a));
    cols.dedup();
    let idx = SliceIndex::new(cols);
    let mut ech = SpanEchelon::new(idx.len(), true);
    for p in spanning {
        ech.insert(idx.to_row(p).expect("column set covers the support"));
    }
    let (rem, coeffs) = ech.reduce(&idx.to_row(target).expect("covered"));
    rem.is_empty().then_some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{parse_poly, rat, Vars};

    fn m(rows: &[&[i64]]) -> SliceMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        SliceMatrix::new(
            (0..ncols).map(|i| Monomial::var(ncols.max(1), i)).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_one() {
        let (red, piv) = row_reduce(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(piv, vec![0]);
        assert_eq!(red.rows, vec![vec![rat(1), rat(2)]]);
    }

    #[test]
    fn identity_and_zero() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (red, piv) = row_reduce(&id);
        assert_eq!(red, id);
        assert_eq!(piv, vec![0, 1, 2]);
        let (z, piv) = row_reduce(&m(&[&[0, 0], &[0, 0]]));
        assert!(piv.is_empty());
        assert!(z.rows.is_empty());
    }

    fn xy() -> Vars {
        // two x-variables; k=1 gives y1 as an unused leading variable
        Vars::new(1, 1)
    }

    fn p(s: &str) -> Polynomial {
        parse_poly(s, &xy()).unwrap()
    }

    #[test]
    fn quotient_of_conic_slice() {
        let slice: Vec<Monomial> = ["x0^2", "x0*x1", "x1^2"]
            .iter()
            .map(|s| p(s).leading_term().unwrap().0.clone())
            .collect();
        let q = quotient_basis(&slice, &[p("x0^2 - x1^2")]).unwrap();
        assert_eq!(q, vec![slice[1].clone(), slice[2].clone()]);
        assert_eq!(quotient_basis(&slice, &[]).unwrap(), slice);
        let all = quotient_basis(&slice, &[p("x0^2"), p("x0*x1 + x1^2"), p("x1^2")]).unwrap();
        assert!(all.is_empty());
        assert!(matches!(
            quotient_basis(&slice, &[p("x0")]),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn membership() {
        assert_eq!(solve_membership(&p("x0^2"), &[p("x0^2")]), Some(vec![rat(1)]));
        assert_eq!(solve_membership(&p("x0^2"), &[p("x1^2")]), None);
        assert_eq!(
            solve_membership(&p("2*x0^2 + x1^2"), &[p("x0^2"), p("x0^2 + x1^2")]),
            Some(vec![rat(1), rat(1)])
        );
        // dependent spanning vectors get zero
        assert_eq!(
            solve_membership(&p("x0^2"), &[p("x0^2"), p("2*x0^2")]),
            Some(vec![rat(1), rat(0)])
        );
    }
}
