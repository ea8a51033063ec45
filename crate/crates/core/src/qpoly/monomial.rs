use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `q^u = q_1^{u_1} ... q_N^{u_N}`.
///
/// The `Ord` impl is graded-lexicographic with `q_1 > q_2 > ... > q_N`, which
/// with the standard variable layout means `y1 > ... > yk > x0 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Lowers exponent `index` by one; `None` if it is already zero.
    pub fn lower(&self, index: usize) -> Option<Monomial> {
        if self.0[index] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[index] -= 1;
        Some(Monomial(e))
    }

    pub fn raise(&self, index: usize) -> Monomial {
        let mut e = self.0.clone();
        e[index] += 1;
        Monomial(e)
    }

    /// Appends `extra` zero exponents (fresh variables placed last).
    pub fn extend(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.extend(std::iter::repeat_n(0, extra));
        Monomial(e)
    }

    /// Graded reverse lexicographic comparison.
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                // a smaller exponent in the last variable makes the monomial larger
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{:?}", self.0)
    }
}
