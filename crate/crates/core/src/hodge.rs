//! Betti and Hodge numbers of smooth complete intersections from one-variable
//! generating series. Independent of the Jacobian-ring code, so it serves as
//! an oracle for basis dimensions.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qpoly::{Rational, RingSpec};

/// Truncated power series `sum_{j < len} c_j h^j`.
#[derive(Clone, Debug, PartialEq)]
struct Series(Vec<Rational>);

impl Series {
    fn one(len: usize) -> Self {
        let mut c = vec![Rational::zero(); len];
        c[0] = Rational::one();
        Series(c)
    }

    fn from_poly(coeffs: &[Rational], len: usize) -> Self {
        let mut c = vec![Rational::zero(); len];
        for (i, a) in coeffs.iter().enumerate().take(len) {
            c[i] = a.clone();
        }
        Series(c)
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.0.len();
        let mut c = vec![Rational::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(len - i) {
                c[i + j] += a * b;
            }
        }
        Series(c)
    }

    fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.0.len());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Requires a nonzero constant term.
    fn inverse(&self) -> Series {
        let len = self.0.len();
        let inv0 = self.0[0].recip();
        let mut c = vec![Rational::zero(); len];
        c[0] = inv0.clone();
        for i in 1..len {
            let mut s = Rational::zero();
            for j in 1..=i {
                s += &self.0[j] * &c[i - j];
            }
            c[i] = -(&s * &inv0);
        }
        Series(c)
    }

    fn add(&self, other: &Series) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn scale(&self, r: &Rational) -> Series {
        Series(self.0.iter().map(|a| a * r).collect())
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn to_i64(r: &Rational) -> i64 {
    assert!(r.is_integer(), "non-integral characteristic number {r}");
    r.to_integer().to_i64().expect("fits in i64")
}

/// `(prod d_i) [h^{n-k}] (1+h)^{n+1} / prod (1 + d_i h)`.
pub fn euler_characteristic(spec: &RingSpec) -> i64 {
    let (n, k) = (spec.n(), spec.k());
    let m = n - k;
    let len = m + 1;
    let one_plus_h = Series::from_poly(&[int(1), int(1)], len);
    let mut s = one_plus_h.pow(n as u32 + 1);
    let mut prod = 1i64;
    for &d in spec.degrees() {
        prod *= d as i64;
        s = s.mul(&Series::from_poly(&[int(1), int(d as i64)], len).inverse());
    }
    to_i64(&(&s.0[m] * int(prod)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub euler: i64,
    pub middle_betti: i64,
    pub primitive_middle: i64,
}

/// Middle and primitive middle Betti numbers; all other Betti numbers agree
/// with those of `P^{n-k}`.
pub fn primitive_middle_dim(spec: &RingSpec) -> Result<BettiReport> {
    let m = (spec.n() - spec.k()) as i64;
    let euler = euler_characteristic(spec);
    let (middle_betti, primitive_middle) = if m % 2 == 0 {
        let b = euler - m;
        (b, b - 1)
    } else {
        let b = (m + 1) - euler;
        (b, b)
    };
    if middle_betti < 0 || primitive_middle < 0 {
        return Err(Error::NegativeBetti(primitive_middle.min(middle_betti)));
    }
    Ok(BettiReport {
        euler,
        middle_betti,
        primitive_middle,
    })
}

/// `χ_y(X) = sum_p χ(Ω^p) y^p` at a rational `y`, from
/// `sum_N χ_y(X_N) z^N = 1/((1+zy)(1-z)) prod_i ((1+zy)^{d_i} - (1-z)^{d_i}) / ((1+zy)^{d_i} + y (1-z)^{d_i})`
/// with `N` the ambient dimension.
fn chi_y_at(spec: &RingSpec, y: &Rational) -> Rational {
    let n = spec.n();
    let len = n + 1;
    let a = Series::from_poly(&[int(1), y.clone()], len);
    let b = Series::from_poly(&[int(1), int(-1)], len);
    let mut s = a.mul(&b).inverse();
    for &d in spec.degrees() {
        let ad = a.pow(d);
        let bd = b.pow(d);
        let num = ad.add(&bd.scale(&int(-1)));
        let den = ad.add(&bd.scale(y));
        s = s.mul(&num).mul(&den.inverse());
    }
    s.0[n].clone()
}

/// Coefficients of the polynomial of degree `< points.len()` through `points`.
fn interpolate(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let len = points.len();
    let mut out = vec![Rational::zero(); len];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (y - x_j) / (x_i - x_j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (e, c) in basis.iter().enumerate() {
                next[e + 1] += c;
                next[e] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let f = yi / denom;
        for (e, c) in basis.iter().enumerate() {
            out[e] += c * &f;
        }
    }
    out
}

/// `χ(Ω^p)` for `p = 0..=n-k`.
pub fn chi_y(spec: &RingSpec) -> Vec<i64> {
    let m = spec.n() - spec.k();
    let points: Vec<(Rational, Rational)> = (0..=m as i64)
        .map(|t| {
            let y = int(t);
            let v = chi_y_at(spec, &y);
            (y, v)
        })
        .collect();
    interpolate(&points).iter().map(to_i64).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeSlices {
    /// Primitive `h^{m-w, w}` for `w = 0..=m`, `m = n - k`.
    pub primitive: Vec<i64>,
}

/// Primitive middle Hodge numbers, listed to line up with Jacobian weights.
pub fn primitive_hodge_numbers(spec: &RingSpec) -> Result<HodgeSlices> {
    let m = (spec.n() - spec.k()) as i64;
    let chi = chi_y(spec);
    let mut primitive = Vec::with_capacity(chi.len());
    for w in 0..=m {
        let p = m - w;
        let c = chi[p as usize];
        let sign = if (m - p) % 2 == 0 { 1 } else { -1 };
        let h = if 2 * p == m {
            sign * c - 1
        } else {
            let diag = if p % 2 == 0 { 1 } else { -1 };
            sign * (c - diag)
        };
        if h.is_negative() {
            return Err(Error::NegativeBetti(h));
        }
        primitive.push(h);
    }
    Ok(HodgeSlices { primitive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, gens: &[&str]) -> RingSpec {
        RingSpec::from_strings(n, gens).unwrap()
    }

    fn fermat(n: usize, d: u32) -> RingSpec {
        let g: Vec<String> = (0..=n).map(|j| format!("x{j}^{d}")).collect();
        spec(n, &[g.join(" + ").as_str()])
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&fermat(4, 5)), -200);
        assert_eq!(euler_characteristic(&fermat(2, 3)), 0);
        assert_eq!(
            euler_characteristic(&spec(3, &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3"])),
            0
        );
        assert_eq!(euler_characteristic(&fermat(3, 4)), 24);
        assert_eq!(euler_characteristic(&fermat(2, 2)), 2);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(primitive_middle_dim(&fermat(4, 5)).unwrap().primitive_middle, 204);
        assert_eq!(primitive_middle_dim(&fermat(2, 3)).unwrap().primitive_middle, 2);
        assert_eq!(primitive_middle_dim(&fermat(2, 2)).unwrap().primitive_middle, 0);
        let k3 = primitive_middle_dim(&fermat(3, 4)).unwrap();
        assert_eq!((k3.middle_betti, k3.primitive_middle), (22, 21));
    }

    #[test]
    fn symmetric_in_degrees() {
        let a = spec(4, &["x0^2 + x1^2 + x2^2 + x3^2 + x4^2", "x0^3 + x1^3 + x2^3 + x3^3 + x4^3"]);
        let b = spec(4, &["x0^3 + x1^3 + x2^3 + x3^3 + x4^3", "x0^2 + x1^2 + x2^2 + x3^2 + x4^2"]);
        assert_eq!(euler_characteristic(&a), euler_characteristic(&b));
        assert_eq!(euler_characteristic(&a), 24);
    }

    #[test]
    fn hodge_numbers() {
        assert_eq!(primitive_hodge_numbers(&fermat(4, 5)).unwrap().primitive, vec![1, 101, 101, 1]);
        assert_eq!(primitive_hodge_numbers(&fermat(3, 4)).unwrap().primitive, vec![1, 19, 1]);
        assert_eq!(primitive_hodge_numbers(&fermat(2, 3)).unwrap().primitive, vec![1, 1]);
        let chi = chi_y(&fermat(4, 5));
        let total: i64 = chi.iter().enumerate().map(|(p, c)| if p % 2 == 0 { *c } else { -c }).sum();
        assert_eq!(total, -200);
    }
}
