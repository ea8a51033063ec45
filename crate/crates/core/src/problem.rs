//! Problem files and the JSON shapes exchanged by the command-line tool.
//! Polynomials and monomials always travel as grammar strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::certify_smooth_ci;
use crate::jacring::{JacobianBasis, ReductionResult};
use crate::qpoly::{format_rational, Monomial, RingSpec};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemOptions {
    #[serde(default)]
    pub allow_unchecked_smoothness: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub polynomials: Vec<String>,
    #[serde(default)]
    pub options: ProblemOptions,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn spec(&self) -> Result<RingSpec> {
        RingSpec::from_strings(self.n, &self.polynomials)
    }

    /// The ring data, refused unless smoothness is certified or overridden.
    pub fn certified_spec(&self) -> Result<RingSpec> {
        let spec = self.spec()?;
        if !self.options.allow_unchecked_smoothness {
            let report = certify_smooth_ci(&spec)?;
            if !report.smooth {
                return Err(Error::NotCertified {
                    witness: report.witness.unwrap_or_default(),
                });
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub total_dim: usize,
    pub per_weight: BTreeMap<usize, Vec<String>>,
}

impl BasisJson {
    pub fn from_basis(basis: &JacobianBasis, spec: &RingSpec) -> Self {
        BasisJson {
            total_dim: basis.total_dim(),
            per_weight: basis
                .per_weight()
                .iter()
                .map(|(w, ms)| (*w, ms.iter().map(|m| spec.print_monomial(m)).collect()))
                .collect(),
        }
    }

    /// Reads the monomials back in their stored order.
    pub fn to_basis(&self, spec: &RingSpec) -> Result<JacobianBasis> {
        let mut per_weight = BTreeMap::new();
        for (w, names) in &self.per_weight {
            let mut ms: Vec<Monomial> = Vec::with_capacity(names.len());
            for name in names {
                let p = spec.parse(name)?;
                let lead = p.leading_term().map(|(m, c)| (m.clone(), c.clone()));
                match lead {
                    Some((m, c)) if p.len() == 1 && c == num_traits::One::one() => ms.push(m),
                    _ => return Err(Error::InvalidSpec(format!("`{name}` is not a monomial"))),
                }
            }
            per_weight.insert(*w, ms);
        }
        let basis = JacobianBasis::from_parts(per_weight);
        if basis.total_dim() != self.total_dim {
            return Err(Error::InvalidSpec(format!(
                "total_dim {} does not match {} listed monomials",
                self.total_dim,
                basis.total_dim()
            )));
        }
        Ok(basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateJson {
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub weight: i64,
    pub basis_part: String,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub input: String,
    pub coordinates: Vec<CoordinateJson>,
    pub steps: Vec<StepJson>,
}

impl ReductionJson {
    /// Coordinates listed in basis order.
    pub fn new(input: &str, r: &ReductionResult, basis: &JacobianBasis, spec: &RingSpec) -> Self {
        let coordinates = basis
            .monomials()
            .filter_map(|m| {
                r.coordinates.get(m).map(|c| CoordinateJson {
                    monomial: spec.print_monomial(m),
                    coefficient: format_rational(c),
                })
            })
            .collect();
        let steps = r
            .steps
            .iter()
            .map(|s| StepJson {
                weight: s.weight,
                basis_part: spec.print(&s.basis_part),
                replacement: spec.print(&s.replacement),
            })
            .collect();
        ReductionJson {
            input: input.to_string(),
            coordinates,
            steps,
        }
    }
}
