use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::symmat::SymMatrix;

/// One linear operator `tr(A M) + b . p` inside a Bellman/Isaacs family.
///
/// `A` is intended to have eigenvalues in `[L1, L2]` and `|b| <= gamma`;
/// neither is enforced here (the structure checker exists to falsify
/// violations), only shape and finiteness are.
#[derive(Clone, Debug, Serialize)]
pub struct ControlPair {
    pub a: SymMatrix,
    pub b: Vec<f64>,
}

impl ControlPair {
    pub fn new(a: SymMatrix, b: Vec<f64>) -> Result<Self, Error> {
        if a.dim() != b.len() {
            return Err(Error::DimMismatch(a.dim(), b.len()));
        }
        if !b.iter().all(|v| v.is_finite()) {
            return Err(Error::BadFamily("drift vector has non-finite entry".into()));
        }
        Ok(Self { a, b })
    }

    fn eval(&self, p: &[f64], m: &SymMatrix) -> Result<f64, Error> {
        let mut v = self.a.trace_product(m)?;
        for (bi, pi) in self.b.iter().zip(p) {
            v += bi * pi;
        }
        Ok(v)
    }
}

/// Inf-sup operator over a finite two-level family:
/// `F(p, M) = min over families of max over pairs of (tr(A M) + b . p)`.
///
/// A single inner family (one outer entry) is a Bellman operator.
#[derive(Clone, Debug, Serialize)]
pub struct IsaacsOperator {
    gamma: f64,
    families: Vec<Vec<ControlPair>>,
    dim: usize,
}

impl IsaacsOperator {
    pub fn new(gamma: f64, families: Vec<Vec<ControlPair>>) -> Result<Self, Error> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::BadGamma(gamma));
        }
        if families.is_empty() || families.iter().any(|f| f.is_empty()) {
            return Err(Error::EmptyFamily);
        }
        let dim = families[0][0].a.dim();
        for fam in &families {
            for pair in fam {
                if pair.a.dim() != dim || pair.b.len() != dim {
                    return Err(Error::DimMismatch(pair.a.dim(), dim));
                }
                if !pair.a.is_finite() {
                    return Err(Error::BadFamily("coefficient matrix not finite".into()));
                }
            }
        }
        Ok(Self {
            gamma,
            families,
            dim,
        })
    }

    /// Sup over one family only.
    pub fn bellman(gamma: f64, pairs: Vec<ControlPair>) -> Result<Self, Error> {
        Self::new(gamma, vec![pairs])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn families(&self) -> &[Vec<ControlPair>] {
        &self.families
    }

    pub fn eval(&self, p: &[f64], m: &SymMatrix) -> Result<f64, Error> {
        if p.len() != self.dim || m.dim() != self.dim {
            return Err(Error::DimMismatch(p.len(), self.dim));
        }
        let mut outer = f64::INFINITY;
        for fam in &self.families {
            let mut inner = f64::NEG_INFINITY;
            for pair in fam {
                inner = inner.max(pair.eval(p, m)?);
            }
            outer = outer.min(inner);
        }
        Ok(outer)
    }

    /// Loads `{"gamma": g, "families": [[{"A": [n*n row-major], "b": [n]}, ..], ..]}`.
    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let raw: IsaacsJson = serde_json::from_str(text)?;
        raw.build()
    }

    pub fn to_json_string(&self) -> String {
        let raw = IsaacsJson {
            gamma: self.gamma,
            families: self
                .families
                .iter()
                .map(|fam| {
                    fam.iter()
                        .map(|p| PairJson {
                            a: p.a.to_row_major(),
                            b: p.b.clone(),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("isaacs serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    #[serde(rename = "A")]
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsaacsJson {
    gamma: f64,
    families: Vec<Vec<PairJson>>,
}

impl IsaacsJson {
    fn build(self) -> Result<IsaacsOperator, Error> {
        if self.families.is_empty() || self.families.iter().any(|f| f.is_empty()) {
            return Err(Error::EmptyFamily);
        }
        let n = self.families[0][0].b.len();
        let mut families = Vec::with_capacity(self.families.len());
        for fam in self.families {
            let mut pairs = Vec::with_capacity(fam.len());
            for pj in fam {
                if pj.b.len() != n || pj.a.len() != n * n {
                    return Err(Error::BadFamily(format!(
                        "expected {} matrix entries and {} drift entries, got {} and {}",
                        n * n,
                        n,
                        pj.a.len(),
                        pj.b.len()
                    )));
                }
                let a = SymMatrix::from_row_major(n, &pj.a)?;
                pairs.push(ControlPair::new(a, pj.b)?);
            }
            families.push(pairs);
        }
        IsaacsOperator::new(self.gamma, families)
    }
}
