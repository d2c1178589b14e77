use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::symmat::{eig_sym, SymMatrix};
use crate::{Ellipticity, DEFAULT_EIG_TOL, ZERO_EIG_REL};

/// Which extremal operator a computation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpSign {
    Plus,
    Minus,
}

impl OpSign {
    /// Weight applied to an eigenvalue (or directional curvature) `s`:
    /// the plus operator pays `L2` on positive values and `L1` on negative
    /// ones, the minus operator swaps the two. Zero gets zero either way.
    #[inline]
    pub fn weight(self, ell: Ellipticity, s: f64) -> f64 {
        match self {
            OpSign::Plus => {
                if s > 0.0 {
                    ell.lambda2()
                } else {
                    ell.lambda1()
                }
            }
            OpSign::Minus => {
                if s > 0.0 {
                    ell.lambda1()
                } else {
                    ell.lambda2()
                }
            }
        }
    }

    pub fn flip(self) -> OpSign {
        match self {
            OpSign::Plus => OpSign::Minus,
            OpSign::Minus => OpSign::Plus,
        }
    }
}

impl std::fmt::Display for OpSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OpSign::Plus => write!(f, "plus"),
            OpSign::Minus => write!(f, "minus"),
        }
    }
}

impl std::str::FromStr for OpSign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(OpSign::Plus),
            "minus" | "-" => Ok(OpSign::Minus),
            other => Err(format!("expected \"plus\" or \"minus\", got {other:?}")),
        }
    }
}

/// Extremal operator value for the requested sign.
///
/// Eigenvalues with `|e| <= 1e-12 * ||M||` are treated as zero; they
/// contribute nothing to either sum.
pub fn pucci(m: &SymMatrix, ell: Ellipticity, sign: OpSign) -> Result<f64, Error> {
    let eigs = eig_sym(m, DEFAULT_EIG_TOL)?;
    let cut = ZERO_EIG_REL * m.frobenius_norm();
    let mut acc = 0.0;
    for e in eigs {
        if e.abs() <= cut {
            continue;
        }
        acc += sign.weight(ell, e) * e;
    }
    Ok(acc)
}

/// `M+(M) = L2 * sum_{e_i > 0} e_i + L1 * sum_{e_i < 0} e_i`, equivalently
/// the supremum of `tr(A M)` over symmetric `A` with spectrum in `[L1, L2]`.
pub fn pucci_plus(m: &SymMatrix, ell: Ellipticity) -> Result<f64, Error> {
    pucci(m, ell, OpSign::Plus)
}

/// `M-(M) = L1 * sum_{e_i > 0} e_i + L2 * sum_{e_i < 0} e_i`, the infimum of
/// `tr(A M)` over the same class; satisfies `M-(M) = -M+(-M)`.
pub fn pucci_minus(m: &SymMatrix, ell: Ellipticity) -> Result<f64, Error> {
    pucci(m, ell, OpSign::Minus)
}

/// Flips the sign of row/column `k` of `m` off the diagonal.
///
/// `k` is a 1-based axis index. The reflected matrix is `R M R` with
/// `R = diag(1, .., -1, .., 1)`, so it has exactly the same eigenvalues.
pub fn reflect_matrix(m: &SymMatrix, k: usize) -> SymMatrix {
    let n = m.dim();
    assert!(k >= 1 && k <= n, "axis index {k} out of range 1..={n}");
    let ki = k - 1;
    SymMatrix::from_fn(n, |i, j| {
        let v = m.get(i, j);
        if (i == ki) ^ (j == ki) {
            -v
        } else {
            v
        }
    })
}

/// Flips component `k` (1-based) of `p`.
pub fn reflect_vector(p: &[f64], k: usize) -> Vec<f64> {
    assert!(k >= 1 && k <= p.len(), "axis index {k} out of range");
    let mut out = p.to_vec();
    out[k - 1] = -out[k - 1];
    out
}

/// Single-axis reflection of a gradient/Hessian pair; an exact involution.
pub fn reflect(p: &[f64], m: &SymMatrix, k: usize) -> (Vec<f64>, SymMatrix) {
    assert_eq!(p.len(), m.dim(), "gradient/matrix dimension mismatch");
    (reflect_vector(p, k), reflect_matrix(m, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell(a: f64, b: f64) -> Ellipticity {
        Ellipticity::new(a, b).unwrap()
    }

    #[test]
    fn saddle_matrix_values() {
        let m = SymMatrix::diag(&[1.0, -1.0]);
        let e = ell(1.0, 2.0);
        assert!((pucci_plus(&m, e).unwrap() - 1.0).abs() < 1e-14);
        assert!((pucci_minus(&m, e).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_maps_to_zero() {
        let m = SymMatrix::zeros(3);
        let e = ell(1.0, 2.0);
        assert_eq!(pucci_plus(&m, e).unwrap(), 0.0);
        assert_eq!(pucci_minus(&m, e).unwrap(), 0.0);
    }

    #[test]
    fn reflect_keeps_diagonal_matrices() {
        let m = SymMatrix::diag(&[2.0, -1.0, 0.5]);
        for k in 1..=3 {
            assert_eq!(reflect_matrix(&m, k), m);
        }
    }

    #[test]
    fn reflect_two_by_two_flips_off_diagonal() {
        let m = SymMatrix::from_row_major(2, &[1.0, 0.5, 0.5, -2.0]).unwrap();
        let r = reflect_matrix(&m, 1);
        assert_eq!(r.get(0, 0), 1.0);
        assert_eq!(r.get(1, 1), -2.0);
        assert_eq!(r.get(0, 1), -0.5);
        let e0 = eig_sym(&m, 1e-12).unwrap();
        let e1 = eig_sym(&r, 1e-12).unwrap();
        for (a, b) in e0.iter().zip(&e1) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn reflect_is_involution() {
        let p = vec![0.3, -0.2, 0.9];
        let m = SymMatrix::from_fn(3, |i, j| (i + 2 * j) as f64 * 0.21 - 0.5);
        let (p1, m1) = reflect(&p, &m, 2);
        let (p2, m2) = reflect(&p1, &m1, 2);
        assert_eq!(p, p2);
        assert_eq!(m, m2);
    }
}
