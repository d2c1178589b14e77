use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Dense real symmetric n x n matrix.
///
/// Entries are stored packed (lower triangle, row major), so symmetry holds
/// exactly by construction. All constructors reject non-finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

#[inline]
fn pack(i: usize, j: usize) -> usize {
    // requires i >= j
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Self {
            n,
            a: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle (`j <= i`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from a row-major dense buffer, requiring exact symmetry.
    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::DimMismatch(data.len(), n * n));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = data[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NotFinite(i, j));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.a[pack(i, j)]
        } else {
            self.a[pack(j, i)]
        }
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i >= j {
            self.a[pack(i, j)] = v;
        } else {
            self.a[pack(j, i)] = v;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.a[pack(i, j)];
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `tr(self * other)`, exact symmetric contraction.
    pub fn trace_product(&self, other: &SymMatrix) -> Result<f64, Error> {
        if self.n != other.n {
            return Err(Error::DimMismatch(self.n, other.n));
        }
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let t = self.a[pack(i, j)] * other.a[pack(i, j)];
                s += if i == j { t } else { 2.0 * t };
            }
        }
        Ok(s)
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix, Error> {
        if self.n != other.n {
            return Err(Error::DimMismatch(self.n, other.n));
        }
        let a = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| x + y)
            .collect();
        Ok(SymMatrix { n: self.n, a })
    }

    pub fn scale(&self, t: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            a: self.a.iter().map(|x| t * x).collect(),
        }
    }

    pub fn neg(&self) -> SymMatrix {
        SymMatrix {
            n: self.n,
            a: self.a.iter().map(|x| -x).collect(),
        }
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.n;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = self.get(i, j);
            }
        }
        d
    }
}

const JACOBI_SWEEPS: usize = 50;
const JACOBI_OFF_REL: f64 = 1e-13;

fn off_diag_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[p * n + q] * a[p * n + q];
        }
    }
    s.sqrt()
}

/// Eigenvalues of `m` in nondecreasing order.
///
/// Cyclic Jacobi rotations with a sweep budget of 50; iteration stops once
/// the off-diagonal Frobenius norm falls below
/// `min(1e-13 * ||m||, tol * (1 + ||m||))`, which keeps the spectral
/// reconstruction error of `m` below `tol * (1 + ||m||)`. Failure to reach
/// the threshold inside the budget is an explicit error.
pub fn eig_sym(m: &SymMatrix, tol: f64) -> Result<Vec<f64>, Error> {
    Ok(jacobi(m, tol, false)?.0)
}

/// Eigenvalues (nondecreasing) plus the orthogonal eigenvector matrix `V`
/// (row-major, eigenvectors in columns, `m = V diag(e) V^T`).
pub fn eig_sym_full(m: &SymMatrix, tol: f64) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let (e, v) = jacobi(m, tol, true)?;
    Ok((e, v.expect("vectors requested")))
}

fn jacobi(m: &SymMatrix, tol: f64, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>), Error> {
    if !(tol > 0.0) {
        return Err(Error::BadTolerance(tol));
    }
    if !m.is_finite() {
        return Err(Error::NotFinite(0, 0));
    }
    let n = m.dim();
    let mut a = m.to_row_major();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    let norm = m.frobenius_norm();
    let thr = (JACOBI_OFF_REL * norm).min(tol * (1.0 + norm));
    if norm == 0.0 || off_diag_norm(&a, n) <= thr {
        return Ok(finish(a, v, n));
    }

    for sweep in 1..=JACOBI_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    let new_p = c * aip - s * aiq;
                    let new_q = s * aip + c * aiq;
                    a[i * n + p] = new_p;
                    a[p * n + i] = new_p;
                    a[i * n + q] = new_q;
                    a[q * n + i] = new_q;
                }
                if let Some(vv) = v.as_mut() {
                    for i in 0..n {
                        let vip = vv[i * n + p];
                        let viq = vv[i * n + q];
                        vv[i * n + p] = c * vip - s * viq;
                        vv[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
        if off_diag_norm(&a, n) <= thr {
            return Ok(finish(a, v, n));
        }
        let _ = sweep;
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_SWEEPS,
        offdiag: off_diag_norm(&a, n),
    })
}

fn finish(a: Vec<f64>, v: Option<Vec<f64>>, n: usize) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vecs = v.map(|vv| {
        let mut sorted = vec![0.0; n * n];
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                sorted[row * n + col] = vv[row * n + src];
            }
        }
        sorted
    });
    (eigs, vecs)
}

#[derive(Serialize, Deserialize)]
struct SymMatrixRepr {
    dim: usize,
    data: Vec<f64>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymMatrixRepr {
            dim: self.n,
            data: self.to_row_major(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SymMatrixRepr::deserialize(d)?;
        SymMatrix::from_row_major(raw.dim, &raw.data).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_eigenvalues_sorted() {
        let m = SymMatrix::diag(&[3.0, 1.0, 2.0]);
        let e = eig_sym(&m, 1e-12).unwrap();
        assert_eq!(e, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn zero_matrix() {
        let m = SymMatrix::zeros(4);
        let e = eig_sym(&m, 1e-12).unwrap();
        assert_eq!(e, vec![0.0; 4]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b], [b, c]] has eigenvalues (a+c)/2 -+ sqrt(((a-c)/2)^2 + b^2)
        let (a, b, c) = (1.3, -0.7, 0.2);
        let m = SymMatrix::from_row_major(2, &[a, b, b, c]).unwrap();
        let mid = 0.5 * (a + c);
        let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        let e = eig_sym(&m, 1e-12).unwrap();
        assert!((e[0] - (mid - rad)).abs() < 1e-14);
        assert!((e[1] - (mid + rad)).abs() < 1e-14);
    }

    #[test]
    fn spectral_reconstruction_error_within_tol() {
        let m = SymMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) as f64 * 0.13).sin());
        let tol = 1e-12;
        let (e, v) = eig_sym_full(&m, tol).unwrap();
        let n = m.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += v[i * n + k] * e[k] * v[j * n + k];
                }
                worst = worst.max((s - m.get(i, j)).abs());
            }
        }
        assert!(worst <= tol * (1.0 + m.frobenius_norm()), "worst {worst:e}");
    }

    #[test]
    fn rejects_asymmetric_and_nonfinite() {
        assert!(matches!(
            SymMatrix::from_row_major(2, &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::NotSymmetric(1, 0))
        ));
        assert!(SymMatrix::from_row_major(2, &[f64::NAN, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn serde_rejects_asymmetric_payload() {
        let good = serde_json::to_string(&SymMatrix::diag(&[1.0, -1.0])).unwrap();
        assert!(serde_json::from_str::<SymMatrix>(&good).is_ok());
        let bad = r#"{"dim":2,"data":[1.0,2.0,3.0,4.0]}"#;
        assert!(serde_json::from_str::<SymMatrix>(bad).is_err());
    }
}
