//! Shared helpers for the integration tests: seeded random symmetric
//! matrices, random rotations, and admissible coefficient matrices.
#![allow(dead_code)]

use pucci_core::{Ellipticity, SymMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Row-major orthogonal matrix from modified Gram-Schmidt on a random box
/// sample; good enough as a rotation source for oracles.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut q: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut ok = true;
        for col in 0..n {
            for prev in 0..col {
                let mut dot = 0.0;
                for r in 0..n {
                    dot += q[r * n + col] * q[r * n + prev];
                }
                for r in 0..n {
                    q[r * n + col] -= dot * q[r * n + prev];
                }
            }
            let norm: f64 = (0..n).map(|r| q[r * n + col] * q[r * n + col]).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for r in 0..n {
                q[r * n + col] /= norm;
            }
        }
        if ok {
            return q;
        }
    }
}

/// `A = Q diag(d) Q^T` with the requested diagonal, exactly symmetric by
/// construction of the entry formula.
pub fn conjugated_diag(q: &[f64], d: &[f64]) -> SymMatrix {
    let n = d.len();
    SymMatrix::from_fn(n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            s += q[i * n + k] * d[k] * q[j * n + k];
        }
        s
    })
}

/// Random admissible matrix: spectrum drawn from `[lambda1, lambda2]`.
pub fn random_admissible(rng: &mut ChaCha8Rng, n: usize, ell: Ellipticity) -> SymMatrix {
    let q = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(ell.lambda1()..=ell.lambda2()))
        .collect();
    conjugated_diag(&q, &d)
}

/// Admissible matrix with spectrum at the extreme points `{lambda1, lambda2}`.
pub fn random_extreme_admissible(rng: &mut ChaCha8Rng, n: usize, ell: Ellipticity) -> SymMatrix {
    let q = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                ell.lambda1()
            } else {
                ell.lambda2()
            }
        })
        .collect();
    conjugated_diag(&q, &d)
}
