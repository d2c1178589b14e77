use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::isaacs::IsaacsOperator;
use crate::pucci::{pucci_minus, pucci_plus, reflect, OpSign};
use crate::symmat::SymMatrix;
use crate::Ellipticity;

/// Slack applied to both structure conditions before deciding the flags.
/// The reported `worst_violation` is already slack-adjusted, so
/// `worst_violation <= 0` holds exactly when the corresponding flag is true.
pub const STRUCTURE_SLACK: f64 = 1e-9;

/// An operator `F(p, M)` acting on gradient/Hessian pairs.
pub trait SecondOrderOperator: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, p: &[f64], m: &SymMatrix) -> Result<f64, Error>;
}

/// The extremal operators themselves, viewed as `F(p, M) = M+-(M)`.
#[derive(Clone, Copy, Debug)]
pub struct PucciOperator {
    pub ell: Ellipticity,
    pub sign: OpSign,
    pub dim: usize,
}

impl SecondOrderOperator for PucciOperator {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _p: &[f64], m: &SymMatrix) -> Result<f64, Error> {
        crate::pucci::pucci(m, self.ell, self.sign)
    }
}

impl SecondOrderOperator for IsaacsOperator {
    fn dim(&self) -> usize {
        IsaacsOperator::dim(self)
    }
    fn eval(&self, p: &[f64], m: &SymMatrix) -> Result<f64, Error> {
        IsaacsOperator::eval(self, p, m)
    }
}

/// Wraps a closure as an operator; handy for planted counterexamples.
pub struct FnOperator<F: Fn(&[f64], &SymMatrix) -> f64 + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &SymMatrix) -> f64 + Sync> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &SymMatrix) -> f64 + Sync> SecondOrderOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, p: &[f64], m: &SymMatrix) -> Result<f64, Error> {
        Ok((self.f)(p, m))
    }
}

/// Worst sample found by `check_structure`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum Witness {
    F1 {
        m: SymMatrix,
        shift: SymMatrix,
        xi1: Vec<f64>,
        xi2: Vec<f64>,
        gap: f64,
    },
    F2 {
        p: Vec<f64>,
        m: SymMatrix,
        axis: usize,
        gap: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureReport {
    pub f1_holds: bool,
    pub f2_holds: bool,
    /// Largest slack-adjusted gap across both conditions; positive means a
    /// genuine violation beyond the 1e-9 slack.
    pub worst_violation: f64,
    pub witness: Option<Witness>,
}

fn sample_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Sampled falsification of the structure conditions.
///
/// (F1): `M-(M) - gamma |xi1 - xi2| <= F(xi1, M+N) - F(xi2, N)
///        <= M+(M) + gamma |xi1 - xi2|` on every sample.
/// (F2): `F(p^(k), M^(k)) = F(p, M)` for reflected arguments.
///
/// `M`, `N` are drawn with entries uniform in [-1, 1], `xi` uniform in the
/// unit ball, `k` uniform over axes; everything is deterministic in `seed`.
pub fn check_structure(
    op: &dyn SecondOrderOperator,
    ell: Ellipticity,
    gamma: f64,
    n_samples: usize,
    seed: u64,
) -> Result<StructureReport, Error> {
    if n_samples == 0 {
        return Err(Error::NoSamples);
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::BadGamma(gamma));
    }
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut f1_worst = f64::NEG_INFINITY;
    let mut f1_witness = None;
    let mut f2_worst = f64::NEG_INFINITY;
    let mut f2_witness = None;

    for _ in 0..n_samples {
        // (F1) sample
        let m = sample_sym(&mut rng, n);
        let shift = sample_sym(&mut rng, n);
        let xi1 = sample_ball(&mut rng, n);
        let xi2 = sample_ball(&mut rng, n);
        let slip = gamma * norm_diff(&xi1, &xi2);
        let mid = op.eval(&xi1, &m.add(&shift)?)? - op.eval(&xi2, &shift)?;
        let lower = pucci_minus(&m, ell)? - slip;
        let upper = pucci_plus(&m, ell)? + slip;
        let gap = (lower - mid).max(mid - upper) - STRUCTURE_SLACK;
        if gap > f1_worst {
            f1_worst = gap;
            f1_witness = Some(Witness::F1 {
                m: m.clone(),
                shift: shift.clone(),
                xi1: xi1.clone(),
                xi2: xi2.clone(),
                gap,
            });
        }

        // (F2) sample
        let p = sample_ball(&mut rng, n);
        let m2 = sample_sym(&mut rng, n);
        let axis = rng.gen_range(1..=n);
        let (pr, mr) = reflect(&p, &m2, axis);
        let gap = (op.eval(&pr, &mr)? - op.eval(&p, &m2)?).abs() - STRUCTURE_SLACK;
        if gap > f2_worst {
            f2_worst = gap;
            f2_witness = Some(Witness::F2 {
                p: p.clone(),
                m: m2.clone(),
                axis,
                gap,
            });
        }
    }

    let f1_holds = f1_worst <= 0.0;
    let f2_holds = f2_worst <= 0.0;
    let (worst_violation, witness) = if f1_worst >= f2_worst {
        (f1_worst, f1_witness)
    } else {
        (f2_worst, f2_witness)
    };
    Ok(StructureReport {
        f1_holds,
        f2_holds,
        worst_violation,
        // Only keep the worst sample when it is an actual violation.
        witness: if worst_violation > 0.0 { witness } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pucci_satisfies_both_conditions() {
        let ell = Ellipticity::new(1.0, 2.0).unwrap();
        for sign in [OpSign::Plus, OpSign::Minus] {
            let op = PucciOperator { ell, sign, dim: 3 };
            let report = check_structure(&op, ell, 0.0, 300, 7).unwrap();
            assert!(report.f1_holds, "worst {:?}", report.worst_violation);
            assert!(report.f2_holds);
            assert!(report.worst_violation <= 0.0);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let ell = Ellipticity::new(1.0, 2.0).unwrap();
        let op = PucciOperator {
            ell,
            sign: OpSign::Plus,
            dim: 2,
        };
        let a = check_structure(&op, ell, 0.0, 64, 42).unwrap();
        let b = check_structure(&op, ell, 0.0, 64, 42).unwrap();
        assert_eq!(a.worst_violation, b.worst_violation);
    }
}
