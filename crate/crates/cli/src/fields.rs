use grid_solver::{GridDomain, GridField};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::common::{config, RunError};

/// Closed vocabulary for scalar fields in JSON configs. Radial forms use
/// r = |x|; `seeded` draws one uniform value per node from the run seed, so
/// repeated runs reproduce the same field byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    /// a + bx x + by y.
    Affine {
        a: f64,
        #[serde(default)]
        bx: f64,
        #[serde(default)]
        by: f64,
    },
    /// a + b r^2.
    RadialQuadratic {
        a: f64,
        b: f64,
    },
    /// coeff * r^(-power); rejects r = 0 samples.
    InversePower {
        coeff: f64,
        power: f64,
    },
    /// scale * min(cap, lambda2/4 (-ln r)^{-2} r^{-2} - gamma/2 (-ln r)^{-1} r^{-1}),
    /// the critical-regime coefficient ceiling; needs 0 < r < 1.
    LogBound {
        scale: f64,
        cap: f64,
        gamma: f64,
        lambda2: f64,
    },
    /// amplitude * uniform(-1, 1) per node.
    Seeded {
        amplitude: f64,
    },
}

impl FieldSpec {
    fn eval(&self, x: f64, y: f64) -> Result<f64, RunError> {
        let r = (x * x + y * y).sqrt();
        match *self {
            FieldSpec::Constant { value } => Ok(value),
            FieldSpec::Affine { a, bx, by } => Ok(a + bx * x + by * y),
            FieldSpec::RadialQuadratic { a, b } => Ok(a + b * r * r),
            FieldSpec::InversePower { coeff, power } => {
                if r == 0.0 {
                    return config(format!(
                        "field inverse_power: sample at the origin has no value (power {power})"
                    ));
                }
                Ok(coeff * r.powf(-power))
            }
            FieldSpec::LogBound {
                scale,
                cap,
                gamma,
                lambda2,
            } => {
                if !(r > 0.0 && r < 1.0) {
                    return config(format!(
                        "field log_bound: sample radius {r} outside (0, 1)"
                    ));
                }
                let l = -r.ln();
                let bound = lambda2 / 4.0 / (l * l * r * r) - gamma / 2.0 / (l * r);
                Ok(scale * bound.min(cap))
            }
            FieldSpec::Seeded { .. } => unreachable!("seeded fields sample in bulk"),
        }
    }

    fn sample_points(
        &self,
        pts: impl Iterator<Item = [f64; 2]>,
        count: usize,
        seed: u64,
    ) -> Result<Vec<f64>, RunError> {
        if let FieldSpec::Seeded { amplitude } = *self {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            return Ok((0..count).map(|_| amplitude * rng.gen_range(-1.0..1.0)).collect());
        }
        let mut out = Vec::with_capacity(count);
        for [x, y] in pts {
            out.push(self.eval(x, y)?);
        }
        Ok(out)
    }

    /// Samples the spec on the interior nodes.
    pub fn interior(&self, dom: &GridDomain, seed: u64) -> Result<GridField, RunError> {
        let n = dom.node_count();
        let values =
            self.sample_points((0..n).map(|id| dom.node_xy(id)), n, seed.wrapping_add(1))?;
        GridField::from_values(values).map_err(|e| RunError::Config(e.to_string()))
    }

    /// Samples the spec on the boundary points.
    pub fn boundary(&self, dom: &GridDomain, seed: u64) -> Result<GridField, RunError> {
        if let FieldSpec::Seeded { amplitude } = *self {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
            let values = (0..dom.boundary_count())
                .map(|_| amplitude * rng.gen_range(-1.0..1.0))
                .collect();
            return GridField::from_values(values).map_err(|e| RunError::Config(e.to_string()));
        }
        let err = std::cell::RefCell::new(None);
        let field = GridField::sample_boundary(dom, |x, y| match self.eval(x, y) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        });
        match err.into_inner() {
            None => Ok(field),
            Some(e) => Err(e),
        }
    }
}

/// Zero-order nonlinearity f(u) added to the operator.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceTerm {
    #[default]
    None,
    /// slope * u.
    Linear { slope: f64 },
    /// coeff * u^3.
    Cubic { coeff: f64 },
}

impl SourceTerm {
    pub fn closure(self) -> impl Fn(f64) -> f64 + Sync + Copy {
        move |u: f64| match self {
            SourceTerm::None => 0.0,
            SourceTerm::Linear { slope } => slope * u,
            SourceTerm::Cubic { coeff } => coeff * u * u * u,
        }
    }
}
