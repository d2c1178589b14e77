use serde::Serialize;

use crate::domain::GridDomain;
use crate::error::Error;
use crate::field::{expect_len, GridField};

/// The eight symmetries of the square lattice as integer 2x2 matrices
/// (row-major). The identity comes first.
pub(crate) const SYMMETRIES: [[i32; 4]; 8] = [
    [1, 0, 0, 1],
    [-1, 0, 0, 1],
    [1, 0, 0, -1],
    [-1, 0, 0, -1],
    [0, 1, 1, 0],
    [0, -1, 1, 0],
    [0, 1, -1, 0],
    [0, -1, -1, 0],
];

/// Values of `u(reflected x) - u(x)` on the cap strictly left of the
/// reflection plane, together with the ids of the nodes they live on.
/// Nodes whose reflected point lacks lattice interpolation support are
/// omitted, so the field can be empty.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionField {
    pub node_ids: Vec<usize>,
    pub values: Vec<f64>,
}

impl ReflectionField {
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }
}

const SNAP_TOL: f64 = 1e-9;

/// Computes `u(x^lambda) - u(x)` on `{x_axis < lambda}` where `x^lambda`
/// reflects coordinate `axis` (1 or 2) across the plane `x_axis = lambda`.
///
/// Reflection keeps the other coordinate on a lattice row, so the reflected
/// value interpolates linearly between the two straddling nodes of that row;
/// when `2*lambda/h` is an integer (within 1e-9) the reflected point is
/// itself a node and no interpolation error enters.
pub fn reflection_difference(
    u: &GridField,
    dom: &GridDomain,
    lambda: f64,
    axis: usize,
) -> Result<ReflectionField, Error> {
    if axis != 1 && axis != 2 {
        return Err(Error::BadAxis(axis));
    }
    if !lambda.is_finite() {
        return Err(Error::BadParams("lambda must be finite".into()));
    }
    expect_len(u, dom.node_count())?;

    let h = dom.h();
    let v = u.values();
    let mut node_ids = Vec::new();
    let mut values = Vec::new();

    let lookup = |a: i32, b: i32| -> Option<usize> {
        if axis == 1 {
            dom.node_id(a, b)
        } else {
            dom.node_id(b, a)
        }
    };

    for (id, &(i, j)) in dom.nodes().iter().enumerate() {
        let (along, other) = if axis == 1 { (i, j) } else { (j, i) };
        let coord = along as f64 * h;
        if !(coord < lambda) {
            continue;
        }
        // Reflected index along the axis: s = 2 lambda / h - along.
        let s = 2.0 * lambda / h - along as f64;
        let nearest = s.round();
        let reflected = if (s - nearest).abs() <= SNAP_TOL {
            lookup(nearest as i32, other).map(|k| v[k])
        } else {
            let lo = s.floor();
            let frac = s - lo;
            let k0 = lookup(lo as i32, other);
            let k1 = lookup(lo as i32 + 1, other);
            match (k0, k1) {
                (Some(k0), Some(k1)) => Some((1.0 - frac) * v[k0] + frac * v[k1]),
                _ => None,
            }
        };
        if let Some(refl) = reflected {
            node_ids.push(id);
            values.push(refl - v[id]);
        }
    }

    Ok(ReflectionField { node_ids, values })
}

pub(crate) fn asymmetry_of_slice(dom: &GridDomain, v: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for s in &SYMMETRIES[1..] {
        for (id, &(i, j)) in dom.nodes().iter().enumerate() {
            let si = s[0] * i + s[1] * j;
            let sj = s[2] * i + s[3] * j;
            let sid = dom
                .node_id(si, sj)
                .expect("node masks of the shipped shapes are symmetric");
            let d = (v[id] - v[sid]).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Largest deviation of `u` from invariance under the eight lattice
/// symmetries (rotations by multiples of 90 degrees and the four axis and
/// diagonal reflections). Exactly symmetric data gives exactly zero: the
/// comparison subtracts stored values, no arithmetic is done on them.
pub fn asymmetry_norm(u: &GridField, dom: &GridDomain) -> Result<f64, Error> {
    expect_len(u, dom.node_count())?;
    Ok(asymmetry_of_slice(dom, u.values()))
}
