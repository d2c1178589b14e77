use artifact_io::fmt_f64;
use pucci_core::{Ellipticity, OpSign};
use serde::{Deserialize, Serialize};

use crate::domain::{GridDomain, Shape};
use crate::error::Error;
use crate::scheme::SchemeParams;

/// Real values attached to either the interior nodes or the boundary points
/// of a domain, in storage order. Which of the two a field refers to is
/// decided by its length at the point of use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    values: Vec<f64>,
}

impl GridField {
    /// Wraps raw values, rejecting non-finite entries.
    pub fn from_values(values: Vec<f64>) -> Result<Self, Error> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(GridField { values })
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        GridField { values }
    }

    /// Samples a function at every interior node.
    pub fn sample_interior(dom: &GridDomain, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..dom.node_count())
            .map(|id| {
                let [x, y] = dom.node_xy(id);
                f(x, y)
            })
            .collect();
        GridField { values }
    }

    /// Samples a function at every boundary point.
    pub fn sample_boundary(dom: &GridDomain, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = dom.boundary_points().iter().map(|&[x, y]| f(x, y)).collect();
        GridField { values }
    }

    pub fn fill_interior(dom: &GridDomain, v: f64) -> Self {
        GridField {
            values: vec![v; dom.node_count()],
        }
    }

    pub fn fill_boundary(dom: &GridDomain, v: f64) -> Self {
        GridField {
            values: vec![v; dom.boundary_count()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn expect_len(field: &GridField, expected: usize) -> Result<(), Error> {
    if field.len() != expected {
        return Err(Error::FieldSize {
            expected,
            got: field.len(),
        });
    }
    Ok(())
}

/// Metadata written next to exported fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldHeader {
    pub h: f64,
    pub shape: Shape,
    pub n_dirs: usize,
    pub gamma: f64,
    pub ell: Ellipticity,
    pub op: OpSign,
}

impl FieldHeader {
    pub fn new(dom: &GridDomain, sp: &SchemeParams, ell: Ellipticity, op: OpSign) -> Self {
        FieldHeader {
            h: dom.h(),
            shape: dom.shape(),
            n_dirs: dom.n_dirs(),
            gamma: sp.gamma,
            ell,
            op,
        }
    }
}

/// Renders an interior field as `x,y,value` rows in node storage order, with
/// round-trip exact floats.
pub fn field_to_csv(dom: &GridDomain, u: &GridField) -> Result<String, Error> {
    expect_len(u, dom.node_count())?;
    let mut out = String::with_capacity(64 * u.len() + 16);
    out.push_str("x,y,value\n");
    for (id, v) in u.values().iter().enumerate() {
        let [x, y] = dom.node_xy(id);
        out.push_str(&fmt_f64(x));
        out.push(',');
        out.push_str(&fmt_f64(y));
        out.push(',');
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    Ok(out)
}

/// Parses a field written by `field_to_csv` back onto the same domain.
pub fn field_from_csv(dom: &GridDomain, text: &str) -> Result<GridField, Error> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,y,value") => {}
        other => return Err(Error::BadCsv(format!("bad header {other:?}"))),
    }
    let mut values = Vec::with_capacity(dom.node_count());
    for (row, line) in lines.enumerate() {
        let v = line
            .rsplit(',')
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| Error::BadCsv(format!("unparsable row {}", row + 2)))?;
        values.push(v);
    }
    if values.len() != dom.node_count() {
        return Err(Error::BadCsv(format!(
            "{} rows for {} nodes",
            values.len(),
            dom.node_count()
        )));
    }
    GridField::from_values(values)
}
