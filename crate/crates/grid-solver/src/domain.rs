use serde::{Deserialize, Serialize};

use crate::directions::line_set;
use crate::error::Error;

/// Planar domains sampled on the square lattice h * Z^2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disc { r: f64 },
    Annulus { r_in: f64, r_out: f64 },
    /// Disc with the origin node removed from the unknowns. No data is
    /// imposed at the puncture: stencil arms ending there are dropped and
    /// gradient rays toward it are skipped.
    PuncturedDisc { r: f64 },
}

impl Shape {
    fn validate(&self) -> Result<(), Error> {
        match *self {
            Shape::Disc { r } | Shape::PuncturedDisc { r } => {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::BadShape(format!("radius must be positive, got {r}")));
                }
            }
            Shape::Annulus { r_in, r_out } => {
                if !(r_in > 0.0 && r_out > r_in && r_out.is_finite()) {
                    return Err(Error::BadShape(format!(
                        "need 0 < r_in < r_out, got r_in = {r_in}, r_out = {r_out}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn outer_radius(&self) -> f64 {
        match *self {
            Shape::Disc { r } | Shape::PuncturedDisc { r } => r,
            Shape::Annulus { r_out, .. } => r_out,
        }
    }
}

/// One end of a stencil arm, one lattice step h*e away unless the segment
/// leaves the domain first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArmEnd {
    /// Interior node index.
    Node(u32),
    /// Boundary crossing at fraction `rho` in (0, 1] of the full step, with
    /// its entry in the boundary point list.
    Cut { rho: f64, bp: u32 },
    /// The step would land on the puncture; the ray carries no data.
    Blocked,
}

/// Forward and backward ends of one undirected stencil line at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineArm {
    pub fwd: ArmEnd,
    pub bwd: ArmEnd,
}

impl LineArm {
    pub fn usable(&self) -> bool {
        self.fwd != ArmEnd::Blocked && self.bwd != ArmEnd::Blocked
    }
}

/// Lattice sampling of a shape: interior mask (all lattice nodes strictly
/// inside), the per-node stencil arms for a fixed direction set, and the
/// exact boundary crossing points.
#[derive(Clone, Debug)]
pub struct GridDomain {
    h: f64,
    shape: Shape,
    n_dirs: usize,
    lines: &'static [(i32, i32)],
    /// Physical arm lengths h*|e| per line.
    deltas: Vec<f64>,
    nodes: Vec<(i32, i32)>,
    /// Dense index over the bounding box [-m, m]^2; -1 marks non-mask cells.
    index: Vec<i32>,
    m: i32,
    /// node-major, line-major arm table.
    arms: Vec<LineArm>,
    boundary_points: Vec<[f64; 2]>,
}

/// Circle radii in index units (radius / h), squared.
struct IndexGeometry {
    out2: f64,
    in2: Option<f64>,
    punctured: bool,
}

impl IndexGeometry {
    fn contains(&self, i: i32, j: i32) -> bool {
        if self.punctured && i == 0 && j == 0 {
            return false;
        }
        let q2 = (i * i + j * j) as f64;
        if q2 >= self.out2 {
            return false;
        }
        match self.in2 {
            Some(in2) => q2 > in2,
            None => true,
        }
    }
}

/// First positive root of |p + t e|^2 = rho2 for p strictly inside the
/// circle; always exists and is the exit parameter.
fn circle_exit(q2: f64, d: f64, e2: f64, rho2: f64) -> f64 {
    let disc = d * d + e2 * (rho2 - q2);
    (-d + disc.sqrt()) / e2
}

/// Smallest positive root of |p + t e|^2 = rho2 for p strictly outside the
/// circle, if the ray reaches it.
fn circle_entry(q2: f64, d: f64, e2: f64, rho2: f64) -> Option<f64> {
    let disc = d * d - e2 * (q2 - rho2);
    if disc <= 0.0 {
        return None;
    }
    let t = (-d - disc.sqrt()) / e2;
    (t > 0.0).then_some(t)
}

impl GridDomain {
    pub fn new(shape: Shape, h: f64, n_dirs: usize) -> Result<Self, Error> {
        shape.validate()?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::BadMesh { h });
        }
        let lines = line_set(n_dirs).ok_or(Error::BadDirections(n_dirs))?;

        let rho_out = shape.outer_radius() / h;
        if rho_out > 1e6 {
            return Err(Error::BadMesh { h });
        }
        let geo = IndexGeometry {
            out2: rho_out * rho_out,
            in2: match shape {
                Shape::Annulus { r_in, .. } => Some((r_in / h) * (r_in / h)),
                _ => None,
            },
            punctured: matches!(shape, Shape::PuncturedDisc { .. }),
        };

        let m = rho_out.floor() as i32;
        let side = (2 * m + 1) as usize;
        let mut index = vec![-1i32; side * side];
        let mut nodes = Vec::new();
        for j in -m..=m {
            for i in -m..=m {
                if geo.contains(i, j) {
                    index[((j + m) as usize) * side + (i + m) as usize] = nodes.len() as i32;
                    nodes.push((i, j));
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::EmptyInterior);
        }

        let mut dom = GridDomain {
            h,
            shape,
            n_dirs,
            lines,
            deltas: lines
                .iter()
                .map(|&(a, b)| h * ((a * a + b * b) as f64).sqrt())
                .collect(),
            nodes,
            index,
            m,
            arms: Vec::new(),
            boundary_points: Vec::new(),
        };
        dom.build_arms(&geo)?;
        Ok(dom)
    }

    fn build_arms(&mut self, geo: &IndexGeometry) -> Result<(), Error> {
        let mut arms = Vec::with_capacity(self.nodes.len() * self.lines.len());
        let mut bps: Vec<[f64; 2]> = Vec::new();
        for &(i, j) in &self.nodes.clone() {
            let mut usable = false;
            for &(a, b) in self.lines {
                let fwd = self.arm_end(geo, i, j, a, b, &mut bps);
                let bwd = self.arm_end(geo, i, j, -a, -b, &mut bps);
                let arm = LineArm { fwd, bwd };
                usable |= arm.usable();
                arms.push(arm);
            }
            if !usable {
                return Err(Error::IsolatedNode { i, j });
            }
        }
        self.arms = arms;
        self.boundary_points = bps;
        Ok(())
    }

    fn arm_end(
        &self,
        geo: &IndexGeometry,
        i: i32,
        j: i32,
        a: i32,
        b: i32,
        bps: &mut Vec<[f64; 2]>,
    ) -> ArmEnd {
        let (ti, tj) = (i + a, j + b);
        if geo.punctured && ti == 0 && tj == 0 {
            return ArmEnd::Blocked;
        }
        let q2 = (i * i + j * j) as f64;
        let d = (i * a + j * b) as f64;
        let e2 = (a * a + b * b) as f64;

        // Even when the target node is in the mask the segment can dip
        // through an annulus hole; the first inner-circle crossing is then
        // the domain exit.
        if let Some(in2) = geo.in2 {
            if let Some(t) = circle_entry(q2, d, e2, in2) {
                if t < 1.0 {
                    return self.cut(i, j, a, b, t, bps);
                }
            }
        }
        if let Some(id) = self.node_id(ti, tj) {
            return ArmEnd::Node(id as u32);
        }
        // Target outside the mask: exit through the outer circle (a target
        // inside the annulus hole was caught above).
        let t = circle_exit(q2, d, e2, geo.out2).min(1.0);
        self.cut(i, j, a, b, t, bps)
    }

    fn cut(&self, i: i32, j: i32, a: i32, b: i32, t: f64, bps: &mut Vec<[f64; 2]>) -> ArmEnd {
        let x = self.h * (i as f64 + t * a as f64);
        let y = self.h * (j as f64 + t * b as f64);
        bps.push([x, y]);
        ArmEnd::Cut {
            rho: t,
            bp: (bps.len() - 1) as u32,
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n_dirs(&self) -> usize {
        self.n_dirs
    }

    /// Undirected line representatives; rays are these vectors and their
    /// negations.
    pub fn lines(&self) -> &[(i32, i32)] {
        self.lines
    }

    /// Physical arm length h*|e| of one line.
    pub fn delta(&self, line: usize) -> f64 {
        self.deltas[line]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_points.len()
    }

    /// Lattice indices (i, j) of the interior nodes, in storage order.
    pub fn nodes(&self) -> &[(i32, i32)] {
        &self.nodes
    }

    pub fn node_id(&self, i: i32, j: i32) -> Option<usize> {
        if i.abs() > self.m || j.abs() > self.m {
            return None;
        }
        let side = (2 * self.m + 1) as usize;
        let v = self.index[((j + self.m) as usize) * side + (i + self.m) as usize];
        (v >= 0).then_some(v as usize)
    }

    pub fn node_xy(&self, id: usize) -> [f64; 2] {
        let (i, j) = self.nodes[id];
        [self.h * i as f64, self.h * j as f64]
    }

    pub fn boundary_points(&self) -> &[[f64; 2]] {
        &self.boundary_points
    }

    pub fn arm(&self, node: usize, line: usize) -> LineArm {
        self.arms[node * self.lines.len() + line]
    }
}
