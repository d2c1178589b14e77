use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    BadShape(String),

    #[error("mesh width must be positive and finite, got h = {h}")]
    BadMesh { h: f64 },

    #[error("unsupported direction count {0}; supported values are 4, 8, 16, 24, 40")]
    BadDirections(usize),

    #[error("invalid scheme parameter: {0}")]
    BadParams(String),

    #[error("node ({i}, {j}) has no usable direction pair")]
    IsolatedNode { i: i32, j: i32 },

    #[error("the interior mask is empty; refine the mesh or enlarge the shape")]
    EmptyInterior,

    #[error("field holds {got} values but the domain expects {expected}")]
    FieldSize { expected: usize, got: usize },

    #[error("domain was built with {dom} directions but the scheme requests {sp}")]
    DirectionMismatch { dom: usize, sp: usize },

    #[error("reflection axis must be 1 or 2, got {0}")]
    BadAxis(usize),

    #[error("non-finite value at entry {0}")]
    NonFinite(usize),

    #[error("csv import: {0}")]
    BadCsv(String),
}
