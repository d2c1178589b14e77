//! Exact linear-algebra layer for uniformly elliptic extremal operators.
//!
//! Provides dense real symmetric matrices with a cyclic Jacobi eigensolver,
//! the Pucci extremal operators
//!
//! ```text
//! M+(M) = L2 * sum_{e_i > 0} e_i + L1 * sum_{e_i < 0} e_i
//! M-(M) = L1 * sum_{e_i > 0} e_i + L2 * sum_{e_i < 0} e_i
//! ```
//!
//! over the eigenvalues `e_i` of `M` with ellipticity bounds `0 < L1 <= L2`,
//! axis reflections of gradient/Hessian pairs, Bellman/Isaacs operators built
//! from finite coefficient families, and sampled checks of the structure
//! conditions (F1) (uniform ellipticity with a gradient Lipschitz term) and
//! (F2) (invariance under single-axis reflections).

// `!(x > 0.0)`-style guards are deliberate: unlike `x <= 0.0` they also
// reject NaN arguments.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod ellipticity;
mod error;
mod isaacs;
mod pucci;
mod structure;
mod symmat;

pub use ellipticity::Ellipticity;
pub use error::Error;
pub use isaacs::{ControlPair, IsaacsOperator};
pub use pucci::{pucci, pucci_minus, pucci_plus, reflect, reflect_matrix, reflect_vector, OpSign};
pub use structure::{
    check_structure, FnOperator, PucciOperator, SecondOrderOperator, StructureReport, Witness,
    STRUCTURE_SLACK,
};
pub use symmat::{eig_sym, eig_sym_full, SymMatrix};

/// Eigenvalues with magnitude below `ZERO_EIG_REL * ||M||_F` are treated as
/// zero in the Pucci sums. A zero eigenvalue contributes nothing to either
/// sum, so the classification only prevents sign flapping on noise.
pub const ZERO_EIG_REL: f64 = 1e-12;

/// Default eigensolver tolerance used when an operator evaluation needs a
/// spectrum but the caller did not supply one.
pub const DEFAULT_EIG_TOL: f64 = 1e-12;
