//! Radial calculus for the extremal operators.
//!
//! For a radial function psi(|x|) the Hessian has exactly two distinct
//! eigenvalues: psi''(r) (simple) and psi'(r)/r (multiplicity n-1), so the
//! extremal operators collapse to weighted sums of two numbers. This crate
//! evaluates that reduction in closed form, together with the dimension-like
//! numbers
//!
//!   n*  = (lambda1/lambda2)(n-1) + 1,
//!   n_* = (lambda2/lambda1)(n-1) + 1,
//!
//! and the bounds (M+(D^2 psi) + gamma |D psi|)/psi for the two auxiliary
//! families psi = |x|^{-q} and psi = (-ln|x|)^a.

mod aux;
mod dims;
mod error;
mod hessian;

pub use aux::{aux_bound, best_q, AuxFunction};
pub use dims::{dim_numbers, DimNumbers};
pub use error::Error;
pub use hessian::{pucci_on_radial, radial_hessian_eigs, RadialHessianEigs};
