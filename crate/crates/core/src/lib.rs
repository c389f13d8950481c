//! Exact-arithmetic classification of non-identifiable rank-3 tensors.
//!
//! A rank-3 tensor with more than one essentially different rank
//! decomposition falls into one of six families: full-rank 3x3 matrices,
//! tangent tensors of the binary triple product, order-4 binary tensors on
//! the defective third secant, two conic families in `3x2x2`, and a glued
//! family mixing a rank-2 matrix pencil with an extra rank-1 term. This
//! crate decides membership for a tensor with rational entries, entirely in
//! exact rational arithmetic, and produces checkable witnesses.
//!
//! The main entry point is [`classify::classify`]. Supporting layers are
//! exposed because they are useful on their own:
//!
//! - [`matrix`]: exact rational linear algebra (RREF, kernels, right
//!   inverses, classified 2x2 eigenproblems);
//! - [`tensor`]: dense rational tensors, flattenings, multilinear rank,
//!   concision, reshapes;
//! - [`pencil`]: Kronecker theory of matrix pencils (minimal indices,
//!   elementary divisors, canonical form, the pencil rank formula);
//! - [`classify`] / [`generate`]: the decision procedure and a seeded
//!   generator of family members;
//! - [`json`]: the stable JSON encodings used by the CLI.

pub mod classify;
pub mod error;
pub mod form;
pub mod generate;
pub mod json;
pub mod matrix;
pub mod pencil;
pub mod rational;
pub mod tensor;

pub use error::{Error, Result};
pub use matrix::{QMatrix, QVector};
pub use rational::Rational;
pub use tensor::Tensor;
