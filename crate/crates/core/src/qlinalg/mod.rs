//! Exact scalar, vector, matrix and canonical-subspace arithmetic over Q.

mod matrix;
mod rat;
mod subspace;

pub use matrix::{
    dot, is_zero_vector, rref, rref_with_pivots, solve_canonical, unit_vector, RatMatrix,
    RatVector,
};
pub use rat::Rat;
pub use subspace::{image, kernel, restrict, RatSubspace};
