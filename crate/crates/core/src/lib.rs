//! Exact rational toolkit for operator-theoretic invariants.
//!
//! The crate computes iterated kernel/range lattices, the α/β/k sequences
//! derived from them, and the scalar invariants (degree of stable iteration,
//! degree of semi-regularity, essential degree, jump, index) of a finite
//! rational matrix. A symbolic layer ([`atoms`]) extends the same calculus to
//! direct sums of shifts and infinite zero/identity operators. The [`kato`]
//! module builds generalized Kato decompositions by cascade peeling and emits
//! certificates that can be re-checked from scratch.

pub mod atoms;
pub mod chains;
pub mod error;
pub mod format;
pub mod gen;
pub mod invariants;
pub mod kato;
pub mod props;
pub mod qlinalg;

pub use error::{Error, Result};
pub use qlinalg::{Rat, RatMatrix, RatSubspace};
