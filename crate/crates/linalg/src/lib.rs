//! Exact integer linear algebra for chain complexes.
//!
//! Everything here is exact: coefficients are arbitrary-precision
//! [`Int`]s, eliminations use unit pivots with a deterministic order, and
//! work is bounded by a [`Budget`] so runaway fill-in or coefficient growth
//! is reported as [`LinalgError::Resource`] rather than exhausting memory.

pub mod budget;
pub mod chain;
pub mod dense;
mod elim;
pub mod error;
pub mod group;
pub mod int;
pub mod kernel;
pub mod modp;
pub mod snf;
pub mod sparse;

pub use budget::Budget;
pub use chain::{ChainComplex, Coefficients, HomologyGroup};
pub use dense::IntMatrix;
pub use error::{LinalgError, Result};
pub use group::AbelianGroup;
pub use int::Int;
pub use kernel::{hermite_coordinates, hermite_rows, kernel_basis, kernel_basis_with, solve_in_basis};
pub use modp::{is_prime, rank_mod_p, rank_mod_p_with};
pub use snf::{invariant_factors, invariant_factors_with, smith_normal_form, SmithForm};
pub use sparse::{read_bundle, write_bundle, SparseIntMatrix, SparseVec};
