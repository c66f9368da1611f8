//! Partition complexes, the Lie representation `L_n`, small-group homology
//! with coefficients in it, the Dyer–Lashof word calculus, and the genus
//! classification built on top of them.

pub mod complexes;
pub mod dyer_lashof;
pub mod error;
pub mod genus;
pub mod group_homology;
pub mod lie_module;
pub mod partitions;

pub use error::{Error, Result};
pub use pn_linalg as linalg;
