//! Permutation-symmetric qudit states: single-particle stabilizers, their
//! Jordan structure as an entanglement-class invariant, class representatives,
//! and construction of a homogeneous local operation `A ⊗ ... ⊗ A` from
//! per-particle operations.

pub mod cli;
pub mod error;
pub mod io;
pub mod jordan;
pub mod linalg;
pub mod matfun;
pub mod random;
pub mod stabilizer;
pub mod states;
pub mod symmetrize;
pub mod symspace;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
