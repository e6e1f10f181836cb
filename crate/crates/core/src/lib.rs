//! Bipartite Hamiltonians, pure-state dynamics, and detection of
//! interaction-free (IFE), decoherence-free (DFS) and generalized
//! interaction-free (GIFE) evolutions.
//!
//! The crate is `no_std` and only needs `alloc`. All operations are pure
//! functions over dense complex matrices; IO, file formats and the command
//! line live in the companion `gife` crate.

#![no_std]

extern crate alloc;

pub mod detect;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod gife;
pub mod model;
pub mod numerics;
pub mod random;

pub use error::{Error, Result};
pub use model::{BipartiteDims, BipartiteHamiltonian, PureState};
pub use numerics::{CMatrix, CVector, EigenSystem, Side, C64};

/// Default tolerance used by every verdict unless overridden.
pub const DEFAULT_TOL: f64 = 1e-8;
