//! Qubit registers as bosonic oscillators.
//!
//! A rank-`R` register of two-level sites carries a Boolean gate algebra and,
//! on its one-hot subspace, a truncated harmonic oscillator. The crate builds
//! both layers from single-site operators and exposes independent dense
//! cross-checks.

pub mod algebra;
pub mod bosonic;
pub mod coherent;
pub mod conventions;
pub mod dense;
pub mod error;
pub mod fock;
pub mod gates;
pub mod logic;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
