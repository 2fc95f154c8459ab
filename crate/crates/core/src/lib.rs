//! Orthonormal quasi-shearlets on the quincunx lattice.
//!
//! The crate designs the seven 2π-periodic transfer functions `M_0 … M_6`
//! (one scaling channel on `D2·Z²`, six directional channels on `Q·Z²`),
//! verifies the perfect-reconstruction conditions numerically, synthesizes
//! the scaling function and quasi-shearlets, and runs the critically sampled
//! multi-level image transform.

pub mod error;
pub mod fft;
pub mod filterbank;
pub mod format;
pub mod lattice;
pub mod mfunc;
pub mod partition;
pub mod selftest;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
