//! Localizable genuine multimode entanglement (LGME) of four-mode squeezed
//! vacuum (FMSV) states and their photon-added/-subtracted variants.
//!
//! Two engines cover the two measurement families:
//!
//! - [`gaussian`]: covariance-matrix algebra for the Gaussian pathway —
//!   squeezed-coherent and homodyne measurements conditioned via Schur
//!   complements, symplectic spectra via Williamson invariants, and the
//!   generalized geometric measure (GGM) for pure Gaussian states.
//! - [`fock`] + [`measurement`] + [`entanglement`]: a sparse truncated
//!   Fock-space engine for photon counting on (de-Gaussified) FMSV states,
//!   with GGM computed from Schmidt spectra across all bipartitions.
//!
//! Conventions: ℏ = 1, quadrature ordering `q1, p1, …, qm, pm`, vacuum
//! variance 1/2. All amplitudes in scope are real.
//!
//! The crate is `no_std` (alloc required); IO, file formats, and the CLI
//! live in the companion `lgme-cli` crate.

#![no_std]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod measurement;

pub(crate) mod math;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
