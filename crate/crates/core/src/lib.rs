//! Real-polarization quantization of a spin.
//!
//! The phase space of a spin `j` is a sphere of symplectic area `2 pi N hbar`
//! (`N = 2j + 1`). Unrolled onto the plane with a "position" `xi` (height)
//! and a "momentum" `phi` (longitude), quantum states become Dirac combs
//! whose weights live in `C^N`, with position and momentum weights related by
//! the unitary DFT. On top of that encoding this crate provides:
//!
//! - [`operators`]: Weyl quantization of factorized symbols, which turns the
//!   rotation generators into the familiar ladder matrices, and the
//!   resulting (projective) rotation representation.
//! - [`wigner`]: the lattice Wigner function on a `2N x 2N` cell, with its
//!   marginals.
//! - [`sphere`]: the rotation-averaged Wigner function as a band-limited
//!   spherical-harmonic expansion, and the linear inversion that recovers
//!   the density matrix from it.

pub mod density;
pub mod error;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod operators;
pub mod random;
pub mod sphere;
pub mod verify;
pub mod wigner;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use hilbert::{HilbertParams, MomentumVector, PhasePoint, StateVector};
pub use operators::{RotationSpec, SpinOperatorSet};
pub use sphere::{averaged_wigner, MultipoleCoeffs, SpherePoint};
pub use wigner::WignerLattice;
