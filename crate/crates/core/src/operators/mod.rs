//! Spin operators obtained by Weyl quantization of the rotation generators,
//! and the rotation representation they integrate to.

mod rotation;
mod spin;
mod weyl;

pub use rotation::{coherent_state, rotate_state_z, rotation_operator, RotationSpec, SpinRotations};
pub(crate) use rotation::{euler_from_parts, rot_y, rot_z};
pub use spin::SpinOperatorSet;
pub use weyl::{classical_height, classical_s, weyl_quantize, FactorizedSymbol, Harmonic, Profile};
