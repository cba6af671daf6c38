//! The rotation-averaged Wigner function on the sphere and its inversion.

mod average;
mod harmonics;
mod quadrature;
mod tomography;

pub use average::{
    averaged_wigner, averaged_wigner_with, covariance_check, covariance_check_on, covariance_grid,
    Averager, AveragingOptions, LiftBranch, MultipoleCoeffs, SpherePoint,
};
pub use harmonics::{coeff_count, lm_index, spherical_harmonic, spherical_harmonics};
pub use quadrature::{gauss_legendre, EulerNode, SO3Quadrature};
pub use tomography::{
    numerical_rank, reconstruct, Reconstruction, TomographyMap, POSITIVITY_TOLERANCE,
    RANK_THRESHOLD, RESIDUAL_THRESHOLD,
};
