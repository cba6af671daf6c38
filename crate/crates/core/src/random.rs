//! Seeded random states and rotations for tests and the CLI.
//!
//! Every sampler takes the generator by reference, so a single seeded
//! `ChaCha8Rng` reproduces a whole run.

use nalgebra::{Matrix3, UnitQuaternion, Vector3, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::hilbert::{HilbertParams, StateVector};
use crate::linalg::CMatrix;
use crate::operators::RotationSpec;
use crate::sphere::SpherePoint;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform (unitarily invariant) pure state.
pub fn random_state<R: Rng + ?Sized>(params: HilbertParams, rng: &mut R) -> StateVector {
    loop {
        let coeffs: Vec<Complex64> = (0..params.dim()).map(|_| gaussian(rng)).collect();
        if let Ok(s) = StateVector::new(params, coeffs).and_then(|s| s.normalized()) {
            return s;
        }
    }
}

/// Hilbert-Schmidt random density matrix `G G^dagger / tr(G G^dagger)` with
/// a square Ginibre `G`. Full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(params: HilbertParams, rng: &mut R) -> DensityMatrix {
    random_density_of_rank(params, params.dim(), rng)
}

/// As [`random_density`] with an `N x rank` Ginibre factor.
pub fn random_density_of_rank<R: Rng + ?Sized>(
    params: HilbertParams,
    rank: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n = params.dim();
    let g = CMatrix::from_fn(n, rank.max(1), |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(params, m.unscale(tr)).expect("Ginibre product is a valid state")
}

/// Haar-distributed rotation, from a uniform unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> RotationSpec {
    let q = loop {
        let v = Vector4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            break v / n;
        }
    };
    let q = UnitQuaternion::new_unchecked(nalgebra::Quaternion::new(q[0], q[1], q[2], q[3]));
    let m: Matrix3<f64> = q.to_rotation_matrix().into_inner();
    RotationSpec::from_matrix(&m)
}

/// Euler angles drawn uniformly from their ranges; not Haar, but covers
/// every parameter combination including `beta` near the poles.
pub fn random_euler<R: Rng + ?Sized>(rng: &mut R) -> RotationSpec {
    use std::f64::consts::{PI, TAU};
    RotationSpec::euler(
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..PI),
        rng.random_range(0.0..TAU),
    )
}

/// Uniform point on the unit sphere.
pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return SpherePoint::from_unit_vector(&(v / n));
        }
    }
}
