mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use spinquant::operators::{coherent_state, rotation_operator, RotationSpec};
use spinquant::random::{random_density, random_rotation, random_sphere_point, random_state, seeded};
use spinquant::sphere::{
    averaged_wigner_with, covariance_check_on, covariance_grid, gauss_legendre, Averager,
    AveragingOptions, LiftBranch, MultipoleCoeffs, SpherePoint, TomographyMap,
};
use spinquant::{DensityMatrix, HilbertParams, SpinOperatorSet, StateVector, WignerLattice};

use common::CMatrix;

fn spin(j: f64) -> HilbertParams {
    HilbertParams::from_spin(j).unwrap()
}

/// Condon-Shortley harmonics for `l <= 2`, written out.
fn ylm(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    let r = match (l, m) {
        (0, 0) => 0.5 / PI.sqrt(),
        (1, 0) => (3.0 / (4.0 * PI)).sqrt() * c,
        (1, 1) => -(3.0 / (8.0 * PI)).sqrt() * s,
        (1, -1) => (3.0 / (8.0 * PI)).sqrt() * s,
        (2, 0) => (5.0 / (16.0 * PI)).sqrt() * (3.0 * c * c - 1.0),
        (2, 1) => -(15.0 / (8.0 * PI)).sqrt() * s * c,
        (2, -1) => (15.0 / (8.0 * PI)).sqrt() * s * c,
        (2, 2) | (2, -2) => (15.0 / (32.0 * PI)).sqrt() * s * s,
        _ => unreachable!(),
    };
    e * r
}

/// Haar average written as a plain triple loop over Euler angles, with the
/// lattice mapped to the sphere by hand (`phi0 = 0`).
fn brute_force(rho: &DensityMatrix, l: usize, m: i64) -> Complex64 {
    let p = *rho.params();
    let n = p.dim();
    let ops = SpinOperatorSet::new(p);
    let steps = 12;
    let (nodes, weights) = gauss_legendre(12);
    let mut acc = Complex64::new(0.0, 0.0);
    for ia in 0..steps {
        let alpha = 2.0 * PI * ia as f64 / steps as f64;
        for ig in 0..steps {
            let gamma = 2.0 * PI * ig as f64 / steps as f64;
            for (x, wb) in nodes.iter().zip(&weights) {
                let beta = x.acos();
                let r = RotationSpec::euler(alpha, beta, gamma);
                let u = rotation_operator(&r, &ops);
                let lattice = WignerLattice::from_operator(p, &(u.adjoint() * rho.matrix() * &u));
                let rm = r.matrix();
                for xi in 0..2 * n {
                    for yi in 0..2 * n {
                        let mut xi_t = p.hbar() * yi as f64 / 2.0;
                        if yi == 2 * n - 1 {
                            xi_t -= 2.0 * p.s();
                        }
                        let ct = 1.0 - (xi_t + p.hbar() / 2.0) / p.s();
                        let st = (1.0 - ct * ct).max(0.0).sqrt();
                        let ph = PI * xi as f64 / n as f64;
                        let v = rm * nalgebra::Vector3::new(st * ph.cos(), st * ph.sin(), ct);
                        let theta = v.z.clamp(-1.0, 1.0).acos();
                        let phi = v.y.atan2(v.x);
                        acc += ylm(l, m, theta, phi).conj() * lattice.weight(xi, yi) * (wb / 2.0);
                    }
                }
            }
        }
    }
    acc / (steps * steps) as f64 / p.s()
}

#[test]
fn averaging_matches_brute_force() {
    for j in [0.5, 1.0] {
        let rho = random_density(spin(j), &mut seeded(7));
        let c = averaged_wigner_with(&rho, &AveragingOptions::default().with_lmax(2)).unwrap();
        for l in 0..=2usize {
            for m in -(l as i64)..=l as i64 {
                let want = brute_force(&rho, l, m);
                assert!(
                    (c.get(l, m) - want).norm() < 1e-12,
                    "j={j} ({l},{m}): {} vs {want}",
                    c.get(l, m)
                );
            }
        }
    }
}

#[test]
fn band_limit_up_to_spin_three() {
    for tj in 1..=6usize {
        let p = spin(tj as f64 / 2.0);
        let opts = AveragingOptions::default().with_lmax(tj + 2).with_band(tj + 2);
        let psi = random_state(p, &mut seeded(tj as u64));
        let c = averaged_wigner_with(&DensityMatrix::from_state(&psi).unwrap(), &opts).unwrap();
        assert!(c.max_above(tj) < 1e-9, "2j={tj}: {}", c.max_above(tj));
        assert!(c.band_power()[tj] > 1e-6);
    }
}

#[test]
fn monopole_and_reality() {
    let mut rng = seeded(11);
    for tj in 0..=4usize {
        let p = spin(tj as f64 / 2.0).with_hbar(0.8).unwrap();
        for rho in [random_density(p, &mut rng), DensityMatrix::from_state(&random_state(p, &mut rng)).unwrap()] {
            let c = averaged_wigner_with(&rho, &AveragingOptions::default()).unwrap();
            assert!((c.get(0, 0).re - MultipoleCoeffs::expected_monopole(&p)).abs() < 1e-10);
            assert!(c.get(0, 0).im.abs() < 1e-12);
            assert!(c.reality_defect() < 1e-12);
        }
    }
}

#[test]
fn maximally_mixed_is_uniform() {
    let mut rng = seeded(3);
    for tj in 0..=4usize {
        let p = spin(tj as f64 / 2.0).with_hbar(1.7).unwrap();
        let c = averaged_wigner_with(&DensityMatrix::maximally_mixed(p), &AveragingOptions::default()).unwrap();
        let expected = 1.0 / (4.0 * PI * p.s());
        for _ in 0..50 {
            assert!((c.evaluate(&random_sphere_point(&mut rng)) - expected).abs() < 1e-10);
        }
    }
}

#[test]
fn quadrature_is_converged() {
    for tj in 1..=3usize {
        let p = spin(tj as f64 / 2.0);
        let rho = random_density(p, &mut seeded(tj as u64 + 40));
        let base = AveragingOptions::default();
        let a = averaged_wigner_with(&rho, &base).unwrap();
        let b = averaged_wigner_with(&rho, &base.with_band(2 * base.resolved_band(&p))).unwrap();
        assert!(a.max_difference(&b) < 1e-10);
    }
}

#[test]
fn lift_and_threads_are_bitwise_neutral() {
    let p = spin(1.5);
    let rho = random_density(p, &mut seeded(5));
    let base = AveragingOptions::default();
    let a = averaged_wigner_with(&rho, &base).unwrap();
    let b = averaged_wigner_with(&rho, &base.with_lift(LiftBranch::Negated)).unwrap();
    let c = averaged_wigner_with(&rho, &base.serial()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn phi0_drops_out() {
    for phi0 in [0.0, 0.4, 2.0 * PI / 3.0, 4.0 * PI / 3.0, 5.9] {
        let p = spin(1.0).with_phi0(phi0).unwrap();
        let q = spin(1.0);
        let coeffs = random_state(q, &mut seeded(9)).into_coeffs();
        let a = DensityMatrix::from_state(&StateVector::new(p, coeffs.clone()).unwrap()).unwrap();
        let b = DensityMatrix::from_state(&StateVector::new(q, coeffs).unwrap()).unwrap();
        let opts = AveragingOptions::default();
        let ca = averaged_wigner_with(&a, &opts).unwrap();
        let cb = averaged_wigner_with(&b, &opts).unwrap();
        assert!(ca.max_difference(&cb) < 1e-12, "phi0 = {phi0}");
        let map = TomographyMap::new(p);
        assert_eq!(map.rank(), 9, "phi0 = {phi0}");
    }
}

#[test]
fn coherent_states_peak_along_their_axis() {
    let p = spin(1.5);
    let grid = covariance_grid();
    for (theta, phi) in [(0.7, 1.1), (2.5, 4.0), (1.2, 5.5)] {
        let psi = coherent_state(p, theta, phi);
        let c = averaged_wigner_with(&DensityMatrix::from_state(&psi).unwrap(), &AveragingOptions::default()).unwrap();
        let peak = c.evaluate(&SpherePoint::new(theta, phi));
        assert!(grid.iter().all(|q| c.evaluate(q) <= peak + 1e-12));
        let dipole = nalgebra::Vector3::new(
            -(c.get(1, 1).re) * 2.0f64.sqrt(),
            c.get(1, 1).im * 2.0f64.sqrt(),
            c.get(1, 0).re,
        );
        let axis = SpherePoint::new(theta, phi).unit_vector();
        assert!((dipole.normalize() - axis).norm() < 1e-10);
    }
}

#[test]
fn covariance_under_random_rotations() {
    let mut rng = seeded(21);
    let grid = covariance_grid();
    for tj in 1..=3usize {
        let p = spin(tj as f64 / 2.0);
        for _ in 0..20 {
            let psi = random_state(p, &mut rng);
            let r = random_rotation(&mut rng);
            let err = covariance_check_on(&psi, &r, &grid, &AveragingOptions::default()).unwrap();
            assert!(err < 1e-9, "2j={tj}: {err}");
        }
    }
}

#[test]
fn map_ranks() {
    for (j, full, traceless) in [(0.0, 1, 0), (0.5, 4, 3), (1.0, 9, 8), (1.5, 16, 15)] {
        let map = TomographyMap::new(spin(j));
        assert_eq!(map.rank(), full, "j = {j}");
        assert_eq!(map.traceless_rank(), traceless, "j = {j}");
    }
}

#[test]
fn map_agrees_with_averager() {
    let p = spin(1.0);
    let map = TomographyMap::new(p);
    let avg = Averager::new(p, &AveragingOptions::default());
    let op = CMatrix::from_fn(3, 3, |a, b| Complex64::new((a + 2 * b) as f64, a as f64 - b as f64));
    assert!(map.apply(&op).max_difference(&avg.average(&op)) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn averaging_is_linear(tj in 0usize..=3, seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let p = spin(tj as f64 / 2.0);
        let mut rng = seeded(seed);
        let x = random_density(p, &mut rng);
        let y = random_density(p, &mut rng);
        let avg = Averager::new(p, &AveragingOptions::default());
        let combo = x.matrix() * Complex64::new(a, 0.0) + y.matrix() * Complex64::new(b, 0.0);
        let lhs = avg.average(&combo);
        let (cx, cy) = (avg.average(x.matrix()), avg.average(y.matrix()));
        let gap = lhs
            .iter()
            .map(|(l, m, c)| (c - cx.get(l, m) * a - cy.get(l, m) * b).norm())
            .fold(0.0, f64::max);
        prop_assert!(gap < 1e-12);
    }

    #[test]
    fn reconstruction_round_trip(tj in 0usize..=3, seed in any::<u64>()) {
        let p = spin(tj as f64 / 2.0);
        let rho = random_density(p, &mut seeded(seed));
        let c = averaged_wigner_with(&rho, &AveragingOptions::default()).unwrap();
        let r = TomographyMap::new(p).reconstruct(&c).unwrap();
        let diff = r.matrix() - rho.matrix();
        prop_assert!(diff.svd(false, false).singular_values.max() < 1e-9);
        prop_assert!(r.is_positive());
    }

    #[test]
    fn rotated_states_reconstruct_rotated(seed in any::<u64>()) {
        let p = spin(1.0);
        let mut rng = seeded(seed);
        let rho = random_density(p, &mut rng);
        let u = rotation_operator(&random_rotation(&mut rng), &SpinOperatorSet::new(p));
        let rotated = rho.conjugate(&u);
        let c = averaged_wigner_with(&rotated, &AveragingOptions::default()).unwrap();
        let r = TomographyMap::new(p).reconstruct(&c).unwrap();
        prop_assert!(max_entry(&(r.matrix() - rotated.matrix())) < 1e-9);
    }
}

fn max_entry(m: &CMatrix) -> f64 {
    common::max_abs(m)
}
