//! Rotation-averaged Wigner function.
//!
//! For a rotation `g` let `U_g` be its quantum operator and `R_g` its
//! classical matrix. The lattice Wigner function of the counter-rotated
//! state `U_g^dagger rho U_g` is pulled back along `G_g = R_g^{-1}`, which
//! moves each delta from its lattice point `p` to `R_g p` with its weight
//! unchanged. Averaging over the Haar measure gives
//!
//! ```text
//! W~(p) = int dg sum_i w_i[U_g^dagger rho U_g] delta(p, R_g p_i),
//! ```
//!
//! a smooth density with respect to the area element `s dOmega` that
//! satisfies `W~[U_g rho U_g^dagger](p) = W~[rho](R_g^{-1} p)`. It is stored
//! through its spherical-harmonic coefficients
//! `c_lm = (1/s) int dg sum_i w_i conj(Y_lm(R_g p_i))`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{HilbertParams, PhasePoint, StateVector};
use crate::linalg::CMatrix;
use crate::operators::{
    euler_from_parts, rot_y, rot_z, rotation_operator, RotationSpec, SpinOperatorSet, SpinRotations,
};
use crate::sphere::harmonics::{coeff_count, fill_spherical_harmonics, lm_index, spherical_harmonics};
use crate::sphere::quadrature::SO3Quadrature;
use crate::wigner::WignerLattice;

/// A point of the unit sphere in colatitude/longitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Image of a phase-space point, `cos(theta) = 1 - (xi_t + hbar/2) / s`.
    /// The cell edge `xi_t = -hbar/2` is the north pole.
    ///
    /// Longitude is measured from the `phi0` meridian. The spin operators are
    /// quantized in that frame, so this keeps `W~` consistent with them and
    /// independent of `phi0`.
    pub fn from_phase_point(p: &PhasePoint, params: &HilbertParams) -> Self {
        let t = p.truncate(params);
        let one_minus_cos = (t.xi + params.hbar() / 2.0) / params.s();
        let ct = 1.0 - one_minus_cos;
        let st = (one_minus_cos * (2.0 - one_minus_cos)).max(0.0).sqrt();
        Self {
            theta: st.atan2(ct),
            phi: crate::hilbert::wrap_angle(t.phi - params.phi0()),
        }
    }

    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    pub fn from_unit_vector(v: &Vector3<f64>) -> Self {
        let rho = (v.x * v.x + v.y * v.y).sqrt();
        Self {
            theta: rho.atan2(v.z),
            phi: crate::hilbert::wrap_angle(v.y.atan2(v.x)),
        }
    }

    /// `R p`.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        Self::from_unit_vector(&(r * self.unit_vector()))
    }
}

/// Spherical-harmonic coefficients `c_lm`, `l <= lmax`, of a function on the
/// sphere of a spin system.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleCoeffs {
    params: HilbertParams,
    lmax: usize,
    coeffs: Vec<Complex64>,
}

impl MultipoleCoeffs {
    pub fn zeros(params: HilbertParams, lmax: usize) -> Self {
        Self {
            params,
            lmax,
            coeffs: vec![Complex64::new(0.0, 0.0); coeff_count(lmax)],
        }
    }

    /// Coefficients in `l`-major order (`l^2 + l + m`).
    pub fn from_vec(params: HilbertParams, lmax: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != coeff_count(lmax) {
            return Err(Error::LengthMismatch {
                expected: coeff_count(lmax),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            params,
            lmax,
            coeffs,
        })
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_lm`, zero beyond `lmax`.
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[lm_index(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, value: Complex64) -> Result<()> {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return Err(Error::InvalidParameter {
                name: "l, m",
                reason: format!("({l}, {m}) outside lmax = {}", self.lmax),
            });
        }
        self.coeffs[lm_index(l, m)] = value;
        Ok(())
    }

    /// `(l, m, c_lm)` for every stored coefficient.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.lmax).flat_map(move |l| {
            (-(l as i64)..=l as i64).map(move |m| (l, m, self.coeffs[lm_index(l, m)]))
        })
    }

    /// The value `c_00` takes for every normalized state: `1 / (s sqrt(4 pi))`,
    /// so that the integral of `W~` against `s dOmega` is 1.
    pub fn expected_monopole(params: &HilbertParams) -> f64 {
        1.0 / (params.s() * (4.0 * std::f64::consts::PI).sqrt())
    }

    /// Largest `|c_lm - (-1)^m conj(c_l,-m)|`.
    pub fn reality_defect(&self) -> f64 {
        self.iter()
            .filter(|&(_, m, _)| m > 0)
            .map(|(l, m, c)| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                (c - self.get(l, -m).conj() * sign).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|c_lm|` over `l > above`.
    pub fn max_above(&self, above: usize) -> f64 {
        self.iter()
            .filter(|&(l, _, _)| l > above)
            .map(|(_, _, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// `sum_m |c_lm|^2` for each `l`.
    pub fn band_power(&self) -> Vec<f64> {
        (0..=self.lmax)
            .map(|l| {
                (-(l as i64)..=l as i64)
                    .map(|m| self.get(l, m).norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// Copy restricted to `l <= lmax`.
    pub fn truncated(&self, lmax: usize) -> Self {
        let lmax = lmax.min(self.lmax);
        Self {
            params: self.params,
            lmax,
            coeffs: self.coeffs[..coeff_count(lmax)].to_vec(),
        }
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        let lmax = self.lmax.max(other.lmax);
        (0..=lmax)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .map(|(l, m)| (self.get(l, m) - other.get(l, m)).norm())
            .fold(0.0, f64::max)
    }

    /// `sum c_lm Y_lm(p)`, complex.
    pub fn evaluate_complex(&self, p: &SpherePoint) -> Complex64 {
        let y = spherical_harmonics(self.lmax, &p.unit_vector());
        self.coeffs.iter().zip(&y).map(|(c, y)| c * y).sum()
    }

    /// `W~(p)`; the imaginary part vanishes for real functions.
    pub fn evaluate(&self, p: &SpherePoint) -> f64 {
        self.evaluate_complex(p).re
    }
}

/// Which of the two lifts `+U` / `-U` of each rotation to use. The averaged
/// function is the same for both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftBranch {
    #[default]
    Principal,
    Negated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AveragingOptions {
    /// Highest multipole computed; defaults to `2j`.
    pub lmax: Option<usize>,
    /// Quadrature band; defaults to `2j + lmax`, the degree of the integrand.
    pub band: Option<usize>,
    pub lift: LiftBranch,
    /// Spread quadrature nodes over threads. Partial sums are reduced in a
    /// fixed order, so the result is bitwise independent of this flag.
    pub parallel: bool,
}

impl Default for AveragingOptions {
    fn default() -> Self {
        Self {
            lmax: None,
            band: None,
            lift: LiftBranch::Principal,
            parallel: true,
        }
    }
}

impl AveragingOptions {
    pub fn with_lmax(mut self, lmax: usize) -> Self {
        self.lmax = Some(lmax);
        self
    }

    pub fn with_band(mut self, band: usize) -> Self {
        self.band = Some(band);
        self
    }

    pub fn with_lift(mut self, lift: LiftBranch) -> Self {
        self.lift = lift;
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn resolved_lmax(&self, params: &HilbertParams) -> usize {
        self.lmax.unwrap_or(params.twice_spin())
    }

    pub fn resolved_band(&self, params: &HilbertParams) -> usize {
        self.band
            .unwrap_or(params.twice_spin() + self.resolved_lmax(params))
    }
}

/// `W~[rho]` with default options.
pub fn averaged_wigner(rho: &DensityMatrix) -> Result<MultipoleCoeffs> {
    averaged_wigner_with(rho, &AveragingOptions::default())
}

pub fn averaged_wigner_with(rho: &DensityMatrix, opts: &AveragingOptions) -> Result<MultipoleCoeffs> {
    Ok(Averager::new(*rho.params(), opts).average(rho.matrix()))
}

/// Precomputed pieces of the averaging map for one `H_N`: lattice points on
/// the sphere, the quadrature, and the `y`-rotation for each polar node.
#[derive(Debug, Clone)]
pub struct Averager {
    params: HilbertParams,
    lmax: usize,
    parallel: bool,
    negate: bool,
    quadrature: SO3Quadrature,
    rotations: SpinRotations,
    y_rotations: Vec<CMatrix>,
    points: Vec<Vector3<f64>>,
}

impl Averager {
    pub fn new(params: HilbertParams, opts: &AveragingOptions) -> Self {
        let lmax = opts.resolved_lmax(&params);
        let quadrature = SO3Quadrature::new(opts.resolved_band(&params));
        let rotations = SpinRotations::new(&SpinOperatorSet::new(params));
        let y_rotations = quadrature
            .polar()
            .iter()
            .map(|&(beta, _)| rotations.y_rotation(beta))
            .collect();
        let side = 2 * params.dim();
        let probe = WignerLattice::from_operator(params, &CMatrix::identity(params.dim(), params.dim()));
        let points = (0..side)
            .flat_map(|x| (0..side).map(move |y| (x, y)))
            .map(|(x, y)| SpherePoint::from_phase_point(&probe.phase_point(x, y), &params).unit_vector())
            .collect();
        Self {
            params,
            lmax,
            parallel: opts.parallel,
            negate: opts.lift == LiftBranch::Negated,
            quadrature,
            rotations,
            y_rotations,
            points,
        }
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn quadrature(&self) -> &SO3Quadrature {
        &self.quadrature
    }

    /// Averages the lattice Wigner function of an arbitrary `N x N` operator.
    /// Linear in `op`; for hermitian `op` the result is a real function.
    pub fn average(&self, op: &CMatrix) -> MultipoleCoeffs {
        let n_az = self.quadrature.azimuths().len();
        let tasks: Vec<(usize, usize)> = (0..self.quadrature.polar().len())
            .flat_map(|ib| (0..n_az).map(move |ig| (ib, ig)))
            .collect();
        let partials: Vec<Vec<Complex64>> = if self.parallel {
            tasks.par_iter().map(|&(ib, ig)| self.task(op, ib, ig)).collect()
        } else {
            tasks.iter().map(|&(ib, ig)| self.task(op, ib, ig)).collect()
        };
        let mut acc = vec![Complex64::new(0.0, 0.0); coeff_count(self.lmax)];
        for part in &partials {
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
        let inv_s = 1.0 / self.params.s();
        acc.iter_mut().for_each(|c| *c *= inv_s);
        MultipoleCoeffs {
            params: self.params,
            lmax: self.lmax,
            coeffs: acc,
        }
    }

    /// Sum over the `alpha` nodes for fixed `(beta, gamma)`.
    ///
    /// The outer factor `Rz(alpha)` only multiplies `Y_lm` by `e^{i m alpha}`,
    /// so the harmonics are tabulated once at `Ry(beta) Rz(gamma) p_i`.
    fn task(&self, op: &CMatrix, ib: usize, ig: usize) -> Vec<Complex64> {
        let azimuths = self.quadrature.azimuths();
        let (beta, _) = self.quadrature.polar()[ib];
        let weight = self.quadrature.node_weight(ib);
        let gamma = azimuths[ig];
        let count = coeff_count(self.lmax);
        let inner = rot_y(beta) * rot_z(gamma);
        let mut table = vec![Complex64::new(0.0, 0.0); count * self.points.len()];
        for (row, p) in table.chunks_mut(count).zip(&self.points) {
            fill_spherical_harmonics(self.lmax, &(inner * p), row);
            row.iter_mut().for_each(|y| *y = y.conj());
        }
        let right = self.rotations.z_phases(gamma);
        let lmax = self.lmax as i64;
        let mut acc = vec![Complex64::new(0.0, 0.0); count];
        let mut partial = vec![Complex64::new(0.0, 0.0); count];
        for &alpha in azimuths {
            let mut u = euler_from_parts(&self.y_rotations[ib], &self.rotations.z_phases(alpha), &right);
            if self.negate {
                u.neg_mut();
            }
            let rotated = u.adjoint() * op * &u;
            let lattice = WignerLattice::from_operator(self.params, &rotated);
            partial.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            for (w, row) in lattice.weights().iter().zip(table.chunks(count)) {
                for (a, y) in partial.iter_mut().zip(row) {
                    *a += y * w;
                }
            }
            let phases: Vec<Complex64> = (-lmax..=lmax)
                .map(|m| Complex64::from_polar(weight, -(m as f64) * alpha))
                .collect();
            for l in 0..=self.lmax {
                for m in -(l as i64)..=l as i64 {
                    let i = lm_index(l, m);
                    acc[i] += partial[i] * phases[(m + lmax) as usize];
                }
            }
        }
        acc
    }
}

/// Test grid for covariance checks: 9 colatitudes including both poles times
/// 12 longitudes.
pub fn covariance_grid() -> Vec<SpherePoint> {
    let mut pts = Vec::new();
    for i in 0..=8 {
        for q in 0..12 {
            pts.push(SpherePoint::new(
                std::f64::consts::PI * i as f64 / 8.0,
                std::f64::consts::TAU * q as f64 / 12.0,
            ));
        }
    }
    pts
}

/// `sup_p |W~[U psi](p) - W~[psi](R^{-1} p)|` over [`covariance_grid`].
pub fn covariance_check(psi: &StateVector, r: &RotationSpec) -> Result<f64> {
    covariance_check_on(psi, r, &covariance_grid(), &AveragingOptions::default())
}

pub fn covariance_check_on(
    psi: &StateVector,
    r: &RotationSpec,
    grid: &[SpherePoint],
    opts: &AveragingOptions,
) -> Result<f64> {
    let params = *psi.params();
    let rho = DensityMatrix::from_state(psi)?;
    let u = rotation_operator(r, &SpinOperatorSet::new(params));
    let rotated = rho.conjugate(&u);
    let averager = Averager::new(params, opts);
    let before = averager.average(rho.matrix());
    let after = averager.average(rotated.matrix());
    let inverse = r.matrix().transpose();
    Ok(grid
        .iter()
        .map(|p| (after.evaluate(p) - before.evaluate(&p.rotated(&inverse))).abs())
        .fold(0.0, f64::max))
}
