//! Rotations: classical `SO(3)` matrices and their (projective) quantum
//! counterparts `exp(-i angle n.J / hbar)`.

use nalgebra::{DVector, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertParams, StateVector};
use crate::linalg::{hermitian_eigen, spectral_exp, CMatrix};
use crate::operators::SpinOperatorSet;

const AXIS_TOLERANCE: f64 = 1e-12;

/// An element of `SO(3)`, given either as axis and angle or as `z-y-z` Euler
/// angles `R = Rz(alpha) Ry(beta) Rz(gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotationSpec {
    AxisAngle { axis: Vector3<f64>, angle: f64 },
    Euler { alpha: f64, beta: f64, gamma: f64 },
}

impl RotationSpec {
    pub fn identity() -> Self {
        Self::Euler {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        }
    }

    /// Requires `|axis| = 1` to within `1e-12`.
    pub fn axis_angle(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if (norm - 1.0).abs() > AXIS_TOLERANCE {
            return Err(Error::AxisNotUnit(norm));
        }
        Ok(Self::AxisAngle { axis, angle })
    }

    /// Like [`RotationSpec::axis_angle`] but normalizes the axis first.
    pub fn about(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::AxisNotUnit(norm));
        }
        Ok(Self::AxisAngle {
            axis: axis / norm,
            angle,
        })
    }

    pub fn euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::Euler { alpha, beta, gamma }
    }

    pub fn z(angle: f64) -> Self {
        Self::AxisAngle {
            axis: Vector3::z(),
            angle,
        }
    }

    /// Classical rotation matrix acting on column vectors.
    pub fn matrix(&self) -> Matrix3<f64> {
        match *self {
            Self::AxisAngle { axis, angle } => axis_angle_matrix(&axis, angle),
            Self::Euler { alpha, beta, gamma } => rot_z(alpha) * rot_y(beta) * rot_z(gamma),
        }
    }

    /// `z-y-z` Euler angles of an orthogonal matrix with determinant 1.
    pub fn from_matrix(r: &Matrix3<f64>) -> Self {
        let sb = (r[(0, 2)].powi(2) + r[(1, 2)].powi(2)).sqrt();
        let beta = sb.atan2(r[(2, 2)]);
        if sb > 1e-12 {
            Self::Euler {
                alpha: r[(1, 2)].atan2(r[(0, 2)]),
                beta,
                gamma: r[(2, 1)].atan2(-r[(2, 0)]),
            }
        } else if r[(2, 2)] > 0.0 {
            Self::Euler {
                alpha: r[(1, 0)].atan2(r[(0, 0)]),
                beta: 0.0,
                gamma: 0.0,
            }
        } else {
            Self::Euler {
                alpha: (-r[(1, 0)]).atan2(-r[(0, 0)]),
                beta: std::f64::consts::PI,
                gamma: 0.0,
            }
        }
    }

    /// `self` applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_matrix(&(self.matrix() * other.matrix()))
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Self::AxisAngle { axis, angle } => Self::AxisAngle {
                axis,
                angle: -angle,
            },
            Self::Euler { alpha, beta, gamma } => Self::Euler {
                alpha: -gamma,
                beta: -beta,
                gamma: -alpha,
            },
        }
    }
}

pub(crate) fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub(crate) fn rot_y(b: f64) -> Matrix3<f64> {
    let (s, c) = b.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn axis_angle_matrix(n: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    let k = n.cross_matrix();
    Matrix3::identity() + k * s + k * k * (1.0 - c)
}

/// Quantum rotations on one `H_N`, with the `jy` eigenbasis cached so that
/// Euler rotations cost two diagonal phases and one spectral product.
#[derive(Debug, Clone)]
pub struct SpinRotations {
    ops: SpinOperatorSet,
    m_values: Vec<f64>,
    jy_values: DVector<f64>,
    jy_vectors: CMatrix,
}

impl SpinRotations {
    pub fn new(ops: &SpinOperatorSet) -> Self {
        let p = *ops.params();
        let (values, vectors) = hermitian_eigen(&ops.jy.unscale(p.hbar()));
        Self {
            ops: ops.clone(),
            m_values: (0..p.dim()).map(|k| p.m_of(k)).collect(),
            jy_values: values,
            jy_vectors: vectors,
        }
    }

    pub fn ops(&self) -> &SpinOperatorSet {
        &self.ops
    }

    /// Diagonal of `exp(-i alpha jz / hbar)`.
    pub fn z_phases(&self, alpha: f64) -> Vec<Complex64> {
        self.m_values
            .iter()
            .map(|&m| Complex64::from_polar(1.0, -alpha * m))
            .collect()
    }

    /// `exp(-i beta jy / hbar)`.
    pub fn y_rotation(&self, beta: f64) -> CMatrix {
        spectral_exp(&self.jy_values, &self.jy_vectors, beta)
    }

    /// `exp(-i alpha jz) exp(-i beta jy) exp(-i gamma jz)` (units of hbar).
    pub fn euler(&self, alpha: f64, beta: f64, gamma: f64) -> CMatrix {
        let uy = self.y_rotation(beta);
        euler_from_parts(&uy, &self.z_phases(alpha), &self.z_phases(gamma))
    }

    /// The unitary for `r`, defined up to sign when `j` is half-integer.
    pub fn operator(&self, r: &RotationSpec) -> CMatrix {
        match *r {
            RotationSpec::Euler { alpha, beta, gamma } => self.euler(alpha, beta, gamma),
            RotationSpec::AxisAngle { axis, angle } => {
                let gen = self.ops.along(&axis).unscale(self.ops.params().hbar());
                let (values, vectors) = hermitian_eigen(&gen);
                spectral_exp(&values, &vectors, angle)
            }
        }
    }
}

pub(crate) fn euler_from_parts(uy: &CMatrix, left: &[Complex64], right: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(uy.nrows(), uy.ncols(), |a, b| left[a] * uy[(a, b)] * right[b])
}

/// `exp(-(i/hbar) angle n.J)`, composed factor by factor for Euler angles.
pub fn rotation_operator(r: &RotationSpec, ops: &SpinOperatorSet) -> CMatrix {
    SpinRotations::new(ops).operator(r)
}

/// Spin-coherent state pointing along `(theta, phi)`: the highest-weight
/// state `|m = j>` rotated by `Rz(phi) Ry(theta)`.
pub fn coherent_state(params: HilbertParams, theta: f64, phi: f64) -> StateVector {
    let u = rotation_operator(
        &RotationSpec::euler(phi, theta, 0.0),
        &SpinOperatorSet::new(params),
    );
    let mut top = DVector::from_element(params.dim(), Complex64::new(0.0, 0.0));
    top[0] = Complex64::new(1.0, 0.0);
    let psi = u * top;
    StateVector::new(params, psi.iter().copied().collect()).expect("same length")
}

/// Applies `exp(i alpha jz / hbar)`: `psi_k -> e^{i alpha m_k} psi_k`.
///
/// Up to the global phase `e^{i alpha j}` this is the multiplication of the
/// position comb by `e^{-i alpha xi / hbar}`.
pub fn rotate_state_z(state: &StateVector, alpha: f64) -> StateVector {
    let p = *state.params();
    let coeffs = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::from_polar(1.0, alpha * p.m_of(k)))
        .collect();
    StateVector::new(p, coeffs).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitarity_defect, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    fn ops(j: f64) -> SpinOperatorSet {
        SpinOperatorSet::new(HilbertParams::from_spin(j).unwrap())
    }

    #[test]
    fn zero_angle_is_identity() {
        let o = ops(1.5);
        for r in [
            RotationSpec::identity(),
            RotationSpec::axis_angle(Vector3::new(0.0, 0.6, 0.8), 0.0).unwrap(),
        ] {
            let u = rotation_operator(&r, &o);
            assert!((u - CMatrix::identity(4, 4)).norm() < 1e-14);
        }
    }

    #[test]
    fn z_rotation_is_diagonal_phase() {
        let o = ops(1.0);
        let alpha = 0.83;
        // exp(+i alpha jz) is the rotation by -alpha
        let u = rotation_operator(&RotationSpec::z(-alpha), &o);
        for k in 0..3 {
            let m = 1.0 - k as f64;
            let expect = Complex64::from_polar(1.0, alpha * m);
            assert!((u[(k, k)] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn full_turn_sign() {
        let u = rotation_operator(&RotationSpec::z(TAU), &ops(0.5));
        assert!((u + CMatrix::identity(2, 2)).norm() < 1e-12);
        let u = rotation_operator(&RotationSpec::z(TAU), &ops(1.0));
        assert!((u - CMatrix::identity(3, 3)).norm() < 1e-12);
        let u = rotation_operator(&RotationSpec::euler(0.0, TAU, 0.0), &ops(1.5));
        assert!((u + CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn rotate_state_z_examples() {
        let p = HilbertParams::from_spin(0.5).unwrap();
        let s = StateVector::new(p, vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        assert_eq!(rotate_state_z(&s, 0.0), s);
        let r = rotate_state_z(&s, TAU);
        for (a, b) in r.coeffs().iter().zip(s.coeffs()) {
            assert!((a + b).norm() < 1e-15);
        }
        let basis = StateVector::spin_basis(p, -0.5).unwrap();
        let r = rotate_state_z(&basis, 1.0);
        assert_eq!(r.coeffs()[0], ZERO);
        assert!((r.coeffs()[1] - Complex64::from_polar(1.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn rotate_state_z_matches_operator() {
        let p = HilbertParams::from_spin(1.5).unwrap();
        let o = SpinOperatorSet::new(p);
        let s = StateVector::new(
            p,
            vec![
                Complex64::new(0.5, 0.1),
                Complex64::new(-0.3, 0.4),
                Complex64::new(0.2, -0.2),
                Complex64::new(0.1, 0.6),
            ],
        )
        .unwrap()
        .normalized()
        .unwrap();
        let alpha = 2.1;
        let u = rotation_operator(&RotationSpec::z(-alpha), &o);
        let v = u * nalgebra::DVector::from_column_slice(s.coeffs());
        let r = rotate_state_z(&s, alpha);
        for (a, b) in r.coeffs().iter().zip(v.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn euler_roundtrip_through_matrix() {
        for (a, b, g) in [(0.3, 1.1, -2.0), (2.9, 0.2, 0.4), (-1.0, 3.0, 1.5), (0.7, 0.0, 0.2), (0.7, PI, 0.2)] {
            let r = RotationSpec::euler(a, b, g);
            let back = RotationSpec::from_matrix(&r.matrix());
            assert!((back.matrix() - r.matrix()).norm() < 1e-13);
        }
    }

    #[test]
    fn axis_angle_and_euler_agree_on_y() {
        let o = ops(2.0);
        let a = rotation_operator(&RotationSpec::axis_angle(Vector3::y(), 0.9).unwrap(), &o);
        let b = rotation_operator(&RotationSpec::euler(0.0, 0.9, 0.0), &o);
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn operators_are_unitary() {
        let o = ops(3.5);
        let u = rotation_operator(&RotationSpec::euler(0.4, 2.2, -1.3), &o);
        assert!(unitarity_defect(&u) < 1e-12);
        let u = rotation_operator(
            &RotationSpec::about(Vector3::new(1.0, -2.0, 0.5), 4.0).unwrap(),
            &o,
        );
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(matches!(
            RotationSpec::axis_angle(Vector3::new(1.0, 1.0, 0.0), 1.0),
            Err(Error::AxisNotUnit(_))
        ));
        assert!(RotationSpec::about(Vector3::zeros(), 1.0).is_err());
    }

    #[test]
    fn inverse_inverts() {
        for r in [
            RotationSpec::euler(0.3, 1.0, -0.4),
            RotationSpec::about(Vector3::new(1.0, 2.0, 3.0), 0.8).unwrap(),
        ] {
            let prod = r.matrix() * r.inverse().matrix();
            assert!((prod - Matrix3::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn coherent_state_expectations() {
        let p = HilbertParams::from_spin(1.5).unwrap().with_hbar(0.7).unwrap();
        let ops = SpinOperatorSet::new(p);
        let (theta, phi) = (1.1, -2.3);
        let psi = coherent_state(p, theta, phi);
        assert!(psi.is_normalized());
        let v = DVector::from_column_slice(psi.coeffs());
        let mean = |a: &CMatrix| (v.adjoint() * a * &v)[(0, 0)].re;
        let r = 1.5 * 0.7;
        let expect = [
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
            r * theta.cos(),
        ];
        for (a, e) in expect.iter().enumerate() {
            assert!((mean(ops.component(a)) - e).abs() < 1e-12);
        }
        let north = coherent_state(p, 0.0, 0.7);
        assert!((north.coeffs()[0].norm() - 1.0).abs() < 1e-14);
    }
}
