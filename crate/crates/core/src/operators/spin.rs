use nalgebra::Vector3;
use num_complex::Complex64;

use crate::hilbert::HilbertParams;
use crate::linalg::{CMatrix, ZERO};

/// The three spin components on `H_N` in the `|m>` basis (`k = j - m`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSet {
    params: HilbertParams,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinOperatorSet {
    /// Closed-form ladder matrices:
    /// `jx|m> = hbar/2 [c_-(m) |m-1> + c_+(m) |m+1>]`,
    /// `jy|m> = i hbar/2 [c_-(m) |m-1> - c_+(m) |m+1>]`,
    /// `jz|m> = m hbar |m>`, with `c_-(m) = sqrt((j+m)(j-m+1))` and
    /// `c_+(m) = sqrt((j+m+1)(j-m))`.
    pub fn new(params: HilbertParams) -> Self {
        let n = params.dim();
        let hbar = params.hbar();
        let half = hbar / 2.0;
        let mut jx = CMatrix::from_element(n, n, ZERO);
        let mut jy = CMatrix::from_element(n, n, ZERO);
        let mut jz = CMatrix::from_element(n, n, ZERO);
        for k in 0..n {
            jz[(k, k)] = Complex64::new(params.m_of(k) * hbar, 0.0);
            if k + 1 < n {
                // |m> -> |m-1>: (j+m)(j-m+1) = (N-1-k)(k+1)
                let lower = (((n - 1 - k) * (k + 1)) as f64).sqrt();
                jx[(k + 1, k)] = Complex64::new(half * lower, 0.0);
                jy[(k + 1, k)] = Complex64::new(0.0, half * lower);
            }
            if k > 0 {
                // |m> -> |m+1>: (j+m+1)(j-m) = (N-k) k
                let raise = (((n - k) * k) as f64).sqrt();
                jx[(k - 1, k)] = Complex64::new(half * raise, 0.0);
                jy[(k - 1, k)] = Complex64::new(0.0, -half * raise);
            }
        }
        Self { params, jx, jy, jz }
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    /// `n . J` for a 3-vector `n` (not necessarily unit).
    pub fn along(&self, n: &Vector3<f64>) -> CMatrix {
        self.jx.scale(n.x) + self.jy.scale(n.y) + self.jz.scale(n.z)
    }

    /// `J_a` for `a = 0, 1, 2`.
    pub fn component(&self, a: usize) -> &CMatrix {
        match a {
            0 => &self.jx,
            1 => &self.jy,
            2 => &self.jz,
            _ => panic!("spin component index {a} out of range"),
        }
    }

    /// `jx^2 + jy^2 + jz^2`.
    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    /// `hbar^2 j (j + 1)`.
    pub fn casimir_value(&self) -> f64 {
        let j = self.params.spin();
        self.params.hbar().powi(2) * j * (j + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spin_half_is_pauli() {
        for hbar in [1.0, 2.0] {
            let p = HilbertParams::from_spin(0.5).unwrap().with_hbar(hbar).unwrap();
            let ops = SpinOperatorSet::new(p);
            let h = hbar / 2.0;
            assert_eq!(ops.jz, CMatrix::from_row_slice(2, 2, &[c(h, 0.), ZERO, ZERO, c(-h, 0.)]));
            assert_eq!(ops.jx, CMatrix::from_row_slice(2, 2, &[ZERO, c(h, 0.), c(h, 0.), ZERO]));
            assert_eq!(ops.jy, CMatrix::from_row_slice(2, 2, &[ZERO, c(0., -h), c(0., h), ZERO]));
        }
    }

    #[test]
    fn spin_one_jx_on_m_zero() {
        let p = HilbertParams::from_spin(1.0).unwrap();
        let ops = SpinOperatorSet::new(p);
        // |m=0> is k = 1; result (1/sqrt2)(|1> + |-1>)
        let col = ops.jx.column(1);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((col[0] - c(r, 0.)).norm() < 1e-15);
        assert_eq!(col[1], ZERO);
        assert!((col[2] - c(r, 0.)).norm() < 1e-15);
    }

    #[test]
    fn trivial_spin_zero() {
        let p = HilbertParams::new(1).unwrap();
        let ops = SpinOperatorSet::new(p);
        assert_eq!(ops.jx[(0, 0)], ZERO);
        assert_eq!(ops.jy[(0, 0)], ZERO);
        assert_eq!(ops.jz[(0, 0)], ZERO);
    }

    #[test]
    fn algebra_at_hbar_two() {
        let p = HilbertParams::from_spin(2.5).unwrap().with_hbar(2.0).unwrap();
        let ops = SpinOperatorSet::new(p);
        let ih = c(0.0, 2.0);
        let lhs = commutator(&ops.jx, &ops.jy);
        assert!((lhs - ops.jz.map(|z| z * ih)).norm() < 1e-12);
        let cas = ops.casimir() - CMatrix::identity(6, 6).scale(ops.casimir_value());
        assert!(cas.norm() < 1e-11);
    }
}
