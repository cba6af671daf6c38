//! The Wigner function of a comb state.
//!
//! It is a doubly periodic array of Dirac deltas at
//! `phi = phi0 + pi x / N`, `xi = hbar y / 2`; one period is the `2N x 2N`
//! cell `x, y = 0 .. 2N - 1`. The weights are
//!
//! ```text
//! w[x, y] = 1/(2N) sum_k conj(psi_k) psi_{y-k} exp(i pi x (2k - y) / N)
//!         = 1/(2N) sum_k conj(psihat_k) psihat_{x-k} exp(-i pi y (2k - x) / N)
//! ```
//!
//! normalized so that the whole cell carries unit mass.

use num_complex::Complex64;
use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{truncate_xi, wrap_angle, HilbertParams, MomentumVector, PhasePoint, StateVector};
use crate::linalg::CMatrix;

/// Largest imaginary part tolerated before a weight is declared non-real.
pub const IMAGINARY_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct WignerLattice {
    params: HilbertParams,
    weights: Vec<f64>,
    max_imaginary: f64,
}

/// One lattice point of the fundamental cell, as emitted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSample {
    pub x: usize,
    pub y: usize,
    pub phi: f64,
    pub xi: f64,
    pub weight: f64,
}

/// `e^{i pi t / N}` for `t = 0 .. 2N - 1`.
fn root_table(n: usize) -> Vec<Complex64> {
    (0..2 * n)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::PI * t as f64 / n as f64))
        .collect()
}

impl WignerLattice {
    /// Position-representation formula.
    pub fn from_position(state: &StateVector) -> Result<Self> {
        state.require_normalized()?;
        let p = *state.params();
        let lattice = Self::build(p, |k, y| state.coeff(k).conj() * state.coeff(y - k), false);
        lattice.require_real()
    }

    /// Momentum-representation formula.
    pub fn from_momentum(state: &MomentumVector) -> Result<Self> {
        state.require_normalized()?;
        let p = *state.params();
        let lattice = Self::build(p, |k, x| state.coeff(k).conj() * state.coeff(x - k), true);
        lattice.require_real()
    }

    /// Mixed state: the weights are linear in `rho`, with `rho_{y-k, k}`
    /// standing in for `psi_{y-k} conj(psi_k)`.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        Self::from_operator(*rho.params(), rho.matrix()).require_real()
    }

    /// Same kernel applied to an arbitrary `N x N` matrix. Weights are real
    /// when `op` is hermitian; the imaginary residue is recorded, not checked.
    pub fn from_operator(params: HilbertParams, op: &CMatrix) -> Self {
        let n = params.dim() as i64;
        Self::build(
            params,
            |k, y| op[((y - k).rem_euclid(n) as usize, k.rem_euclid(n) as usize)],
            false,
        )
    }

    /// Shared kernel. `pair(k, t)` supplies `conj(c_k) c_{t-k}` where `t` is
    /// the row index `y` (position form) or the column index `x` (momentum
    /// form).
    fn build<F>(params: HilbertParams, pair: F, momentum: bool) -> Self
    where
        F: Fn(i64, i64) -> Complex64,
    {
        let n = params.dim();
        let two_n = 2 * n as i64;
        let roots = root_table(n);
        let norm = 1.0 / two_n as f64;
        let mut weights = vec![0.0; (2 * n) * (2 * n)];
        let mut max_imaginary: f64 = 0.0;
        for x in 0..two_n {
            for y in 0..two_n {
                let (t, u) = if momentum { (x, y) } else { (y, x) };
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n as i64 {
                    let e = (u * (2 * k - t)).rem_euclid(two_n) as usize;
                    let phase = if momentum { roots[e].conj() } else { roots[e] };
                    acc += pair(k, t) * phase;
                }
                acc *= norm;
                max_imaginary = max_imaginary.max(acc.im.abs());
                weights[(x * two_n + y) as usize] = acc.re;
            }
        }
        Self {
            params,
            weights,
            max_imaginary,
        }
    }

    fn require_real(self) -> Result<Self> {
        if self.max_imaginary > IMAGINARY_TOLERANCE {
            return Err(Error::ComplexWeight(self.max_imaginary));
        }
        Ok(self)
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    /// Side of the cell, `2N`.
    pub fn side(&self) -> usize {
        2 * self.params.dim()
    }

    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights[x * self.side() + y]
    }

    /// Row-major (`x` outer) weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest discarded imaginary part.
    pub fn max_imaginary(&self) -> f64 {
        self.max_imaginary
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Position of the delta `(x, y)` in the fundamental rectangle. The row
    /// `y = 2N - 1` sits at `xi = -hbar/2`.
    pub fn phase_point(&self, x: usize, y: usize) -> PhasePoint {
        let n = self.params.dim() as f64;
        PhasePoint {
            phi: wrap_angle(self.params.phi0() + std::f64::consts::PI * x as f64 / n),
            xi: truncate_xi(self.params.hbar() * y as f64 / 2.0, &self.params),
        }
    }

    fn row_sum(&self, y: usize) -> f64 {
        (0..self.side()).map(|x| self.weight(x, y)).sum()
    }

    fn column_sum(&self, x: usize) -> f64 {
        (0..self.side()).map(|y| self.weight(x, y)).sum()
    }

    /// Integral over `phi`: the weight of `delta(xi - k hbar)`, i.e. `|psi_k|^2`.
    pub fn marginal_xi(&self) -> Vec<f64> {
        (0..self.params.dim()).map(|k| self.row_sum(2 * k)).collect()
    }

    /// Integral over `xi`: the weight of `delta(phi - phi0 - 2 pi k / N)`,
    /// i.e. `|psihat_k|^2`.
    pub fn marginal_phi(&self) -> Vec<f64> {
        (0..self.params.dim()).map(|k| self.column_sum(2 * k)).collect()
    }

    /// Sums over the half-step rows `y = 2k + 1`; zero for any state.
    pub fn odd_row_sums(&self) -> Vec<f64> {
        (0..self.params.dim()).map(|k| self.row_sum(2 * k + 1)).collect()
    }

    /// Sums over the half-step columns `x = 2k + 1`; zero for any state.
    pub fn odd_column_sums(&self) -> Vec<f64> {
        (0..self.params.dim()).map(|k| self.column_sum(2 * k + 1)).collect()
    }

    pub fn samples(&self) -> impl Iterator<Item = LatticeSample> + '_ {
        let side = self.side();
        (0..side).flat_map(move |x| {
            (0..side).map(move |y| {
                let p = self.phase_point(x, y);
                LatticeSample {
                    x,
                    y,
                    phi: p.phi,
                    xi: p.xi,
                    weight: self.weight(x, y),
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_level_lattice() {
        let p = HilbertParams::new(1).unwrap();
        let s = StateVector::basis(p, 0).unwrap();
        let w = WignerLattice::from_position(&s).unwrap();
        // w = 1/2 exp(-i pi x y)
        assert_eq!(w.weight(0, 0), 0.5);
        assert_eq!(w.weight(0, 1), 0.5);
        assert_eq!(w.weight(1, 0), 0.5);
        assert!((w.weight(1, 1) + 0.5).abs() < 1e-15);
        assert!((w.total_mass() - 1.0).abs() < 1e-15);
        let m = WignerLattice::from_momentum(&s.to_momentum()).unwrap();
        for (a, b) in w.weights().iter().zip(m.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn basis_state_marginal() {
        for n in 1..6 {
            let p = HilbertParams::new(n).unwrap();
            let w = WignerLattice::from_position(&StateVector::basis(p, 0).unwrap()).unwrap();
            let mx = w.marginal_xi();
            assert!((mx[0] - 1.0).abs() < 1e-14);
            assert!(mx[1..].iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn two_level_forms_agree() {
        let p = HilbertParams::new(2).unwrap();
        let s = StateVector::new(p, vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let a = WignerLattice::from_position(&s).unwrap();
        let b = WignerLattice::from_momentum(&s.to_momentum()).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(a.marginal_xi().len(), 2);
        for v in a.marginal_xi() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn momentum_basis_marginal() {
        let p = HilbertParams::new(3).unwrap();
        let m = MomentumVector::basis(p, 0).unwrap();
        let w = WignerLattice::from_momentum(&m).unwrap();
        let mp = w.marginal_phi();
        assert!((mp[0] - 1.0).abs() < 1e-14);
        assert!(mp[1].abs() < 1e-14 && mp[2].abs() < 1e-14);
        // all mass sits in columns x = 0 (integer) and nowhere else on net
        for x in 1..6 {
            let col: f64 = (0..6).map(|y| w.weight(x, y)).sum();
            assert!(col.abs() < 1e-14);
        }
    }

    #[test]
    fn flat_momentum_of_position_delta() {
        let p = HilbertParams::new(2).unwrap();
        let w = WignerLattice::from_position(&StateVector::basis(p, 0).unwrap()).unwrap();
        for v in w.marginal_phi() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let p = HilbertParams::new(2).unwrap();
        let s = StateVector::new(p, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(WignerLattice::from_position(&s), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn density_form_matches_pure_form() {
        let p = HilbertParams::new(3).unwrap();
        let s = StateVector::new(p, vec![c(0.2, 0.5), c(-0.4, 0.1), c(0.6, -0.3)])
            .unwrap()
            .normalized()
            .unwrap();
        let a = WignerLattice::from_position(&s).unwrap();
        let b = WignerLattice::from_density(&DensityMatrix::from_state(&s).unwrap()).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn pole_row_position() {
        let p = HilbertParams::new(2).unwrap().with_hbar(2.0).unwrap();
        let w = WignerLattice::from_position(&StateVector::basis(p, 0).unwrap()).unwrap();
        assert_eq!(w.phase_point(0, 3).xi, -1.0);
        assert_eq!(w.phase_point(0, 2).xi, 2.0);
        assert_eq!(w.phase_point(3, 0).phi, 1.5 * std::f64::consts::PI);
    }
}
