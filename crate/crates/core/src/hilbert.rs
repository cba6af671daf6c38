//! Finite encoding of the comb wave functions.
//!
//! A state of spin `j` is a periodic array of Dirac deltas in the position
//! variable `xi` (spacing `hbar`, period `2s = N hbar`) or in the momentum
//! variable `phi` (spacing `2 pi / N`, period `2 pi`). Only the `N` complex
//! weights of one period are ever stored; the unitary DFT relates the two
//! representations.

use std::f64::consts::TAU;
use std::fmt;
use std::marker::PhantomData;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Tolerance on `|norm^2 - 1|` for inputs that must be normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Global conventions shared by every object built over `H_N`.
///
/// The sphere radius parameter `s` is not stored: it is always `N hbar / 2`,
/// which is the quantization condition for the comb to be periodic in both
/// representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertParams {
    dim: usize,
    hbar: f64,
    phi0: f64,
}

impl HilbertParams {
    /// `N`-level system with `hbar = 1` and meridian offset `phi0 = 0`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension(dim));
        }
        Ok(Self {
            dim,
            hbar: 1.0,
            phi0: 0.0,
        })
    }

    /// Spin-`j` system, `N = 2j + 1`.
    pub fn from_spin(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        Self::new(twice.round() as usize + 1)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be positive and finite, got {hbar}"),
            });
        }
        self.hbar = hbar;
        Ok(self)
    }

    /// Sets the meridian offset, reduced into `[0, 2 pi)`.
    pub fn with_phi0(mut self, phi0: f64) -> Result<Self> {
        if !phi0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi0",
                reason: format!("must be finite, got {phi0}"),
            });
        }
        self.phi0 = wrap_angle(phi0);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// Spin quantum number `j = (N - 1) / 2`.
    pub fn spin(&self) -> f64 {
        (self.dim - 1) as f64 / 2.0
    }

    /// `2j` as an integer; also the largest multipole order of the averaged
    /// Wigner function.
    pub fn twice_spin(&self) -> usize {
        self.dim - 1
    }

    /// Radius parameter `s` with `2s = N hbar`.
    pub fn s(&self) -> f64 {
        self.dim as f64 * self.hbar / 2.0
    }

    /// Magnetic quantum number of storage index `k` (`k = j - m`).
    pub fn m_of(&self, k: usize) -> f64 {
        self.spin() - k as f64
    }

    /// Storage index of magnetic quantum number `m`, if it is one of
    /// `j, j-1, ..., -j`.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let k = self.spin() - m;
        let kr = k.round();
        ((k - kr).abs() < 1e-9 && kr >= 0.0 && kr < self.dim as f64).then_some(kr as usize)
    }

    /// Bounds of the fundamental position cell `[-hbar/2, 2s - hbar/2)`.
    pub fn xi_cell(&self) -> (f64, f64) {
        (-self.hbar / 2.0, 2.0 * self.s() - self.hbar / 2.0)
    }
}

impl fmt::Display for HilbertParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} (j={}), hbar={}, phi0={}",
            self.dim,
            self.spin(),
            self.hbar,
            self.phi0
        )
    }
}

pub(crate) fn wrap_angle(phi: f64) -> f64 {
    if (0.0..TAU).contains(&phi) {
        return phi;
    }
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point `(phi, xi)` of the planar phase space covering the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub phi: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(phi: f64, xi: f64) -> Self {
        Self { phi, xi }
    }

    /// Representative in the fundamental rectangle
    /// `[0, 2 pi) x [-hbar/2, 2s - hbar/2)`.
    pub fn truncate(self, params: &HilbertParams) -> Self {
        Self {
            phi: wrap_angle(self.phi),
            xi: truncate_xi(self.xi, params),
        }
    }
}

pub(crate) fn truncate_xi(xi: f64, params: &HilbertParams) -> f64 {
    let (lo, hi) = params.xi_cell();
    if (lo..hi).contains(&xi) {
        return xi;
    }
    let period = 2.0 * params.s();
    let r = (xi - lo).rem_euclid(period);
    if r >= period {
        lo
    } else {
        r + lo
    }
}

/// Marker for which representation a coefficient vector lives in.
pub trait Representation: Copy + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Momentum;

impl Representation for Position {
    const NAME: &'static str = "position";
}

impl Representation for Momentum {
    const NAME: &'static str = "momentum";
}

/// The `N` comb weights of one period.
///
/// Indices are cyclic: `coeff(k)` and `coeff(k + N)` are the same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CombVector<R: Representation> {
    params: HilbertParams,
    coeffs: Vec<Complex64>,
    rep: PhantomData<R>,
}

/// Position representation: weight `psi_k` of the delta at `xi = k hbar`.
pub type StateVector = CombVector<Position>;

/// Momentum representation: weight `psihat_k` of the delta at
/// `phi = phi0 + 2 pi k / N`.
pub type MomentumVector = CombVector<Momentum>;

impl<R: Representation> CombVector<R> {
    pub fn new(params: HilbertParams, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != params.dim() {
            return Err(Error::LengthMismatch {
                expected: params.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            params,
            coeffs,
            rep: PhantomData,
        })
    }

    /// Unit vector with a single nonzero weight at index `k`.
    pub fn basis(params: HilbertParams, k: usize) -> Result<Self> {
        if k >= params.dim() {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("index {k} out of range for N = {}", params.dim()),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); params.dim()];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::new(params, coeffs)
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Cyclic access, `psi_k = psi_{k+N}`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs[k.rem_euclid(self.dim() as i64) as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm_sqr()))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|c| c / n).collect(),
            rep: PhantomData,
        })
    }

    /// Hilbert-space product `<self, other> = sum conj(a_k) b_k`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|psi_k|^2` for every `k`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }
}

impl StateVector {
    /// Eigenvector `|m>` of the `z` spin component (`k = j - m`).
    pub fn spin_basis(params: HilbertParams, m: f64) -> Result<Self> {
        let k = params.index_of(m).ok_or_else(|| Error::InvalidParameter {
            name: "m",
            reason: format!("{m} is not one of j, j-1, ..., -j for j = {}", params.spin()),
        })?;
        Self::basis(params, k)
    }

    /// `psihat_k = N^{-1/2} sum_m psi_m exp(-2 pi i k m / N)`.
    pub fn to_momentum(&self) -> MomentumVector {
        let coeffs = unitary_dft(&self.coeffs, Direction::Negative);
        MomentumVector::new(self.params, coeffs).expect("DFT preserves length")
    }
}

impl MomentumVector {
    /// `psi_k = N^{-1/2} sum_m psihat_m exp(2 pi i k m / N)`.
    pub fn to_position(&self) -> StateVector {
        let coeffs = unitary_dft(&self.coeffs, Direction::Positive);
        StateVector::new(self.params, coeffs).expect("DFT preserves length")
    }

    /// Location of the `k`-th momentum delta within `[0, 2 pi)`.
    pub fn phi_of(&self, k: usize) -> f64 {
        wrap_angle(self.params.phi0() + TAU * k as f64 / self.dim() as f64)
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Negative,
    Positive,
}

fn unitary_dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    let mut buf = input.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let fft = match direction {
        Direction::Negative => planner.plan_fft_forward(n),
        Direction::Positive => planner.plan_fft_inverse(n),
    };
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Position of the `k`-th position delta, `xi = k hbar`.
pub fn xi_of(params: &HilbertParams, k: usize) -> f64 {
    k as f64 * params.hbar()
}
