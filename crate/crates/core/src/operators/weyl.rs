//! Weyl quantization of symbols that factorize into a harmonic in `phi`
//! times a profile in `xi`.
//!
//! For a single term `e^{i n phi} g(xi)` the Weyl operator is the shift
//! `(f psi)(xi) = g(xi + n hbar / 2) psi(xi + n hbar)`: the momentum factor
//! becomes a translation by `n` lattice sites and the position factor is
//! sampled halfway along it. On the comb coefficients this is
//! `M[r, r + n] = g((r + n/2) hbar)` with cyclic indices, where the sample
//! point is reduced into the fundamental cell.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{truncate_xi, HilbertParams};
use crate::linalg::{CMatrix, ZERO};

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Harmonic {
    pub order: i64,
    pub amplitude: Complex64,
    pub profile: Profile,
}

impl fmt::Debug for Harmonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Harmonic")
            .field("order", &self.order)
            .field("amplitude", &self.amplitude)
            .finish_non_exhaustive()
    }
}

/// `f(phi, xi) = sum_n a_n e^{i n phi} g_n(xi)`.
#[derive(Debug, Clone, Default)]
pub struct FactorizedSymbol {
    terms: Vec<Harmonic>,
}

impl FactorizedSymbol {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_term<G>(mut self, order: i64, amplitude: Complex64, profile: G) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.terms.push(Harmonic {
            order,
            amplitude,
            profile: Arc::new(profile),
        });
        self
    }

    pub fn terms(&self) -> &[Harmonic] {
        &self.terms
    }

    /// The constant symbol `value`.
    pub fn constant(value: f64) -> Self {
        Self::new().with_term(0, Complex64::new(value, 0.0), |_| 1.0)
    }

    /// `f_z = -xi_trunc + s - hbar/2`, the height function `rz` pulled back
    /// to the plane.
    pub fn height(params: HilbertParams) -> Self {
        Self::new().with_term(0, Complex64::new(1.0, 0.0), move |xi| {
            classical_height(xi, &params)
        })
    }

    /// `f_x = cos(phi) S(xi)`.
    pub fn cos_s(params: HilbertParams) -> Self {
        let half = Complex64::new(0.5, 0.0);
        Self::new()
            .with_term(1, half, move |xi| classical_s(xi, &params))
            .with_term(-1, half, move |xi| classical_s(xi, &params))
    }

    /// `f_y = sin(phi) S(xi)`.
    pub fn sin_s(params: HilbertParams) -> Self {
        Self::new()
            .with_term(1, Complex64::new(0.0, -0.5), move |xi| classical_s(xi, &params))
            .with_term(-1, Complex64::new(0.0, 0.5), move |xi| classical_s(xi, &params))
    }

    /// Pointwise value of the classical symbol.
    pub fn evaluate(&self, phi: f64, xi: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * Complex64::from_polar(1.0, t.order as f64 * phi) * (t.profile)(xi))
            .sum()
    }

    /// Whether the symbol is real-valued at the lattice and half-lattice
    /// points of the fundamental cell and at a sweep of `phi` values.
    pub fn is_real(&self, params: &HilbertParams) -> bool {
        let n = params.dim();
        let hbar = params.hbar();
        (0..2 * n).all(|h| {
            let xi = truncate_xi(h as f64 * hbar / 2.0, params);
            (0..16).all(|q| {
                let phi = std::f64::consts::TAU * q as f64 / 16.0;
                self.evaluate(phi, xi).im.abs() <= 1e-12 * (1.0 + self.evaluate(phi, xi).norm())
            })
        })
    }
}

/// `S(xi) = sqrt((2s - hbar/2 - xi_t)(xi_t + hbar/2))`, the transverse radius
/// `sqrt(s^2 - f_z^2)`. Vanishes at both poles.
pub fn classical_s(xi: f64, params: &HilbertParams) -> f64 {
    let xt = truncate_xi(xi, params);
    let hbar = params.hbar();
    let prod = (2.0 * params.s() - hbar / 2.0 - xt) * (xt + hbar / 2.0);
    prod.max(0.0).sqrt()
}

/// `f_z(xi) = s - hbar/2 - xi_t`.
pub fn classical_height(xi: f64, params: &HilbertParams) -> f64 {
    params.s() - params.hbar() / 2.0 - truncate_xi(xi, params)
}

/// Operator of a factorized symbol on the `N` comb coefficients.
///
/// Rejects harmonics with `|n| >= N`, whose shift wraps a whole period.
pub fn weyl_quantize(symbol: &FactorizedSymbol, params: &HilbertParams) -> Result<CMatrix> {
    let n = params.dim();
    let ni = n as i64;
    let mut m = CMatrix::from_element(n, n, ZERO);
    for term in symbol.terms() {
        if term.order.abs() >= ni && term.order != 0 {
            return Err(Error::HarmonicOutOfRange {
                order: term.order,
                dim: n,
            });
        }
        for r in 0..ni {
            let col = (r + term.order).rem_euclid(ni) as usize;
            // sample point (r + n/2) hbar, in half-steps, reduced into [-1, 2N - 1)
            let half = (2 * r + term.order + 1).rem_euclid(2 * ni) - 1;
            let xi = half as f64 * params.hbar() / 2.0;
            m[(r as usize, col)] += term.amplitude * (term.profile)(xi);
        }
    }
    Ok(m)
}
