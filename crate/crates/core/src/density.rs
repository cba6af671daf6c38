//! Mixed states on `H_N`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertParams, StateVector};
use crate::linalg::{hermitian_deviation, hermitian_eigen, CMatrix, ONE, ZERO};

/// Hermiticity, trace and positivity tolerance, relative to the Frobenius
/// norm of the matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Positive, hermitian, unit-trace operator on `H_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    params: HilbertParams,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` and stores its exactly hermitian part.
    pub fn new(params: HilbertParams, matrix: CMatrix) -> Result<Self> {
        let n = params.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: matrix.len(),
            });
        }
        let scale = matrix.norm().max(f64::MIN_POSITIVE);
        let dev = hermitian_deviation(&matrix);
        if dev > DENSITY_TOLERANCE * scale {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DENSITY_TOLERANCE * scale.max(1.0) {
            return Err(Error::TraceNotOne(trace));
        }
        let (values, _) = hermitian_eigen(&matrix);
        let min = values.min();
        if min < -DENSITY_TOLERANCE * scale {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { params, matrix })
    }

    /// Pure state `|psi><psi|`, entries `psi_a conj(psi_b)`.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        state.require_normalized()?;
        let psi = DVector::from_column_slice(state.coeffs());
        Ok(Self {
            params: *state.params(),
            matrix: &psi * psi.adjoint(),
        })
    }

    /// `I / N`.
    pub fn maximally_mixed(params: HilbertParams) -> Self {
        let n = params.dim();
        Self {
            params,
            matrix: CMatrix::identity(n, n).unscale(n as f64),
        }
    }

    /// Convex combination `sum w_i rho_i`.
    pub fn mix(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::InvalidWeights("empty mixture".into()))?;
        let params = first.params;
        let n = params.dim();
        let mut total = 0.0;
        let mut matrix = CMatrix::from_element(n, n, ZERO);
        for &(w, rho) in components {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWeights(format!("negative weight {w}")));
            }
            if rho.params != params {
                return Err(Error::ParamsMismatch);
            }
            total += w;
            matrix += rho.matrix.scale(w);
        }
        if (total - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Self::new(params, matrix)
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigen(&self.matrix).0
    }

    /// Spectral decomposition into weighted pure states, dropping weights
    /// below `cutoff`.
    pub fn pure_components(&self, cutoff: f64) -> Vec<(f64, StateVector)> {
        let (values, vectors) = hermitian_eigen(&self.matrix);
        values
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > cutoff)
            .map(|(c, &w)| {
                let coeffs = vectors.column(c).iter().copied().collect();
                let state = StateVector::new(self.params, coeffs).expect("column length is N");
                (w, state)
            })
            .collect()
    }

    /// Expectation value `tr(rho A)`.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        let matrix = u * &self.matrix * u.adjoint();
        Self {
            params: self.params,
            matrix: (&matrix + matrix.adjoint()).scale(0.5),
        }
    }
}

/// Orthonormal hermitian basis of the `N x N` matrices with respect to the
/// Hilbert-Schmidt product: `I / sqrt(N)` first, then the generalized
/// Gell-Mann matrices (symmetric, antisymmetric, diagonal), each normalized
/// to `tr(B^2) = 1`.
pub fn hermitian_basis(dim: usize) -> Vec<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(dim * dim);
    basis.push(CMatrix::identity(dim, dim).unscale((dim as f64).sqrt()));
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut sym = CMatrix::from_element(dim, dim, ZERO);
            sym[(a, b)] = ONE * h;
            sym[(b, a)] = ONE * h;
            basis.push(sym);
            let mut anti = CMatrix::from_element(dim, dim, ZERO);
            anti[(a, b)] = Complex64::new(0.0, -h);
            anti[(b, a)] = Complex64::new(0.0, h);
            basis.push(anti);
        }
    }
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = CMatrix::from_element(dim, dim, ZERO);
        for k in 0..l {
            diag[(k, k)] = ONE * norm;
        }
        diag[(l, l)] = ONE * (-(l as f64) * norm);
        basis.push(diag);
    }
    basis
}
