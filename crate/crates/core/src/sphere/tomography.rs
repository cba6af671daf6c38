//! Linear inversion of the averaged Wigner function.
//!
//! The averaging map is linear on hermitian operators. Writing an operator
//! in an orthonormal hermitian basis `B_0 = I/sqrt(N), B_1, ...` and the
//! image through the real and imaginary parts of `c_lm` gives a real
//! `2 (lmax+1)^2 x N^2` matrix. It has full column rank, so the state can be
//! recovered by least squares from its averaged Wigner function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::density::{hermitian_basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::hilbert::HilbertParams;
use crate::linalg::{hermitian_eigen, CMatrix, ZERO};
use crate::sphere::average::{Averager, AveragingOptions, MultipoleCoeffs};
use crate::sphere::harmonics::{coeff_count, lm_index};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Relative residual above which coefficients are rejected as not coming
/// from any operator on `H_N`.
pub const RESIDUAL_THRESHOLD: f64 = 1e-8;

/// Smallest eigenvalue tolerated before a reconstruction is flagged as not
/// positive.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TomographyMap {
    params: HilbertParams,
    lmax: usize,
    basis: Vec<CMatrix>,
    matrix: DMatrix<f64>,
}

impl TomographyMap {
    pub fn new(params: HilbertParams) -> Self {
        Self::with_options(params, &AveragingOptions::default())
    }

    pub fn with_options(params: HilbertParams, opts: &AveragingOptions) -> Self {
        let averager = Averager::new(params, opts);
        let lmax = averager.lmax();
        let basis = hermitian_basis(params.dim());
        let rows = 2 * coeff_count(lmax);
        let mut matrix = DMatrix::zeros(rows, basis.len());
        for (col, b) in basis.iter().enumerate() {
            let image = averager.average(b);
            for (i, c) in image.as_slice().iter().enumerate() {
                matrix[(2 * i, col)] = c.re;
                matrix[(2 * i + 1, col)] = c.im;
            }
        }
        Self {
            params,
            lmax,
            basis,
            matrix,
        }
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// Columns are images of [`hermitian_basis`]; rows alternate real and
    /// imaginary parts of `c_lm` in `l`-major order.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.matrix)
    }

    /// Rank of the map restricted to traceless operators.
    pub fn traceless_rank(&self) -> usize {
        let cols = self.matrix.ncols();
        numerical_rank(&self.matrix.columns(1, cols - 1).into_owned())
    }

    /// Rank of the `l`-th block of rows, for `l = 0 ..= lmax`.
    pub fn sector_ranks(&self) -> Vec<usize> {
        (0..=self.lmax)
            .map(|l| {
                let start = 2 * lm_index(l, -(l as i64));
                numerical_rank(&self.matrix.rows(start, 2 * (2 * l + 1)).into_owned())
            })
            .collect()
    }

    /// Image of a hermitian operator through the stored matrix.
    pub fn apply(&self, op: &CMatrix) -> MultipoleCoeffs {
        let x = DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().map(|b| (b * op).trace().re),
        );
        let y = &self.matrix * x;
        let coeffs = (0..coeff_count(self.lmax))
            .map(|i| Complex64::new(y[2 * i], y[2 * i + 1]))
            .collect();
        MultipoleCoeffs::from_vec(self.params, self.lmax, coeffs).expect("sized from lmax")
    }

    /// Least-squares preimage of `c`.
    ///
    /// Coefficients with `l > lmax` must vanish for a genuine averaged Wigner
    /// function and count toward the residual.
    pub fn reconstruct(&self, c: &MultipoleCoeffs) -> Result<Reconstruction> {
        if c.params().dim() != self.params.dim()
            || (c.params().s() - self.params.s()).abs() > 1e-12 * self.params.s()
        {
            return Err(Error::ParamsMismatch);
        }
        if c.lmax() < self.lmax {
            return Err(Error::InsufficientBand {
                required: self.lmax,
                actual: c.lmax(),
            });
        }
        let rows = self.matrix.nrows();
        let mut b = DVector::zeros(rows);
        for i in 0..coeff_count(self.lmax) {
            let z = c.as_slice()[i];
            b[2 * i] = z.re;
            b[2 * i + 1] = z.im;
        }
        let beyond: f64 = c
            .iter()
            .filter(|&(l, _, _)| l > self.lmax)
            .map(|(_, _, z)| z.norm_sqr())
            .sum();
        let total = (b.norm_squared() + beyond).sqrt();

        let svd = self.matrix.clone().svd(true, true);
        let cutoff = RANK_THRESHOLD * svd.singular_values.max();
        let x = svd
            .solve(&b, cutoff)
            .map_err(|e| Error::Schema(format!("least squares failed: {e}")))?;
        let misfit = (&self.matrix * &x - &b).norm_squared();
        let residual = if total > 0.0 {
            (misfit + beyond).sqrt() / total
        } else {
            0.0
        };
        if residual > RESIDUAL_THRESHOLD {
            return Err(Error::OutsideImage(residual));
        }

        let n = self.params.dim();
        let mut matrix = CMatrix::from_element(n, n, ZERO);
        for (coef, basis) in x.iter().zip(&self.basis) {
            matrix += basis.scale(*coef);
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > RESIDUAL_THRESHOLD {
            return Err(Error::TraceNotOne(trace));
        }
        let min_eigenvalue = hermitian_eigen(&matrix).0.min();
        Ok(Reconstruction {
            params: self.params,
            matrix,
            residual,
            min_eigenvalue,
        })
    }
}

/// Count of singular values above `RANK_THRESHOLD` times the largest.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * top).count()
}

/// Recovered operator with its diagnostics.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    params: HilbertParams,
    matrix: CMatrix,
    residual: f64,
    min_eigenvalue: f64,
}

impl Reconstruction {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn params(&self) -> &HilbertParams {
        &self.params
    }

    /// Relative least-squares residual.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// The averaged Wigner functions of positive operators are a strict
    /// subset of the image, so a valid preimage can still fail this.
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOLERANCE
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.params, self.matrix.clone())
    }
}

/// Builds the map for `c`'s parameters and inverts it.
pub fn reconstruct(c: &MultipoleCoeffs) -> Result<Reconstruction> {
    TomographyMap::new(*c.params()).reconstruct(c)
}
