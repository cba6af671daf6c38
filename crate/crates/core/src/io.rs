//! JSON and CSV file formats.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{HilbertParams, MomentumVector, StateVector};
use crate::linalg::CMatrix;
use crate::operators::SpinOperatorSet;
use crate::sphere::{MultipoleCoeffs, Reconstruction};
use crate::wigner::{LatticeSample, WignerLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rep {
    Position,
    Momentum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    #[serde(default)]
    pub phi0: f64,
    pub rep: Rep,
    pub coeffs: Vec<Complex64>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        Self::new(state.params(), Rep::Position, state.coeffs())
    }

    pub fn from_momentum(state: &MomentumVector) -> Self {
        Self::new(state.params(), Rep::Momentum, state.coeffs())
    }

    fn new(p: &HilbertParams, rep: Rep, coeffs: &[Complex64]) -> Self {
        Self {
            n: p.dim(),
            hbar: p.hbar(),
            phi0: p.phi0(),
            rep,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn params(&self) -> Result<HilbertParams> {
        params_from(self.n, self.hbar, self.phi0)
    }

    /// Position-representation state, transforming if stored as momentum.
    /// The state must be normalized.
    pub fn to_state(&self) -> Result<StateVector> {
        let p = self.params()?;
        let state = match self.rep {
            Rep::Position => StateVector::new(p, self.coeffs.clone())?,
            Rep::Momentum => MomentumVector::new(p, self.coeffs.clone())?.to_position(),
        };
        if !state.is_normalized() {
            return Err(Error::NotNormalized(state.norm_sqr()));
        }
        Ok(state)
    }
}

fn params_from(n: usize, hbar: f64, phi0: f64) -> Result<HilbertParams> {
    HilbertParams::new(n)?.with_hbar(hbar)?.with_phi0(phi0)
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<Complex64>], n: usize, name: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Schema(format!("`{name}` must be a {n} x {n} matrix")));
    }
    Ok(CMatrix::from_fn(n, n, |a, b| rows[a][b]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub j: f64,
    pub hbar: f64,
    pub jx: Vec<Vec<Complex64>>,
    pub jy: Vec<Vec<Complex64>>,
    pub jz: Vec<Vec<Complex64>>,
}

impl OperatorFile {
    pub fn from_ops(ops: &SpinOperatorSet) -> Self {
        Self {
            j: ops.params().spin(),
            hbar: ops.params().hbar(),
            jx: matrix_rows(&ops.jx),
            jy: matrix_rows(&ops.jy),
            jz: matrix_rows(&ops.jz),
        }
    }

    /// The three matrices, checked for shape.
    pub fn matrices(&self) -> Result<[CMatrix; 3]> {
        let n = HilbertParams::from_spin(self.j)?.dim();
        Ok([
            matrix_from_rows(&self.jx, n, "jx")?,
            matrix_from_rows(&self.jy, n, "jy")?,
            matrix_from_rows(&self.jz, n, "jz")?,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipoleEntry {
    pub l: usize,
    pub m: i64,
    pub re: f64,
    pub im: f64,
}

/// Coefficients `c_lm`; entries that are absent are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipoleFile {
    pub j: f64,
    pub s: f64,
    pub lmax: usize,
    pub coeffs: Vec<MultipoleEntry>,
}

impl MultipoleFile {
    /// Keeps entries with `|c_lm| > cutoff * max |c_lm|`; a zero cutoff
    /// keeps everything.
    pub fn from_coeffs(c: &MultipoleCoeffs, cutoff: f64) -> Self {
        let p = c.params();
        let top = c.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let coeffs = c
            .iter()
            .filter(|(_, _, z)| cutoff == 0.0 || z.norm() > cutoff * top)
            .map(|(l, m, z)| MultipoleEntry {
                l,
                m,
                re: z.re,
                im: z.im,
            })
            .collect();
        Self {
            j: p.spin(),
            s: p.s(),
            lmax: c.lmax(),
            coeffs,
        }
    }

    pub fn params(&self) -> Result<HilbertParams> {
        let n = HilbertParams::from_spin(self.j)?.dim();
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(Error::Schema(format!("`s` must be positive, got {}", self.s)));
        }
        params_from(n, 2.0 * self.s / n as f64, 0.0)
    }

    pub fn to_coeffs(&self) -> Result<MultipoleCoeffs> {
        let mut c = MultipoleCoeffs::zeros(self.params()?, self.lmax);
        let mut seen = BTreeSet::new();
        for e in &self.coeffs {
            if !seen.insert((e.l, e.m)) {
                return Err(Error::Schema(format!("duplicate entry l = {}, m = {}", e.l, e.m)));
            }
            c.set(e.l, e.m, Complex64::new(e.re, e.im))
                .map_err(|_| Error::Schema(format!("entry l = {}, m = {} out of range", e.l, e.m)))?;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    #[serde(default)]
    pub phi0: f64,
    pub rho: Vec<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<bool>,
}

impl DensityFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.params(), rho.matrix())
    }

    pub fn from_reconstruction(r: &Reconstruction) -> Self {
        Self {
            residual: Some(r.residual()),
            min_eigenvalue: Some(r.min_eigenvalue()),
            positive: Some(r.is_positive()),
            ..Self::from_matrix(r.params(), r.matrix())
        }
    }

    fn from_matrix(p: &HilbertParams, m: &CMatrix) -> Self {
        Self {
            n: p.dim(),
            hbar: p.hbar(),
            phi0: p.phi0(),
            rho: matrix_rows(m),
            residual: None,
            min_eigenvalue: None,
            positive: None,
        }
    }

    pub fn params(&self) -> Result<HilbertParams> {
        params_from(self.n, self.hbar, self.phi0)
    }

    /// Raw matrix, shape-checked only.
    pub fn matrix(&self) -> Result<CMatrix> {
        matrix_from_rows(&self.rho, self.n, "rho")
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.params()?, self.matrix()?)
    }
}

/// A state file (pure) or a density file (mixed), told apart by their keys.
pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let is_density = value.get("rho").is_some();
    if is_density {
        serde_json::from_value::<DensityFile>(value)?.to_density()
    } else {
        DensityMatrix::from_state(&serde_json::from_value::<StateFile>(value)?.to_state()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    pub phi0: f64,
    pub points: Vec<LatticeSample>,
}

impl LatticeFile {
    pub fn from_lattice(w: &WignerLattice) -> Self {
        let p = w.params();
        Self {
            n: p.dim(),
            hbar: p.hbar(),
            phi0: p.phi0(),
            points: w.samples().collect(),
        }
    }
}

/// Header `x,y,phi,xi,weight` and one row per point of the cell.
pub fn write_lattice_csv<W: Write>(w: &WignerLattice, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for sample in w.samples() {
        writer.serialize(sample)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}
