//! Haar integration over `SO(3)` in `z-y-z` Euler angles.

use std::f64::consts::{PI, TAU};

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`; exact for
/// polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A node of the Euler-angle product rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerNode {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub weight: f64,
}

/// Product rule for the normalized Haar measure
/// `sin(beta) d alpha d beta d gamma / (8 pi^2)`.
///
/// With `2 band + 1` equispaced angles in `alpha` and `gamma` and
/// `band + 1` Gauss-Legendre nodes in `cos(beta)` it integrates every Wigner
/// matrix element `D^l_{mm'}` with `l <= band` exactly: the equispaced sums
/// kill every `m, m' != 0` term and what remains, `d^l_00 = P_l(cos beta)`,
/// is a polynomial of degree `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SO3Quadrature {
    band: usize,
    azimuths: Vec<f64>,
    polar: Vec<(f64, f64)>,
}

impl SO3Quadrature {
    pub fn new(band: usize) -> Self {
        let n_az = 2 * band + 1;
        let azimuths = (0..n_az).map(|q| TAU * q as f64 / n_az as f64).collect();
        let (xs, ws) = gauss_legendre(band + 1);
        let polar = xs
            .iter()
            .zip(&ws)
            .map(|(&x, &w)| (x.clamp(-1.0, 1.0).acos(), w / 2.0))
            .collect();
        Self {
            band,
            azimuths,
            polar,
        }
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// Equispaced angles shared by `alpha` and `gamma`.
    pub fn azimuths(&self) -> &[f64] {
        &self.azimuths
    }

    /// `(beta, weight)` pairs; the weights sum to 1.
    pub fn polar(&self) -> &[(f64, f64)] {
        &self.polar
    }

    pub fn len(&self) -> usize {
        self.azimuths.len().pow(2) * self.polar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weight of a single node; the azimuthal factor is uniform.
    pub fn node_weight(&self, polar_index: usize) -> f64 {
        let n_az = self.azimuths.len() as f64;
        self.polar[polar_index].1 / (n_az * n_az)
    }

    /// Nodes in `beta`-major, then `alpha`, then `gamma` order.
    pub fn nodes(&self) -> impl Iterator<Item = EulerNode> + '_ {
        self.polar.iter().enumerate().flat_map(move |(ib, &(beta, _))| {
            let weight = self.node_weight(ib);
            self.azimuths.iter().flat_map(move |&alpha| {
                self.azimuths.iter().map(move |&gamma| EulerNode {
                    alpha,
                    beta,
                    gamma,
                    weight,
                })
            })
        })
    }

    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, f: F) -> f64 {
        self.nodes()
            .map(|n| n.weight * f(n.alpha, n.beta, n.gamma))
            .sum()
    }
}
