//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// `1/sqrt(N) sum_m x_m e^{sign 2 pi i k m / N}` by direct summation.
pub fn dft_direct(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(m, v)| {
                    let angle = sign * std::f64::consts::TAU * ((k * m) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, angle)
                })
                .sum::<Complex64>()
                * norm
        })
        .collect()
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Wigner's explicit sum for `d^j_{m'm}(beta)` with doubled labels.
pub fn small_d(tj: i64, tmp: i64, tm: i64, beta: f64) -> f64 {
    let (jpm, jmm) = ((tj + tm) / 2, (tj - tm) / 2);
    let (jpmp, jmmp) = ((tj + tmp) / 2, (tj - tmp) / 2);
    let shift = (tmp - tm) / 2;
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut sum = 0.0;
    for k in 0..=tj {
        let dens = [jpm - k, k, jmmp - k, k + shift];
        if dens.iter().any(|&d| d < 0) {
            continue;
        }
        let sign = if (k + shift) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * c.powi((tj - 2 * k - shift) as i32) * s.powi((2 * k + shift) as i32)
            / dens.iter().map(|&d| fact(d)).product::<f64>();
    }
    (fact(jpm) * fact(jmm) * fact(jpmp) * fact(jmmp)).sqrt() * sum
}

/// Ladder matrices `<m'| J_+ |m>` written out from the textbook formula, in
/// storage order `k = j - m`.
pub fn ladder_oracle(tj: i64, hbar: f64) -> (CMatrix, CMatrix, CMatrix) {
    let n = (tj + 1) as usize;
    let j = tj as f64 / 2.0;
    let m = |k: usize| j - k as f64;
    let mut plus = CMatrix::zeros(n, n);
    for k in 1..n {
        let mm = m(k);
        plus[(k - 1, k)] = Complex64::new(hbar * (j * (j + 1.0) - mm * (mm + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = (&plus + &minus) * half;
    let jy = (&plus - &minus) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(n, n, |a, b| {
        if a == b {
            Complex64::new(hbar * m(a), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (jx, jy, jz)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
