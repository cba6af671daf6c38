//! Orthonormal complex spherical harmonics with the Condon-Shortley phase.

use nalgebra::Vector3;
use num_complex::Complex64;

/// Flat index of `(l, m)` in `l`-major order: `l^2 + l + m`.
pub fn lm_index(l: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= l);
    ((l * l + l) as i64 + m) as usize
}

/// Number of `(l, m)` pairs with `l <= lmax`.
pub fn coeff_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// All `Y_lm(v)` for `l <= lmax`, in [`lm_index`] order. `v` must be a unit
/// vector.
///
/// Uses `sin^m(theta) e^{i m phi} = (x + i y)^m` so no angles are formed, and
/// the normalized three-term recurrence in `l` for the remaining polynomial
/// in `z`.
pub fn spherical_harmonics(lmax: usize, v: &Vector3<f64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeff_count(lmax)];
    fill_spherical_harmonics(lmax, v, &mut out);
    out
}

pub(crate) fn fill_spherical_harmonics(lmax: usize, v: &Vector3<f64>, out: &mut [Complex64]) {
    let z = v.z;
    let w = Complex64::new(v.x, v.y);
    let mut diag = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    let mut wm = Complex64::new(1.0, 0.0);
    for m in 0..=lmax {
        if m > 0 {
            diag *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            wm *= w;
        }
        let mf = m as f64;
        let mut prev2 = 0.0;
        let mut prev = diag;
        put(out, m, m, prev * wm);
        for l in (m + 1)..=lmax {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = if l == m + 1 {
                0.0
            } else {
                (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt()
            };
            let cur = a * (z * prev - b * prev2);
            put(out, l, m, cur * wm);
            prev2 = prev;
            prev = cur;
        }
    }
}

fn put(out: &mut [Complex64], l: usize, m: usize, y: Complex64) {
    let base = l * l + l;
    out[base + m] = y;
    if m > 0 {
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        out[base - m] = y.conj() * sign;
    }
}

/// Single `Y_lm(theta, phi)`.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let v = Vector3::new(st * cp, st * sp, ct);
    spherical_harmonics(l, &v)[lm_index(l, m)]
}
