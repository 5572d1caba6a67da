//! Reference computations that share no code with `manifold-floquet`.
//!
//! Differentiation matrices are synthesised from explicit Fourier sums and
//! the torus operator is written in the meridian angle θ rather than in the
//! isothermal coordinate, so agreement with the library is a genuine check.

use std::f64::consts::PI;

use faer::{c64, Mat};

/// First and second Fourier differentiation matrices on `n` equispaced
/// points of a period `length`, from the mode sums
/// `D^{(p)}_{ij} = (1/n) Σ_k (ik)^p e^{ik(x_i − x_j)}`. For even `n` the
/// Nyquist mode is dropped from `D1` and kept in `D2`.
pub fn fourier_matrices(n: usize, length: f64) -> (Mat<f64>, Mat<f64>) {
    let w = 2.0 * PI / length;
    let top = (n as i64 - 1) / 2;
    let nyquist = (n % 2 == 0).then_some(n as f64 / 2.0);
    let mut c1 = vec![0.0; n];
    let mut c2 = vec![0.0; n];
    for (d, (a, b)) in c1.iter_mut().zip(c2.iter_mut()).enumerate() {
        let phase = 2.0 * PI * d as f64 / n as f64;
        for k in -top..=top {
            let kk = k as f64;
            *a += -kk * w * (kk * phase).sin();
            *b += -(kk * w).powi(2) * (kk * phase).cos();
        }
        if let Some(kk) = nyquist {
            *b += -(kk * w).powi(2) * (kk * phase).cos();
        }
        *a /= n as f64;
        *b /= n as f64;
    }
    let d1 = Mat::from_fn(n, n, |i, j| c1[(i + n - j) % n]);
    let d2 = Mat::from_fn(n, n, |i, j| c2[(i + n - j) % n]);
    (d1, d2)
}

fn modes_for(n: usize) -> Vec<i64> {
    let half = n as i64 / 2;
    if n % 2 == 0 {
        (-half + 1..=half).collect()
    } else {
        (-half..=half).collect()
    }
}

/// Sorted spectrum of `−∂²` on a periodic Fourier grid.
pub fn free_spectrum(n: usize, length: f64) -> Vec<f64> {
    let w = 2.0 * PI / length;
    let mut v: Vec<f64> = modes_for(n).iter().map(|&k| (k as f64 * w).powi(2)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Lowest `count` eigenvalues (real parts, ascending) of the torus sector
/// operator in the meridian angle,
///
/// `−r⁻²(∂²_θ − (r sin θ/Ω)∂_θ) + m²/Ω² + cos θ/(rΩ) + ¼(1/r + cos θ/Ω)²`,
///
/// with `Ω = R + r cos θ`, on `n` points of `[−π, π)`.
pub fn torus_theta_spectrum(major_r: f64, minor_r: f64, n: usize, m: i32, count: usize) -> Vec<f64> {
    let (d1, d2) = fourier_matrices(n, 2.0 * PI);
    let theta: Vec<f64> = (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect();
    let omega: Vec<f64> = theta.iter().map(|t| major_r + minor_r * t.cos()).collect();
    let r2 = minor_r * minor_r;
    let m2 = (m as f64).powi(2);
    let h = Mat::from_fn(n, n, |i, j| {
        let drift = -minor_r * theta[i].sin() / omega[i];
        let mut v = -(d2[(i, j)] + drift * d1[(i, j)]) / r2;
        if i == j {
            let mean = 0.5 * (1.0 / minor_r + theta[i].cos() / omega[i]);
            v += m2 / (omega[i] * omega[i]) + theta[i].cos() / (minor_r * omega[i]) + mean * mean;
        }
        c64::new(v, 0.0)
    });
    let eig = h.eigenvalues().expect("eigenvalues");
    let mut re: Vec<f64> = eig.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    re.truncate(count);
    re
}

/// Complete elliptic integral of the first kind `K(m)` by the
/// arithmetic–geometric mean.
pub fn elliptic_k(m: f64) -> f64 {
    assert!((0.0..1.0).contains(&m));
    let (mut a, mut b) = (1.0, (1.0 - m).sqrt());
    // quadratic convergence: a dozen steps reach the fixed point
    for _ in 0..12 {
        let next = (0.5 * (a + b), (a * b).sqrt());
        a = next.0;
        b = next.1;
    }
    PI / (2.0 * a)
}

/// `∫₀^{2π} (1 + λ cos qz)^{-1/2} dz` for integer `q ≥ 1`.
///
/// The substitution `u = qz` maps the `q` periods onto one circuit, so the
/// result does not depend on `q`.
pub fn cosine_optical_length(lambda: f64) -> f64 {
    4.0 * elliptic_k(2.0 * lambda / (1.0 + lambda)) / (1.0 + lambda).sqrt()
}

/// Sawtooth `a·(t mod T)/T`: `(1/T)∫₀^T (t − T/2) f dt = a·T/12`.
pub fn sawtooth_alpha_ab(amplitude: f64, period: f64) -> f64 {
    amplitude * period / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_matrices_differentiate_modes() {
        let n = 16;
        let (d1, d2) = fourier_matrices(n, 2.0 * PI);
        let x: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        for i in 0..n {
            let a: f64 = (0..n).map(|j| d1[(i, j)] * (3.0 * x[j]).sin()).sum();
            let b: f64 = (0..n).map(|j| d2[(i, j)] * (3.0 * x[j]).sin()).sum();
            assert!((a - 3.0 * (3.0 * x[i]).cos()).abs() < 1e-12);
            assert!((b + 9.0 * (3.0 * x[i]).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn elliptic_k_reference_values() {
        assert!((elliptic_k(0.0) - PI / 2.0).abs() < 1e-15);
        assert!((elliptic_k(0.5) - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn optical_length_by_brute_force() {
        let n = 20000;
        let h = 2.0 * PI / n as f64;
        let s: f64 = (0..n).map(|j| (1.0 + 0.3 * (2.0 * j as f64 * h).cos()).powf(-0.5) * h).sum();
        assert!((s - cosine_optical_length(0.3)).abs() < 1e-12);
    }
}
