//! Temporal drives f(t), their period moments and second-order functionals,
//! and the spatial drive profile γ̄.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, SpatialGrid};
use crate::quadrature;

pub const MIN_TABULATED: usize = 16;
pub const MIN_MOMENT_POINTS: usize = 64;
pub const MIN_ALPHA_POINTS: usize = 128;
const GL_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriveShape {
    /// `a·sin(2πt/T + φ)`.
    Sinusoid { amplitude: f64, phase: f64 },
    /// `a·sin²(πt/T)`.
    SinusoidSquared { amplitude: f64 },
    Constant { value: f64 },
    /// `a·(t mod T)/T`.
    Sawtooth { amplitude: f64 },
    /// Samples at `t_j = jT/n`, trigonometrically interpolated.
    Tabulated { samples: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalDrive {
    period: f64,
    shape: DriveShape,
}

impl TemporalDrive {
    pub fn new(period: f64, shape: DriveShape) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::validation(format!("drive period must be positive, got {period}")));
        }
        let params: Vec<f64> = match &shape {
            DriveShape::Sinusoid { amplitude, phase } => vec![*amplitude, *phase],
            DriveShape::SinusoidSquared { amplitude } => vec![*amplitude],
            DriveShape::Constant { value } => vec![*value],
            DriveShape::Sawtooth { amplitude } => vec![*amplitude],
            DriveShape::Tabulated { samples } => {
                if samples.len() < MIN_TABULATED {
                    return Err(Error::validation(format!(
                        "tabulated drive needs at least {MIN_TABULATED} samples, got {}",
                        samples.len()
                    )));
                }
                samples.clone()
            }
        };
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("drive parameters must be finite"));
        }
        Ok(TemporalDrive { period, shape })
    }

    /// Same shape with the period set from an angular frequency.
    pub fn with_frequency(&self, omega: f64) -> Result<Self> {
        TemporalDrive::new(2.0 * PI / omega, self.shape.clone())
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn shape(&self) -> &DriveShape {
        &self.shape
    }

    pub fn value(&self, t: f64) -> f64 {
        let tp = t.rem_euclid(self.period);
        let phase = tp / self.period;
        match &self.shape {
            DriveShape::Sinusoid { amplitude, phase: p } => amplitude * (2.0 * PI * phase + p).sin(),
            DriveShape::SinusoidSquared { amplitude } => amplitude * (PI * phase).sin().powi(2),
            DriveShape::Constant { value } => *value,
            DriveShape::Sawtooth { amplitude } => amplitude * phase,
            DriveShape::Tabulated { samples } => trig_interpolate(samples, phase),
        }
    }
}

/// Periodic band-limited interpolant through equispaced samples on `[0, 1)`,
/// evaluated at fractional position `s`. Even counts split the Nyquist mode
/// symmetrically so the interpolant is real.
fn trig_interpolate(samples: &[f64], s: f64) -> f64 {
    let n = samples.len();
    let nf = n as f64;
    let mut acc = 0.0;
    for (j, v) in samples.iter().enumerate() {
        let tau = s - j as f64 / nf;
        let sn = (PI * tau).sin();
        let kernel = if sn.abs() < 1e-14 {
            1.0
        } else if n % 2 == 0 {
            (nf * PI * tau).sin() * (PI * tau).cos() / (nf * sn)
        } else {
            (nf * PI * tau).sin() / (nf * sn)
        };
        acc += v * kernel;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveMoments {
    pub m1: f64,
    pub m2: f64,
    pub alpha_ab: f64,
    pub alpha_ac: f64,
    pub alpha_bc: f64,
    /// Conformal-map exponent parameter; defaults to `m1`.
    pub fbar: f64,
}

impl DriveMoments {
    pub fn with_fbar(mut self, fbar: f64) -> Self {
        self.fbar = fbar;
        self
    }
}

/// Period averages of `f` and `f²`, plus the second-order functionals.
///
/// Named shapes use closed forms; tabulated drives use the trapezoid rule on
/// the samples, which is exact for the interpolant. The functionals use
/// `max(quadrature_points, 128)` points.
pub fn moments(drive: &TemporalDrive, quadrature_points: usize) -> Result<DriveMoments> {
    if quadrature_points < MIN_MOMENT_POINTS {
        return Err(Error::validation(format!(
            "moments need at least {MIN_MOMENT_POINTS} quadrature points, got {quadrature_points}"
        )));
    }
    let (m1, m2) = match drive.shape() {
        DriveShape::Sinusoid { amplitude, .. } => (0.0, 0.5 * amplitude * amplitude),
        DriveShape::SinusoidSquared { amplitude } => (0.5 * amplitude, 0.375 * amplitude * amplitude),
        DriveShape::Constant { value } => (*value, value * value),
        DriveShape::Sawtooth { amplitude } => (0.5 * amplitude, amplitude * amplitude / 3.0),
        DriveShape::Tabulated { samples } => {
            let n = samples.len() as f64;
            (
                samples.iter().sum::<f64>() / n,
                samples.iter().map(|v| v * v).sum::<f64>() / n,
            )
        }
    };
    let (alpha_ab, alpha_ac, alpha_bc) =
        alpha_functionals(drive, quadrature_points.max(MIN_ALPHA_POINTS))?;
    Ok(DriveMoments { m1, m2, alpha_ab, alpha_ac, alpha_bc, fbar: m1 })
}

/// `(α_AB, α_AC, α_BC)` by composite Gauss–Legendre quadrature.
///
/// The single integrals use `quadrature_points` nodes on `[0, T]`. The
/// double integral is split along `t₁ = t₂` into two triangles, each
/// integrated by nested Gauss–Legendre rules, so the sign kernel is never
/// sampled on its discontinuity.
pub fn alpha_functionals(drive: &TemporalDrive, quadrature_points: usize) -> Result<(f64, f64, f64)> {
    if quadrature_points < MIN_ALPHA_POINTS {
        return Err(Error::validation(format!(
            "alpha functionals need at least {MIN_ALPHA_POINTS} quadrature points, got {quadrature_points}"
        )));
    }
    let t = drive.period();
    let panels = quadrature_points.div_ceil(GL_ORDER);
    let (nodes, weights) = quadrature::composite_gl(0.0, t, panels, GL_ORDER);
    let f: Vec<f64> = nodes.iter().map(|&s| drive.value(s)).collect();

    let mut ab = 0.0;
    let mut ac = 0.0;
    for ((s, w), v) in nodes.iter().zip(&weights).zip(&f) {
        ab += w * (s - 0.5 * t) * v;
        ac += w * (s - 0.5 * t) * v * v;
    }

    // Inner rule on the unit interval, mapped onto [0, t₁] and [t₁, T].
    let inner_panels = panels.max(1);
    let (un, uw) = quadrature::composite_gl(0.0, 1.0, inner_panels, GL_ORDER);
    let mut bc = 0.0;
    for ((t1, w1), f1) in nodes.iter().zip(&weights).zip(&f) {
        let mut below = 0.0;
        let mut above = 0.0;
        for (u, w) in un.iter().zip(&uw) {
            let t2 = u * t1;
            let f2 = drive.value(t2);
            below += w * t1 * f2 * (f2 - f1);
            let t2 = t1 + u * (t - t1);
            let f2 = drive.value(t2);
            above += w * (t - t1) * f2 * (f2 - f1);
        }
        // sgn(t₁ − t₂) = +1 below the diagonal, −1 above
        bc += w1 * f1 * 0.5 * (below - above);
    }
    let alpha = (ab / t, ac / t, bc / (2.0 * t));
    if !(alpha.0.is_finite() && alpha.1.is_finite() && alpha.2.is_finite()) {
        return Err(Error::numerical("alpha functional quadrature produced non-finite values"));
    }
    Ok(alpha)
}

/// Real spatial drive profile γ̄ on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveProfile {
    gamma_bar: GridFunction,
}

impl DriveProfile {
    pub fn new(gamma_bar: GridFunction) -> Result<Self> {
        gamma_bar.require_real("drive profile")?;
        Ok(DriveProfile { gamma_bar })
    }

    pub fn gamma_bar(&self) -> &GridFunction {
        &self.gamma_bar
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        self.gamma_bar.grid()
    }

    pub fn values(&self) -> Vec<f64> {
        self.gamma_bar.real_parts()
    }
}

pub fn profile_from_samples(grid: Arc<SpatialGrid>, samples: &[f64]) -> Result<DriveProfile> {
    DriveProfile::new(GridFunction::from_real(grid, samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(shape: DriveShape) -> TemporalDrive {
        TemporalDrive::new(1.7, shape).unwrap()
    }

    // Brute-force trapezoid average over a fine uniform grid.
    fn average(d: &TemporalDrive, g: impl Fn(f64) -> f64) -> f64 {
        let n = 20000;
        let t = d.period();
        (0..n).map(|k| g(d.value(k as f64 * t / n as f64))).sum::<f64>() / n as f64
    }

    #[test]
    fn closed_form_moments_match_brute_force() {
        let shapes = [
            DriveShape::Sinusoid { amplitude: 1.3, phase: 0.4 },
            DriveShape::SinusoidSquared { amplitude: 0.8 },
            DriveShape::Constant { value: -0.6 },
        ];
        for s in shapes {
            let d = drive(s);
            let m = moments(&d, 256).unwrap();
            assert!((m.m1 - average(&d, |v| v)).abs() < 1e-12);
            assert!((m.m2 - average(&d, |v| v * v)).abs() < 1e-12);
            assert_eq!(m.fbar, m.m1);
        }
    }

    #[test]
    fn sinusoid_squared_moments() {
        let m = moments(&drive(DriveShape::SinusoidSquared { amplitude: 1.0 }), 64).unwrap();
        assert_eq!((m.m1, m.m2), (0.5, 0.375));
    }

    #[test]
    fn sawtooth_alpha_ab_is_t_over_twelve() {
        let d = drive(DriveShape::Sawtooth { amplitude: 1.0 });
        let (ab, ac, _) = alpha_functionals(&d, 128).unwrap();
        assert!((ab - d.period() / 12.0).abs() < 1e-13);
        // (1/T)∫(t − T/2)(t/T)² dt = T/12
        assert!((ac - d.period() / 12.0).abs() < 1e-13);
    }

    // α_BC through cumulative integrals F_k(t) = ∫₀ᵗ f^k:
    // α_BC = (1/4T)[∫ f (2F₂ − F₂(T)) − ∫ f² (2F₁ − F₁(T))].
    fn alpha_bc_oracle(d: &TemporalDrive) -> f64 {
        let n = 200_000;
        let t = d.period();
        let h = t / n as f64;
        let (mut f1, mut f2) = (0.0, 0.0);
        let mut c1 = vec![0.0; n + 1];
        let mut c2 = vec![0.0; n + 1];
        let vals: Vec<f64> = (0..=n).map(|k| d.value((k as f64 * h).min(t * (1.0 - 1e-15)))).collect();
        for k in 0..n {
            f1 += 0.5 * h * (vals[k] + vals[k + 1]);
            f2 += 0.5 * h * (vals[k].powi(2) + vals[k + 1].powi(2));
            c1[k + 1] = f1;
            c2[k + 1] = f2;
        }
        let integrand = |k: usize| vals[k] * (2.0 * c2[k] - f2) - vals[k].powi(2) * (2.0 * c1[k] - f1);
        let mut acc = 0.0;
        for k in 0..n {
            acc += 0.5 * h * (integrand(k) + integrand(k + 1));
        }
        acc / (4.0 * t)
    }

    #[test]
    fn alpha_bc_matches_cumulative_oracle() {
        for s in [
            DriveShape::Sawtooth { amplitude: 1.0 },
            DriveShape::Sinusoid { amplitude: 1.0, phase: 0.3 },
            DriveShape::Tabulated { samples: (0..32).map(|k| ((k * 7 % 11) as f64 * 0.3).sin()).collect() },
        ] {
            let d = drive(s);
            let (_, _, bc) = alpha_functionals(&d, 256).unwrap();
            let oracle = alpha_bc_oracle(&d);
            assert!((bc - oracle).abs() < 1e-7, "{bc} vs {oracle}");
        }
    }

    #[test]
    fn symmetric_drives_have_vanishing_alphas() {
        for s in [
            DriveShape::Sinusoid { amplitude: 1.0, phase: PI / 2.0 },
            DriveShape::SinusoidSquared { amplitude: 2.0 },
            DriveShape::Constant { value: 3.0 },
        ] {
            let d = drive(s);
            let m = moments(&d, 128).unwrap();
            let tol = 1e-12 * d.period() * (1.0 + m.m2);
            assert!(m.alpha_ab.abs() <= tol && m.alpha_ac.abs() <= tol && m.alpha_bc.abs() <= tol, "{m:?}");
        }
    }

    #[test]
    fn phase_zero_sinusoid_is_not_symmetric() {
        // sin(2πt/T) is odd about T/2; α_AB = −T/(2π)
        let d = drive(DriveShape::Sinusoid { amplitude: 1.0, phase: 0.0 });
        let (ab, _, _) = alpha_functionals(&d, 128).unwrap();
        assert!((ab + d.period() / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn tabulated_interpolant_reproduces_samples_and_modes() {
        let n = 16;
        let samples: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos() + 0.5).collect();
        let d = drive(DriveShape::Tabulated { samples: samples.clone() });
        for (j, s) in samples.iter().enumerate() {
            assert!((d.value(j as f64 * d.period() / n as f64) - s).abs() < 1e-13);
        }
        let t = 0.37 * d.period();
        assert!((d.value(t) - ((2.0 * PI * 0.37).cos() + 0.5)).abs() < 1e-13);
    }

    #[test]
    fn validation() {
        assert!(TemporalDrive::new(0.0, DriveShape::Constant { value: 1.0 }).is_err());
        assert!(TemporalDrive::new(1.0, DriveShape::Tabulated { samples: vec![0.0; 15] }).is_err());
        let mut s = vec![0.0; 16];
        s[2] = f64::NAN;
        assert!(TemporalDrive::new(1.0, DriveShape::Tabulated { samples: s }).is_err());
        let d = drive(DriveShape::Constant { value: 1.0 });
        assert!(moments(&d, 63).is_err());
        assert!(alpha_functionals(&d, 127).is_err());
    }

    #[test]
    fn periodicity() {
        let d = drive(DriveShape::Sinusoid { amplitude: 1.0, phase: 0.2 });
        for &t in &[0.1, 0.9, 1.3] {
            assert!((d.value(t) - d.value(t + d.period())).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_profile() {
        let g = Arc::new(SpatialGrid::periodic_spectral(16, 0.0, 1.0).unwrap());
        let p = profile_from_samples(g, &[0.0; 16]).unwrap();
        assert!(p.values().iter().all(|v| *v == 0.0));
    }
}
