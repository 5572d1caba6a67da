//! Eigendecomposition, quasienergy reality and PT-breaking diagnostics.

use faer::MatRef;

use crate::drive::{DriveProfile, TemporalDrive};
use crate::error::{Error, Result};
use crate::floquet::{sort_spectrum, MICROMOTION_LIMIT};
use crate::geometry::ConformalChart;
use crate::linalg::{self, c64, re, CMat};
use crate::operators::OperatorMatrix;

pub const MAX_DIM: usize = 4096;
/// Fraction of the resolved band kept when de-aliasing η residuals.
pub const DEALIAS_FRACTION: f64 = 2.0 / 3.0;

/// Eigenpairs sorted by real part, then imaginary part. Columns of
/// `vectors` have unit 2-norm.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<c64>,
    pub vectors: CMat,
}

pub fn eigensolve(op: &OperatorMatrix) -> Result<Eigen> {
    eigensolve_matrix(op.matrix().as_ref(), op.hermitian_hint())
}

pub fn eigensolve_matrix(m: MatRef<'_, c64>, hermitian: bool) -> Result<Eigen> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::validation("eigensolve needs a square matrix"));
    }
    if n > MAX_DIM {
        return Err(Error::validation(format!("matrix dimension {n} exceeds {MAX_DIM}")));
    }
    let (values, vectors) = if hermitian {
        let (v, u) = linalg::eigen_hermitian(m)?;
        (v.into_iter().map(re).collect(), u)
    } else {
        linalg::eigen_general(m)?
    };
    let mut order = vec![0; n];
    let mut keyed: Vec<c64> = values.clone();
    sort_spectrum(&mut keyed);
    let mut used = vec![false; n];
    for (slot, target) in keyed.iter().enumerate() {
        let k = (0..n)
            .filter(|&k| !used[k])
            .find(|&k| values[k] == *target)
            .expect("sorted value present");
        used[k] = true;
        order[slot] = k;
    }
    let mut vectors = CMat::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    for j in 0..n {
        let norm = (0..n).map(|i| vectors[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                vectors[(i, j)] /= norm;
            }
        }
    }
    Ok(Eigen { values: keyed, vectors })
}

pub fn spectral_radius(values: &[c64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `η = S†S` with `S = P(t₀)·diag(κ^{-1/4})`, i.e. the diagonal
/// `e^{2f(t₀)γ̄}·κ^{-1/2}` on the lab nodes.
pub fn metric_operator(
    chart: &ConformalChart,
    profile: &DriveProfile,
    drive: &TemporalDrive,
    t0: f64,
) -> Result<OperatorMatrix> {
    let gamma = profile.values();
    if chart.kappa().len() != gamma.len() || chart.grid().len() != profile.grid().len() {
        return Err(Error::validation("chart and profile live on different grids"));
    }
    let f = drive.value(t0);
    let mut d = Vec::with_capacity(gamma.len());
    for (g, k) in gamma.iter().zip(chart.kappa()) {
        let e = f * g;
        if e.abs() > MICROMOTION_LIMIT {
            return Err(Error::range(format!("metric exponent {e:.3e} exceeds ±{MICROMOTION_LIMIT}")));
        }
        d.push((2.0 * e).exp() / k.sqrt());
    }
    OperatorMatrix::new(linalg::real_diag(&d), profile.grid().clone(), "eta", true)
}

/// `‖H†η − ηH‖_F / ‖ηH‖_F`.
pub fn eta_residual(h: MatRef<'_, c64>, eta: MatRef<'_, c64>) -> f64 {
    let eh = linalg::mul(eta, h);
    let he = linalg::mul(linalg::adjoint(h).as_ref(), eta);
    linalg::frobenius(linalg::sub(he.as_ref(), eh.as_ref()).as_ref()) / linalg::frobenius(eh.as_ref())
}

/// The same residual restricted to the de-aliased band `Π(·)Π`.
pub fn eta_residual_projected(h: MatRef<'_, c64>, eta: MatRef<'_, c64>, proj: MatRef<'_, c64>) -> f64 {
    let sandwich = |m: MatRef<'_, c64>| linalg::mul(linalg::mul(proj, m).as_ref(), proj);
    let eh = linalg::mul(eta, h);
    let he = linalg::mul(linalg::adjoint(h).as_ref(), eta);
    let diff = sandwich(linalg::sub(he.as_ref(), eh.as_ref()).as_ref());
    linalg::frobenius(diff.as_ref()) / linalg::frobenius(sandwich(eh.as_ref()).as_ref())
}

/// `max |R·H·R − H| / max |H|` with `R` the grid reflection.
pub fn parity_deviation(op: &OperatorMatrix) -> f64 {
    let r = op.grid().reflection_matrix();
    let rhr = linalg::mul(linalg::mul(r.as_ref(), op.matrix().as_ref()).as_ref(), r.as_ref());
    linalg::max_abs(linalg::sub(rhr.as_ref(), op.matrix().as_ref()).as_ref())
        / linalg::max_abs(op.matrix().as_ref())
}

/// Frobenius norm of `H_F − H_F⁽¹⁾`.
pub fn magnus_truncation(h_f: &OperatorMatrix, h1: &OperatorMatrix) -> f64 {
    linalg::frobenius(linalg::sub(h_f.matrix().as_ref(), h1.matrix().as_ref()).as_ref())
}

/// Largest distance under a greedy nearest-neighbour matching of two spectra
/// of equal length.
pub fn spectral_distance(a: &[c64], b: &[c64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra must have equal length");
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (*x - *y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("unused partner");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

#[derive(Debug, Clone)]
pub struct RealityOptions {
    /// Reality threshold relative to the spectral radius.
    pub relative_threshold: f64,
    /// Measured `‖H_F − H_F⁽¹⁾‖`; when present the threshold is at least
    /// `magnus_factor` times this value.
    pub magnus_estimate: Option<f64>,
    pub magnus_factor: f64,
    /// Conjugate-pair tolerance relative to the spectral radius.
    pub pairing_tolerance: f64,
    /// Coordinate used for the localization asymmetry; the grid's first
    /// coordinate when absent.
    pub coordinate: Option<Vec<f64>>,
    pub midpoint: Option<f64>,
    /// Also report the η residual on the de-aliased band (periodic spectral
    /// grids only).
    pub dealias: bool,
}

impl Default for RealityOptions {
    fn default() -> Self {
        RealityOptions {
            relative_threshold: 1e-8,
            magnus_estimate: None,
            magnus_factor: 10.0,
            pairing_tolerance: 1e-6,
            coordinate: None,
            midpoint: None,
            dealias: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<c64>,
    pub max_imag: f64,
    pub pt_broken: bool,
    pub conjugate_pairs: Vec<(usize, usize)>,
    pub eta_residual: Option<f64>,
    pub eta_residual_dealiased: Option<f64>,
    pub localization_asymmetry: f64,
    pub spectral_radius: f64,
    pub threshold: f64,
    pub magnus_estimate: Option<f64>,
}

pub fn reality_report(
    op: &OperatorMatrix,
    eta: Option<&OperatorMatrix>,
    options: &RealityOptions,
) -> Result<SpectralReport> {
    let eig = eigensolve(op)?;
    let values = eig.values;
    let rho = spectral_radius(&values);
    let max_imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let mut threshold = options.relative_threshold * rho;
    if let Some(m) = options.magnus_estimate {
        threshold = threshold.max(options.magnus_factor * m);
    }
    let pt_broken = max_imag > threshold;
    let conjugate_pairs = conjugate_pairs(&values, threshold, options.pairing_tolerance * rho.max(1.0));

    let (eta_residual, eta_residual_dealiased) = match eta {
        Some(e) => {
            if e.dim() != op.dim() {
                return Err(Error::validation("η and operator dimensions differ"));
            }
            let full = eta_residual(op.matrix().as_ref(), e.matrix().as_ref());
            let grid = op.grid();
            let band = if options.dealias && grid.is_periodic() {
                let p = grid.low_pass_projector(DEALIAS_FRACTION)?;
                Some(eta_residual_projected(op.matrix().as_ref(), e.matrix().as_ref(), p.as_ref()))
            } else {
                None
            };
            (Some(full), band)
        }
        None => (None, None),
    };

    let coordinate = match &options.coordinate {
        Some(c) if c.len() == op.dim() => c.clone(),
        Some(_) => return Err(Error::validation("asymmetry coordinate has the wrong length")),
        None => op.grid().coordinate(0),
    };
    let midpoint = options.midpoint.unwrap_or_else(|| {
        let a = op.grid().axis(0);
        a.start + 0.5 * a.length
    });
    let localization_asymmetry = match values
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.im.abs().total_cmp(&q.1.im.abs()))
    {
        Some((k, _)) => asymmetry(eig.vectors.as_ref(), k, &coordinate, midpoint),
        None => 0.0,
    };

    Ok(SpectralReport {
        eigenvalues: values,
        max_imag,
        pt_broken,
        conjugate_pairs,
        eta_residual,
        eta_residual_dealiased,
        localization_asymmetry,
        spectral_radius: rho,
        threshold,
        magnus_estimate: options.magnus_estimate,
    })
}

/// Greedy matching of eigenvalues above the threshold with conjugates of
/// those below `−threshold`.
fn conjugate_pairs(values: &[c64], threshold: f64, tol: f64) -> Vec<(usize, usize)> {
    let mut upper: Vec<usize> = (0..values.len()).filter(|&k| values[k].im > threshold).collect();
    upper.sort_by(|&a, &b| values[b].im.total_cmp(&values[a].im));
    let mut used = vec![false; values.len()];
    let mut pairs = Vec::new();
    for i in upper {
        let best = (0..values.len())
            .filter(|&j| !used[j] && values[j].im < -threshold)
            .map(|j| (j, (values[i] - values[j].conj()).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        if let Some((j, d)) = best {
            if d <= tol {
                used[j] = true;
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// `⟨sign(c − c_mid)⟩` under `|φ|²`.
fn asymmetry(vectors: MatRef<'_, c64>, k: usize, coordinate: &[f64], mid: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, c) in coordinate.iter().enumerate() {
        let w = vectors[(i, k)].norm_sqr();
        let s = if (c - mid).abs() < 1e-12 * (1.0 + mid.abs()) { 0.0 } else { (c - mid).signum() };
        num += s * w;
        den += w;
    }
    if den > 0.0 { num / den } else { 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::{profile_from_samples, DriveShape};
    use crate::geometry::forward_chart;
    use crate::grid::{laplacian_matrix, SpatialGrid};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::periodic_spectral(n, 0.0, 2.0 * PI).unwrap())
    }

    #[test]
    fn diagonal_is_sorted() {
        let g = grid(8);
        let d: Vec<c64> = [3.0, -1.0, 2.0, 0.5, 7.0, -4.0, 1.0, 0.0].iter().map(|v| re(*v)).collect();
        let op = OperatorMatrix::new(linalg::diag(&d), g, "d", false).unwrap();
        let e = eigensolve(&op).unwrap();
        let got: Vec<f64> = e.values.iter().map(|v| v.re).collect();
        assert_eq!(got, vec![-4.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 7.0]);
    }

    #[test]
    fn laplacian_spectrum_has_fourier_multiplicities() {
        let g = grid(16);
        let lap = laplacian_matrix(&g);
        let m = linalg::scale(lap.matrix().as_ref(), re(-1.0));
        let op = OperatorMatrix::new(m, g, "-lap", true).unwrap();
        let e = eigensolve(&op).unwrap();
        let mut expect: Vec<f64> = (-7i32..=8).map(|k| (k * k) as f64).collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&expect) {
            assert!((a.re - b).abs() < 1e-9 && a.im == 0.0);
        }
    }

    #[test]
    fn general_residual_and_pairs() {
        let g = grid(8);
        let m = CMat::from_fn(8, 8, |i, j| {
            let s = ((i * 7 + j * 13) % 11) as f64 - 5.0;
            c64::new(s / 3.0, 0.0)
        });
        let op = OperatorMatrix::new(m.clone(), g, "real", false).unwrap();
        let e = eigensolve(&op).unwrap();
        for k in 0..8 {
            let v: Vec<c64> = (0..8).map(|i| e.vectors[(i, k)]).collect();
            let mv = linalg::mat_vec(m.as_ref(), &v);
            let r: f64 = mv.iter().zip(&v).map(|(a, b)| (*a - e.values[k] * *b).norm_sqr()).sum();
            assert!(r.sqrt() < 1e-10);
        }
        let rep = reality_report(&op, None, &RealityOptions::default()).unwrap();
        let complex = rep.eigenvalues.iter().filter(|v| v.im.abs() > rep.threshold).count();
        assert_eq!(2 * rep.conjugate_pairs.len(), complex);
    }

    #[test]
    fn hermitian_report_is_real() {
        let g = grid(16);
        let m = CMat::from_fn(16, 16, |i, j| {
            let a = ((i + 2 * j) % 5) as f64;
            let b = ((j + 2 * i) % 5) as f64;
            c64::new(a + b, if i == j { 0.0 } else { (i as f64 - j as f64) / 7.0 })
        });
        let op = OperatorMatrix::new(m, g, "h", true).unwrap();
        let rep = reality_report(&op, None, &RealityOptions::default()).unwrap();
        assert!(!rep.pt_broken);
        assert!(rep.max_imag <= 1e-12 * rep.spectral_radius);
    }

    #[test]
    fn flat_metric_is_identity() {
        let g = grid(16);
        let p = profile_from_samples(g.clone(), &[0.0; 16]).unwrap();
        let chart = forward_chart(&p, -0.5).unwrap();
        let drive = TemporalDrive::new(1.0, DriveShape::SinusoidSquared { amplitude: 1.0 }).unwrap();
        let eta = metric_operator(&chart, &p, &drive, 0.3).unwrap();
        assert!(linalg::max_abs(linalg::sub(eta.matrix().as_ref(), linalg::identity(16).as_ref()).as_ref()) < 1e-15);
    }

    #[test]
    fn spectral_distance_matches_permutations() {
        let a = [re(1.0), re(2.0), c64::new(0.0, 1.0)];
        let b = [c64::new(0.0, 1.0), re(2.0 + 1e-3), re(1.0)];
        assert!((spectral_distance(&a, &b) - 1e-3).abs() < 1e-15);
    }
}
