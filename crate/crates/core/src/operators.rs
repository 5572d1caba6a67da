//! Discretized A, B, C, the instantaneous H′(t), and the Magnus approximants.

use std::sync::Arc;

use crate::drive::{DriveMoments, DriveProfile, TemporalDrive};
use crate::error::{Error, Result};
use crate::grid::{self, GridFunction, SpatialGrid};
use crate::linalg::{self, re, CMat, ONE};
use crate::quadrature;

/// Dense square operator on a grid, with a label describing its origin.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: CMat,
    grid: Arc<SpatialGrid>,
    label: String,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    pub fn new(
        matrix: CMat,
        grid: Arc<SpatialGrid>,
        label: impl Into<String>,
        hermitian_hint: bool,
    ) -> Result<Self> {
        let n = grid.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::validation(format!(
                "operator is {}x{} but grid has {n} points",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if hermitian_hint {
            let adj = linalg::adjoint(matrix.as_ref());
            let dev = linalg::max_abs(linalg::sub(matrix.as_ref(), adj.as_ref()).as_ref());
            if dev > 1e-12 * linalg::max_abs(matrix.as_ref()) {
                return Err(Error::validation(format!(
                    "operator flagged Hermitian deviates by {dev:.3e}"
                )));
            }
        }
        Ok(OperatorMatrix { matrix, grid, label: label.into(), hermitian_hint })
    }

    /// Construction for matrices that are correct by assembly.
    pub(crate) fn from_parts(
        matrix: CMat,
        grid: Arc<SpatialGrid>,
        label: impl Into<String>,
        hermitian_hint: bool,
    ) -> Self {
        debug_assert_eq!(matrix.nrows(), grid.len());
        OperatorMatrix { matrix, grid, label: label.into(), hermitian_hint }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// The three operators of `H′(t) = A + f(t)·B + f(t)²·C`.
#[derive(Debug, Clone)]
pub struct DriveOperators {
    pub a: OperatorMatrix,
    pub b: OperatorMatrix,
    pub c: OperatorMatrix,
}

impl DriveOperators {
    pub fn grid(&self) -> &Arc<SpatialGrid> {
        self.a.grid()
    }
}

/// `A = −∇² − V`, `B = −2∇γ̄·∇ − ∇²γ̄`, `C = −(∇γ̄)²`.
pub fn build_abc(profile: &DriveProfile, potential: &GridFunction) -> Result<DriveOperators> {
    let grid = profile.grid().clone();
    if potential.grid().as_ref() != grid.as_ref() {
        return Err(Error::validation("potential and drive profile live on different grids"));
    }
    let v = potential.require_real("static potential")?;
    let n = grid.len();

    let lap = grid::laplacian_matrix(&grid).into_matrix();
    let mut a = linalg::scale(lap.as_ref(), re(-1.0));
    for (j, vj) in v.iter().enumerate() {
        a[(j, j)] -= re(*vj);
    }

    let gradients = grid::gradient_apply(profile.gamma_bar());
    let lap_gamma = profile.gamma_bar().apply(&lap)?;
    let mut b = linalg::real_diag(&lap_gamma.real_parts().iter().map(|x| -x).collect::<Vec<_>>());
    let mut grad_sq = vec![0.0; n];
    for (d, g) in gradients.iter().enumerate() {
        let gv = g.real_parts();
        let dm = grid.derivative_matrix(d);
        let scaled = linalg::mul(linalg::real_diag(&gv).as_ref(), dm.as_ref());
        b = linalg::combine(&[(ONE, b.as_ref()), (re(-2.0), scaled.as_ref())]);
        for (s, x) in grad_sq.iter_mut().zip(&gv) {
            *s += x * x;
        }
    }
    let c = linalg::real_diag(&grad_sq.iter().map(|x| -x).collect::<Vec<_>>());

    Ok(DriveOperators {
        a: OperatorMatrix::from_parts(a, grid.clone(), "A", true),
        b: OperatorMatrix::from_parts(b, grid.clone(), "B", false),
        c: OperatorMatrix::from_parts(c, grid, "C", true),
    })
}

fn affine(ops: &DriveOperators, fb: f64, fc: f64) -> CMat {
    linalg::combine(&[
        (ONE, ops.a.matrix().as_ref()),
        (re(fb), ops.b.matrix().as_ref()),
        (re(fc), ops.c.matrix().as_ref()),
    ])
}

fn is_drive_free(ops: &DriveOperators) -> bool {
    linalg::max_abs(ops.b.matrix().as_ref()) == 0.0 && linalg::max_abs(ops.c.matrix().as_ref()) == 0.0
}

/// Instantaneous `H′(t)`.
pub fn h_prime(ops: &DriveOperators, drive: &TemporalDrive, t: f64) -> OperatorMatrix {
    let f = drive.value(t);
    let hermitian = f == 0.0 || is_drive_free(ops);
    OperatorMatrix::from_parts(affine(ops, f, f * f), ops.grid().clone(), "H'", hermitian)
}

/// First-order Floquet Hamiltonian `A + m1·B + m2·C`.
pub fn magnus1(ops: &DriveOperators, moments: &DriveMoments) -> OperatorMatrix {
    let hermitian = is_drive_free(ops);
    OperatorMatrix::from_parts(affine(ops, moments.m1, moments.m2), ops.grid().clone(), "HF1", hermitian)
}

/// Second-order Floquet Hamiltonian: `magnus1` plus
/// `α_AB[A,B] + α_AC[A,C] + α_BC[B,C]`.
pub fn magnus2(ops: &DriveOperators, moments: &DriveMoments) -> OperatorMatrix {
    let mut h = affine(ops, moments.m1, moments.m2);
    let terms = [
        (moments.alpha_ab, &ops.a, &ops.b),
        (moments.alpha_ac, &ops.a, &ops.c),
        (moments.alpha_bc, &ops.b, &ops.c),
    ];
    for (alpha, x, y) in terms {
        if alpha != 0.0 {
            let k = linalg::commutator(x.matrix().as_ref(), y.matrix().as_ref());
            h = linalg::combine(&[(ONE, h.as_ref()), (re(alpha), k.as_ref())]);
        }
    }
    let hermitian = is_drive_free(ops);
    OperatorMatrix::from_parts(h, ops.grid().clone(), "HF2", hermitian)
}

/// Period average `(1/T)∫H′(t)dt` by composite Gauss–Legendre quadrature.
pub fn time_average(ops: &DriveOperators, drive: &TemporalDrive, points: usize) -> OperatorMatrix {
    let t = drive.period();
    let order = 16;
    let (nodes, weights) = quadrature::composite_gl(0.0, t, points.div_ceil(order).max(1), order);
    let (mut fb, mut fc) = (0.0, 0.0);
    for (s, w) in nodes.iter().zip(&weights) {
        let f = drive.value(*s);
        fb += w * f / t;
        fc += w * f * f / t;
    }
    OperatorMatrix::from_parts(affine(ops, fb, fc), ops.grid().clone(), "<H'>", is_drive_free(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::{moments, profile_from_samples, DriveShape};
    use std::f64::consts::PI;

    fn setup(gamma: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> DriveOperators {
        let g = Arc::new(SpatialGrid::periodic_spectral(32, 0.0, 2.0 * PI).unwrap());
        let x = g.coordinate(0);
        let prof = profile_from_samples(g.clone(), &x.iter().map(|&x| gamma(x)).collect::<Vec<_>>()).unwrap();
        let pot = GridFunction::from_real(g, &x.iter().map(|&x| v(x)).collect::<Vec<_>>()).unwrap();
        build_abc(&prof, &pot).unwrap()
    }

    fn max_diff(a: &CMat, b: &CMat) -> f64 {
        linalg::max_abs(linalg::sub(a.as_ref(), b.as_ref()).as_ref())
    }

    #[test]
    fn zero_profile_gives_free_operators() {
        let ops = setup(|_| 0.0, |_| 0.0);
        let lap = grid::laplacian_matrix(ops.grid());
        assert_eq!(max_diff(ops.a.matrix(), &linalg::scale(lap.matrix().as_ref(), re(-1.0))), 0.0);
        assert_eq!(linalg::max_abs(ops.b.matrix().as_ref()), 0.0);
        assert_eq!(linalg::max_abs(ops.c.matrix().as_ref()), 0.0);
    }

    #[test]
    fn constant_profile_is_pure_gauge() {
        let ops = setup(|_| 0.7, |x| x.cos());
        assert!(linalg::max_abs(ops.b.matrix().as_ref()) < 1e-12);
        assert!(linalg::max_abs(ops.c.matrix().as_ref()) < 1e-24);
    }

    #[test]
    fn c_matches_pointwise_formula() {
        let (lambda, q, fbar) = (0.3, 2.0, 0.5);
        let amp = lambda / (4.0 * fbar);
        let ops = setup(|x| amp * (q * x).cos(), |_| 0.0);
        let x = ops.grid().coordinate(0);
        for (j, xj) in x.iter().enumerate() {
            let expect = -(amp * q).powi(2) * (q * xj).sin().powi(2);
            assert!((ops.c.matrix()[(j, j)].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn a_is_hermitian_b_is_real() {
        let ops = setup(|x| 0.2 * x.sin(), |x| 0.5 * x.cos());
        let adj = linalg::adjoint(ops.a.matrix().as_ref());
        assert!(max_diff(ops.a.matrix(), &adj) < 1e-12);
        let b = ops.b.matrix();
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                assert_eq!(b[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn h_prime_evaluations() {
        let ops = setup(|x| 0.2 * x.sin(), |_| 0.0);
        let sin = TemporalDrive::new(1.0, DriveShape::Sinusoid { amplitude: 1.0, phase: 0.0 }).unwrap();
        let h0 = h_prime(&ops, &sin, 0.0);
        assert_eq!(max_diff(h0.matrix(), ops.a.matrix()), 0.0);
        let hq = h_prime(&ops, &sin, 0.25);
        let expect = affine(&ops, 1.0, 1.0);
        assert!(max_diff(hq.matrix(), &expect) < 1e-12);
        let c = TemporalDrive::new(1.0, DriveShape::Constant { value: 0.4 }).unwrap();
        let m = moments(&c, 64).unwrap();
        assert!(max_diff(magnus1(&ops, &m).matrix(), h_prime(&ops, &c, 0.3).matrix()) < 1e-14);
    }

    #[test]
    fn magnus1_sinusoid_squared() {
        let ops = setup(|x| 0.2 * x.sin(), |_| 0.0);
        let d = TemporalDrive::new(1.0, DriveShape::SinusoidSquared { amplitude: 1.0 }).unwrap();
        let m = moments(&d, 64).unwrap();
        assert!(max_diff(magnus1(&ops, &m).matrix(), &affine(&ops, 0.5, 0.375)) == 0.0);
    }

    #[test]
    fn magnus1_is_the_time_average() {
        let ops = setup(|x| 0.3 * x.cos() + 0.1 * (2.0 * x).sin(), |_| 0.0);
        for shape in [
            DriveShape::SinusoidSquared { amplitude: 1.2 },
            DriveShape::Sinusoid { amplitude: 1.0, phase: 0.3 },
            DriveShape::Sawtooth { amplitude: 0.5 },
        ] {
            let d = TemporalDrive::new(0.8, shape).unwrap();
            let m = moments(&d, 64).unwrap();
            let avg = time_average(&ops, &d, 256);
            let h1 = magnus1(&ops, &m);
            let scale = linalg::max_abs(h1.matrix().as_ref());
            assert!(max_diff(h1.matrix(), avg.matrix()) <= 1e-10 * scale);
        }
    }

    #[test]
    fn magnus2_reduces_to_magnus1_for_symmetric_drive() {
        let ops = setup(|x| 0.3 * x.cos(), |_| 0.0);
        let d = TemporalDrive::new(0.5, DriveShape::SinusoidSquared { amplitude: 1.0 }).unwrap();
        let m = moments(&d, 128).unwrap();
        let h1 = magnus1(&ops, &m);
        let h2 = magnus2(&ops, &m);
        let scale = linalg::max_abs(h1.matrix().as_ref());
        assert!(max_diff(h1.matrix(), h2.matrix()) <= 1e-9 * scale);
    }

    #[test]
    fn magnus2_sawtooth_correction() {
        let ops = setup(|x| 0.3 * x.cos(), |_| 0.0);
        let d = TemporalDrive::new(0.5, DriveShape::Sawtooth { amplitude: 1.0 }).unwrap();
        let m = moments(&d, 128).unwrap();
        assert!((m.alpha_ab - 0.5 / 12.0).abs() < 1e-13);
        let h2 = magnus2(&ops, &m);
        let mut expect = affine(&ops, m.m1, m.m2);
        let ab = linalg::commutator(ops.a.matrix().as_ref(), ops.b.matrix().as_ref());
        let ac = linalg::commutator(ops.a.matrix().as_ref(), ops.c.matrix().as_ref());
        let bc = linalg::commutator(ops.b.matrix().as_ref(), ops.c.matrix().as_ref());
        expect = linalg::combine(&[
            (ONE, expect.as_ref()),
            (re(m.alpha_ab), ab.as_ref()),
            (re(m.alpha_ac), ac.as_ref()),
            (re(m.alpha_bc), bc.as_ref()),
        ]);
        assert!(max_diff(h2.matrix(), &expect) <= 1e-12 * linalg::max_abs(expect.as_ref()));
    }

    #[test]
    fn constant_profile_makes_magnus2_equal_a() {
        let ops = setup(|_| -1.3, |x| x.sin());
        let d = TemporalDrive::new(0.5, DriveShape::Sawtooth { amplitude: 1.0 }).unwrap();
        let m = moments(&d, 128).unwrap();
        let h2 = magnus2(&ops, &m);
        assert!(max_diff(h2.matrix(), ops.a.matrix()) <= 1e-10 * linalg::max_abs(ops.a.matrix().as_ref()));
    }

    #[test]
    fn operator_validation() {
        let g = Arc::new(SpatialGrid::periodic_spectral(8, 0.0, 1.0).unwrap());
        assert!(OperatorMatrix::new(CMat::zeros(7, 7), g.clone(), "x", false).is_err());
        let mut m = CMat::zeros(8, 8);
        m[(0, 1)] = re(1.0);
        assert!(OperatorMatrix::new(m, g, "x", true).is_err());
    }

    #[test]
    fn potential_must_be_real_and_colocated() {
        let g = Arc::new(SpatialGrid::periodic_spectral(8, 0.0, 1.0).unwrap());
        let other = Arc::new(SpatialGrid::periodic_spectral(8, 0.0, 2.0).unwrap());
        let prof = profile_from_samples(g.clone(), &[0.0; 8]).unwrap();
        let mut vals = vec![re(0.0); 8];
        vals[0] = linalg::I;
        let complex = GridFunction::new(g, vals).unwrap();
        assert!(build_abc(&prof, &complex).is_err());
        let wrong = GridFunction::from_real(other, &[0.0; 8]).unwrap();
        assert!(build_abc(&prof, &wrong).is_err());
    }
}
