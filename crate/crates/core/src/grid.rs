//! Uniform tensor-product grids, differentiation matrices and grid functions.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c64, re, CMat, ZERO};
use crate::operators::OperatorMatrix;

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Periodic,
    Dirichlet,
    Neumann,
    /// `∂ₙu + β u = 0` on both ends with outward normal `n`.
    RobinReal(f64),
}

/// Differentiation scheme shared by every operator built on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Discretization {
    /// Second-order central differences.
    Stencil,
    /// Fourier collocation; periodic axes only.
    Spectral,
}

/// One uniform axis.
///
/// Periodic axes hold `n` points `start + j·L/n` (no duplicate endpoint).
/// Other axes hold `n` points including both ends, spacing `L/(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub start: f64,
    pub length: f64,
    pub bc: BoundaryCondition,
}

impl Axis {
    pub fn new(n: usize, start: f64, length: f64, bc: BoundaryCondition) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::validation(format!(
                "axis needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) || !start.is_finite() {
            return Err(Error::validation(format!(
                "axis extent must be finite and positive, got start {start}, length {length}"
            )));
        }
        if let BoundaryCondition::RobinReal(beta) = bc {
            if !beta.is_finite() {
                return Err(Error::validation("Robin coefficient must be finite"));
            }
        }
        Ok(Axis { n, start, length, bc })
    }

    pub fn periodic(n: usize, start: f64, length: f64) -> Result<Self> {
        Axis::new(n, start, length, BoundaryCondition::Periodic)
    }

    pub fn is_periodic(&self) -> bool {
        self.bc == BoundaryCondition::Periodic
    }

    pub fn spacing(&self) -> f64 {
        if self.is_periodic() {
            self.length / self.n as f64
        } else {
            self.length / (self.n - 1) as f64
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|j| self.start + j as f64 * h).collect()
    }

    /// Signed Fourier wavenumbers of a periodic axis in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j } else { j - n };
                2.0 * PI * m as f64 / self.length
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    axes: Vec<Axis>,
    scheme: Discretization,
}

impl SpatialGrid {
    pub fn new(axes: Vec<Axis>, scheme: Discretization) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::validation("grids are one- or two-dimensional"));
        }
        if scheme == Discretization::Spectral && axes.iter().any(|a| !a.is_periodic()) {
            return Err(Error::validation(
                "spectral differentiation requires periodic boundary conditions",
            ));
        }
        Ok(SpatialGrid { axes, scheme })
    }

    pub fn line(axis: Axis, scheme: Discretization) -> Result<Self> {
        SpatialGrid::new(vec![axis], scheme)
    }

    /// Periodic 1D Fourier grid on `[start, start + length)`.
    pub fn periodic_spectral(n: usize, start: f64, length: f64) -> Result<Self> {
        SpatialGrid::line(Axis::periodic(n, start, length)?, Discretization::Spectral)
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, dim: usize) -> &Axis {
        &self.axes[dim]
    }

    pub fn scheme(&self) -> Discretization {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.axes.iter().all(Axis::is_periodic)
    }

    /// Coordinate along `dim` of every grid point, in storage order
    /// (first axis slowest).
    pub fn coordinate(&self, dim: usize) -> Vec<f64> {
        let c = self.axes[dim].coords();
        match (self.dims(), dim) {
            (1, _) => c,
            (_, 0) => {
                let nv = self.axes[1].n;
                (0..self.len()).map(|k| c[k / nv]).collect()
            }
            _ => {
                let nv = self.axes[1].n;
                (0..self.len()).map(|k| c[k % nv]).collect()
            }
        }
    }

    fn embed(&self, dim: usize, op: CMat) -> CMat {
        if self.dims() == 1 {
            return op;
        }
        if dim == 0 {
            linalg::kron(op.as_ref(), linalg::identity(self.axes[1].n).as_ref())
        } else {
            linalg::kron(linalg::identity(self.axes[0].n).as_ref(), op.as_ref())
        }
    }

    /// First-derivative matrix along `dim`.
    pub fn derivative_matrix(&self, dim: usize) -> CMat {
        self.embed(dim, first_derivative(&self.axes[dim], self.scheme))
    }

    /// Second-derivative matrix along `dim`, boundary rows included.
    pub fn second_derivative_matrix(&self, dim: usize) -> CMat {
        self.embed(dim, second_derivative(&self.axes[dim], self.scheme))
    }

    /// Index reversal `x → -x` about the axis origin (periodic) or about
    /// the axis midpoint (bounded), applied on every axis.
    pub fn reflection_matrix(&self) -> CMat {
        let maps: Vec<Vec<usize>> = self
            .axes
            .iter()
            .map(|a| {
                (0..a.n)
                    .map(|j| if a.is_periodic() { (a.n - j) % a.n } else { a.n - 1 - j })
                    .collect()
            })
            .collect();
        let n = self.len();
        let target = |k: usize| -> usize {
            if maps.len() == 1 {
                maps[0][k]
            } else {
                let nv = self.axes[1].n;
                maps[0][k / nv] * nv + maps[1][k % nv]
            }
        };
        CMat::from_fn(n, n, |i, j| if target(j) == i { linalg::ONE } else { ZERO })
    }

    /// Orthogonal projector onto Fourier modes with `|m| ≤ fraction · n/2`
    /// on every axis. Periodic grids only.
    pub fn low_pass_projector(&self, fraction: f64) -> Result<CMat> {
        if !self.is_periodic() {
            return Err(Error::validation("low-pass projection needs a periodic grid"));
        }
        let mut out: Option<CMat> = None;
        for a in &self.axes {
            let n = a.n;
            let cutoff = (fraction * n as f64 / 2.0).floor() as i64;
            let p = CMat::from_fn(n, n, |i, j| {
                let d = i as f64 - j as f64;
                let s: f64 = (-cutoff..=cutoff)
                    .map(|m| (2.0 * PI * m as f64 * d / n as f64).cos())
                    .sum();
                re(s / n as f64)
            });
            out = Some(match out {
                None => p,
                Some(prev) => linalg::kron(prev.as_ref(), p.as_ref()),
            });
        }
        Ok(out.unwrap())
    }
}

fn first_derivative(axis: &Axis, scheme: Discretization) -> CMat {
    let n = axis.n;
    let h = axis.spacing();
    match scheme {
        Discretization::Spectral => {
            let w = 2.0 * PI / axis.length;
            let t = 2.0 * PI / n as f64;
            CMat::from_fn(n, n, |i, j| {
                if i == j {
                    return ZERO;
                }
                let d = i as i64 - j as i64;
                let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let half = d as f64 * t / 2.0;
                let v = if n % 2 == 0 {
                    0.5 * sign / half.tan()
                } else {
                    0.5 * sign / half.sin()
                };
                re(w * v)
            })
        }
        Discretization::Stencil => {
            let mut m = CMat::zeros(n, n);
            let c = 1.0 / (2.0 * h);
            if axis.is_periodic() {
                for i in 0..n {
                    m[(i, (i + 1) % n)] = re(c);
                    m[(i, (i + n - 1) % n)] = re(-c);
                }
            } else {
                for i in 1..n - 1 {
                    m[(i, i + 1)] = re(c);
                    m[(i, i - 1)] = re(-c);
                }
                // one-sided second-order closures
                m[(0, 0)] = re(-3.0 * c);
                m[(0, 1)] = re(4.0 * c);
                m[(0, 2)] = re(-c);
                m[(n - 1, n - 1)] = re(3.0 * c);
                m[(n - 1, n - 2)] = re(-4.0 * c);
                m[(n - 1, n - 3)] = re(c);
            }
            m
        }
    }
}

fn second_derivative(axis: &Axis, scheme: Discretization) -> CMat {
    let n = axis.n;
    let h = axis.spacing();
    match scheme {
        Discretization::Spectral => {
            let w = 2.0 * PI / axis.length;
            let t = 2.0 * PI / n as f64;
            CMat::from_fn(n, n, |i, j| {
                let v = if i == j {
                    if n % 2 == 0 {
                        -PI * PI / (3.0 * t * t) - 1.0 / 6.0
                    } else {
                        -PI * PI / (3.0 * t * t) + 1.0 / 12.0
                    }
                } else {
                    let d = i as i64 - j as i64;
                    let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let half = d as f64 * t / 2.0;
                    if n % 2 == 0 {
                        -0.5 * sign / (half.sin() * half.sin())
                    } else {
                        -0.5 * sign / (half.sin() * half.tan())
                    }
                };
                re(w * w * v)
            })
        }
        Discretization::Stencil => {
            let mut m = CMat::zeros(n, n);
            let c = 1.0 / (h * h);
            for i in 0..n {
                m[(i, i)] = re(-2.0 * c);
            }
            for i in 0..n - 1 {
                m[(i, i + 1)] = re(c);
                m[(i + 1, i)] = re(c);
            }
            match axis.bc {
                BoundaryCondition::Periodic => {
                    m[(0, n - 1)] = re(c);
                    m[(n - 1, 0)] = re(c);
                }
                // Homogeneous values sit one spacing outside the stored nodes.
                BoundaryCondition::Dirichlet => {}
                BoundaryCondition::Neumann => {
                    m[(0, 0)] = re(-c);
                    m[(n - 1, n - 1)] = re(-c);
                }
                BoundaryCondition::RobinReal(beta) => {
                    m[(0, 0)] = re(-c - beta / h);
                    m[(n - 1, n - 1)] = re(-c - beta / h);
                }
            }
            m
        }
    }
}

/// Discretized `+∇²` on the grid (callers negate). Symmetric for every
/// supported boundary condition.
pub fn laplacian_matrix(grid: &Arc<SpatialGrid>) -> OperatorMatrix {
    let mut lap = grid.second_derivative_matrix(0);
    for d in 1..grid.dims() {
        let extra = grid.second_derivative_matrix(d);
        lap = linalg::combine(&[(linalg::ONE, lap.as_ref()), (linalg::ONE, extra.as_ref())]);
    }
    OperatorMatrix::from_parts(lap, grid.clone(), "laplacian", true)
}

/// Complex scalar field sampled on every point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<SpatialGrid>,
    values: Vec<c64>,
}

impl GridFunction {
    pub fn new(grid: Arc<SpatialGrid>, values: Vec<c64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::validation(format!(
                "grid function has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::validation("grid function values must be finite"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_real(grid: Arc<SpatialGrid>, values: &[f64]) -> Result<Self> {
        GridFunction::new(grid, values.iter().map(|&v| re(v)).collect())
    }

    pub fn from_fn(grid: Arc<SpatialGrid>, f: impl Fn(&[f64]) -> c64) -> Result<Self> {
        let coords: Vec<Vec<f64>> = (0..grid.dims()).map(|d| grid.coordinate(d)).collect();
        let values = (0..grid.len())
            .map(|k| {
                let p: Vec<f64> = coords.iter().map(|c| c[k]).collect();
                f(&p)
            })
            .collect();
        GridFunction::new(grid, values)
    }

    pub fn zeros(grid: Arc<SpatialGrid>) -> Self {
        let n = grid.len();
        GridFunction { grid, values: vec![ZERO; n] }
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[c64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<c64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Real parts, or a validation error if any imaginary part is nonzero.
    pub fn require_real(&self, what: &str) -> Result<Vec<f64>> {
        if self.is_real() {
            Ok(self.real_parts())
        } else {
            Err(Error::validation(format!("{what} must be real-valued")))
        }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, op: &CMat) -> Result<GridFunction> {
        GridFunction::new(self.grid.clone(), linalg::mat_vec(op.as_ref(), &self.values))
    }
}

/// Partial derivatives of `f` along every grid dimension, using the same
/// scheme as [`laplacian_matrix`].
pub fn gradient_apply(f: &GridFunction) -> Vec<GridFunction> {
    let grid = f.grid();
    (0..grid.dims())
        .map(|d| {
            let dm = grid.derivative_matrix(d);
            GridFunction {
                grid: grid.clone(),
                values: linalg::mat_vec(dm.as_ref(), f.values()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid1(n: usize, l: f64, bc: BoundaryCondition, scheme: Discretization) -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::line(Axis::new(n, 0.0, l, bc).unwrap(), scheme).unwrap())
    }

    // Differentiation matrices assembled by direct DFT summation.
    fn dft_derivative(n: usize, l: f64, order: u32) -> Vec<Vec<f64>> {
        let axis = Axis::periodic(n, 0.0, l).unwrap();
        let k = axis.wavenumbers();
        let x = axis.coords();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = c64::new(0.0, 0.0);
                        for (m, &km) in k.iter().enumerate() {
                            let symbol = match order {
                                1 if n % 2 == 0 && m == n / 2 => c64::new(0.0, 0.0),
                                1 => c64::new(0.0, km),
                                _ => c64::new(-km * km, 0.0),
                            };
                            s += symbol * c64::new(0.0, km * (x[i] - x[j])).exp();
                        }
                        s.re / n as f64
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn spectral_matrices_match_dft_sums() {
        for &n in &[8usize, 9, 16, 17] {
            let l = 3.7;
            let g = grid1(n, l, BoundaryCondition::Periodic, Discretization::Spectral);
            for order in [1u32, 2] {
                let m = if order == 1 { g.derivative_matrix(0) } else { g.second_derivative_matrix(0) };
                let r = dft_derivative(n, l, order);
                for i in 0..n {
                    for j in 0..n {
                        assert!(
                            (m[(i, j)].re - r[i][j]).abs() < 1e-10 * (1.0 + r[i][j].abs()),
                            "n={n} order={order} ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn constant_is_annihilated() {
        for scheme in [Discretization::Stencil, Discretization::Spectral] {
            let g = grid1(32, 2.0, BoundaryCondition::Periodic, scheme);
            let lap = laplacian_matrix(&g);
            let u = vec![re(1.0); 32];
            let out = linalg::mat_vec(lap.matrix().as_ref(), &u);
            assert!(out.iter().all(|v| v.norm() < 1e-9));
        }
    }

    #[test]
    fn spectral_sine_is_eigenfunction() {
        let l = 5.0;
        let g = grid1(32, l, BoundaryCondition::Periodic, Discretization::Spectral);
        let q = 2.0 * PI / l;
        let u = GridFunction::from_fn(g.clone(), |p| re((q * p[0]).sin())).unwrap();
        let lap = laplacian_matrix(&g);
        let out = u.apply(lap.matrix()).unwrap();
        for (a, b) in out.values().iter().zip(u.values()) {
            assert!((*a + re(q * q) * *b).norm() < 1e-11);
        }
    }

    #[test]
    fn stencil_symbol_matches_analytic() {
        let (n, l) = (64usize, 2.0 * PI);
        let g = grid1(n, l, BoundaryCondition::Periodic, Discretization::Stencil);
        let h = l / n as f64;
        let q = 2.0 * PI / l;
        let u = GridFunction::from_fn(g.clone(), |p| re((q * p[0]).sin())).unwrap();
        let out = u.apply(laplacian_matrix(&g).matrix()).unwrap();
        let symbol = -(2.0 / (h * h)) * (1.0 - (q * h).cos());
        for (a, b) in out.values().iter().zip(u.values()) {
            assert!((*a - re(symbol) * *b).norm() < 1e-11);
        }
        let rel = (symbol + q * q).abs() / (q * q);
        assert!((rel - (q * h).powi(2) / 12.0).abs() < 1e-5);
    }

    #[test]
    fn laplacians_are_symmetric_for_all_conditions() {
        let bcs = [
            BoundaryCondition::Periodic,
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::RobinReal(0.7),
        ];
        for bc in bcs {
            let g = grid1(20, 1.5, bc, Discretization::Stencil);
            let m = laplacian_matrix(&g);
            let mt = linalg::transpose(m.matrix().as_ref());
            let asym = linalg::max_abs(linalg::sub(m.matrix().as_ref(), mt.as_ref()).as_ref());
            assert!(asym <= 1e-14 * linalg::max_abs(m.matrix().as_ref()), "{bc:?}");
        }
        let g = grid1(24, 1.5, BoundaryCondition::Periodic, Discretization::Spectral);
        let m = laplacian_matrix(&g);
        let mt = linalg::transpose(m.matrix().as_ref());
        let asym = linalg::max_abs(linalg::sub(m.matrix().as_ref(), mt.as_ref()).as_ref());
        assert!(asym <= 1e-14 * linalg::max_abs(m.matrix().as_ref()));
    }

    #[test]
    fn neumann_annihilates_constants() {
        let g = grid1(16, 1.0, BoundaryCondition::Neumann, Discretization::Stencil);
        let out = GridFunction::from_real(g.clone(), &[3.0; 16])
            .unwrap()
            .apply(laplacian_matrix(&g).matrix())
            .unwrap();
        assert!(out.values().iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn gradient_of_constant_and_linear() {
        let g = grid1(16, 1.0, BoundaryCondition::Dirichlet, Discretization::Stencil);
        let c = GridFunction::from_real(g.clone(), &[2.5; 16]).unwrap();
        assert!(gradient_apply(&c)[0].values().iter().all(|v| v.norm() < 1e-12));
        let lin = GridFunction::from_fn(g.clone(), |p| re(p[0])).unwrap();
        let d = gradient_apply(&lin);
        for v in &d[0].values()[1..15] {
            assert!((*v - re(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_gradient_of_cosine() {
        let l = 2.0 * PI;
        let q = 3.0;
        let g = grid1(32, l, BoundaryCondition::Periodic, Discretization::Spectral);
        let f = GridFunction::from_fn(g.clone(), |p| re((q * p[0]).cos())).unwrap();
        let d = gradient_apply(&f);
        let x = g.coordinate(0);
        for (v, xi) in d[0].values().iter().zip(&x) {
            assert!((v.re + q * (q * xi).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_and_stencil_agree_on_low_modes() {
        let l = 2.0 * PI;
        let n = 256;
        let spec = grid1(n, l, BoundaryCondition::Periodic, Discretization::Spectral);
        let sten = grid1(n, l, BoundaryCondition::Periodic, Discretization::Stencil);
        let f = |p: &[f64]| re((p[0]).cos() + 0.5 * (2.0 * p[0]).sin());
        let a = GridFunction::from_fn(spec.clone(), f).unwrap().apply(laplacian_matrix(&spec).matrix()).unwrap();
        let b = GridFunction::from_fn(sten.clone(), f).unwrap().apply(laplacian_matrix(&sten).matrix()).unwrap();
        let err = a.values().iter().zip(b.values()).map(|(x, y)| (*x - *y).norm()).fold(0.0, f64::max);
        // stencil truncation is (k h)^2/12 relative at k = 2
        assert!(err < 2.0 * 4.0 * (2.0 * l / n as f64).powi(2) / 12.0 * 4.0);
    }

    #[test]
    fn gradient_squared_matches_laplacian_spectrally() {
        let l = 4.0;
        let g = grid1(33, l, BoundaryCondition::Periodic, Discretization::Spectral);
        let w = 2.0 * PI / l;
        let f = GridFunction::from_fn(g.clone(), |p| re((w * p[0]).sin() * (2.0 * w * p[0]).cos())).unwrap();
        let gg = gradient_apply(&gradient_apply(&f)[0])[0].clone();
        let lap = f.apply(laplacian_matrix(&g).matrix()).unwrap();
        let scale = lap.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in gg.values().iter().zip(lap.values()) {
            assert!((*a - *b).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn rejects_small_and_invalid_grids() {
        assert!(Axis::periodic(7, 0.0, 1.0).is_err());
        assert!(Axis::periodic(8, 0.0, -1.0).is_err());
        assert!(Axis::new(8, 0.0, 1.0, BoundaryCondition::RobinReal(f64::NAN)).is_err());
        let dir = Axis::new(16, 0.0, 1.0, BoundaryCondition::Dirichlet).unwrap();
        assert!(SpatialGrid::line(dir, Discretization::Spectral).is_err());
    }

    #[test]
    fn two_dimensional_laplacian_is_kronecker_sum() {
        let au = Axis::periodic(8, 0.0, 2.0 * PI).unwrap();
        let av = Axis::periodic(10, 0.0, 2.0 * PI).unwrap();
        let g = Arc::new(SpatialGrid::new(vec![au, av], Discretization::Spectral).unwrap());
        let f = GridFunction::from_fn(g.clone(), |p| re((p[0]).cos() * (2.0 * p[1]).sin())).unwrap();
        let out = f.apply(laplacian_matrix(&g).matrix()).unwrap();
        for (a, b) in out.values().iter().zip(f.values()) {
            assert!((*a + re(5.0) * *b).norm() < 1e-11);
        }
    }

    #[test]
    fn grid_function_rejects_nan_and_wrong_length() {
        let g = grid1(8, 1.0, BoundaryCondition::Periodic, Discretization::Stencil);
        assert!(GridFunction::from_real(g.clone(), &[0.0; 7]).is_err());
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(GridFunction::from_real(g, &v).is_err());
    }

    #[test]
    fn low_pass_projector_is_idempotent() {
        let g = grid1(12, 1.0, BoundaryCondition::Periodic, Discretization::Spectral);
        let p = g.low_pass_projector(2.0 / 3.0).unwrap();
        let p2 = linalg::mul(p.as_ref(), p.as_ref());
        assert!(linalg::max_abs(linalg::sub(p.as_ref(), p2.as_ref()).as_ref()) < 1e-13);
    }
}
