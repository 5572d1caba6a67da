//! Conformal charts, curvature scalars, the curved-space Hamiltonian and the
//! isothermal chart of a torus of revolution.
//!
//! In one dimension the curved metric is `ds² = κ⁻¹dz²` and the chart obeys
//! `dz/dx = √κ`. The discrete inner product on the curved side carries the
//! weight `w = 1/κ`, which makes `−κ∂²_z` symmetric.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::drive::{profile_from_samples, DriveProfile};
use crate::error::{Error, Result};
use crate::grid::{Axis, Discretization, SpatialGrid};
use crate::interp::Pchip;
use crate::linalg::{self, c64, re, CMat};
use crate::operators::OperatorMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartDirection {
    FromProfile,
    FromTarget,
}

/// Which coordinate the chart's nodes are uniformly spaced in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniformFrame {
    X,
    Z,
}

#[derive(Debug, Clone)]
pub struct ConformalChart {
    x_nodes: Vec<f64>,
    z_nodes: Vec<f64>,
    kappa_at_z: Vec<f64>,
    fbar: f64,
    direction: ChartDirection,
    grid: Arc<SpatialGrid>,
    frame: UniformFrame,
    x_period: Option<f64>,
    z_period: Option<f64>,
}

impl ConformalChart {
    /// `grid` is the uniform grid of `frame`; for periodic grids both
    /// periods must be given.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x_nodes: Vec<f64>,
        z_nodes: Vec<f64>,
        kappa_at_z: Vec<f64>,
        fbar: f64,
        direction: ChartDirection,
        grid: Arc<SpatialGrid>,
        frame: UniformFrame,
        periods: Option<(f64, f64)>,
    ) -> Result<Self> {
        let n = grid.len();
        if grid.dims() != 1 {
            return Err(Error::validation("conformal charts are one-dimensional"));
        }
        if x_nodes.len() != n || z_nodes.len() != n || kappa_at_z.len() != n {
            return Err(Error::validation("chart node arrays must match the grid"));
        }
        if x_nodes.iter().chain(&z_nodes).chain(&kappa_at_z).any(|v| !v.is_finite()) {
            return Err(Error::validation("chart nodes must be finite"));
        }
        if z_nodes.windows(2).any(|w| !(w[1] > w[0])) || x_nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::numerical("chart is not strictly increasing"));
        }
        if kappa_at_z.iter().any(|&k| k <= 0.0) {
            return Err(Error::validation("conformal factor must be positive"));
        }
        if grid.is_periodic() != periods.is_some() {
            return Err(Error::validation("chart periods must be given exactly for periodic grids"));
        }
        Ok(ConformalChart {
            x_nodes,
            z_nodes,
            kappa_at_z,
            fbar,
            direction,
            grid,
            frame,
            x_period: periods.map(|p| p.0),
            z_period: periods.map(|p| p.1),
        })
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn z_nodes(&self) -> &[f64] {
        &self.z_nodes
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa_at_z
    }

    /// Drive parameter the chart was built with; zero for target charts.
    pub fn fbar(&self) -> f64 {
        self.fbar
    }

    pub fn direction(&self) -> ChartDirection {
        self.direction
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn frame(&self) -> UniformFrame {
        self.frame
    }

    pub fn x_period(&self) -> Option<f64> {
        self.x_period
    }

    pub fn z_period(&self) -> Option<f64> {
        self.z_period
    }

    /// Curved-measure weight `1/κ` at the nodes.
    pub fn measure_weight(&self) -> Vec<f64> {
        self.kappa_at_z.iter().map(|k| 1.0 / k).collect()
    }

    /// `d/dz` of nodal values, using the chart grid's differentiation scheme
    /// and the chain rule `d/dz = κ^{-1/2} d/dx` when the nodes are uniform
    /// in `x`.
    pub fn z_derivative(&self, values: &[f64]) -> Vec<f64> {
        let d = self.grid.derivative_matrix(0);
        let v: Vec<c64> = values.iter().map(|&x| re(x)).collect();
        let dv = linalg::mat_vec(d.as_ref(), &v);
        match self.frame {
            UniformFrame::Z => dv.iter().map(|c| c.re).collect(),
            UniformFrame::X => dv.iter().zip(&self.kappa_at_z).map(|(c, k)| c.re / k.sqrt()).collect(),
        }
    }

    /// Monotone-cubic resampling of nodal values at arbitrary `z`.
    pub fn resample(&self, values: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        let p = match self.z_period {
            Some(lz) => Pchip::periodic(&self.z_nodes, values, lz, 0.0)?,
            None => Pchip::new(&self.z_nodes, values)?,
        };
        Ok(z.iter().map(|&t| p.eval(t)).collect())
    }

    /// Max relative mismatch between the differentiated chart `dz/dx` and
    /// `√κ`. Periodic charts differentiate the periodic part of the map
    /// spectrally; bounded charts use fourth-order differences on interior
    /// nodes.
    pub fn chain_rule_residual(&self) -> f64 {
        let n = self.z_nodes.len();
        let (u, w) = match self.frame {
            UniformFrame::X => (&self.x_nodes, &self.z_nodes),
            UniformFrame::Z => (&self.z_nodes, &self.x_nodes),
        };
        let slope: Vec<(usize, f64)> = match (self.x_period, self.z_period) {
            (Some(lx), Some(lz)) => {
                let rate = match self.frame {
                    UniformFrame::X => lz / lx,
                    UniformFrame::Z => lx / lz,
                };
                let wave: Vec<c64> = u.iter().zip(w).map(|(a, b)| re(b - rate * (a - u[0]))).collect();
                let d = self.grid.derivative_matrix(0);
                linalg::mat_vec(d.as_ref(), &wave).iter().map(|c| rate + c.re).enumerate().collect()
            }
            _ => {
                let h = u[1] - u[0];
                (2..n.saturating_sub(2))
                    .map(|j| (j, (-w[j + 2] + 8.0 * w[j + 1] - 8.0 * w[j - 1] + w[j - 2]) / (12.0 * h)))
                    .collect()
            }
        };
        let mut worst: f64 = 0.0;
        for (j, d) in slope {
            let dzdx = match self.frame {
                UniformFrame::X => d,
                UniformFrame::Z => 1.0 / d,
            };
            let s = self.kappa_at_z[j].sqrt();
            worst = worst.max((dzdx - s).abs() / s);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldData {
    pub gauss_k: Vec<f64>,
    pub mean_m: Vec<f64>,
    /// `v_sign · M²`.
    pub v_static: Vec<f64>,
}

impl ManifoldData {
    pub fn new(gauss_k: Vec<f64>, mean_m: Vec<f64>, v_sign: f64) -> Result<Self> {
        if gauss_k.len() != mean_m.len() {
            return Err(Error::validation("curvature arrays differ in length"));
        }
        if gauss_k.iter().chain(&mean_m).any(|v| !v.is_finite()) {
            return Err(Error::validation("curvatures must be finite"));
        }
        if v_sign != 1.0 && v_sign != -1.0 {
            return Err(Error::validation(format!("v_sign must be +1 or -1, got {v_sign}")));
        }
        let v_static = mean_m.iter().map(|m| v_sign * m * m).collect();
        Ok(ManifoldData { gauss_k, mean_m, v_static })
    }

    /// Zero curvature and zero mean curvature.
    pub fn flat(n: usize) -> Self {
        ManifoldData { gauss_k: vec![0.0; n], mean_m: vec![0.0; n], v_static: vec![0.0; n] }
    }
}

/// Antiderivative of `g` on a periodic uniform grid, zero at the first node.
/// Returns the nodal values and the increment over one period.
fn periodic_antiderivative(g: &[f64], length: f64) -> (Vec<f64>, f64) {
    let n = g.len();
    let mut buf: Vec<Complex<f64>> = g.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let mean = buf[0].re / n as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        let m = if k <= n / 2 { k as i64 } else { k as i64 - n as i64 };
        if m == 0 || (n % 2 == 0 && k == n / 2) {
            *c = Complex::new(0.0, 0.0);
        } else {
            let wave = 2.0 * PI * m as f64 / length;
            *c /= Complex::new(0.0, wave) * n as f64;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let h = length / n as f64;
    let p0 = buf[0].re;
    let out = (0..n).map(|j| mean * j as f64 * h + buf[j].re - p0).collect();
    (out, mean * length)
}

/// Chart `z(x) = x₀ + ∫_{x₀}^{x} e^{2·fbar·γ̄}` built on the profile's grid.
///
/// Periodic grids integrate spectrally; bounded grids use the cumulative
/// trapezoid rule.
pub fn forward_chart(profile: &DriveProfile, fbar: f64) -> Result<ConformalChart> {
    let grid = profile.grid().clone();
    if grid.dims() != 1 {
        return Err(Error::validation("forward chart needs a one-dimensional profile"));
    }
    let gamma = profile.values();
    let axis = *grid.axis(0);
    let x = axis.coords();
    let slope: Vec<f64> = gamma.iter().map(|g| (2.0 * fbar * g).exp()).collect();
    if slope.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::range("conformal slope overflowed"));
    }
    let (z, periods) = if axis.is_periodic() {
        let (p, dz) = periodic_antiderivative(&slope, axis.length);
        (p.iter().map(|v| axis.start + v).collect::<Vec<_>>(), Some((axis.length, dz)))
    } else {
        let h = axis.spacing();
        let mut z = vec![axis.start; x.len()];
        for j in 1..x.len() {
            z[j] = z[j - 1] + 0.5 * h * (slope[j - 1] + slope[j]);
        }
        (z, None)
    };
    let kappa = slope.iter().map(|s| s * s).collect();
    ConformalChart::new(x, z, kappa, fbar, ChartDirection::FromProfile, grid, UniformFrame::X, periods)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureMethod {
    /// `K = e^{4γ̄}·fbar·∂²_zγ̄ + e^{8γ̄}·(fbar·∂_zγ̄)²`.
    ProfileFormula,
    /// `K = (κ/2)·∂²_z ln κ`, the curvature of `ds² = κ⁻¹(dz² + dv²)`.
    ChartFormula,
}

/// Gaussian curvature at the chart nodes.
pub fn gauss_curvature(
    chart: &ConformalChart,
    profile: &DriveProfile,
    fbar: f64,
    method: CurvatureMethod,
) -> Result<Vec<f64>> {
    match method {
        CurvatureMethod::ChartFormula => {
            let ln_k: Vec<f64> = chart.kappa().iter().map(|k| k.ln()).collect();
            let d2 = chart.z_derivative(&chart.z_derivative(&ln_k));
            Ok(chart.kappa().iter().zip(&d2).map(|(k, d)| 0.5 * k * d).collect())
        }
        CurvatureMethod::ProfileFormula => {
            if profile.grid().as_ref() != chart.grid().as_ref() {
                return Err(Error::validation("profile and chart use different grids"));
            }
            let g = profile.values();
            let gz = chart.z_derivative(&g);
            let gzz = chart.z_derivative(&gz);
            Ok(g.iter()
                .zip(gz.iter().zip(&gzz))
                .map(|(g, (d1, d2))| (4.0 * g).exp() * fbar * d2 + (8.0 * g).exp() * (fbar * d1).powi(2))
                .collect())
        }
    }
}

fn sample_on(chart: &ConformalChart, values: &[f64], grid_z: &SpatialGrid) -> Result<Vec<f64>> {
    let z = grid_z.axis(0).coords();
    let aligned = z.len() == chart.z_nodes().len()
        && z.iter().zip(chart.z_nodes()).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    if aligned {
        Ok(values.to_vec())
    } else {
        chart.resample(values, &z)
    }
}

/// `−κ∂²_z + κm² + K + M²` on a 1D z-grid, for angular sector `m`.
pub fn curved_hamiltonian_sector(
    chart: &ConformalChart,
    manifold: &ManifoldData,
    grid_z: &Arc<SpatialGrid>,
    m: i32,
) -> Result<OperatorMatrix> {
    if grid_z.dims() != 1 {
        return Err(Error::validation("sector Hamiltonian needs a 1D z-grid"));
    }
    if manifold.gauss_k.len() != chart.z_nodes().len() {
        return Err(Error::validation("manifold data does not match chart nodes"));
    }
    let kappa = sample_on(chart, chart.kappa(), grid_z)?;
    if kappa.iter().any(|&k| !(k > 0.0)) {
        return Err(Error::validation("conformal factor must be positive on the z-grid"));
    }
    let k = sample_on(chart, &manifold.gauss_k, grid_z)?;
    let mm = sample_on(chart, &manifold.mean_m, grid_z)?;
    let d2 = grid_z.second_derivative_matrix(0);
    let n = grid_z.len();
    let m2 = (m as f64).powi(2);
    let h = CMat::from_fn(n, n, |i, j| {
        let diag = if i == j { kappa[i] * m2 + k[i] + mm[i] * mm[i] } else { 0.0 };
        re(-kappa[i] * d2[(i, j)].re + diag)
    });
    Ok(OperatorMatrix::from_parts(h, grid_z.clone(), format!("Hgeom[m={m}]"), false))
}

/// `−κ∂²_z + K + M²`. Symmetric under the weight `1/κ`.
pub fn curved_hamiltonian(
    chart: &ConformalChart,
    manifold: &ManifoldData,
    grid_z: &Arc<SpatialGrid>,
) -> Result<OperatorMatrix> {
    curved_hamiltonian_sector(chart, manifold, grid_z, 0).map(|h| h.relabel("Hgeom"))
}

/// `−κ(u)(∂²_u + ∂²_v) + K + M²` on a tensor `(u, v)` grid whose first axis
/// matches the chart grid.
pub fn curved_hamiltonian_2d(
    chart: &ConformalChart,
    manifold: &ManifoldData,
    grid_uv: &Arc<SpatialGrid>,
) -> Result<OperatorMatrix> {
    if grid_uv.dims() != 2 {
        return Err(Error::validation("expected a two-dimensional grid"));
    }
    let gu = Arc::new(SpatialGrid::line(*grid_uv.axis(0), grid_uv.scheme())?);
    let kappa = sample_on(chart, chart.kappa(), &gu)?;
    let k = sample_on(chart, &manifold.gauss_k, &gu)?;
    let mm = sample_on(chart, &manifold.mean_m, &gu)?;
    let lap = linalg::combine(&[
        (linalg::ONE, grid_uv.second_derivative_matrix(0).as_ref()),
        (linalg::ONE, grid_uv.second_derivative_matrix(1).as_ref()),
    ]);
    let nv = grid_uv.axis(1).n;
    let n = grid_uv.len();
    let h = CMat::from_fn(n, n, |i, j| {
        let iu = i / nv;
        let diag = if i == j { k[iu] + mm[iu] * mm[iu] } else { 0.0 };
        re(-kappa[iu] * lap[(i, j)].re + diag)
    });
    Ok(OperatorMatrix::from_parts(h, grid_uv.clone(), "Hgeom2d", false))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusParams {
    pub major_r: f64,
    pub minor_r: f64,
}

impl TorusParams {
    pub fn new(major_r: f64, minor_r: f64) -> Result<Self> {
        if !(minor_r > 0.0 && major_r > minor_r && major_r.is_finite()) {
            return Err(Error::validation(format!(
                "torus needs R > r > 0, got R = {major_r}, r = {minor_r}"
            )));
        }
        Ok(TorusParams { major_r, minor_r })
    }

    fn s(&self) -> f64 {
        (self.major_r * self.major_r - self.minor_r * self.minor_r).sqrt()
    }

    /// Length of the isothermal `u` circuit, `2πr/√(R² − r²)`.
    pub fn u_period(&self) -> f64 {
        2.0 * PI * self.minor_r / self.s()
    }

    /// Meridian length `2πr`, the laboratory period.
    pub fn x_period(&self) -> f64 {
        2.0 * PI * self.minor_r
    }

    pub fn omega(&self, theta: f64) -> f64 {
        self.major_r + self.minor_r * theta.cos()
    }

    pub fn mean_curvature(&self, theta: f64) -> f64 {
        0.5 * (1.0 / self.minor_r + theta.cos() / self.omega(theta))
    }

    pub fn gauss_curvature(&self, theta: f64) -> f64 {
        theta.cos() / (self.minor_r * self.omega(theta))
    }

    /// Isothermal coordinate, continuous across `θ = ±π` by adding one `u`
    /// period per turn.
    pub fn u_of_theta(&self, theta: f64) -> f64 {
        let turns = (theta / (2.0 * PI)).round();
        let t0 = theta - 2.0 * PI * turns;
        let (r, rr) = (self.minor_r, self.major_r);
        let c = ((rr - r) / (rr + r)).sqrt();
        let half = 0.5 * t0;
        // evaluate on the half-period where tan is finite
        let base = if half.abs() < 0.25 * PI {
            (c * half.tan()).atan()
        } else {
            (0.5 * PI).copysign(half) - (half.cos() / (c * half.sin())).atan()
        };
        2.0 * r / self.s() * base + turns * self.u_period()
    }

    pub fn theta_of_u(&self, u: f64) -> f64 {
        let lu = self.u_period();
        let turns = (u / lu).round();
        let u0 = u - lu * turns;
        let (r, rr) = (self.minor_r, self.major_r);
        let c = ((rr + r) / (rr - r)).sqrt();
        let half = u0 * self.s() / (2.0 * r);
        let base = if half.abs() < 0.25 * PI {
            (c * half.tan()).atan()
        } else {
            (0.5 * PI).copysign(half) - (half.cos() / (c * half.sin())).atan()
        };
        2.0 * base + 2.0 * PI * turns
    }
}

/// Periodic spectral grid over one `u` circuit, `[−L_u/2, L_u/2)`.
pub fn torus_u_grid(params: &TorusParams, n_points: usize) -> Result<Arc<SpatialGrid>> {
    let lu = params.u_period();
    Ok(Arc::new(SpatialGrid::line(Axis::periodic(n_points, -0.5 * lu, lu)?, Discretization::Spectral)?))
}

/// Isothermal torus chart on `u`, with `x` the meridian arc length anchored
/// so that `x = u` at the left end, and curvature data with `V = v_sign·M²`.
pub fn torus_chart_signed(
    params: &TorusParams,
    n_points: usize,
    v_sign: f64,
) -> Result<(ConformalChart, ManifoldData)> {
    if n_points < 64 {
        return Err(Error::validation(format!("torus chart needs at least 64 points, got {n_points}")));
    }
    let grid = torus_u_grid(params, n_points)?;
    let u = grid.axis(0).coords();
    let u0 = u[0];
    let theta: Vec<f64> = u.iter().map(|&v| params.theta_of_u(v)).collect();
    let x: Vec<f64> = theta.iter().map(|t| u0 + params.minor_r * (t + PI)).collect();
    let kappa: Vec<f64> = theta.iter().map(|&t| params.omega(t).powi(-2)).collect();
    let chart = ConformalChart::new(
        x,
        u,
        kappa,
        0.0,
        ChartDirection::FromTarget,
        grid,
        UniformFrame::Z,
        Some((params.x_period(), params.u_period())),
    )?;
    let dummy = profile_from_samples(chart.grid().clone(), &vec![0.0; n_points])?;
    let k = gauss_curvature(&chart, &dummy, 0.0, CurvatureMethod::ChartFormula)?;
    let m = theta.iter().map(|&t| params.mean_curvature(t)).collect();
    Ok((chart, ManifoldData::new(k, m, v_sign)?))
}

/// [`torus_chart_signed`] with `V = −M²`.
pub fn torus_chart(params: &TorusParams, n_points: usize) -> Result<(ConformalChart, ManifoldData)> {
    torus_chart_signed(params, n_points, -1.0)
}

/// `γ̄(u) = −ln(R + r cos θ(u)) / (2·fbar)`.
pub fn torus_drive(params: &TorusParams, fbar: f64, grid_u: &Arc<SpatialGrid>) -> Result<DriveProfile> {
    if fbar == 0.0 || !fbar.is_finite() {
        return Err(Error::validation("torus drive needs a finite nonzero fbar"));
    }
    let axis = grid_u.axis(0);
    let lu = params.u_period();
    if !axis.is_periodic() || (axis.length - lu).abs() > 1e-9 * lu {
        return Err(Error::validation(format!(
            "torus drive grid must be periodic with length {lu}"
        )));
    }
    let u = grid_u.coordinate(0);
    let g: Vec<f64> = u.iter().map(|&v| -params.omega(params.theta_of_u(v)).ln() / (2.0 * fbar)).collect();
    profile_from_samples(grid_u.clone(), &g)
}

/// `∮K dA = 2π∫ K/κ du` over the chart, and the matching scale `2π∫|K|/κ du`.
pub fn total_curvature(chart: &ConformalChart, gauss_k: &[f64]) -> Result<(f64, f64)> {
    if chart.frame() != UniformFrame::Z || !chart.grid().is_periodic() {
        return Err(Error::validation("total curvature needs a periodic chart uniform in z"));
    }
    let h = chart.grid().axis(0).spacing();
    let mut total = 0.0;
    let mut scale = 0.0;
    for (k, kap) in gauss_k.iter().zip(chart.kappa()) {
        total += k / kap;
        scale += k.abs() / kap;
    }
    Ok((2.0 * PI * h * total, 2.0 * PI * h * scale))
}
