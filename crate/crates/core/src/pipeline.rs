//! Target → designed drive → Floquet operators, and their comparison with
//! the curved-space Hamiltonian.
//!
//! The lab potential comes in two flavours. `Zero` leaves `V = 0`, which is
//! what the Magnus and reality experiments use. `Compensated` chooses
//!
//! `V = −m1·γ̄″ − m2·γ̄′² + m²(1 − κ) − K + v_sign·M²`
//!
//! so that, for `v_sign = −1`, `H_F⁽¹⁾` in angular sector `m` is similar to
//! `−κ∂²_z + κm² + K + M²`. The sector term `m²` of the flat lab Laplacian
//! is carried by the potential as well.

use std::sync::Arc;

use crate::design::{design_drive, design_grid, target_chart, target_manifold, DesignResult, TargetMetric};
use crate::drive::{self, DriveMoments, DriveShape, TemporalDrive};
use crate::error::{Error, Result};
use crate::floquet::{self, Evolution, MonodromyResult};
use crate::geometry::{
    curved_hamiltonian_sector, gauss_curvature, torus_chart_signed, ConformalChart, CurvatureMethod, ManifoldData,
    TorusParams,
};
use crate::grid::{Axis, BoundaryCondition, Discretization, GridFunction, SpatialGrid};
use crate::linalg::{self, c64, re, CMat};
use crate::operators::{self, DriveOperators, OperatorMatrix};
use crate::par::{self, ExecMode};
use crate::spectral::{self, RealityOptions, SpectralReport};

/// Sign of the static `M²` term that makes the lab and curved frames dual.
pub const V_SIGN_CONVENTION: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialMode {
    Zero,
    Compensated,
}

#[derive(Debug, Clone)]
pub struct LabConfig {
    pub n: usize,
    pub scheme: Discretization,
    pub shape: DriveShape,
    /// Defaults to `−m1` of the drive.
    pub fbar: Option<f64>,
    pub v_sign: f64,
    pub sector: i32,
    pub potential: PotentialMode,
    pub quadrature_points: usize,
}

impl LabConfig {
    pub fn new(n: usize, shape: DriveShape) -> Self {
        LabConfig {
            n,
            scheme: Discretization::Spectral,
            shape,
            fbar: None,
            v_sign: V_SIGN_CONVENTION,
            sector: 0,
            potential: PotentialMode::Compensated,
            quadrature_points: 256,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabSystem {
    pub target: TargetMetric,
    pub config: LabConfig,
    pub design: DesignResult,
    /// Moments of the unit-period drive, with the design `fbar`.
    pub moments: DriveMoments,
    pub gauss_k: Vec<f64>,
    pub mean_m: Vec<f64>,
    /// Static potential including the sector shift, as passed to `A`.
    pub potential: Vec<f64>,
    pub ops: DriveOperators,
}

pub fn lab_system(target: &TargetMetric, config: &LabConfig) -> Result<LabSystem> {
    let unit = TemporalDrive::new(1.0, config.shape.clone())?;
    let moments = drive::moments(&unit, config.quadrature_points)?;
    let fbar = config.fbar.unwrap_or(-moments.m1);
    if fbar == 0.0 {
        return Err(Error::validation("drive has zero mean; an explicit fbar is required"));
    }
    let moments = moments.with_fbar(fbar);
    let grid = design_grid(target, config.n, config.scheme)?;
    let design = design_drive(target, fbar, &grid)?;
    let gauss_k = gauss_curvature(&design.chart, &design.profile, fbar, CurvatureMethod::ChartFormula)?;
    let mean_m: Vec<f64> = design.z_design.iter().map(|&z| target.mean_curvature(z)).collect();
    let m2 = (config.sector as f64).powi(2);

    let potential: Vec<f64> = match config.potential {
        PotentialMode::Zero => vec![-m2; grid.len()],
        PotentialMode::Compensated => {
            let manifold = ManifoldData::new(gauss_k.clone(), mean_m.clone(), config.v_sign)?;
            let g = design.profile.gamma_bar();
            let gp = g.apply(&grid.derivative_matrix(0))?.real_parts();
            let gpp = g.apply(&grid.second_derivative_matrix(0))?.real_parts();
            (0..grid.len())
                .map(|j| {
                    let w = -moments.m1 * gpp[j] - moments.m2 * gp[j] * gp[j];
                    let kappa = design.chart.kappa()[j];
                    w + m2 * (1.0 - kappa) - gauss_k[j] + manifold.v_static[j] - m2
                })
                .collect()
        }
    };
    let ops = operators::build_abc(&design.profile, &GridFunction::from_real(grid, &potential)?)?;
    Ok(LabSystem {
        target: target.clone(),
        config: config.clone(),
        design,
        moments,
        gauss_k,
        mean_m,
        potential,
        ops,
    })
}

impl LabSystem {
    pub fn grid(&self) -> &Arc<SpatialGrid> {
        self.ops.grid()
    }

    pub fn fbar(&self) -> f64 {
        self.moments.fbar
    }

    pub fn drive(&self, omega: f64) -> Result<TemporalDrive> {
        TemporalDrive::new(1.0, self.config.shape.clone())?.with_frequency(omega)
    }

    pub fn h1(&self) -> OperatorMatrix {
        operators::magnus1(&self.ops, &self.moments)
    }

    /// Second-order approximant at drive frequency `omega`.
    pub fn h2(&self, omega: f64) -> Result<OperatorMatrix> {
        let d = self.drive(omega)?;
        let m = drive::moments(&d, self.config.quadrature_points)?.with_fbar(self.fbar());
        Ok(operators::magnus2(&self.ops, &m))
    }

    /// Spectral radius of `H_F⁽¹⁾`, the scale for drive frequencies.
    pub fn spectral_scale(&self) -> Result<f64> {
        Ok(spectral::spectral_radius(&spectral::eigensolve(&self.h1())?.values))
    }

    pub fn metric(&self, omega: f64, t0: f64) -> Result<OperatorMatrix> {
        spectral::metric_operator(&self.design.chart, &self.design.profile, &self.drive(omega)?, t0)
    }

    /// `S·H_F⁽¹⁾·S⁻¹` with `S = η^{1/2}` at the stroboscopic phase `f = 0`.
    pub fn transformed_h1(&self) -> OperatorMatrix {
        let s: Vec<f64> = self.design.chart.kappa().iter().map(|k| k.powf(-0.25)).collect();
        let m = diagonal_similarity(self.h1().matrix(), &s);
        OperatorMatrix::new(m, self.grid().clone(), "S HF1 S^-1", false).expect("same grid")
    }

    pub fn monodromy(&self, omega: f64, slices: usize, exec: ExecMode) -> Result<MonodromyResult> {
        floquet::monodromy_with(&self.ops, &self.drive(omega)?, slices, exec)
    }

    /// Asymmetry options measuring along the designed `z` with the target
    /// midpoint.
    pub fn reality_options(&self) -> RealityOptions {
        let d = self.target.domain();
        RealityOptions {
            coordinate: Some(self.design.z_design.clone()),
            midpoint: Some(d.start + 0.5 * d.length),
            ..RealityOptions::default()
        }
    }
}

/// Uniform z-grid over the target domain: spectral when periodic.
pub fn z_grid(target: &TargetMetric, n: usize) -> Result<Arc<SpatialGrid>> {
    let d = target.domain();
    let axis = Axis::new(n, d.start, d.length, d.bc)?;
    let scheme = if d.bc == BoundaryCondition::Periodic { Discretization::Spectral } else { Discretization::Stencil };
    Ok(Arc::new(SpatialGrid::line(axis, scheme)?))
}

/// Chart, curvature data and `−κ∂²_z + κm² + K + M²` on a uniform z-grid.
pub fn geometric_side(
    target: &TargetMetric,
    n: usize,
    sector: i32,
    v_sign: f64,
) -> Result<(ConformalChart, ManifoldData, OperatorMatrix)> {
    let (chart, manifold) = match target.torus_params() {
        Some(p) => torus_chart_signed(&p, n, v_sign)?,
        None => {
            let chart = target_chart(target, &z_grid(target, n)?)?;
            let manifold = target_manifold(target, &chart, v_sign)?;
            (chart, manifold)
        }
    };
    let grid = chart.grid().clone();
    let h = curved_hamiltonian_sector(&chart, &manifold, &grid, sector)?;
    Ok((chart, manifold, h))
}

/// Lowest `count` eigenvalues by real part.
pub fn lowest(op: &OperatorMatrix, count: usize) -> Result<Vec<c64>> {
    let mut v = spectral::eigensolve(op)?.values;
    v.truncate(count);
    Ok(v)
}

/// `max |a_k − b_k| / max |b_k|` over paired sorted lists.
pub fn relative_mismatch(a: &[c64], b: &[c64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).fold(0.0, f64::max) / scale
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub lab: Vec<c64>,
    pub transformed: Vec<c64>,
    pub geom: Vec<c64>,
    pub lab_vs_geom: f64,
    pub transformed_vs_geom: f64,
    /// `‖T − T†‖_F / ‖T‖_F` for `T = S·H_F⁽¹⁾·S⁻¹`.
    pub transformed_hermiticity: f64,
    pub eta_residual: f64,
    pub eta_residual_dealiased: Option<f64>,
}

pub fn compare_first_order(lab: &LabSystem, geom: &OperatorMatrix, count: usize) -> Result<DualityReport> {
    let h1 = lab.h1();
    let t = lab.transformed_h1();
    let lab_low = lowest(&h1, count)?;
    let t_low = lowest(&t, count)?;
    let geom_low = lowest(geom, count)?;
    let tm = t.matrix();
    let herm = linalg::frobenius(linalg::sub(tm.as_ref(), linalg::adjoint(tm.as_ref()).as_ref()).as_ref())
        / linalg::frobenius(tm.as_ref());
    let eta = lab.metric(1.0, 0.0)?;
    let eta_full = spectral::eta_residual(h1.matrix().as_ref(), eta.matrix().as_ref());
    let eta_band = if lab.grid().is_periodic() {
        let p = lab.grid().low_pass_projector(spectral::DEALIAS_FRACTION)?;
        Some(spectral::eta_residual_projected(h1.matrix().as_ref(), eta.matrix().as_ref(), p.as_ref()))
    } else {
        None
    };
    Ok(DualityReport {
        lab_vs_geom: relative_mismatch(&lab_low, &geom_low),
        transformed_vs_geom: relative_mismatch(&t_low, &geom_low),
        lab: lab_low,
        transformed: t_low,
        geom: geom_low,
        transformed_hermiticity: herm,
        eta_residual: eta_full,
        eta_residual_dealiased: eta_band,
    })
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub multiplier: f64,
    pub omega: f64,
    /// Spectral distance between the exact quasienergies and `eig H_F⁽¹⁾`.
    pub hf_vs_h1: f64,
    /// `‖H_F − H_F⁽¹⁾‖_F`.
    pub magnus_estimate: f64,
    pub max_imag: f64,
    /// Relative mismatch of the lowest quasienergies against the curved
    /// operator, when one is supplied.
    pub hf_vs_geom: Option<f64>,
    pub condition: f64,
}

/// Monodromy at `ω = multiplier · ρ(H_F⁽¹⁾)` for each multiplier.
pub fn frequency_sweep(
    lab: &LabSystem,
    geom: Option<&OperatorMatrix>,
    multipliers: &[f64],
    slices: usize,
    count: usize,
    exec: ExecMode,
) -> Result<Vec<SweepPoint>> {
    let h1 = lab.h1();
    let h1_eigs = spectral::eigensolve(&h1)?.values;
    let rho = spectral::spectral_radius(&h1_eigs);
    let geom_low = geom.map(|g| lowest(g, count)).transpose()?;
    par::map_slice(multipliers, exec, |&mult| {
        let omega = mult * rho;
        let mono = lab.monodromy(omega, slices, exec)?;
        let qe = &mono.quasienergies;
        Ok(SweepPoint {
            multiplier: mult,
            omega,
            hf_vs_h1: spectral::spectral_distance(qe, &h1_eigs),
            magnus_estimate: spectral::magnus_truncation(&mono.h_f, &h1),
            max_imag: qe.iter().map(|v| v.im.abs()).fold(0.0, f64::max),
            hf_vs_geom: geom_low.as_ref().map(|g| relative_mismatch(&qe[..count.min(qe.len())], g)),
            condition: mono.condition,
        })
    })
    .into_iter()
    .collect()
}

/// Reality report of `H_F` at `omega`, or of `H_F⁽¹⁾` when `omega` is `None`.
/// The exact-`H_F` report carries the measured Magnus truncation in its
/// threshold.
pub fn pt_report(
    lab: &LabSystem,
    omega: Option<f64>,
    slices: usize,
    relative_threshold: f64,
    exec: ExecMode,
) -> Result<SpectralReport> {
    let mut options = lab.reality_options();
    options.relative_threshold = relative_threshold;
    match omega {
        None => spectral::reality_report(&lab.h1(), None, &options),
        Some(w) => {
            let mono = lab.monodromy(w, slices, exec)?;
            options.magnus_estimate = Some(spectral::magnus_truncation(&mono.h_f, &lab.h1()));
            spectral::reality_report(&mono.h_f, None, &options)
        }
    }
}

#[derive(Debug, Clone)]
pub struct PtPoint {
    pub odd: f64,
    /// Drive frequency in units of `ρ(H_F⁽¹⁾)`; infinite for the
    /// first-order operator.
    pub multiplier: f64,
    pub max_imag: f64,
    pub threshold: f64,
    pub pt_broken: bool,
    pub pairs: usize,
    pub localization_asymmetry: f64,
    pub magnus_estimate: Option<f64>,
}

/// Sweep of the odd amplitude of `1 + λcos(qz) + odd·sin(qz)`.
#[allow(clippy::too_many_arguments)]
pub fn pt_sweep(
    lambda: f64,
    q: f64,
    length: f64,
    odds: &[f64],
    multipliers: &[f64],
    config: &LabConfig,
    slices: usize,
    relative_threshold: f64,
    exec: ExecMode,
) -> Result<Vec<PtPoint>> {
    let rows = par::map_slice(odds, exec, |&odd| -> Result<Vec<PtPoint>> {
        let target = TargetMetric::sinusoidal(lambda, q, odd, length)?;
        let lab = lab_system(&target, config)?;
        let rho = lab.spectral_scale()?;
        let mut out = Vec::with_capacity(multipliers.len());
        for &mult in multipliers {
            let omega = mult.is_finite().then_some(mult * rho);
            let r = pt_report(&lab, omega, slices, relative_threshold, exec)?;
            out.push(PtPoint {
                odd,
                multiplier: mult,
                max_imag: r.max_imag,
                threshold: r.threshold,
                pt_broken: r.pt_broken,
                pairs: r.conjugate_pairs.len(),
                localization_asymmetry: r.localization_asymmetry,
                magnus_estimate: r.magnus_estimate,
            });
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for r in rows {
        all.extend(r?);
    }
    Ok(all)
}

/// Smallest odd amplitude flagged as broken.
pub fn pt_onset(points: &[PtPoint]) -> Option<f64> {
    points.iter().filter(|p| p.pt_broken).map(|p| p.odd).min_by(f64::total_cmp)
}

#[derive(Debug, Clone, Copy)]
pub struct Packet {
    pub center: f64,
    pub width: f64,
    pub wavenumber: f64,
}

/// Unit-norm Gaussian packet; periodic grids sum the nearest images.
pub fn gaussian_packet(grid: &Arc<SpatialGrid>, packet: Packet) -> Result<GridFunction> {
    if !(packet.width > 0.0) {
        return Err(Error::validation("packet width must be positive"));
    }
    let axis = *grid.axis(0);
    let images: Vec<f64> = if axis.is_periodic() { vec![-axis.length, 0.0, axis.length] } else { vec![0.0] };
    let mut f = GridFunction::from_fn(grid.clone(), |p| {
        images
            .iter()
            .map(|shift| {
                let d = p[0] - packet.center - shift;
                c64::from_polar((-(d * d) / (2.0 * packet.width * packet.width)).exp(), packet.wavenumber * d)
            })
            .sum()
    })?;
    let norm = f.norm();
    let values: Vec<c64> = f.values().iter().map(|v| *v / norm).collect();
    f = GridFunction::new(grid.clone(), values)?;
    Ok(f)
}

/// Stroboscopic evolution of a packet under the lab drive.
pub fn evolve_packet(
    lab: &LabSystem,
    omega: f64,
    slices: usize,
    periods: usize,
    packet: Packet,
    exec: ExecMode,
) -> Result<Evolution> {
    let u = floquet::propagator(&lab.ops, &lab.drive(omega)?, slices, exec)?;
    Ok(floquet::evolve_with_propagator(&gaussian_packet(lab.grid(), packet)?, &u, periods))
}

#[derive(Debug, Clone)]
pub struct TorusRow {
    pub sector: i32,
    pub v_sign: f64,
    pub lab: Vec<c64>,
    pub geom: Vec<c64>,
    pub relative: f64,
}

/// Lowest `count` eigenvalues of the designed-drive `H_F⁽¹⁾` against the
/// isothermal-chart operator, per sector and sign of the static term.
pub fn torus_sectors(
    params: TorusParams,
    base: &LabConfig,
    sectors: &[i32],
    v_signs: &[f64],
    count: usize,
    exec: ExecMode,
) -> Result<Vec<TorusRow>> {
    let target = TargetMetric::torus(params)?;
    let cases: Vec<(i32, f64)> = sectors.iter().flat_map(|&m| v_signs.iter().map(move |&v| (m, v))).collect();
    par::map_slice(&cases, exec, |&(m, v)| {
        let config = LabConfig { sector: m, v_sign: v, potential: PotentialMode::Compensated, ..base.clone() };
        let lab = lab_system(&target, &config)?;
        let (_, _, geom) = geometric_side(&target, base.n, m, v)?;
        let lab_low = lowest(&lab.h1(), count)?;
        let geom_low = lowest(&geom, count)?;
        Ok(TorusRow { sector: m, v_sign: v, relative: relative_mismatch(&lab_low, &geom_low), lab: lab_low, geom: geom_low })
    })
    .into_iter()
    .collect()
}

/// The sign whose worst row is smallest.
pub fn best_v_sign(rows: &[TorusRow]) -> Option<f64> {
    [-1.0, 1.0]
        .into_iter()
        .filter_map(|v| {
            rows.iter().filter(|r| r.v_sign == v).map(|r| r.relative).reduce(f64::max).map(|w| (v, w))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(v, _)| v)
}

/// `D·M·D⁻¹` for a positive diagonal `D`.
pub fn diagonal_similarity(m: &CMat, d: &[f64]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * re(d[i] / d[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Domain;
    use std::f64::consts::PI;

    fn cosine_lab(n: usize, potential: PotentialMode) -> LabSystem {
        let t = TargetMetric::sinusoidal(0.3, 2.0, 0.0, 2.0 * PI).unwrap();
        let mut c = LabConfig::new(n, DriveShape::SinusoidSquared { amplitude: 1.0 });
        c.potential = potential;
        lab_system(&t, &c).unwrap()
    }

    #[test]
    fn flat_target_is_self_dual() {
        let t = TargetMetric::flat(Domain { start: 0.0, length: 2.0 * PI, bc: BoundaryCondition::Periodic }).unwrap();
        let lab = lab_system(&t, &LabConfig::new(32, DriveShape::SinusoidSquared { amplitude: 1.0 })).unwrap();
        let (_, _, g) = geometric_side(&t, 32, 0, V_SIGN_CONVENTION).unwrap();
        let r = compare_first_order(&lab, &g, 10).unwrap();
        assert!(r.lab_vs_geom < 1e-10, "{}", r.lab_vs_geom);
    }

    #[test]
    fn cosine_target_duality() {
        let lab = cosine_lab(96, PotentialMode::Compensated);
        let (_, _, g) = geometric_side(&lab.target, 96, 0, V_SIGN_CONVENTION).unwrap();
        let r = compare_first_order(&lab, &g, 6).unwrap();
        assert!(r.lab_vs_geom < 1e-8, "{}", r.lab_vs_geom);
        assert!(r.transformed_vs_geom < 1e-8);
        assert!(r.eta_residual_dealiased.unwrap() < 1e-10);
    }

    #[test]
    fn zero_potential_h1_has_real_spectrum() {
        let lab = cosine_lab(64, PotentialMode::Zero);
        let r = pt_report(&lab, None, 0, 1e-8, ExecMode::Sequential).unwrap();
        assert!(!r.pt_broken);
        assert!(r.max_imag < 1e-8 * r.spectral_radius);
    }

    #[test]
    fn torus_sign_convention() {
        let rows = torus_sectors(
            TorusParams::new(2.0, 1.0).unwrap(),
            &LabConfig::new(128, DriveShape::SinusoidSquared { amplitude: 1.0 }),
            &[0, 1],
            &[-1.0, 1.0],
            5,
            ExecMode::Parallel,
        )
        .unwrap();
        assert_eq!(best_v_sign(&rows), Some(-1.0));
        assert!(rows.iter().filter(|r| r.v_sign == -1.0).all(|r| r.relative < 1e-6));
    }

    #[test]
    fn packet_is_normalized() {
        let g = Arc::new(SpatialGrid::periodic_spectral(64, 0.0, 2.0 * PI).unwrap());
        let p = gaussian_packet(&g, Packet { center: 0.1, width: 0.4, wavenumber: 2.0 }).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-14);
    }
}
