//! Inverse design: from a target conformal factor κ_tar(z) to the
//! laboratory drive profile γ̄(x).
//!
//! The lab coordinate is the optical length `x(z) = ∫ dz/√κ_tar`, anchored
//! so that `x = z` at the left end of the domain. On periodic domains the
//! lab period is the total optical length.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::drive::{profile_from_samples, DriveProfile};
use crate::error::{Error, Result};
use crate::geometry::{
    forward_chart, gauss_curvature, ChartDirection, ConformalChart, CurvatureMethod, ManifoldData,
    TorusParams, UniformFrame,
};
use crate::grid::{Axis, BoundaryCondition, Discretization, SpatialGrid};
use crate::interp::Pchip;
use crate::quadrature;

pub const QUAD_TOL: f64 = 1e-12;
const BREAKS: usize = 256;
const INVERT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    Flat,
    /// `1 + λ·cos(qz) + odd·sin(qz)`.
    Sinusoidal { lambda: f64, q: f64, odd: f64 },
    /// `1/(R + r cos θ(u))²` over one isothermal circuit.
    TorusIsothermal { major_r: f64, minor_r: f64 },
    /// Two-column table; periodic tables repeat the first value last.
    Tabulated { z: Vec<f64>, kappa: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub start: f64,
    pub length: f64,
    pub bc: BoundaryCondition,
}

impl Domain {
    pub fn is_periodic(&self) -> bool {
        self.bc == BoundaryCondition::Periodic
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }
}

#[derive(Debug, Clone)]
pub struct TargetMetric {
    kind: TargetKind,
    domain: Domain,
    table: Option<Pchip>,
    /// Constant factor on analytic kinds.
    scale: f64,
}

impl TargetMetric {
    pub fn flat(domain: Domain) -> Result<Self> {
        TargetMetric::build(TargetKind::Flat, domain)
    }

    /// Periodic sinusoidal conformal factor on `[0, length)`.
    pub fn sinusoidal(lambda: f64, q: f64, odd: f64, length: f64) -> Result<Self> {
        let domain = Domain { start: 0.0, length, bc: BoundaryCondition::Periodic };
        TargetMetric::build(TargetKind::Sinusoidal { lambda, q, odd }, domain)
    }

    pub fn torus(params: TorusParams) -> Result<Self> {
        let lu = params.u_period();
        let domain = Domain { start: -0.5 * lu, length: lu, bc: BoundaryCondition::Periodic };
        TargetMetric::build(
            TargetKind::TorusIsothermal { major_r: params.major_r, minor_r: params.minor_r },
            domain,
        )
    }

    pub fn tabulated(z: Vec<f64>, kappa: Vec<f64>, bc: BoundaryCondition) -> Result<Self> {
        if z.len() < 4 || z.len() != kappa.len() {
            return Err(Error::validation("tabulated target needs at least four (z, kappa) rows"));
        }
        let domain = Domain { start: z[0], length: z[z.len() - 1] - z[0], bc };
        TargetMetric::build(TargetKind::Tabulated { z, kappa }, domain)
    }

    fn build(kind: TargetKind, domain: Domain) -> Result<Self> {
        if !(domain.length.is_finite() && domain.length > 0.0 && domain.start.is_finite()) {
            return Err(Error::validation("target domain must be finite with positive length"));
        }
        let mut table = None;
        match &kind {
            TargetKind::Flat => {}
            TargetKind::Sinusoidal { lambda, q, odd } => {
                if ![*lambda, *q, *odd].iter().all(|v| v.is_finite()) {
                    return Err(Error::validation("sinusoidal target parameters must be finite"));
                }
                if lambda.abs() >= 1.0 || lambda.hypot(*odd) >= 1.0 {
                    return Err(Error::validation(format!(
                        "sinusoidal target needs |lambda| < 1 and a positive factor, got lambda = {lambda}, odd = {odd}"
                    )));
                }
                let cycles = q * domain.length / (2.0 * PI);
                if domain.is_periodic() && (cycles - cycles.round()).abs() > 1e-9 {
                    return Err(Error::validation(format!(
                        "q = {q} does not fit a whole number of periods in length {}",
                        domain.length
                    )));
                }
            }
            TargetKind::TorusIsothermal { major_r, minor_r } => {
                TorusParams::new(*major_r, *minor_r)?;
            }
            TargetKind::Tabulated { z, kappa } => {
                if z.iter().chain(kappa).any(|v| !v.is_finite()) {
                    return Err(Error::validation("tabulated target must be finite"));
                }
                if kappa.iter().any(|&k| k <= 0.0) {
                    return Err(Error::validation("tabulated conformal factor must be positive"));
                }
                let n = z.len();
                table = Some(if domain.is_periodic() {
                    if (kappa[n - 1] - kappa[0]).abs() > 1e-12 * kappa[0] {
                        return Err(Error::validation(
                            "periodic table must repeat its first conformal factor in the last row",
                        ));
                    }
                    Pchip::periodic(&z[..n - 1], &kappa[..n - 1], domain.length, 0.0)?
                } else {
                    Pchip::new(z, kappa)?
                });
            }
        }
        Ok(TargetMetric { kind, domain, table, scale: 1.0 })
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Constant factor applied on top of [`TargetMetric::kind`].
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn torus_params(&self) -> Option<TorusParams> {
        match self.kind {
            TargetKind::TorusIsothermal { major_r, minor_r } => Some(TorusParams { major_r, minor_r }),
            _ => None,
        }
    }

    /// Same target multiplied by a positive constant.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::validation("scale factor must be positive"));
        }
        match &self.kind {
            TargetKind::Tabulated { z, kappa } => TargetMetric::build(
                TargetKind::Tabulated { z: z.clone(), kappa: kappa.iter().map(|k| c * k).collect() },
                self.domain,
            ),
            // c·Ω⁻² is the isothermal factor of the torus shrunk by √c
            TargetKind::TorusIsothermal { major_r, minor_r } => {
                TargetMetric::torus(TorusParams::new(major_r / c.sqrt(), minor_r / c.sqrt())?)
            }
            _ => Ok(TargetMetric { scale: self.scale * c, ..self.clone() }),
        }
    }

    /// `κ_tar(z)`, periodically extended on periodic domains.
    pub fn kappa(&self, z: f64) -> f64 {
        let d = self.domain;
        let z = if d.is_periodic() { d.start + (z - d.start).rem_euclid(d.length) } else { z };
        let base = match &self.kind {
            TargetKind::Flat => 1.0,
            TargetKind::Sinusoidal { lambda, q, odd } => 1.0 + lambda * (q * z).cos() + odd * (q * z).sin(),
            TargetKind::TorusIsothermal { major_r, minor_r } => {
                let p = TorusParams { major_r: *major_r, minor_r: *minor_r };
                p.omega(p.theta_of_u(z)).powi(-2)
            }
            TargetKind::Tabulated { .. } => self.table.as_ref().expect("table").eval(z),
        };
        self.scale * base
    }

    /// Mean curvature where the target carries an embedding, else zero.
    pub fn mean_curvature(&self, z: f64) -> f64 {
        match self.torus_params() {
            Some(p) => p.mean_curvature(p.theta_of_u(z)),
            None => 0.0,
        }
    }
}

/// `γ̄(z) = ln κ_tar(z) / (4·fbar)`.
pub fn gamma_in_z(target: &TargetMetric, fbar: f64, z: &[f64]) -> Result<Vec<f64>> {
    if fbar == 0.0 || !fbar.is_finite() {
        return Err(Error::validation("fbar must be finite and nonzero"));
    }
    z.iter()
        .map(|&s| {
            let k = target.kappa(s);
            if k > 0.0 && k.is_finite() {
                Ok(k.ln() / (4.0 * fbar))
            } else {
                Err(Error::validation(format!("conformal factor {k} at z = {s} is not positive")))
            }
        })
        .collect()
}

/// Strictly increasing scalar map with a tabulated skeleton.
pub trait MonotoneMap {
    fn eval(&self, s: f64) -> Result<f64>;
    fn derivative(&self, s: f64) -> f64;
    /// Skeleton abscissae and values spanning one domain.
    fn skeleton(&self) -> (&[f64], &[f64]);
    /// `(input period, output increment)` for maps with `m(s + P) = m(s) + Δ`.
    fn period(&self) -> Option<(f64, f64)>;
}

/// `s ↦ scale·s + shift` on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct AffineMap {
    scale: f64,
    shift: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl AffineMap {
    pub fn new(scale: f64, shift: f64, lo: f64, hi: f64) -> Self {
        let nodes: Vec<f64> = (0..=16).map(|k| lo + (hi - lo) * k as f64 / 16.0).collect();
        let values = nodes.iter().map(|s| scale * s + shift).collect();
        AffineMap { scale, shift, nodes, values }
    }
}

impl MonotoneMap for AffineMap {
    fn eval(&self, s: f64) -> Result<f64> {
        Ok(self.scale * s + self.shift)
    }
    fn derivative(&self, _s: f64) -> f64 {
        self.scale
    }
    fn skeleton(&self) -> (&[f64], &[f64]) {
        (&self.nodes, &self.values)
    }
    fn period(&self) -> Option<(f64, f64)> {
        None
    }
}

/// `x(z) = z₀ + ∫_{z₀}^{z} dζ/√κ_tar(ζ)`.
#[derive(Debug, Clone)]
pub struct OpticalMap {
    target: TargetMetric,
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl OpticalMap {
    pub fn target(&self) -> &TargetMetric {
        &self.target
    }

    /// Optical length of the whole domain.
    pub fn optical_length(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    fn integrand(&self) -> impl Fn(f64) -> f64 + '_ {
        move |s| 1.0 / self.target.kappa(s).sqrt()
    }
}

impl MonotoneMap for OpticalMap {
    fn eval(&self, z: f64) -> Result<f64> {
        let d = self.target.domain();
        let (z0, offset) = if d.is_periodic() {
            let k = ((z - d.start) / d.length).floor();
            (z - k * d.length, k * self.optical_length())
        } else {
            (z, 0.0)
        };
        let n = self.breaks.len();
        let i = self.breaks.partition_point(|&b| b <= z0).clamp(1, n - 1) - 1;
        let part = quadrature::adaptive(self.integrand(), self.breaks[i], z0, QUAD_TOL / n as f64)?;
        Ok(offset + self.values[i] + part)
    }

    fn derivative(&self, z: f64) -> f64 {
        1.0 / self.target.kappa(z).sqrt()
    }

    fn skeleton(&self) -> (&[f64], &[f64]) {
        (&self.breaks, &self.values)
    }

    fn period(&self) -> Option<(f64, f64)> {
        let d = self.target.domain();
        d.is_periodic().then(|| (d.length, self.optical_length()))
    }
}

/// Cumulative adaptive quadrature of `1/√κ_tar` over the target domain.
pub fn x_of_z(target: &TargetMetric) -> Result<OpticalMap> {
    let d = target.domain();
    let breaks: Vec<f64> = match target.kind() {
        TargetKind::Tabulated { z, .. } => z.clone(),
        _ => (0..=BREAKS).map(|k| d.start + d.length * k as f64 / BREAKS as f64).collect(),
    };
    let f = |s: f64| 1.0 / target.kappa(s).sqrt();
    let mut values = Vec::with_capacity(breaks.len());
    values.push(d.start);
    for w in breaks.windows(2) {
        let step = quadrature::adaptive(f, w[0], w[1], QUAD_TOL / breaks.len() as f64)?;
        values.push(values[values.len() - 1] + step);
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::numerical("optical map is not strictly increasing"));
    }
    Ok(OpticalMap { target: target.clone(), breaks, values })
}

/// Numerical inverse of a [`MonotoneMap`].
pub struct InverseMap<'a, M: MonotoneMap> {
    map: &'a M,
    guess: Pchip,
}

/// Monotone-cubic initial guess refined by safeguarded Newton iteration.
pub fn invert_map<M: MonotoneMap>(map: &M) -> Result<InverseMap<'_, M>> {
    let (s, v) = map.skeleton();
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("map to invert is not strictly increasing"));
    }
    let guess = match map.period() {
        Some((p, dv)) => Pchip::periodic(&v[..v.len() - 1], &s[..s.len() - 1], dv, p)?,
        None => Pchip::new(v, s)?,
    };
    Ok(InverseMap { map, guess })
}

impl<M: MonotoneMap> InverseMap<'_, M> {
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (s, v) = self.map.skeleton();
        let (x0, shift) = match self.map.period() {
            Some((p, dv)) => {
                let k = ((x - v[0]) / dv).floor();
                (x - k * dv, k * p)
            }
            None => (x, 0.0),
        };
        let n = v.len();
        let slack = 1e-12 * (v[n - 1] - v[0]).abs().max(v[0].abs()).max(1.0);
        if x0 < v[0] - slack || x0 > v[n - 1] + slack {
            return Err(Error::range(format!("{x} lies outside the map's range")));
        }
        let x0 = x0.clamp(v[0], v[n - 1]);
        let i = v.partition_point(|&b| b <= x0).clamp(1, n - 1) - 1;
        let (mut lo, mut hi) = (s[i], s[i + 1]);
        let mut z = self.guess.eval(x0).clamp(lo, hi);
        for _ in 0..100 {
            let r = self.map.eval(z)? - x0;
            if r > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let newton = z - r / self.map.derivative(z);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let step = (next - z).abs();
            z = next;
            if step <= 0.1 * INVERT_TOL || hi - lo <= INVERT_TOL {
                return Ok(z + shift);
            }
        }
        Err(Error::numerical(format!("map inversion did not converge at {x}")))
    }
}

#[derive(Debug, Clone)]
pub struct DesignResult {
    pub profile: DriveProfile,
    pub chart: ConformalChart,
    /// `max |κ_recovered − κ_tar(z_recovered)|` over the nodes.
    pub residual: f64,
    /// `z(x_j)` from the inverted optical map.
    pub z_design: Vec<f64>,
}

/// Lab grid for a target: start at the domain anchor, length equal to the
/// optical length.
pub fn design_grid(target: &TargetMetric, n: usize, scheme: Discretization) -> Result<Arc<SpatialGrid>> {
    let d = target.domain();
    let lx = x_of_z(target)?.optical_length();
    let axis = Axis::new(n, d.start, lx, d.bc)?;
    Ok(Arc::new(SpatialGrid::line(axis, scheme)?))
}

/// `γ̄(x) = ln κ_tar(z(x)) / (4·fbar)` on `x_grid`, verified by rebuilding
/// the forward chart.
pub fn design_drive(target: &TargetMetric, fbar: f64, x_grid: &Arc<SpatialGrid>) -> Result<DesignResult> {
    if fbar == 0.0 || !fbar.is_finite() {
        return Err(Error::validation("fbar must be finite and nonzero"));
    }
    if x_grid.dims() != 1 {
        return Err(Error::validation("design needs a one-dimensional lab grid"));
    }
    let map = x_of_z(target)?;
    let d = target.domain();
    let axis = x_grid.axis(0);
    let lx = map.optical_length();
    if axis.is_periodic() != d.is_periodic()
        || (axis.start - d.start).abs() > 1e-9 * (1.0 + d.start.abs())
        || (axis.length - lx).abs() > 1e-9 * lx
    {
        return Err(Error::validation(format!(
            "lab grid must start at {} with length {lx} (optical length) and matching periodicity",
            d.start
        )));
    }
    let inverse = invert_map(&map)?;
    let x = x_grid.coordinate(0);
    let z: Vec<f64> = x.iter().map(|&xi| inverse.eval(xi)).collect::<Result<_>>()?;
    let gamma = gamma_in_z(target, fbar, &z)?;
    let profile = profile_from_samples(x_grid.clone(), &gamma)?;
    let chart = forward_chart(&profile, fbar)?;
    let residual = chart
        .z_nodes()
        .iter()
        .zip(chart.kappa())
        .map(|(zr, kr)| (kr - target.kappa(*zr)).abs())
        .fold(0.0, f64::max);
    Ok(DesignResult { profile, chart, residual, z_design: z })
}

/// Chart of the target sampled on a uniform z-grid covering its domain.
pub fn target_chart(target: &TargetMetric, grid_z: &Arc<SpatialGrid>) -> Result<ConformalChart> {
    let d = target.domain();
    let axis = grid_z.axis(0);
    if grid_z.dims() != 1
        || axis.is_periodic() != d.is_periodic()
        || (axis.start - d.start).abs() > 1e-9 * (1.0 + d.start.abs())
        || (axis.length - d.length).abs() > 1e-9 * d.length
    {
        return Err(Error::validation("z-grid must cover the target domain"));
    }
    let map = x_of_z(target)?;
    let z = axis.coords();
    let x: Vec<f64> = z.iter().map(|&s| map.eval(s)).collect::<Result<_>>()?;
    let kappa = z.iter().map(|&s| target.kappa(s)).collect();
    let periods = d.is_periodic().then(|| (map.optical_length(), d.length));
    ConformalChart::new(x, z, kappa, 0.0, ChartDirection::FromTarget, grid_z.clone(), UniformFrame::Z, periods)
}

/// Curvature data of a target chart: chart-formula `K` and the target's
/// mean curvature, with `V = v_sign·M²`.
pub fn target_manifold(target: &TargetMetric, chart: &ConformalChart, v_sign: f64) -> Result<ManifoldData> {
    let zero = profile_from_samples(chart.grid().clone(), &vec![0.0; chart.z_nodes().len()])?;
    let k = gauss_curvature(chart, &zero, 0.0, CurvatureMethod::ChartFormula)?;
    let m = chart.z_nodes().iter().map(|&z| target.mean_curvature(z)).collect();
    ManifoldData::new(k, m, v_sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(length: f64) -> Domain {
        Domain { start: 0.0, length, bc: BoundaryCondition::Periodic }
    }

    #[test]
    fn scaling_is_exact_for_every_kind() {
        let z: Vec<f64> = (0..=16).map(|j| j as f64 * PI / 8.0).collect();
        let k: Vec<f64> = z.iter().map(|s| 2.0 + s.sin()).collect();
        let targets = [
            TargetMetric::sinusoidal(0.4, 2.0, 0.1, 2.0 * PI).unwrap(),
            TargetMetric::torus(TorusParams::new(3.0, 1.0).unwrap()).unwrap(),
            TargetMetric::tabulated(z, k, BoundaryCondition::Periodic).unwrap(),
        ];
        for t in &targets {
            let s = t.scaled(0.3).unwrap();
            assert_eq!(s.domain(), t.domain());
            for u in [-0.4, 0.1, 0.9, 2.2] {
                assert!((s.kappa(u) - 0.3 * t.kappa(u)).abs() < 1e-14 * t.kappa(u), "{:?}", t.kind());
            }
        }
    }

    #[test]
    fn flat_and_constant_targets() {
        let flat = TargetMetric::flat(periodic(2.0)).unwrap();
        let m = x_of_z(&flat).unwrap();
        for z in [0.0, 0.3, 1.7, 2.5] {
            assert!((m.eval(z).unwrap() - z).abs() < 1e-13);
        }
        assert!(gamma_in_z(&flat, 0.5, &[0.1, 0.2]).unwrap().iter().all(|g| *g == 0.0));
        let four = flat.scaled(4.0).unwrap();
        let m4 = x_of_z(&four).unwrap();
        assert!((m4.eval(1.0).unwrap() - 0.5).abs() < 1e-12);
        let c: f64 = 0.3;
        let fbar: f64 = 0.7;
        let e = flat.scaled((4.0 * fbar * c).exp()).unwrap();
        assert!(gamma_in_z(&e, fbar, &[0.4]).unwrap().iter().all(|g| (g - c).abs() < 1e-13));
    }

    #[test]
    fn weak_modulation_profile() {
        let lambda = 1e-3;
        let t = TargetMetric::sinusoidal(lambda, 2.0, 0.0, 2.0 * PI).unwrap();
        let fbar = -0.5;
        let z: Vec<f64> = (0..20).map(|k| k as f64 * 0.3).collect();
        let g = gamma_in_z(&t, fbar, &z).unwrap();
        for (gz, zz) in g.iter().zip(&z) {
            let lin = lambda / (4.0 * fbar) * (2.0 * zz).cos();
            assert!((gz - lin).abs() < lambda * lambda);
        }
    }

    #[test]
    fn affine_inversion() {
        let id = AffineMap::new(1.0, 0.0, -1.0, 3.0);
        let inv = invert_map(&id).unwrap();
        assert!((inv.eval(0.37).unwrap() - 0.37).abs() < 1e-12);
        let half = AffineMap::new(0.5, 0.0, 0.0, 4.0);
        let inv = invert_map(&half).unwrap();
        assert!((inv.eval(1.1).unwrap() - 2.2).abs() < 1e-12);
    }

    #[test]
    fn optical_round_trip() {
        let t = TargetMetric::sinusoidal(0.5, 1.0, 0.0, 2.0 * PI).unwrap();
        let m = x_of_z(&t).unwrap();
        let inv = invert_map(&m).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..200 {
            let z = -1.0 + k as f64 * 0.05;
            worst = worst.max((inv.eval(m.eval(z).unwrap()).unwrap() - z).abs());
        }
        assert!(worst <= 1e-10, "{worst}");
    }

    #[test]
    fn torus_design_matches_torus_drive() {
        let p = TorusParams::new(2.0, 1.0).unwrap();
        let t = TargetMetric::torus(p).unwrap();
        assert!((x_of_z(&t).unwrap().optical_length() - 2.0 * PI).abs() < 1e-11);
        let g = design_grid(&t, 64, Discretization::Spectral).unwrap();
        let res = design_drive(&t, 1.0, &g).unwrap();
        let x = g.coordinate(0);
        for (gv, xv) in res.profile.values().iter().zip(&x) {
            // lab coordinate is the meridian arc, anchored at θ = −π
            let theta = (xv - g.axis(0).start) / p.minor_r - PI;
            assert!((gv + 0.5 * p.omega(theta).ln()).abs() < 1e-8);
        }
    }

    #[test]
    fn non_periodic_design() {
        let z: Vec<f64> = (0..41).map(|k| k as f64 * 0.05).collect();
        let kappa: Vec<f64> = z.iter().map(|s| 1.0 + 0.2 * s).collect();
        let t = TargetMetric::tabulated(z, kappa, BoundaryCondition::Dirichlet).unwrap();
        let g = design_grid(&t, 201, Discretization::Stencil).unwrap();
        let res = design_drive(&t, 0.5, &g).unwrap();
        assert!(res.residual < 1e-4, "{}", res.residual);
    }

    #[test]
    fn rejects_invalid_targets() {
        assert!(TargetMetric::sinusoidal(1.0, 1.0, 0.0, 2.0 * PI).is_err());
        assert!(TargetMetric::sinusoidal(0.5, 1.5, 0.0, 2.0 * PI).is_err());
        assert!(TargetMetric::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, -1.0, 1.0, 1.0], BoundaryCondition::Neumann).is_err());
        let t = TargetMetric::flat(periodic(1.0)).unwrap();
        assert!(gamma_in_z(&t, 0.0, &[0.0]).is_err());
        let wrong = Arc::new(SpatialGrid::periodic_spectral(16, 0.0, 2.0).unwrap());
        assert!(design_drive(&t, 0.5, &wrong).is_err());
    }
}
