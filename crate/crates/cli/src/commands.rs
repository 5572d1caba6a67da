use std::time::Instant;

use serde_json::{json, Value};

use manifold_floquet::design::{design_drive, design_grid, x_of_z, TargetMetric};
use manifold_floquet::drive::{self, TemporalDrive};
use manifold_floquet::grid::Discretization;
use manifold_floquet::par::ExecMode;
use manifold_floquet::pipeline::{
    best_v_sign, compare_first_order, evolve_packet, frequency_sweep, geometric_side, lab_system, pt_onset,
    pt_sweep, torus_sectors, LabConfig, LabSystem, Packet, PotentialMode,
};

use crate::config::{Preset, Resolved};
use crate::output::{num, Cell, RunDir, Table};
use crate::CliError;

const EXEC: ExecMode = ExecMode::Parallel;

fn scheme_for(target: &TargetMetric) -> Discretization {
    if target.domain().is_periodic() {
        Discretization::Spectral
    } else {
        Discretization::Stencil
    }
}

fn lab_config(r: &Resolved, target: &TargetMetric, potential: PotentialMode) -> LabConfig {
    LabConfig {
        scheme: scheme_for(target),
        fbar: r.fbar,
        v_sign: r.v_sign,
        potential,
        ..LabConfig::new(r.grid_n, r.drive.clone())
    }
}

/// Drive frequencies: the explicit period if given, else multipliers of the
/// spectral radius.
fn frequencies(r: &Resolved, lab: &LabSystem) -> Result<Vec<f64>, CliError> {
    let rho = lab.spectral_scale()?;
    Ok(match r.period {
        Some(p) => vec![2.0 * std::f64::consts::PI / p / rho],
        None => r.multipliers.iter().copied().filter(|m| m.is_finite()).collect(),
    })
}

fn sidecar(command: &str, r: &Resolved, started: Instant, results: Value, run: &RunDir) -> Value {
    json!({
        "command": command,
        "config": r,
        "versions": { "mfloq": env!("CARGO_PKG_VERSION") },
        "timing_seconds": started.elapsed().as_secs_f64(),
        "outputs": run.written(),
        "results": results,
    })
}

pub fn design(r: &Resolved) -> Result<(), CliError> {
    let started = Instant::now();
    let target = r.target()?;
    let fbar = match r.fbar {
        Some(f) => f,
        None => -drive::moments(&TemporalDrive::new(1.0, r.drive.clone())?, 256)?.m1,
    };
    let grid = design_grid(&target, r.grid_n, scheme_for(&target))?;
    let res = design_drive(&target, fbar, &grid)?;
    let mut t = Table::new(&["x", "gamma_bar", "z", "kappa"]);
    let x = grid.coordinate(0);
    let g = res.profile.values();
    for j in 0..x.len() {
        t.row(&[Cell::F(x[j]), Cell::F(g[j]), Cell::F(res.chart.z_nodes()[j]), Cell::F(res.chart.kappa()[j])]);
    }
    let mut run = RunDir::create(&r.out)?;
    run.csv("design.csv", &t)?;
    let results = json!({
        "fbar": num(fbar),
        "residual": num(res.residual),
        "optical_length": num(x_of_z(&target)?.optical_length()),
        "chain_rule_residual": num(res.chart.chain_rule_residual()),
    });
    let meta = sidecar("design", r, started, results, &run);
    run.json("design.json", &meta)
}

pub fn duality(r: &Resolved) -> Result<(), CliError> {
    if r.preset == Preset::Torus && r.table.is_none() {
        return torus(r);
    }
    let started = Instant::now();
    let target = r.target()?;
    let lab = lab_system(&target, &lab_config(r, &target, PotentialMode::Compensated))?;
    let (_, _, geom) = geometric_side(&target, r.grid_n, 0, r.v_sign)?;
    let rep = compare_first_order(&lab, &geom, r.count)?;
    let mults = frequencies(r, &lab)?;
    let sweep = frequency_sweep(&lab, Some(&geom), &mults, r.slices, r.count, EXEC)?;

    let mut run = RunDir::create(&r.out)?;
    let mut spectra = Table::new(&[
        "k", "lab_re", "lab_im", "transformed_re", "transformed_im", "geom_re", "geom_im", "abs_diff",
    ]);
    for k in 0..rep.geom.len() {
        let (a, t, g) = (rep.lab[k], rep.transformed[k], rep.geom[k]);
        spectra.row(&[
            Cell::I(k as i64),
            Cell::F(a.re),
            Cell::F(a.im),
            Cell::F(t.re),
            Cell::F(t.im),
            Cell::F(g.re),
            Cell::F(g.im),
            Cell::F((a - g).norm()),
        ]);
    }
    run.csv("duality_spectra.csv", &spectra)?;
    let mut table = Table::new(&[
        "multiplier", "omega", "hf_vs_h1", "hf_vs_geom", "magnus_estimate", "max_imag", "condition",
    ]);
    for p in &sweep {
        table.row(&[
            Cell::F(p.multiplier),
            Cell::F(p.omega),
            Cell::F(p.hf_vs_h1),
            Cell::F(p.hf_vs_geom.unwrap_or(f64::NAN)),
            Cell::F(p.magnus_estimate),
            Cell::F(p.max_imag),
            Cell::F(p.condition),
        ]);
    }
    run.csv("duality_sweep.csv", &table)?;
    let results = json!({
        "lab_vs_geom": num(rep.lab_vs_geom),
        "transformed_vs_geom": num(rep.transformed_vs_geom),
        "transformed_hermiticity": num(rep.transformed_hermiticity),
        "eta_residual": num(rep.eta_residual),
        "eta_residual_dealiased": rep.eta_residual_dealiased.map(num),
        "design_residual": num(lab.design.residual),
        "magnus_estimate": sweep.iter().map(|p| num(p.magnus_estimate)).collect::<Vec<_>>(),
    });
    let meta = sidecar("duality", r, started, results, &run);
    run.json("duality.json", &meta)
}

pub fn torus(r: &Resolved) -> Result<(), CliError> {
    let started = Instant::now();
    let params = r.torus()?;
    let base = LabConfig { fbar: r.fbar, ..LabConfig::new(r.grid_n, r.drive.clone()) };
    let rows = torus_sectors(params, &base, &r.sectors, &[-1.0, 1.0], r.count, EXEC)?;
    let mut t = Table::new(&["sector", "v_sign", "k", "lab", "geom", "relative"]);
    for row in &rows {
        for k in 0..row.geom.len() {
            t.row(&[
                Cell::I(row.sector as i64),
                Cell::I(row.v_sign as i64),
                Cell::I(k as i64),
                Cell::F(row.lab[k].re),
                Cell::F(row.geom[k].re),
                Cell::F(row.relative),
            ]);
        }
    }
    let mut run = RunDir::create(&r.out)?;
    run.csv("torus.csv", &t)?;
    let worst = |v: f64| rows.iter().filter(|x| x.v_sign == v).map(|x| x.relative).fold(0.0, f64::max);
    let results = json!({
        "v_sign_match": best_v_sign(&rows).map(num),
        "worst_relative_v_minus": num(worst(-1.0)),
        "worst_relative_v_plus": num(worst(1.0)),
    });
    let meta = sidecar("torus", r, started, results, &run);
    run.json("torus.json", &meta)
}

pub fn pt(r: &Resolved) -> Result<(), CliError> {
    if r.preset == Preset::Torus || r.table.is_some() {
        return Err(CliError::Config("pt-sweep needs a cosine target (sinusoidal or aah-continuum)".into()));
    }
    let started = Instant::now();
    // validate every sweep point before computing
    for &odd in &r.odds {
        r.target_with_odd(odd)?;
    }
    let target = r.target()?;
    let config = lab_config(r, &target, PotentialMode::Zero);
    let pts = pt_sweep(r.lambda, r.q, r.length, &r.odds, &r.multipliers, &config, r.slices, r.tol, EXEC)?;
    let mut t = Table::new(&[
        "odd",
        "multiplier",
        "max_imag",
        "threshold",
        "pt_broken",
        "pairs",
        "localization_asymmetry",
        "magnus_estimate",
    ]);
    for p in &pts {
        t.row(&[
            Cell::F(p.odd),
            Cell::F(p.multiplier),
            Cell::F(p.max_imag),
            Cell::F(p.threshold),
            Cell::B(p.pt_broken),
            Cell::I(p.pairs as i64),
            Cell::F(p.localization_asymmetry),
            Cell::F(p.magnus_estimate.unwrap_or(f64::NAN)),
        ]);
    }
    let mut run = RunDir::create(&r.out)?;
    run.csv("pt_sweep.csv", &t)?;
    let per_multiplier: Vec<Value> = r
        .multipliers
        .iter()
        .map(|&m| {
            let sel: Vec<_> = pts.iter().filter(|p| p.multiplier == m).cloned().collect();
            let label = if m.is_finite() { num(m) } else { json!("first-order") };
            json!({ "multiplier": label, "onset": pt_onset(&sel).map(num) })
        })
        .collect();
    let results = json!({ "onset": pt_onset(&pts).map(num), "per_multiplier": per_multiplier });
    let meta = sidecar("pt-sweep", r, started, results, &run);
    run.json("pt_sweep.json", &meta)
}

pub fn evolve(r: &Resolved) -> Result<(), CliError> {
    let started = Instant::now();
    let target = r.target()?;
    let lab = lab_system(&target, &lab_config(r, &target, PotentialMode::Zero))?;
    let mult = frequencies(r, &lab)?.first().copied().ok_or_else(|| {
        CliError::Config("evolve needs --period or a finite multiplier".into())
    })?;
    let omega = mult * lab.spectral_scale()?;
    let axis = *lab.grid().axis(0);
    let packet = Packet { center: axis.start + 0.5 * axis.length, width: axis.length / 20.0, wavenumber: 0.0 };
    let ev = evolve_packet(&lab, omega, r.slices, r.periods, packet, EXEC)?;

    let mut norms = Table::new(&["period", "norm"]);
    for (k, n) in ev.norms.iter().enumerate() {
        norms.row(&[Cell::I(k as i64), Cell::F(*n)]);
    }
    let x = lab.grid().coordinate(0);
    let mut dens = Table::new(&["period", "x", "density"]);
    for (k, d) in ev.densities.iter().enumerate() {
        for (xj, dj) in x.iter().zip(d) {
            dens.row(&[Cell::I(k as i64), Cell::F(*xj), Cell::F(*dj)]);
        }
    }
    let mut run = RunDir::create(&r.out)?;
    run.csv("evolve_norms.csv", &norms)?;
    run.csv("evolve_density.csv", &dens)?;
    let completed = ev.norms.len() - 1;
    let growth = if completed > 0 { ev.norms[completed].ln() / completed as f64 } else { 0.0 };
    let max_dev = ev.norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    let results = json!({
        "omega": num(omega),
        "periods_completed": completed,
        "terminated_early": ev.stopped.is_some(),
        "stop_reason": ev.stopped.as_ref().map(|e| e.to_string()),
        "log_growth_per_period": num(growth),
        "max_norm_deviation": num(max_dev),
    });
    let meta = sidecar("evolve", r, started, results, &run);
    run.json("evolve.json", &meta)
}
