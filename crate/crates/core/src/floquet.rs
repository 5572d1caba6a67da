//! One-period propagation, Floquet Hamiltonian extraction and micromotion.
//!
//! Slice exponentials are independent and are evaluated data-parallel in
//! fixed-size blocks; each block is reduced by a fixed pairwise tree, and
//! blocks are chained in time order. The arithmetic is identical in
//! sequential and parallel mode, so both produce bit-identical propagators.

use std::f64::consts::PI;

use crate::drive::{DriveProfile, TemporalDrive};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::linalg::{self, c64, re, CMat, I};
use crate::operators::{h_prime, DriveOperators, OperatorMatrix};
use crate::par::{self, ExecMode};

pub const MIN_SLICES: usize = 64;
pub const CONDITION_LIMIT: f64 = 1e8;
pub const MICROMOTION_LIMIT: f64 = 300.0;
pub const NORM_LIMIT: f64 = 1e150;
const BLOCK: usize = 256;

#[derive(Debug, Clone)]
pub struct MonodromyResult {
    pub u_matrix: CMat,
    pub slices: usize,
    pub period: f64,
    pub h_f: OperatorMatrix,
    /// Sorted by real part, then imaginary part.
    pub quasienergies: Vec<c64>,
    pub branch_width: f64,
    /// 1-norm condition number of the unit-column eigenvector matrix.
    pub condition: f64,
}

/// `exp(f(t)·γ̄)` as a diagonal operator.
pub fn micromotion(profile: &DriveProfile, drive: &TemporalDrive, t: f64) -> Result<OperatorMatrix> {
    let f = drive.value(t);
    let mut d = Vec::with_capacity(profile.grid().len());
    for g in profile.values() {
        let e = f * g;
        if e.abs() > MICROMOTION_LIMIT {
            return Err(Error::range(format!(
                "micromotion exponent {e:.3e} exceeds ±{MICROMOTION_LIMIT}"
            )));
        }
        d.push(e.exp());
    }
    Ok(OperatorMatrix::from_parts(linalg::real_diag(&d), profile.grid().clone(), "P", true))
}

/// One-period propagator `U′(T) = ∏ exp(−i·H′(t_k)·Δt)`, earliest slice
/// rightmost, with midpoint samples `t_k = (k + ½)Δt`.
pub fn propagator(
    ops: &DriveOperators,
    drive: &TemporalDrive,
    slices: usize,
    exec: ExecMode,
) -> Result<CMat> {
    if slices < MIN_SLICES {
        return Err(Error::validation(format!(
            "monodromy needs at least {MIN_SLICES} slices, got {slices}"
        )));
    }
    let dt = drive.period() / slices as f64;
    let step = |k: usize| -> Result<CMat> {
        let h = h_prime(ops, drive, (k as f64 + 0.5) * dt);
        let gen = linalg::scale(h.matrix().as_ref(), -I * dt);
        linalg::expm(gen.as_ref())
            .map_err(|e| Error::numerical(format!("slice {k}: {e}")))
    };
    let mut u: Option<CMat> = None;
    let mut start = 0;
    while start < slices {
        let len = BLOCK.min(slices - start);
        let exps = par::try_map_range(len, exec, |j| step(start + j))?;
        let block = par::ordered_tree_reduce(exps, exec, |earlier, later| {
            linalg::mul(later.as_ref(), earlier.as_ref())
        })
        .expect("non-empty block");
        u = Some(match u {
            None => block,
            Some(prev) => linalg::mul(block.as_ref(), prev.as_ref()),
        });
        start += len;
    }
    let u = u.expect("at least one slice");
    if !linalg::all_finite(u.as_ref()) {
        return Err(Error::numerical("propagator overflowed"));
    }
    Ok(u)
}

pub fn monodromy(ops: &DriveOperators, drive: &TemporalDrive, slices: usize) -> Result<MonodromyResult> {
    monodromy_with(ops, drive, slices, ExecMode::default())
}

pub fn monodromy_with(
    ops: &DriveOperators,
    drive: &TemporalDrive,
    slices: usize,
    exec: ExecMode,
) -> Result<MonodromyResult> {
    let u = propagator(ops, drive, slices, exec)?;
    let log = log_propagator(&u, drive.period())?;
    Ok(MonodromyResult {
        h_f: OperatorMatrix::from_parts(log.h_f, ops.grid().clone(), "HF", false),
        u_matrix: u,
        slices,
        period: drive.period(),
        quasienergies: log.quasienergies,
        branch_width: 2.0 * PI / drive.period(),
        condition: log.condition,
    })
}

/// Re-extracts `H_F = (i/T)·log U′` from a monodromy result.
pub fn extract_hf(result: &MonodromyResult, period: f64) -> Result<OperatorMatrix> {
    let log = log_propagator(&result.u_matrix, period)?;
    Ok(OperatorMatrix::from_parts(log.h_f, result.h_f.grid().clone(), "HF", false))
}

#[derive(Debug, Clone)]
pub struct FloquetLog {
    pub h_f: CMat,
    pub quasienergies: Vec<c64>,
    pub condition: f64,
}

/// Maps an eigenvalue of `U′` to its quasienergy with real part in
/// `(−π/T, π/T]`.
pub fn quasienergy(lambda: c64, period: f64) -> c64 {
    let mut theta = -lambda.arg();
    if theta <= -PI {
        theta += 2.0 * PI;
    }
    c64::new(theta / period, lambda.norm().ln() / period)
}

/// Folds a real energy into `(−π/T, π/T]`.
pub fn fold(e: f64, period: f64) -> f64 {
    let w = 2.0 * PI / period;
    let mut r = (e + 0.5 * w).rem_euclid(w) - 0.5 * w;
    if r <= -0.5 * w {
        r += w;
    }
    r
}

/// Principal matrix logarithm through the eigendecomposition of `u`.
pub fn log_propagator(u: &CMat, period: f64) -> Result<FloquetLog> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::validation("period must be positive"));
    }
    let (vals, mut vecs) = linalg::eigen_general(u.as_ref())?;
    let n = vals.len();
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| vecs[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                vecs[(i, j)] /= re(norm);
            }
        }
    }
    let condition = linalg::condition_number(vecs.as_ref());
    if !(condition <= CONDITION_LIMIT) {
        let (mut best, mut pair) = (f64::INFINITY, (0, 0));
        for a in 0..n {
            for b in a + 1..n {
                let d = (vals[a] - vals[b]).norm();
                if d < best {
                    best = d;
                    pair = (a, b);
                }
            }
        }
        let (a, b) = pair;
        return Err(Error::numerical(format!(
            "monodromy is near-defective (eigenvector condition {condition:.3e}); \
             closest eigenvalue cluster {} and {} (separation {best:.3e})",
            fmt_c(quasienergy(vals[a], period)),
            fmt_c(quasienergy(vals[b], period)),
        )));
    }
    let eps: Vec<c64> = vals.iter().map(|&l| quasienergy(l, period)).collect();
    let inv = linalg::inverse(vecs.as_ref())?;
    let scaled = linalg::mul(vecs.as_ref(), linalg::diag(&eps).as_ref());
    let h_f = linalg::mul(scaled.as_ref(), inv.as_ref());
    let mut sorted = eps;
    sort_spectrum(&mut sorted);
    Ok(FloquetLog { h_f, quasienergies: sorted, condition })
}

fn fmt_c(z: c64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

/// Sort by real part, ties by imaginary part.
pub fn sort_spectrum(v: &mut [c64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: GridFunction,
    /// Norm after each period, starting with the initial norm.
    pub norms: Vec<f64>,
    /// `|ψ|²` after each period, starting with the initial state.
    pub densities: Vec<Vec<f64>>,
    /// Set when the norm guard stopped the run early.
    pub stopped: Option<Error>,
}

/// Stroboscopic evolution with a precomputed one-period propagator. Stops
/// at the first period whose norm leaves `[1e−150, 1e150]`.
pub fn evolve_with_propagator(psi0: &GridFunction, u: &CMat, n_periods: usize) -> Evolution {
    let mut psi = psi0.values().to_vec();
    let density = |p: &[c64]| p.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>();
    let mut norms = vec![psi0.norm()];
    let mut densities = vec![density(&psi)];
    let mut stopped = None;
    for k in 1..=n_periods {
        let next = linalg::mat_vec(u.as_ref(), &psi);
        let norm = next.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm <= NORM_LIMIT && norm >= 1.0 / NORM_LIMIT) {
            stopped = Some(Error::range(format!(
                "state norm {norm:.3e} left [1e-150, 1e150] at period {k}"
            )));
            break;
        }
        psi = next;
        norms.push(norm);
        densities.push(density(&psi));
    }
    let state = GridFunction::new(psi0.grid().clone(), psi).expect("finite state");
    Evolution { state, norms, densities, stopped }
}

/// Applies `U′(T)` `n_periods` times to `psi0`. The state is not
/// renormalized.
pub fn evolve_state(
    psi0: &GridFunction,
    ops: &DriveOperators,
    drive: &TemporalDrive,
    n_periods: usize,
    slices: usize,
) -> Result<Evolution> {
    if psi0.grid().as_ref() != ops.grid().as_ref() {
        return Err(Error::validation("initial state and operators live on different grids"));
    }
    let u = propagator(ops, drive, slices, ExecMode::default())?;
    let mut ev = evolve_with_propagator(psi0, &u, n_periods);
    match ev.stopped.take() {
        Some(e) => Err(e),
        None => Ok(ev),
    }
}
