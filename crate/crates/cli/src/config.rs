//! Run configuration: a TOML file merged under command-line flags, then
//! resolved against the named preset.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use manifold_floquet::design::TargetMetric;
use manifold_floquet::drive::DriveShape;
use manifold_floquet::geometry::TorusParams;
use manifold_floquet::grid::BoundaryCondition;
use manifold_floquet::pipeline::V_SIGN_CONVENTION;

use crate::CliError;

pub const RUN_DIR_ENV: &str = "MFLOQ_RUN_DIR";

/// Every field is optional; unset fields fall back to preset defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// TOML file with any of these options; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// flat, sinusoidal, torus or aah-continuum.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Target domain length (flat and cosine presets).
    #[arg(long)]
    pub length: Option<f64>,
    /// sin2, sinusoid, sawtooth or constant.
    #[arg(long)]
    pub drive: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub amplitude: Option<f64>,
    /// Drive period; overrides the frequency multipliers.
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub fbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v_sign: Option<f64>,
    #[arg(long)]
    pub slices: Option<usize>,
    /// Reality threshold relative to the spectral radius.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory; defaults to $MFLOQ_RUN_DIR, then ./mfloq-run.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Odd amplitude of the cosine target.
    #[arg(long, allow_negative_numbers = true)]
    pub odd: Option<f64>,
    #[arg(long)]
    pub major: Option<f64>,
    #[arg(long)]
    pub minor: Option<f64>,
    /// Angular sectors, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub sector: Option<Vec<i32>>,
    /// Drive frequencies in units of the spectral radius of H_F1; `inf`
    /// selects the first-order operator where meaningful.
    #[arg(long, value_delimiter = ',')]
    pub multipliers: Option<Vec<f64>>,
    /// Odd amplitudes for pt-sweep, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub odds: Option<Vec<f64>>,
    /// Stroboscopic periods for evolve.
    #[arg(long)]
    pub periods: Option<usize>,
    /// Number of lowest eigenvalues compared.
    #[arg(long)]
    pub count: Option<usize>,
    /// Two-column (z, kappa) CSV target; replaces the preset geometry.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Treat the table as periodic (last row repeats the first).
    #[arg(long)]
    pub periodic: Option<bool>,
}

impl RunConfig {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { config: self.config.or(base.config), $($f: self.$f.or(base.$f)),* } };
        }
        pick!(
            preset, grid_n, length, drive, amplitude, period, fbar, v_sign, slices, tol, out, lambda, q, odd, major,
            minor, sector, multipliers, odds, periods, count, table, periodic
        )
    }

    /// Flags merged over the file named by `--config`, if any.
    pub fn load(flags: RunConfig) -> Result<RunConfig, CliError> {
        match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                let file: RunConfig =
                    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                Ok(flags.over(file))
            }
            None => Ok(flags),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Flat,
    Sinusoidal,
    Torus,
    AahContinuum,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "flat" => Ok(Preset::Flat),
            "sinusoidal" => Ok(Preset::Sinusoidal),
            "torus" => Ok(Preset::Torus),
            "aah-continuum" => Ok(Preset::AahContinuum),
            other => Err(CliError::Config(format!(
                "unknown preset {other:?}; expected flat, sinusoidal, torus or aah-continuum"
            ))),
        }
    }
}

/// Configuration with every default applied.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub preset: Preset,
    pub grid_n: usize,
    pub length: f64,
    pub drive: DriveShape,
    pub period: Option<f64>,
    pub fbar: Option<f64>,
    pub v_sign: f64,
    pub slices: usize,
    pub tol: f64,
    pub out: PathBuf,
    pub lambda: f64,
    pub q: f64,
    pub odd: f64,
    pub major: f64,
    pub minor: f64,
    pub sectors: Vec<i32>,
    pub multipliers: Vec<f64>,
    pub odds: Vec<f64>,
    pub periods: usize,
    pub count: usize,
    pub table: Option<PathBuf>,
    pub periodic: bool,
}

pub fn resolve(c: &RunConfig, default_preset: Preset) -> Result<Resolved, CliError> {
    let preset = match &c.preset {
        Some(p) => Preset::parse(p)?,
        None => default_preset,
    };
    let (lambda, q) = match preset {
        Preset::AahContinuum => (0.05, 3.0),
        Preset::Flat => (0.0, 1.0),
        _ => (0.3, 2.0),
    };
    let default_n = if preset == Preset::Torus { 256 } else { 64 };
    let amplitude = c.amplitude.unwrap_or(1.0);
    let drive = match c.drive.as_deref().unwrap_or("sin2") {
        "sin2" => DriveShape::SinusoidSquared { amplitude },
        // phase π/2 makes the sinusoid symmetric about mid-period
        "sinusoid" => DriveShape::Sinusoid { amplitude, phase: 0.5 * PI },
        "sawtooth" => DriveShape::Sawtooth { amplitude },
        "constant" => DriveShape::Constant { value: amplitude },
        other => {
            return Err(CliError::Config(format!(
                "unknown drive {other:?}; expected sin2, sinusoid, sawtooth or constant"
            )))
        }
    };
    let out = c
        .out
        .clone()
        .or_else(|| std::env::var_os(RUN_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("mfloq-run"));
    let r = Resolved {
        preset,
        grid_n: c.grid_n.unwrap_or(default_n),
        length: c.length.unwrap_or(2.0 * PI),
        drive,
        period: c.period,
        fbar: c.fbar,
        v_sign: c.v_sign.unwrap_or(V_SIGN_CONVENTION),
        slices: c.slices.unwrap_or(2048),
        tol: c.tol.unwrap_or(1e-8),
        out,
        lambda: c.lambda.unwrap_or(lambda),
        q: c.q.unwrap_or(q),
        odd: c.odd.unwrap_or(0.0),
        major: c.major.unwrap_or(2.0),
        minor: c.minor.unwrap_or(1.0),
        sectors: c.sector.clone().unwrap_or_else(|| vec![0, 1, 2]),
        multipliers: c.multipliers.clone().unwrap_or_else(|| vec![8.0, 16.0, 32.0]),
        odds: c.odds.clone().unwrap_or_else(|| vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25]),
        periods: c.periods.unwrap_or(40),
        count: c.count.unwrap_or(5),
        table: c.table.clone(),
        periodic: c.periodic.unwrap_or(true),
    };
    r.validate()?;
    Ok(r)
}

impl Resolved {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.v_sign != 1.0 && self.v_sign != -1.0 {
            return bad(format!("--v-sign must be 1 or -1, got {}", self.v_sign));
        }
        if self.count == 0 || self.count > self.grid_n {
            return bad(format!("--count must lie in 1..={}", self.grid_n));
        }
        if let Some(p) = self.period {
            if !(p > 0.0 && p.is_finite()) {
                return bad(format!("--period must be positive, got {p}"));
            }
        }
        if self.multipliers.is_empty() || self.multipliers.iter().any(|m| !(*m > 0.0)) {
            return bad("--multipliers must be positive".into());
        }
        if self.sectors.is_empty() {
            return bad("--sector needs at least one value".into());
        }
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return bad(format!("--tol must be positive, got {}", self.tol));
        }
        // geometry parameters are checked by constructing the target
        self.target()?;
        Ok(())
    }

    pub fn torus(&self) -> Result<TorusParams, CliError> {
        Ok(TorusParams::new(self.major, self.minor)?)
    }

    pub fn target(&self) -> Result<TargetMetric, CliError> {
        self.target_with_odd(self.odd)
    }

    pub fn target_with_odd(&self, odd: f64) -> Result<TargetMetric, CliError> {
        if let Some(path) = &self.table {
            return read_table(path, self.periodic);
        }
        Ok(match self.preset {
            Preset::Flat => TargetMetric::flat(manifold_floquet::design::Domain {
                start: 0.0,
                length: self.length,
                bc: BoundaryCondition::Periodic,
            })?,
            Preset::Sinusoidal | Preset::AahContinuum => TargetMetric::sinusoidal(self.lambda, self.q, odd, self.length)?,
            Preset::Torus => TargetMetric::torus(self.torus()?)?,
        })
    }
}

fn read_table(path: &Path, periodic: bool) -> Result<TargetMetric, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut z = Vec::new();
    let mut kappa = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<(f64, f64)> = match cols.as_slice() {
            [a, b] => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((a, b)) => {
                z.push(a);
                kappa.push(b);
            }
            // a non-numeric first line is a header
            None if k == 0 => {}
            None => return Err(CliError::Config(format!("{}:{}: expected two numbers", path.display(), k + 1))),
        }
    }
    let bc = if periodic { BoundaryCondition::Periodic } else { BoundaryCondition::Dirichlet };
    Ok(TargetMetric::tabulated(z, kappa, bc)?)
}
