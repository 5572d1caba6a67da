//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    period: Option<(f64, f64, f64)>,
}

impl Pchip {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::validation("pchip needs at least two matching nodes"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::validation("pchip abscissae must be strictly increasing"));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::validation("pchip nodes must be finite"));
        }
        let d = slopes(x, y);
        Ok(Pchip { x: x.to_vec(), y: y.to_vec(), d, period: None })
    }

    /// Interpolant of a periodic function sampled once over `[x₀, x₀ + period)`.
    /// `y_shift` is added per period, which lets the same routine handle
    /// maps of the form `z(x + L) = z(x) + L_z`.
    pub fn periodic(x: &[f64], y: &[f64], period: f64, y_shift: f64) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::validation("pchip needs at least two matching nodes"));
        }
        if !(x[n - 1] - x[0] < period) {
            return Err(Error::validation("periodic pchip nodes exceed one period"));
        }
        let pad = 3.min(n);
        let mut xe = Vec::with_capacity(n + 2 * pad);
        let mut ye = Vec::with_capacity(n + 2 * pad);
        for j in n - pad..n {
            xe.push(x[j] - period);
            ye.push(y[j] - y_shift);
        }
        xe.extend_from_slice(x);
        ye.extend_from_slice(y);
        for j in 0..pad {
            xe.push(x[j] + period);
            ye.push(y[j] + y_shift);
        }
        let mut p = Pchip::new(&xe, &ye)?;
        p.period = Some((period, y_shift, x[0]));
        Ok(p)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut t = t;
        let mut offset = 0.0;
        if let Some((period, shift, x0)) = self.period {
            let k = ((t - x0) / period).floor();
            t -= k * period;
            offset = k * shift;
        }
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        offset + h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
