//! Maximum-likelihood estimation of the fractional symbol misalignment from
//! the Zadoff-Chu preambles.
//!
//! Each user's offset is estimated separately from the correlation of the
//! received samples with that user's ZC body. Only a `2d`-sample window
//! around the correlation peak enters the metric. The other user's sequence
//! correlates to a peak about `Q/2` symbols away and is ignored.

mod double;
mod search;

pub use double::{
    build_whitener, crosscorr_double, estimate_double, interpolate_zc_double, WhiteningOperator, ZcInterpolation,
};
pub use search::{minimize, SearchConfig};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{SampleKind, SampleSet};
use crate::error::{Error, Result};
use crate::signal::{rc_pulse, PulseConfig};

/// Correlation samples around the peak.
///
/// `values[j]` is the correlation at lag `peak + m` with `m = j + 1 - d`, so
/// the window covers `m` in `(-d, d]`. Lags count samples of the underlying
/// stream: symbols for baud-rate, half symbols for double-baud-rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationWindow {
    pub values: Vec<Complex64>,
    pub peak: i64,
    pub d: usize,
    pub noise_var: f64,
}

impl CorrelationWindow {
    /// Relative lags `m` covered by the window.
    pub fn lags(&self) -> impl Iterator<Item = i64> + '_ {
        (1 - self.d as i64)..=(self.d as i64)
    }
}

/// Estimated offsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetEstimate {
    pub t_a: f64,
    pub t_b: f64,
}

impl OffsetEstimate {
    pub fn tau(&self) -> f64 {
        self.t_a - self.t_b
    }
}

/// Index of the largest-magnitude entry; ties go to the first.
pub(crate) fn argmax_abs(c: &[Complex64]) -> usize {
    let mut best = 0;
    for (i, v) in c.iter().enumerate() {
        if v.norm_sqr() > c[best].norm_sqr() {
            best = i;
        }
    }
    best
}

/// Picks the peak among lags `-radius..=radius` of `corr(lag)` and returns
/// the `2d` window around it.
pub(crate) fn peak_window<F: Fn(i64) -> Result<Complex64>>(
    corr: F,
    radius: i64,
    d: usize,
    noise_var: f64,
) -> Result<CorrelationWindow> {
    let scan: Vec<Complex64> = (-radius..=radius).map(&corr).collect::<Result<_>>()?;
    let peak = argmax_abs(&scan) as i64 - radius;
    let values = ((1 - d as i64)..=(d as i64))
        .map(|m| corr(peak + m))
        .collect::<Result<_>>()?;
    Ok(CorrelationWindow {
        values,
        peak,
        d,
        noise_var,
    })
}

/// Baud-rate correlation `c[m] = sum_n z*[n] y[body_start + n + m]`.
///
/// `body_start` is the baud index at which the user's ZC body nominally
/// starts (the guard length `G` for frames starting at `t = 0`). The peak is
/// searched within `G - d` lags so the whole window stays inside the cyclic
/// part of the preamble.
pub fn crosscorr_baud(
    y: &SampleSet,
    z: &[Complex64],
    body_start: i64,
    g: usize,
    d: usize,
) -> Result<CorrelationWindow> {
    if y.kind != SampleKind::BaudRrc {
        return Err(Error::Input("baud correlation needs baud-rate RRC samples".into()));
    }
    if d == 0 || d > g {
        return Err(Error::Config(format!("window half width {d} must be in 1..={g}")));
    }
    let zc: Vec<Complex64> = z.iter().map(|v| v.conj()).collect();
    let corr = |m: i64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, zn) in zc.iter().enumerate() {
            let k = body_start + n as i64 + m;
            acc += zn
                * y.at(k)
                    .ok_or_else(|| Error::InsufficientGuard(format!("baud sample {k} not available")))?;
        }
        Ok(acc)
    };
    peak_window(corr, (g - d) as i64, d, z.len() as f64 * y.sigma2)
}

/// ML fit of `h Q rc(mT - t)` to a baud-rate window, `t` in `[-T/2, T/2)`.
pub fn fit_baud(w: &CorrelationWindow, h: Complex64, q: usize, cfg: &PulseConfig, search: &SearchConfig) -> f64 {
    let amp = h * q as f64;
    let lags: Vec<f64> = w.lags().map(|m| m as f64 * cfg.t_sym).collect();
    let metric = |t: f64| -> f64 {
        w.values
            .iter()
            .zip(&lags)
            .map(|(c, &mt)| (c - amp * rc_pulse(mt - t, cfg)).norm_sqr())
            .sum()
    };
    let half = 0.5 * cfg.t_sym;
    let t = w.peak as f64 * cfg.t_sym + minimize(metric, -half, half, search);
    clamp_offset(t, cfg)
}

/// Baud-rate estimator for both users.
pub fn estimate_baud(
    c_a: &CorrelationWindow,
    c_b: &CorrelationWindow,
    h_a: Complex64,
    h_b: Complex64,
    q: usize,
    cfg: &PulseConfig,
    search: &SearchConfig,
) -> OffsetEstimate {
    OffsetEstimate {
        t_a: fit_baud(c_a, h_a, q, cfg, search),
        t_b: fit_baud(c_b, h_b, q, cfg, search),
    }
}

/// Keeps an estimate inside `[-T/2, T/2)`.
pub(crate) fn clamp_offset(t: f64, cfg: &PulseConfig) -> f64 {
    let half = 0.5 * cfg.t_sym;
    t.clamp(-half, half - 1e-12 * cfg.t_sym)
}
