//! Double-baud-rate estimation from `sinc(2t)` front-end samples.
//!
//! The reference sequence is the ZC preamble passed through the RRC pulse
//! and sampled at `T/2`. Correlating it with the white `T/2` samples gives
//! `c[m] = Q h rc(mT/2 - t) + noise`, where the noise is colored with
//! covariance proportional to `rc((j - i) T/2)`. The window is whitened with
//! the Cholesky factor of that matrix before the ML fit.

use num_complex::Complex64;

use super::{clamp_offset, minimize, peak_window, CorrelationWindow, OffsetEstimate, SearchConfig};
use crate::channel::{SampleKind, SampleSet};
use crate::error::{Error, Result};
use crate::linalg::BandedUpper;
use crate::signal::{rc_pulse, rrc_pulse, PulseConfig};

/// How the ZC body is extended before RRC interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcInterpolation {
    /// Only the `Q` body symbols contribute.
    Body,
    /// The body repeats periodically, matching the cyclic prefix and suffix
    /// that are actually on the air. The correlation then follows the RC
    /// model exactly within the cyclic part.
    Cyclic,
}

/// `z_d[k] = sum_i z[i] p(kT/2 - iT)`, `k = 0..2Q`, with `p` the RRC pulse.
pub fn interpolate_zc_double(z: &[Complex64], cfg: &PulseConfig, mode: ZcInterpolation) -> Vec<Complex64> {
    let q = z.len() as i64;
    let reach = cfg.span as i64 + 1;
    let (lo, hi) = match mode {
        ZcInterpolation::Body => (0, q - 1),
        ZcInterpolation::Cyclic => (-reach, q - 1 + reach),
    };
    (0..2 * q)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..=hi {
                let p = rrc_pulse(k as f64 * 0.5 * cfg.t_sym - i as f64 * cfg.t_sym, cfg);
                if p != 0.0 {
                    acc += z[i.rem_euclid(q) as usize] * p;
                }
            }
            acc
        })
        .collect()
}

/// Double-baud correlation `c[m] = (T/2) sum_k z_d*[k] y[2 body_start + k + m]`.
///
/// The `T/2` factor is the Riemann weight of the underlying continuous
/// correlation and makes the peak `Q h rc(0)`. The peak is searched within
/// `2G - d` half-symbol lags.
pub fn crosscorr_double(
    y: &SampleSet,
    z_d: &[Complex64],
    body_start: i64,
    g: usize,
    d: usize,
    cfg: &PulseConfig,
) -> Result<CorrelationWindow> {
    if y.kind != SampleKind::DoubleSinc2 {
        return Err(Error::Input("double-baud correlation needs sinc(2t) samples".into()));
    }
    if d == 0 || d > 2 * g {
        return Err(Error::Config(format!("window half width {d} must be in 1..={}", 2 * g)));
    }
    let w = 0.5 * cfg.t_sym;
    let zc: Vec<Complex64> = z_d.iter().map(|v| v.conj() * w).collect();
    let corr = |m: i64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, zk) in zc.iter().enumerate() {
            let idx = 2 * body_start + k as i64 + m;
            acc += zk
                * y.at(idx)
                    .ok_or_else(|| Error::InsufficientGuard(format!("half-baud sample {idx} not available")))?;
        }
        Ok(acc)
    };
    let energy: f64 = zc.iter().map(|v| v.norm_sqr()).sum();
    peak_window(corr, (2 * g - d) as i64, d, energy * y.sigma2)
}

/// Whitening operator for a `2d` double-baud window:
/// `Sigma0[i][j] = rc((j - i) T/2) = U0^T U0`.
#[derive(Debug, Clone)]
pub struct WhiteningOperator {
    pub d: usize,
    pub sigma0: Vec<Vec<f64>>,
    pub u0: BandedUpper,
    /// Rows of `U0^{-T}`.
    pub u0_inv_t: Vec<Vec<f64>>,
}

impl WhiteningOperator {
    /// `U0^{-T} c`.
    pub fn apply(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.u0_inv_t
            .iter()
            .map(|row| row.iter().zip(c).map(|(a, v)| v * *a).sum())
            .collect()
    }
}

pub fn build_whitener(d: usize, cfg: &PulseConfig) -> Result<WhiteningOperator> {
    if d == 0 {
        return Err(Error::Config("window half width must be positive".into()));
    }
    let n = 2 * d;
    let entry = |i: usize, j: usize| rc_pulse((j as f64 - i as f64) * 0.5 * cfg.t_sym, cfg);
    let sigma0: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let u0 = BandedUpper::factor(n, n - 1, entry)?;
    let u0_inv_t = u0.inverse_transpose();
    Ok(WhiteningOperator {
        d,
        sigma0,
        u0,
        u0_inv_t,
    })
}

/// ML fit of `h Q rc(mT/2 - t)` to a whitened double-baud window.
pub fn fit_double(
    w: &CorrelationWindow,
    h: Complex64,
    q: usize,
    white: &WhiteningOperator,
    cfg: &PulseConfig,
    search: &SearchConfig,
) -> f64 {
    let amp = h * q as f64;
    let half = 0.5 * cfg.t_sym;
    let cw = white.apply(&w.values);
    let lags: Vec<f64> = w.lags().map(|m| m as f64 * half).collect();
    let metric = |t: f64| -> f64 {
        let v: Vec<f64> = lags.iter().map(|&mt| rc_pulse(mt - t, cfg)).collect();
        white
            .u0_inv_t
            .iter()
            .zip(&cw)
            .map(|(row, c)| {
                let model: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                (c - amp * model).norm_sqr()
            })
            .sum()
    };
    let t = w.peak as f64 * half + minimize(metric, -half, half, search);
    clamp_offset(t, cfg)
}

/// Double-baud-rate estimator for both users.
#[allow(clippy::too_many_arguments)]
pub fn estimate_double(
    c_a: &CorrelationWindow,
    c_b: &CorrelationWindow,
    h_a: Complex64,
    h_b: Complex64,
    q: usize,
    white: &WhiteningOperator,
    cfg: &PulseConfig,
    search: &SearchConfig,
) -> Result<OffsetEstimate> {
    if c_a.d != white.d || c_b.d != white.d {
        return Err(Error::Input("window and whitener sizes differ".into()));
    }
    Ok(OffsetEstimate {
        t_a: fit_double(c_a, h_a, q, white, cfg, search),
        t_b: fit_double(c_b, h_b, q, white, cfg, search),
    })
}
