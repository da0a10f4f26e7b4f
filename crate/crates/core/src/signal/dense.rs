//! Oversampled waveforms on a uniform grid, FIR filtering, sinc
//! reconstruction and noise calibration.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::pulse::{sinc, PulseConfig, PulseShape};
use crate::error::{Error, Result};

/// A complex baseband waveform sampled at `start_time + k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSignal {
    pub start_time: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

impl DenseSignal {
    pub fn zeros(start_time: f64, dt: f64, len: usize) -> Self {
        Self {
            start_time,
            dt,
            samples: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start_time + k as f64 * self.dt
    }

    pub fn end_time(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    /// Grid index whose time equals `t`, if `t` is on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = (t - self.start_time) / self.dt;
        let k = x.round();
        if (x - k).abs() > 1e-6 || k < 0.0 || k as usize >= self.len() {
            None
        } else {
            Some(k as usize)
        }
    }

    /// Sample-wise sum of two signals on the same grid.
    pub fn add(&mut self, other: &DenseSignal) -> Result<()> {
        if self.len() != other.len()
            || (self.start_time - other.start_time).abs() > 1e-9 * self.dt
            || (self.dt - other.dt).abs() > 1e-12
        {
            return Err(Error::Input("signals are not on the same grid".into()));
        }
        for (a, b) in self.samples.iter_mut().zip(&other.samples) {
            *a += b;
        }
        Ok(())
    }

    /// Adds i.i.d. circular complex Gaussian noise with `E|n|^2 = std^2`.
    pub fn add_noise<R: Rng + ?Sized>(&mut self, std: f64, rng: &mut R) {
        if std == 0.0 {
            return;
        }
        let s = std * std::f64::consts::FRAC_1_SQRT_2;
        for v in &mut self.samples {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *v += Complex64::new(s * re, s * im);
        }
    }
}

/// Evaluates `sum_i symbols[i] * g(t - i*T - delay)` on the grid
/// `start_time + k * dt`, `k < len`.
pub fn shape_on_grid(
    symbols: &[Complex64],
    delay: f64,
    shape: PulseShape,
    cfg: &PulseConfig,
    start_time: f64,
    len: usize,
) -> DenseSignal {
    let dt = cfg.dt();
    let support = shape.support(cfg);
    let mut out = DenseSignal::zeros(start_time, dt, len);
    for (i, &s) in symbols.iter().enumerate() {
        if s == Complex64::new(0.0, 0.0) {
            continue;
        }
        let centre = i as f64 * cfg.t_sym + delay;
        let lo = ((centre - support - start_time) / dt).ceil().max(0.0) as usize;
        let hi = ((centre + support - start_time) / dt).floor();
        if hi < 0.0 {
            continue;
        }
        let hi = (hi as usize).min(len.saturating_sub(1));
        for k in lo..=hi {
            out.samples[k] += s * shape.eval(start_time + k as f64 * dt - centre, cfg);
        }
    }
    out
}

/// Pulse-shapes a symbol stream delayed by `delay`. The grid starts at
/// `-span*T + delay` and ends at `(n - 1 + span)*T + delay`.
pub fn shape_symbols(symbols: &[Complex64], delay: f64, shape: PulseShape, cfg: &PulseConfig) -> DenseSignal {
    let m = cfg.oversample;
    let half = (shape.support(cfg) / cfg.t_sym).ceil() as usize;
    let len = if symbols.is_empty() {
        0
    } else {
        (symbols.len() - 1 + 2 * half) * m + 1
    };
    let start = -(half as f64) * cfg.t_sym + delay;
    shape_on_grid(symbols, delay, shape, cfg, start, len)
}

/// Full linear convolution `dt * sum_i x_i g(t - t_i)` with the truncated
/// pulse `g`. The output grid is extended by the pulse support on both
/// sides so no energy is discarded.
pub fn convolve_filter(sig: &DenseSignal, shape: PulseShape, cfg: &PulseConfig) -> DenseSignal {
    let dt = sig.dt;
    let k_half = (shape.support(cfg) / dt).round() as usize;
    let taps: Vec<f64> = (0..=2 * k_half)
        .map(|j| dt * shape.eval((j as f64 - k_half as f64) * dt, cfg))
        .collect();
    let n = sig.len();
    let mut out = DenseSignal::zeros(sig.start_time - k_half as f64 * dt, dt, n + 2 * k_half);
    for (i, &x) in sig.samples.iter().enumerate() {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &h) in taps.iter().enumerate() {
            out.samples[i + j] += x * h;
        }
    }
    out
}

/// Noise levels derived from the one-sided noise PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseLevels {
    /// Per-sample variance after RRC matched filtering, `N0 / 2T`.
    pub sigma2: f64,
    /// Per-sample variance after the `sinc(2t/T)` front end, `2 sigma2`.
    pub sigma2_sinc2: f64,
    /// Complex standard deviation of white noise on the dense grid.
    pub dense_std: f64,
}

/// Dense-grid noise calibration. Matched filtering with the unit-energy RRC
/// turns per-sample variance `s^2` into `s^2 * dt`, so `s^2 = sigma2 / dt`.
pub fn calibrate_noise(n0: f64, cfg: &PulseConfig) -> Result<NoiseLevels> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::Input(format!("noise PSD {n0} must be positive")));
    }
    let sigma2 = n0 / (2.0 * cfg.t_sym);
    Ok(NoiseLevels {
        sigma2,
        sigma2_sinc2: 2.0 * sigma2 / cfg.t_sym,
        dense_std: (sigma2 / cfg.dt()).sqrt(),
    })
}

/// Interpolation kernel `sinc(x)` cut to `|x| <= 2W` and tapered by the
/// configured window.
fn interp_kernel(x: f64, cfg: &PulseConfig) -> f64 {
    let reach = 2.0 * cfg.sinc_half_width as f64;
    if x.abs() > reach {
        0.0
    } else {
        sinc(x) * cfg.sinc_window.at(x / reach)
    }
}

/// Band-limited reconstruction `sum_k y[k] sinc(2t/T - k)` from samples
/// taken every `T/2`.
///
/// Sample `samples[i]` is taken at `(first_k + i) * T/2`. Only terms with
/// `|2t/T - k| <= 2W` contribute.
pub fn sinc2_reconstruct(samples: &[Complex64], first_k: i64, t: f64, cfg: &PulseConfig) -> Result<Complex64> {
    let half = 0.5 * cfg.t_sym;
    let lo = first_k as f64 * half;
    let hi = (first_k + samples.len() as i64 - 1) as f64 * half;
    if samples.is_empty() || t < lo - 1e-12 || t > hi + 1e-12 {
        return Err(Error::OutOfSupport { t, lo, hi });
    }
    let u = t / half;
    let reach = 2.0 * cfg.sinc_half_width as f64;
    let k_lo = ((u - reach).ceil() as i64).max(first_k);
    let k_hi = ((u + reach).floor() as i64).min(first_k + samples.len() as i64 - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in k_lo..=k_hi {
        acc += samples[(k - first_k) as usize] * interp_kernel(u - k as f64, cfg);
    }
    Ok(acc)
}

/// Reconstructs `count` values at `t0 + n*T` from `T/2`-spaced samples.
///
/// Every kernel window must lie inside the available samples, otherwise an
/// insufficient-guard error is returned.
pub fn sinc2_resample_baud(
    samples: &[Complex64],
    first_k: i64,
    t0: f64,
    count: usize,
    cfg: &PulseConfig,
) -> Result<Vec<Complex64>> {
    let u0 = 2.0 * t0 / cfg.t_sym;
    let base = u0.round() as i64;
    let frac = u0 - base as f64;
    let reach = 2 * cfg.sinc_half_width as i64;
    let kernel: Vec<f64> = (-reach..=reach).map(|j| interp_kernel(frac - j as f64, cfg)).collect();
    let last_k = first_k + samples.len() as i64 - 1;
    if count > 0 {
        let need_lo = base - reach;
        let need_hi = base + 2 * (count as i64 - 1) + reach;
        if need_lo < first_k || need_hi > last_k {
            return Err(Error::InsufficientGuard(format!(
                "need half-baud samples {need_lo}..={need_hi}, have {first_k}..={last_k}"
            )));
        }
    }
    let mut out = Vec::with_capacity(count);
    for n in 0..count as i64 {
        let start = (base + 2 * n - reach - first_k) as usize;
        let window = &samples[start..start + kernel.len()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &g) in window.iter().zip(&kernel) {
            acc += x * g;
        }
        out.push(acc);
    }
    Ok(out)
}
