//! Two-user uplink: superposition with fractional offsets, receiver front
//! ends and sampling.
//!
//! Two routes are provided. The dense route builds the oversampled waveform,
//! filters it and picks samples off the grid. The fast route in [`synth`]
//! evaluates the same samples directly from tap tables and is what the Monte
//! Carlo harness uses; tests hold the two routes against each other.

pub mod synth;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preamble::SymbolFrame;
use crate::signal::{calibrate_noise, convolve_filter, shape_on_grid, DenseSignal, PulseConfig, PulseShape};

/// Fading model for the two uplink gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelModel {
    /// `h_A = h_B = 1`.
    Awgn,
    /// Independent `CN(0, 1)` gains, known to the receiver.
    Rayleigh,
}

/// One draw of the uplink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub h_a: Complex64,
    pub h_b: Complex64,
    pub t_a: f64,
    pub t_b: f64,
    /// One-sided noise PSD; zero means noise-free.
    pub n0: f64,
    /// Seed for the dense-route noise.
    pub seed: u64,
}

impl ChannelRealization {
    /// Relative offset `tau = t_A - t_B`.
    pub fn tau(&self) -> f64 {
        self.t_a - self.t_b
    }

    pub fn validate(&self, cfg: &PulseConfig) -> Result<()> {
        let h = 0.5 * cfg.t_sym;
        for (name, t) in [("t_A", self.t_a), ("t_B", self.t_b)] {
            if !(-h..h).contains(&t) {
                return Err(Error::Input(format!("{name} = {t} outside [-T/2, T/2)")));
            }
        }
        if !(self.n0 >= 0.0 && self.n0.is_finite()) {
            return Err(Error::Input(format!("noise PSD {} must be non-negative", self.n0)));
        }
        Ok(())
    }

    /// Draws `tau ~ U[-T/2, T/2)`, splits it symmetrically as
    /// `t_A = tau/2`, `t_B = -tau/2`, and draws the gains.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, model: ChannelModel, n0: f64, cfg: &PulseConfig) -> Self {
        let tau = (rng.random::<f64>() - 0.5) * cfg.t_sym;
        let (h_a, h_b) = match model {
            ChannelModel::Awgn => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            ChannelModel::Rayleigh => (cn01(rng), cn01(rng)),
        };
        Self {
            h_a,
            h_b,
            t_a: 0.5 * tau,
            t_b: -0.5 * tau,
            n0,
            seed: rng.random(),
        }
    }
}

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Receiver front-end filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontEnd {
    /// RRC matched filter.
    Rrc,
    /// Ideal low-pass `(2/T) sinc(2t/T)` with unit pass-band gain.
    Sinc2,
}

/// Which sampler produced a [`SampleSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// RRC matched filter sampled every `T`.
    BaudRrc,
    /// RRC matched filter sampled every `T/2`.
    DoubleRrc,
    /// `sinc(2t)` front end sampled every `T/2`.
    DoubleSinc2,
}

impl SampleKind {
    pub fn front_end(self) -> FrontEnd {
        match self {
            SampleKind::BaudRrc | SampleKind::DoubleRrc => FrontEnd::Rrc,
            SampleKind::DoubleSinc2 => FrontEnd::Sinc2,
        }
    }

    /// Sampling period in units of `T`.
    pub fn step(self) -> f64 {
        match self {
            SampleKind::BaudRrc => 1.0,
            _ => 0.5,
        }
    }

    /// Per-sample noise variance for noise PSD `n0`.
    ///
    /// Both RRC samplers see `N0 / 2T`; halving the sampling period does not
    /// change the marginal variance. The wider `sinc(2t)` front end doubles it.
    pub fn sigma2(self, n0: f64, cfg: &PulseConfig) -> f64 {
        let s = n0 / (2.0 * cfg.t_sym);
        match self {
            SampleKind::BaudRrc | SampleKind::DoubleRrc => s,
            SampleKind::DoubleSinc2 => 2.0 * s / cfg.t_sym,
        }
    }
}

/// Uniformly spaced receiver samples; sample `i` is taken at
/// `(first_index + i) * step * T` (plus `offset`).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub kind: SampleKind,
    pub first_index: i64,
    pub offset: f64,
    pub samples: Vec<Complex64>,
    pub sigma2: f64,
}

impl SampleSet {
    pub fn time(&self, i: usize, cfg: &PulseConfig) -> f64 {
        (self.first_index + i as i64) as f64 * self.kind.step() * cfg.t_sym + self.offset
    }

    /// Sample at absolute index `k`, if present.
    pub fn at(&self, k: i64) -> Option<Complex64> {
        let i = k - self.first_index;
        if i < 0 {
            None
        } else {
            self.samples.get(i as usize).copied()
        }
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.samples.len() as i64 - 1
    }
}

/// Received waveform `h_A x_A(t - t_A) + h_B x_B(t - t_B) + n(t)` on a dense
/// grid aligned to `t = 0` that covers both frames plus the pulse span.
pub fn uplink_superpose(
    frame_a: &SymbolFrame,
    frame_b: &SymbolFrame,
    ch: &ChannelRealization,
    cfg: &PulseConfig,
) -> Result<DenseSignal> {
    cfg.validate()?;
    ch.validate(cfg)?;
    let margin = cfg.span + 1;
    let n = frame_a.len().max(frame_b.len());
    let start = -(margin as f64) * cfg.t_sym;
    let len = (n - 1 + 2 * margin) * cfg.oversample + 1;
    let sa: Vec<Complex64> = frame_a.symbols().iter().map(|s| s * ch.h_a).collect();
    let sb: Vec<Complex64> = frame_b.symbols().iter().map(|s| s * ch.h_b).collect();
    let mut r = shape_on_grid(&sa, ch.t_a, PulseShape::Rrc, cfg, start, len);
    r.add(&shape_on_grid(&sb, ch.t_b, PulseShape::Rrc, cfg, start, len))?;
    if ch.n0 > 0.0 {
        let lv = calibrate_noise(ch.n0, cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ch.seed);
        r.add_noise(lv.dense_std, &mut rng);
    }
    Ok(r)
}

/// Applies the receiver filter.
pub fn front_end(r: &DenseSignal, filter: FrontEnd, cfg: &PulseConfig) -> DenseSignal {
    match filter {
        FrontEnd::Rrc => convolve_filter(r, PulseShape::Rrc, cfg),
        FrontEnd::Sinc2 => {
            let mut y = convolve_filter(r, PulseShape::Sinc2, cfg);
            let g = 2.0 / cfg.t_sym;
            for v in &mut y.samples {
                *v *= g;
            }
            y
        }
    }
}

/// Picks every on-grid sampling instant of `kind` out of a filtered signal.
pub fn sample(y: &DenseSignal, kind: SampleKind, n0: f64, cfg: &PulseConfig) -> Result<SampleSet> {
    let step = kind.step() * cfg.t_sym;
    let ratio = step / y.dt;
    if (ratio - ratio.round()).abs() > 1e-9 {
        return Err(Error::Input("grid spacing does not divide the sampling period".into()));
    }
    let first = (y.start_time / step).ceil() as i64;
    let last = (y.end_time() / step).floor() as i64;
    let mut samples = Vec::new();
    for k in first..=last {
        let idx = y
            .index_of(k as f64 * step)
            .ok_or_else(|| Error::Input("grid is not aligned to the sampling instants".into()))?;
        samples.push(y.samples[idx]);
    }
    Ok(SampleSet {
        kind,
        first_index: first,
        offset: 0.0,
        samples,
        sigma2: kind.sigma2(n0, cfg),
    })
}
