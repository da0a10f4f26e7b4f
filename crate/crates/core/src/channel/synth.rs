//! Direct sample synthesis without a dense grid.
//!
//! The in-band noise is represented by its `T/2`-spaced samples after the
//! ideal `sinc(2t)` front end, which are i.i.d. `CN(0, 2 sigma2 / T)`. RRC
//! matched-filter noise at any instant is the band-limited interpolation
//! `sum_m w[m] (T/2) p(t - mT/2)`, so every stream drawn from one
//! [`HalfBaudNoise`] shares a single consistent noise realization. Signal
//! terms use the RC pulse (RRC front end) or the RRC pulse itself (the
//! `sinc(2t)` front end passes the RRC band unchanged).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ChannelRealization, FrontEnd, SampleKind, SampleSet};
use crate::error::{Error, Result};
use crate::signal::{rc_pulse, rrc_pulse, PulseConfig};

/// Request for `count` samples of `kind` starting at index `first_index`,
/// all shifted by `offset` (time units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamSpec {
    pub kind: SampleKind,
    pub first_index: i64,
    pub count: usize,
    pub offset: f64,
}

impl StreamSpec {
    fn stride(&self) -> i64 {
        match self.kind {
            SampleKind::BaudRrc => 2,
            _ => 1,
        }
    }

    /// Half-baud index range `[lo, hi]` touched by the stream.
    fn half_baud_range(&self) -> (i64, i64) {
        let s = self.stride();
        let lo = self.first_index * s;
        (lo, lo + s * (self.count.max(1) as i64 - 1))
    }
}

/// White `T/2`-spaced noise samples `w[k]`, `k = first_k ..`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfBaudNoise {
    pub first_k: i64,
    pub w: Vec<Complex64>,
}

impl HalfBaudNoise {
    pub fn draw<R: Rng + ?Sized>(first_k: i64, last_k: i64, variance: f64, rng: &mut R) -> Self {
        let n = (last_k - first_k + 1).max(0) as usize;
        let s = (0.5 * variance).sqrt();
        let w = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(s * re, s * im)
            })
            .collect();
        Self { first_k, w }
    }

    pub fn zero(first_k: i64, last_k: i64) -> Self {
        let n = (last_k - first_k + 1).max(0) as usize;
        Self {
            first_k,
            w: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn get(&self, k: i64) -> Complex64 {
        let i = k - self.first_k;
        if i < 0 || i as usize >= self.w.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.w[i as usize]
        }
    }
}

/// Fast sampler for one uplink realization.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    cfg: PulseConfig,
    reach: i64,
}

impl Synthesizer {
    pub fn new(cfg: &PulseConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg: *cfg,
            reach: 2 * cfg.span as i64 + 2,
        })
    }

    /// Half-baud noise index range needed to serve `streams`.
    pub fn noise_range(&self, streams: &[StreamSpec]) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for s in streams {
            let (a, b) = s.half_baud_range();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo - self.reach, hi + self.reach)
    }

    /// Draws noise for `streams` (none when `ch.n0 == 0`) and synthesizes
    /// every stream from the same realization.
    pub fn synthesize<R: Rng + ?Sized>(
        &self,
        sym_a: &[Complex64],
        sym_b: &[Complex64],
        ch: &ChannelRealization,
        streams: &[StreamSpec],
        rng: &mut R,
    ) -> Result<Vec<SampleSet>> {
        let (lo, hi) = self.noise_range(streams);
        let noise = if ch.n0 > 0.0 {
            let var = SampleKind::DoubleSinc2.sigma2(ch.n0, &self.cfg);
            HalfBaudNoise::draw(lo, hi, var, rng)
        } else {
            HalfBaudNoise::zero(lo, hi)
        };
        streams
            .iter()
            .map(|s| self.stream(sym_a, sym_b, ch, &noise, s))
            .collect()
    }

    /// Synthesizes one stream against an existing noise realization.
    pub fn stream(
        &self,
        sym_a: &[Complex64],
        sym_b: &[Complex64],
        ch: &ChannelRealization,
        noise: &HalfBaudNoise,
        spec: &StreamSpec,
    ) -> Result<SampleSet> {
        let cfg = &self.cfg;
        let half = 0.5 * cfg.t_sym;
        let front = spec.kind.front_end();
        if front == FrontEnd::Sinc2 && spec.offset != 0.0 {
            return Err(Error::Input(
                "sinc(2t) samples are only synthesized on the T/2 grid".into(),
            ));
        }
        let j = self.reach;
        let pulse = |t: f64| match front {
            FrontEnd::Rrc => rc_pulse(t, cfg),
            FrontEnd::Sinc2 => rrc_pulse(t, cfg),
        };
        let table =
            |delay: f64| -> Vec<f64> { (-j..=j).map(|m| pulse(m as f64 * half + spec.offset - delay)).collect() };
        let tab_a = table(ch.t_a);
        let tab_b = table(ch.t_b);
        let tab_w: Vec<f64> = (-j..=j)
            .map(|m| half * rrc_pulse(m as f64 * half + spec.offset, cfg))
            .collect();

        let stride = spec.stride();
        let mut out = Vec::with_capacity(spec.count);
        for n in 0..spec.count as i64 {
            let k = (spec.first_index + n) * stride;
            let mut v = ch.h_a * user_sum(sym_a, &tab_a, k, j) + ch.h_b * user_sum(sym_b, &tab_b, k, j);
            match front {
                FrontEnd::Sinc2 => v += noise.get(k),
                FrontEnd::Rrc => {
                    for m in -j..=j {
                        v += noise.get(k - m) * tab_w[(m + j) as usize];
                    }
                }
            }
            out.push(v);
        }
        Ok(SampleSet {
            kind: spec.kind,
            first_index: spec.first_index,
            offset: spec.offset,
            samples: out,
            sigma2: spec.kind.sigma2(ch.n0, cfg),
        })
    }
}

// sum_i s[i] g((k - 2i) T/2 + ...), with the table indexed by k - 2i
fn user_sum(sym: &[Complex64], tab: &[f64], k: i64, j: i64) -> Complex64 {
    let i_lo = (k - j).div_euclid(2) + i64::from((k - j).rem_euclid(2) != 0);
    let i_lo = i_lo.max(0);
    let i_hi = (k + j).div_euclid(2).min(sym.len() as i64 - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in i_lo..=i_hi {
        acc += sym[i as usize] * tab[(k - 2 * i + j) as usize];
    }
    acc
}
