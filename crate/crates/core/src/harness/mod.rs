//! Monte Carlo experiment driver.
//!
//! Every trial draws the misalignment, the channel gains, the payload and
//! the noise from its own ChaCha8 stream keyed by `(seed, trial)`. The same
//! trial therefore sees the same realization at every Eb/N0 point and under
//! every solution, and results do not depend on evaluation order.

mod config;
mod output;

pub use config::{DecoderKind, EstimatorKind, ExperimentConfig, Scenario, Solution};
pub use output::{emit_results, histogram_path, sidecar_path, ResultRow};

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::synth::{HalfBaudNoise, StreamSpec, Synthesizer};
use crate::channel::{ChannelRealization, SampleKind};
use crate::decoder::{
    build_graph, build_model, decode_baud, resample_boundaries, soft_xor, spa_decode, xor_bit, KnownSymbols,
    SoftXorOutput,
};
use crate::error::Result;
use crate::estimator::{
    build_whitener, crosscorr_baud, crosscorr_double, estimate_baud, estimate_double, interpolate_zc_double,
    OffsetEstimate, SearchConfig, WhiteningOperator, ZcInterpolation,
};
use crate::ldpc::LdpcCode;
use crate::preamble::{build_frame, Node, PreambleSpec};
use crate::signal::PulseConfig;

/// Square-error histogram with fixed, possibly unequal bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins for `(t_hat - t)^2`: width `5e-5 T^2` up to `2e-3 T^2`, then 30
    /// log-spaced bins up to `2.25 T^2`, the largest possible value.
    pub fn square_error(t_sym: f64) -> Self {
        let t2 = t_sym * t_sym;
        let mut edges: Vec<f64> = (0..=40).map(|i| i as f64 * 5e-5 * t2).collect();
        let (lo, hi) = (2e-3f64.ln(), 2.25f64.ln());
        edges.extend((1..=30).map(|i| (lo + (hi - lo) * i as f64 / 30.0).exp() * t2));
        let counts = vec![0; edges.len() - 1];
        Self { edges, counts }
    }

    pub fn add(&mut self, x: f64) {
        let last = self.counts.len() - 1;
        let i = self.edges.partition_point(|&e| e <= x).saturating_sub(1).min(last);
        self.counts[i] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `count / (total * width)` per bin.
    pub fn density(&self) -> Vec<f64> {
        let total = self.total().max(1) as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (total * (e[1] - e[0])))
            .collect()
    }

    /// Fraction of samples in bins that end at or below `x`.
    pub fn mass_below(&self, x: f64) -> f64 {
        let total = self.total().max(1) as f64;
        let inside: u64 = self
            .counts
            .iter()
            .zip(self.edges.windows(2))
            .filter(|(_, e)| e[1] <= x * (1.0 + 1e-12))
            .map(|(&c, _)| c)
            .sum();
        inside as f64 / total
    }
}

/// Results at one Eb/N0 point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub ebn0: f64,
    /// Mean of `(tau_hat - tau)^2`; zero with exact offsets.
    pub mse_tau: f64,
    /// XOR symbol error rate before channel decoding.
    pub ser: Option<f64>,
    pub per: Option<f64>,
    pub symbol_errors: u64,
    pub packet_errors: u64,
    pub trials_run: usize,
    pub histogram: Option<Histogram>,
    /// Excluded from every emitted file so outputs stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub tau: f64,
    pub tau_hat: f64,
    pub symbol_errors: u64,
    pub packet_error: bool,
}

/// Everything that stays fixed across trials.
pub struct Experiment {
    cfg: ExperimentConfig,
    pulse: PulseConfig,
    spec: PreambleSpec,
    synth: Synthesizer,
    search: SearchConfig,
    z: [Vec<Complex64>; 2],
    z_d: [Vec<Complex64>; 2],
    white: WhiteningOperator,
    code: Option<LdpcCode>,
}

impl Experiment {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let pulse = cfg.pulse();
        let spec = cfg.preamble()?;
        let z = [spec.body(Node::A), spec.body(Node::B)];
        let z_d = [
            interpolate_zc_double(&z[0], &pulse, ZcInterpolation::Cyclic),
            interpolate_zc_double(&z[1], &pulse, ZcInterpolation::Cyclic),
        ];
        Ok(Self {
            cfg: cfg.clone(),
            pulse,
            spec,
            synth: Synthesizer::new(&pulse)?,
            search: SearchConfig::for_period(pulse.t_sym),
            z,
            z_d,
            white: build_whitener(cfg.d, &pulse)?,
            code: cfg.scenario.coded().then(LdpcCode::standard),
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    /// Noise PSD at `ebn0` dB.
    pub fn n0(&self, ebn0: f64) -> f64 {
        let eb = if self.cfg.scenario.coded() { 2.0 } else { 1.0 };
        eb / 10f64.powf(ebn0 / 10.0)
    }

    fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// Runs trial `trial` at noise PSD `n0`.
    pub fn run_trial(&self, trial: usize, n0: f64) -> Result<TrialOutcome> {
        let cfg = &self.cfg;
        let p = &self.pulse;
        let mut rng = self.trial_rng(trial);
        let mut ch = ChannelRealization::draw(&mut rng, cfg.channel, n0, p);
        ch.seed = trial as u64;

        let decodes = cfg.scenario.decodes();
        let n = if decodes { cfg.n } else { 0 };
        let (data_a, data_b, messages) = match &self.code {
            Some(code) => {
                let ma: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
                let mb: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
                let bpsk = |c: Vec<u8>| c.into_iter().map(|b| 1.0 - 2.0 * f64::from(b)).collect::<Vec<f64>>();
                let (ca, cb) = (code.encode(&ma)?, code.encode(&mb)?);
                let xor: Vec<u8> = ma.iter().zip(&mb).map(|(a, b)| a ^ b).collect();
                (bpsk(ca), bpsk(cb), Some(xor))
            }
            None => {
                let mut draw =
                    || -> Vec<f64> { (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect() };
                let a = draw();
                let b = draw();
                (a, b, None)
            }
        };
        let fa = build_frame(&self.spec, Node::A, &data_a)?;
        let fb = build_frame(&self.spec, Node::B, &data_b)?;
        let (sa, sb) = (fa.symbols(), fb.symbols());

        // One noise realization serves every stream any solution could ask
        // for, so solutions are compared on identical noise.
        let pre = self.spec.len();
        let data_start = fa.data_start();
        let w = p.sinc_half_width as i64;
        let streams = [
            StreamSpec {
                kind: SampleKind::BaudRrc,
                first_index: 0,
                count: pre,
                offset: 0.0,
            },
            StreamSpec {
                kind: SampleKind::DoubleSinc2,
                first_index: 0,
                count: 2 * pre,
                offset: 0.0,
            },
            StreamSpec {
                kind: SampleKind::DoubleRrc,
                first_index: 2 * (data_start as i64 - w - 1),
                count: 2 * (n + 2 * w as usize + 2),
                offset: 0.0,
            },
            StreamSpec {
                kind: SampleKind::BaudRrc,
                first_index: data_start as i64,
                count: n,
                offset: 0.0,
            },
        ];
        let active = if decodes { &streams[..] } else { &streams[..2] };
        let (lo, hi) = self.synth.noise_range(active);
        let noise = if n0 > 0.0 {
            HalfBaudNoise::draw(lo, hi, SampleKind::DoubleSinc2.sigma2(n0, p), &mut rng)
        } else {
            HalfBaudNoise::zero(lo, hi)
        };
        let stream = |s: &StreamSpec| self.synth.stream(&sa, &sb, &ch, &noise, s);

        let g = cfg.g;
        let est = match cfg.solution.estimator() {
            EstimatorKind::Exact => OffsetEstimate {
                t_a: ch.t_a,
                t_b: ch.t_b,
            },
            EstimatorKind::Baud => {
                let y = stream(&streams[0])?;
                let ca = crosscorr_baud(&y, &self.z[0], g as i64, g, cfg.d)?;
                let cb = crosscorr_baud(&y, &self.z[1], g as i64, g, cfg.d)?;
                estimate_baud(&ca, &cb, ch.h_a, ch.h_b, cfg.q, p, &self.search)
            }
            EstimatorKind::Double => {
                let y = stream(&streams[1])?;
                let ca = crosscorr_double(&y, &self.z_d[0], g as i64, g, cfg.d, p)?;
                let cb = crosscorr_double(&y, &self.z_d[1], g as i64, g, cfg.d, p)?;
                estimate_double(&ca, &cb, ch.h_a, ch.h_b, cfg.q, &self.white, p, &self.search)?
            }
        };
        let mut out = TrialOutcome {
            tau: ch.tau(),
            tau_hat: est.tau(),
            symbol_errors: 0,
            packet_error: false,
        };
        if !decodes {
            return Ok(out);
        }

        // The noise variance is known to the receiver; at N0 = 0 a tiny
        // value keeps the likelihoods finite.
        let sigma2 = SampleKind::DoubleRrc.sigma2(n0, p).max(1e-12);
        let known = KnownSymbols {
            a: fa.preamble.clone(),
            b: fb.preamble.clone(),
        };
        let soft: SoftXorOutput = match cfg.decoder_kind() {
            DecoderKind::Double => {
                let y_d = stream(&streams[2])?;
                let b = resample_boundaries(&y_d, &est, data_start, n, p)?;
                let model = build_model(&b, est.tau(), ch.h_a, ch.h_b, cfg.l, sigma2, &known, p)?;
                soft_xor(&spa_decode(&build_graph(&model)?))
            }
            DecoderKind::Baud => {
                let spec = StreamSpec {
                    offset: est.t_a,
                    ..streams[3]
                };
                let y = stream(&spec)?;
                decode_baud(&y.samples, est.tau(), ch.h_a, ch.h_b, cfg.l, sigma2, &known, p)?
            }
        };
        out.symbol_errors = soft
            .hard
            .iter()
            .zip(data_a.iter().zip(&data_b))
            .filter(|(&h, (&a, &b))| h != xor_bit(a, b))
            .count() as u64;
        if let (Some(code), Some(xor)) = (&self.code, messages) {
            let dec = code.bp_decode(&soft.llr, cfg.max_iters)?;
            out.packet_error = dec.bits != xor;
        }
        Ok(out)
    }

    /// Runs all trials at one Eb/N0 point, stopping early once enough
    /// errors are counted.
    pub fn run_point(&self, ebn0: f64) -> Result<MetricsRecord> {
        let start = Instant::now();
        let cfg = &self.cfg;
        let n0 = self.n0(ebn0);
        let estimates = cfg.solution.estimator() != EstimatorKind::Exact;
        let mut hist = estimates.then(|| Histogram::square_error(self.pulse.t_sym));
        let mut sq_sum = 0.0;
        let mut sym_err = 0u64;
        let mut pkt_err = 0u64;
        let mut trials_run = 0;
        for trial in 0..cfg.trials {
            let o = self.run_trial(trial, n0)?;
            let e = (o.tau_hat - o.tau).powi(2);
            sq_sum += e;
            if let Some(h) = hist.as_mut() {
                h.add(e);
            }
            sym_err += o.symbol_errors;
            pkt_err += u64::from(o.packet_error);
            trials_run += 1;
            let errors = if cfg.scenario.coded() { pkt_err } else { sym_err };
            if cfg.scenario.decodes() && cfg.min_errors > 0 && errors >= cfg.min_errors as u64 {
                break;
            }
        }
        let t = trials_run as f64;
        Ok(MetricsRecord {
            ebn0,
            mse_tau: sq_sum / t,
            ser: cfg.scenario.decodes().then(|| sym_err as f64 / (t * cfg.n as f64)),
            per: cfg.scenario.coded().then(|| pkt_err as f64 / t),
            symbol_errors: sym_err,
            packet_errors: pkt_err,
            trials_run,
            histogram: hist,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

/// Runs the experiment at every configured Eb/N0 point.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<MetricsRecord>> {
    let exp = Experiment::new(cfg)?;
    cfg.ebn0_list.iter().map(|&e| exp.run_point(e)).collect()
}

/// Eb/N0 at which a decreasing error curve crosses `target`, by linear
/// interpolation of `log10(rate)` between adjacent points.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let lt = target.log10();
    points.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 <= target && y0 > 0.0 && y1 > 0.0 {
            let (l0, l1) = (y0.log10(), y1.log10());
            Some(if l0 == l1 {
                x0
            } else {
                x0 + (x1 - x0) * (l0 - lt) / (l0 - l1)
            })
        } else {
            None
        }
    })
}
