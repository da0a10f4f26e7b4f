//! Experiment configuration.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::ldpc::{CODE_N, DEFAULT_MAX_ITERS};
use crate::preamble::PreambleSpec;
use crate::signal::PulseConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Mean square error of the misalignment estimate.
    EstimatorMse,
    /// Distribution of the square estimation error.
    EstimatorPdf,
    /// Uncoded XOR symbol error rate.
    DecoderSerAwgn,
    /// LDPC-coded packet error rate.
    DecoderPerRayleigh,
    /// Uncoded symbol error rate, meant to be run over several `L`.
    TruncationSweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::EstimatorMse => "estimator_mse",
            Scenario::EstimatorPdf => "estimator_pdf",
            Scenario::DecoderSerAwgn => "decoder_ser_awgn",
            Scenario::DecoderPerRayleigh => "decoder_per_rayleigh",
            Scenario::TruncationSweep => "truncation_sweep",
        }
    }

    pub fn decodes(self) -> bool {
        !matches!(self, Scenario::EstimatorMse | Scenario::EstimatorPdf)
    }

    pub fn coded(self) -> bool {
        self == Scenario::DecoderPerRayleigh
    }
}

/// Estimation-and-decoding pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solution {
    /// Baud-rate estimator, baud-rate decoder.
    I,
    /// Double-baud estimator, baud-rate decoder.
    II,
    /// Baud-rate estimator, double-baud decoder.
    III,
    /// Double-baud estimator, double-baud decoder.
    IV,
    /// True offsets handed to the decoder.
    #[serde(rename = "exact_tau")]
    ExactTau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Baud,
    Double,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Baud,
    Double,
}

impl Solution {
    pub fn name(self) -> &'static str {
        match self {
            Solution::I => "I",
            Solution::II => "II",
            Solution::III => "III",
            Solution::IV => "IV",
            Solution::ExactTau => "exact_tau",
        }
    }

    pub fn estimator(self) -> EstimatorKind {
        match self {
            Solution::I | Solution::III => EstimatorKind::Baud,
            Solution::II | Solution::IV => EstimatorKind::Double,
            Solution::ExactTau => EstimatorKind::Exact,
        }
    }

    pub fn decoder(self) -> DecoderKind {
        match self {
            Solution::I | Solution::II => DecoderKind::Baud,
            _ => DecoderKind::Double,
        }
    }
}

/// One Monte Carlo experiment: a scenario evaluated at each Eb/N0 point.
///
/// Eb/N0 uses the energy per information bit of one user: `Eb = 1` for
/// uncoded runs and `Eb = 2` with the rate-1/2 code, for unit-energy BPSK
/// symbols. `N0` follows as `Eb / 10^(ebn0/10)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub solution: Solution,
    /// Overrides the decoder implied by `solution`.
    pub decoder: Option<DecoderKind>,
    pub beta: f64,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "G")]
    pub g: usize,
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub ebn0_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub channel: ChannelModel,
    /// Pulse truncation override in symbols.
    pub span: Option<usize>,
    /// ZC root index.
    pub root: usize,
    /// Stop a point once this many errors are counted (0 disables).
    pub min_errors: usize,
    pub max_iters: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::DecoderSerAwgn,
            solution: Solution::IV,
            decoder: None,
            beta: 1.0,
            q: 31,
            g: 10,
            d: 4,
            l: 4,
            n: 64,
            ebn0_list: vec![10.0],
            trials: 1000,
            seed: 1,
            channel: ChannelModel::Awgn,
            span: None,
            root: 1,
            min_errors: 100,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{name}: {msg}"))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn decoder_kind(&self) -> DecoderKind {
        self.decoder.unwrap_or_else(|| self.solution.decoder())
    }

    pub fn pulse(&self) -> PulseConfig {
        let mut p = PulseConfig::with_beta(self.beta);
        if let Some(s) = self.span {
            p.span = s;
        }
        p
    }

    pub fn preamble(&self) -> Result<PreambleSpec> {
        PreambleSpec::new(self.q, self.root, self.g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(field("beta", format!("{} outside [0, 1]", self.beta)));
        }
        if self.q < 3 || self.q.is_multiple_of(2) {
            return Err(field("Q", format!("{} must be odd and at least 3", self.q)));
        }
        if self.g >= self.q {
            return Err(field("G", format!("{} must be smaller than Q = {}", self.g, self.q)));
        }
        if self.d == 0 || self.d > self.g {
            return Err(field("d", format!("{} must be in 1..=G ({})", self.d, self.g)));
        }
        self.preamble().map_err(|e| field("root", e))?;
        if self.trials == 0 {
            return Err(field("trials", "must be at least 1"));
        }
        if self.ebn0_list.is_empty() || self.ebn0_list.iter().any(|v| !v.is_finite()) {
            return Err(field("ebn0_list", "needs at least one finite value"));
        }
        if let Some(s) = self.span {
            if s < 8 {
                return Err(field("span", format!("{s} must be at least 8")));
            }
        }
        if self.scenario.decodes() {
            if self.n == 0 {
                return Err(field("N", "must be at least 1"));
            }
            if self.l < 2 || self.l > 2 * self.n {
                return Err(field("L", format!("{} must be in 2..=2N", self.l)));
            }
            if self.decoder_kind() == DecoderKind::Double && !self.l.is_multiple_of(2) {
                return Err(field(
                    "L",
                    format!("{} must be even for the double-baud decoder", self.l),
                ));
            }
            if self.scenario.coded() && self.n != CODE_N {
                return Err(field("N", format!("{} must equal the code length {CODE_N}", self.n)));
            }
            if self.scenario.coded() && self.max_iters == 0 {
                return Err(field("max_iters", "must be at least 1"));
            }
        } else if self.solution == Solution::ExactTau {
            return Err(field("solution", "estimator scenarios need an estimator"));
        }
        self.pulse().validate()
    }
}
