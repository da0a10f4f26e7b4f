//! PNC decoding of the XOR of the two users' BPSK symbols under ISI.
//!
//! The double-baud-rate decoder observes both users' symbol boundaries,
//! whitens the colored noise with a banded Cholesky factor and runs the
//! sum-product algorithm on a chain of truncated clusters. The baud-rate
//! decoder observes only user A's boundaries and treats the noise as white.

mod baud;
pub mod chain;
mod double;

pub use baud::{baud_lags, build_baud_graph, decode_baud};
pub use double::{build_graph, build_model, resample_boundaries, Boundaries, ObservationModel};

use num_complex::Complex64;

use chain::{ChainBeliefs, ChainGraph};

/// Clamp range for the soft XOR ratio.
pub const U_MIN: f64 = 1e-12;
pub const U_MAX: f64 = 1e12;

/// Symbols of both users that the receiver already knows (the preambles),
/// indexed relative to the first data symbol: `a[i]` is sent at data index
/// `i - a.len()`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnownSymbols {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl KnownSymbols {
    /// Symbol of `user` (0 = A, 1 = B) at data index `l < 0`.
    pub(crate) fn get(&self, user: usize, l: i64) -> Option<Complex64> {
        let s = if user == 0 { &self.a } else { &self.b };
        let i = s.len() as i64 + l;
        if l < 0 && i >= 0 {
            Some(s[i as usize])
        } else {
            None
        }
    }
}

/// `Pr{s_A[n], s_B[n] | y}` ordered `(+,+), (-,+), (+,-), (-,-)`: bit 0 is
/// `s_A = -1`, bit 1 is `s_B = -1`.
pub type PairApp = [f64; 4];

/// Chain graph plus, for each data index `n`, the cluster holding both
/// `s_A[n]` (variable `2n`) and `s_B[n]` (variable `2n + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    pub chain: ChainGraph,
    pub pair_clusters: Vec<usize>,
}

impl FactorGraph {
    pub fn pairs(&self) -> usize {
        self.pair_clusters.len()
    }
}

/// Forward-backward sweep and per-pair marginals.
pub fn spa_decode(graph: &FactorGraph) -> Vec<PairApp> {
    let beliefs: ChainBeliefs = graph.chain.run();
    graph
        .pair_clusters
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let m = beliefs.marginal(c, &[2 * n, 2 * n + 1]);
            [m[0], m[1], m[2], m[3]]
        })
        .collect()
}

/// Soft XOR decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftXorOutput {
    /// `[P(+,+) + P(-,-)] / [P(+,-) + P(-,+)]`, clamped.
    pub u: Vec<f64>,
    /// `ln u`: positive favours XOR bit 0.
    pub llr: Vec<f64>,
    /// Hard XOR bits, `1` when `u < 1`.
    pub hard: Vec<u8>,
}

pub fn soft_xor(apps: &[PairApp]) -> SoftXorOutput {
    let u: Vec<f64> = apps
        .iter()
        .map(|p| {
            let same = p[0] + p[3];
            let diff = p[1] + p[2];
            if diff <= 0.0 {
                U_MAX
            } else {
                (same / diff).clamp(U_MIN, U_MAX)
            }
        })
        .collect();
    let llr = u.iter().map(|v| v.ln()).collect();
    let hard = u.iter().map(|&v| u8::from(v < 1.0)).collect();
    SoftXorOutput { u, llr, hard }
}

/// XOR bit of two BPSK symbols under `s = 1 - 2 bit`.
pub fn xor_bit(s_a: f64, s_b: f64) -> u8 {
    u8::from(s_a * s_b < 0.0)
}
