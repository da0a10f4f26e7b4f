//! Baud-rate decoder: observes only user A's symbol boundaries.
//!
//! `y[n] = h_A s_A[n] + h_B sum_l s_B[n - l] rc(lT + tau) + w[n]`, with the
//! noise taken as white. Each observation is a cluster of `s_A[n]` and the
//! `L - 1` B-symbols on the strongest contiguous run of lags.

use num_complex::Complex64;

use super::chain::{ChainGraph, Cluster};
use super::{soft_xor, spa_decode, FactorGraph, KnownSymbols, SoftXorOutput};
use crate::error::{Error, Result};
use crate::signal::{rc_pulse, PulseConfig};

/// `L - 1` contiguous B-lags containing lag 0 with the largest total
/// `|rc(lT + tau_hat)|`. Ties keep the run that starts lowest.
pub fn baud_lags(tau_hat: f64, l: usize, cfg: &PulseConfig) -> Vec<i64> {
    let k = (l - 1) as i64;
    let weight = |lag: i64| rc_pulse(lag as f64 * cfg.t_sym + tau_hat, cfg).abs();
    let mut best_start = -(k - 1);
    let mut best = f64::NEG_INFINITY;
    for start in -(k - 1)..=0 {
        let w: f64 = (start..start + k).map(weight).sum();
        if w > best + 1e-12 {
            best = w;
            best_start = start;
        }
    }
    (best_start..best_start + k).collect()
}

/// Factor graph of the baud-rate model. Variables are interleaved as in the
/// double-baud decoder: `s_A[n]` is `2n`, `s_B[n]` is `2n + 1`.
#[allow(clippy::too_many_arguments)]
pub fn build_baud_graph(
    y: &[Complex64],
    tau_hat: f64,
    h_a: Complex64,
    h_b: Complex64,
    l: usize,
    sigma2: f64,
    known: &KnownSymbols,
    cfg: &PulseConfig,
) -> Result<FactorGraph> {
    let n = y.len();
    if n == 0 {
        return Err(Error::Input("no observations".into()));
    }
    if l < 2 || l > 2 * n {
        return Err(Error::Config(format!("truncation depth {l} must be in 2..={}", 2 * n)));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::Input("noise variance must be positive".into()));
    }
    let lags = baud_lags(tau_hat, l, cfg);
    let coef = |lag: i64| rc_pulse(lag as f64 * cfg.t_sym + tau_hat, cfg);
    let reach = cfg.span as i64 + 1;
    let inv = 1.0 / sigma2;
    let mut clusters = Vec::with_capacity(n);
    for (i, &yi) in y.iter().enumerate() {
        let ni = i as i64;
        // Remove known preamble symbols over the whole pulse span.
        let mut v = yi;
        for lag in (ni + 1)..=(ni + reach) {
            if let Some(s) = known.get(1, ni - lag) {
                v -= h_b * s * coef(lag);
            }
        }
        let mut vars = vec![2 * i];
        let mut taps = vec![h_a];
        for &lag in &lags {
            let m = ni - lag;
            if (0..n as i64).contains(&m) {
                vars.push(2 * m as usize + 1);
                taps.push(h_b * coef(lag));
            }
        }
        // keep B-variables in ascending order so shared sets line up
        let mut order: Vec<usize> = (1..vars.len()).collect();
        order.sort_by_key(|&j| vars[j]);
        let vars_sorted: Vec<usize> = std::iter::once(vars[0]).chain(order.iter().map(|&j| vars[j])).collect();
        let taps_sorted: Vec<Complex64> = std::iter::once(taps[0]).chain(order.iter().map(|&j| taps[j])).collect();
        let mut cl = Cluster::new(vars_sorted);
        for s in 0..cl.states() {
            let mut e = v;
            for (slot, a) in taps_sorted.iter().enumerate() {
                e -= a * Cluster::symbol(s, slot);
            }
            cl.log_pot[s] = -e.norm_sqr() * inv;
        }
        clusters.push(cl);
    }
    let chain = ChainGraph {
        num_vars: 2 * n,
        clusters,
    };
    chain.validate()?;
    Ok(FactorGraph {
        chain,
        pair_clusters: (0..n).collect(),
    })
}

/// Baud-rate decoding of the XOR from samples at `(data_start + n) T + t_A`.
#[allow(clippy::too_many_arguments)]
pub fn decode_baud(
    y: &[Complex64],
    tau_hat: f64,
    h_a: Complex64,
    h_b: Complex64,
    l: usize,
    sigma2: f64,
    known: &KnownSymbols,
    cfg: &PulseConfig,
) -> Result<SoftXorOutput> {
    let g = build_baud_graph(y, tau_hat, h_a, h_b, l, sigma2, known, cfg)?;
    Ok(soft_xor(&spa_decode(&g)))
}
