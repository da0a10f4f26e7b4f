//! Double-baud-rate decoder.
//!
//! Boundary samples `y1[n] = y(nT + t_A)` and `y2[n] = y(nT + t_B)` of the
//! RRC matched-filter output are reconstructed from its `T/2` samples and
//! interleaved as `y = [y1[0], y2[0], y1[1], ...]`. With
//! `x = [s_A[0], s_B[0], s_A[1], ...]` the receiver model is
//! `y = Sigma H x + w` with `cov(w) = sigma2 Sigma`, where `Sigma` holds
//! `rc` at the boundary differences. Whitening with `Sigma = U^T U` gives
//! `U^{-T} y = U H x + white noise`. Because `rc` is truncated, `Sigma` is
//! banded and so is `U`.

use num_complex::Complex64;

use super::chain::{ChainGraph, Cluster};
use super::{FactorGraph, KnownSymbols};
use crate::channel::{SampleKind, SampleSet};
use crate::error::{Error, Result};
use crate::estimator::OffsetEstimate;
use crate::linalg::BandedUpper;
use crate::signal::{rc_pulse, sinc2_resample_baud, PulseConfig};

/// Reconstructed symbol-boundary samples of the data part.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundaries {
    pub y1: Vec<Complex64>,
    pub y2: Vec<Complex64>,
}

/// Sinc-interpolates the `T/2` RRC samples at `(data_start + n) T + t_hat`
/// for each user, `n = 0..count`.
pub fn resample_boundaries(
    y_d: &SampleSet,
    est: &OffsetEstimate,
    data_start: usize,
    count: usize,
    cfg: &PulseConfig,
) -> Result<Boundaries> {
    if y_d.kind != SampleKind::DoubleRrc {
        return Err(Error::Input("boundary resampling needs double-baud RRC samples".into()));
    }
    let t0 = data_start as f64 * cfg.t_sym;
    Ok(Boundaries {
        y1: sinc2_resample_baud(&y_d.samples, y_d.first_index, t0 + est.t_a, count, cfg)?,
        y2: sinc2_resample_baud(&y_d.samples, y_d.first_index, t0 + est.t_b, count, cfg)?,
    })
}

/// Whitened observation model `y_bar = U H x + w_bar`.
#[derive(Debug, Clone)]
pub struct ObservationModel {
    pub y_bar: Vec<Complex64>,
    pub u: BandedUpper,
    /// Diagonal of `H`: `h_A, h_B` alternating.
    pub h: Vec<Complex64>,
    pub l: usize,
    /// Noise variance per whitened sample.
    pub sigma2: f64,
    /// Diagonal loading that was needed to factor `Sigma` (usually zero).
    pub loading: f64,
}

impl ObservationModel {
    pub fn pairs(&self) -> usize {
        self.h.len() / 2
    }
}

/// Receiver-side coefficient of symbol `s_col[l]` in the boundary sample of
/// user `row` at index `n` (users: 0 = A, 1 = B).
pub(crate) fn boundary_coef(row: usize, n: i64, col: usize, l: i64, tau_hat: f64, cfg: &PulseConfig) -> f64 {
    let shift = match (row, col) {
        (0, 1) => tau_hat,
        (1, 0) => -tau_hat,
        _ => 0.0,
    };
    rc_pulse((n - l) as f64 * cfg.t_sym + shift, cfg)
}

/// Builds the whitened model from boundary samples and the offset estimate.
/// Contributions of the known preamble symbols are removed before
/// whitening.
#[allow(clippy::too_many_arguments)]
pub fn build_model(
    b: &Boundaries,
    tau_hat: f64,
    h_a: Complex64,
    h_b: Complex64,
    l: usize,
    sigma2: f64,
    known: &KnownSymbols,
    cfg: &PulseConfig,
) -> Result<ObservationModel> {
    let n = b.y1.len();
    if b.y2.len() != n || n == 0 {
        return Err(Error::Input(
            "boundary streams must be non-empty and equally long".into(),
        ));
    }
    if l < 2 || l > 2 * n {
        return Err(Error::Config(format!("truncation depth {l} must be in 2..={}", 2 * n)));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::Input("noise variance must be positive".into()));
    }
    let reach = cfg.span as i64 + 1;
    let gains = [h_a, h_b];
    let mut y = Vec::with_capacity(2 * n);
    for i in 0..n {
        for (row, stream) in [&b.y1, &b.y2].into_iter().enumerate() {
            let mut v = stream[i];
            let ni = i as i64;
            for col in 0..2 {
                for li in (ni - reach)..0 {
                    if let Some(s) = known.get(col, li) {
                        v -= gains[col] * s * boundary_coef(row, ni, col, li, tau_hat, cfg);
                    }
                }
            }
            y.push(v);
        }
    }
    let dim = 2 * n;
    let bw = 2 * cfg.span + 3;
    let entry = |i: usize, j: usize| boundary_coef(i % 2, (i / 2) as i64, j % 2, (j / 2) as i64, tau_hat, cfg);
    let (u, loading) = factor_with_loading(dim, bw, entry)?;
    let y_bar = u.solve_transpose(&y);
    let h = (0..dim).map(|j| gains[j % 2]).collect();
    Ok(ObservationModel {
        y_bar,
        u,
        h,
        l,
        sigma2,
        loading,
    })
}

/// Cholesky of `Sigma`, adding the smallest power-of-ten diagonal loading
/// that makes it succeed.
///
/// For `beta < 1` the boundary samples oversample the signal band and
/// `Sigma` is nearly singular; truncating `rc` then leaves it slightly
/// indefinite.
fn factor_with_loading<F: Fn(usize, usize) -> f64>(dim: usize, bw: usize, entry: F) -> Result<(BandedUpper, f64)> {
    let mut loading = 0.0;
    let mut last_err = None;
    for exp in std::iter::once(None).chain((-10..=-1).map(Some)) {
        if let Some(e) = exp {
            loading = 10f64.powi(e);
        }
        let loaded = |i: usize, j: usize| entry(i, j) + if i == j { loading } else { 0.0 };
        match BandedUpper::factor(dim, bw, loaded) {
            Ok(u) => return Ok((u, loading)),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Chain of `2N - L + 1` clusters `V_i = {x_i, .., x_{i+L-1}}`. Row `r` of
/// the whitened model, truncated to `U[r][r..r+L]`, is absorbed by cluster
/// `min(r, 2N - L)`.
pub fn build_graph(model: &ObservationModel) -> Result<FactorGraph> {
    let dim = model.h.len();
    let l = model.l;
    if l > dim {
        return Err(Error::Config(format!("truncation depth {l} exceeds {dim} variables")));
    }
    let nc = dim - l + 1;
    let mut clusters: Vec<Cluster> = (0..nc).map(|c| Cluster::new((c..c + l).collect())).collect();
    let inv = 1.0 / model.sigma2;
    for r in 0..dim {
        let c = r.min(nc - 1);
        let cols: Vec<(usize, Complex64)> = (r..(r + l).min(dim))
            .map(|j| (j - c, model.h[j] * model.u.get(r, j)))
            .collect();
        let cl = &mut clusters[c];
        for s in 0..cl.states() {
            let mut e = model.y_bar[r];
            for &(slot, a) in &cols {
                e -= a * Cluster::symbol(s, slot);
            }
            cl.log_pot[s] -= e.norm_sqr() * inv;
        }
    }
    let pair_clusters = (0..dim / 2).map(|n| (2 * n).min(nc - 1)).collect();
    let chain = ChainGraph {
        num_vars: dim,
        clusters,
    };
    chain.validate()?;
    Ok(FactorGraph { chain, pair_clusters })
}
