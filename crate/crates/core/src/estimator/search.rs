//! One-dimensional minimization: coarse grid scan, then golden-section
//! refinement around the best grid point.

use serde::{Deserialize, Serialize};

/// Grid step and final tolerance, both in time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_step: f64,
    pub tol: f64,
}

impl SearchConfig {
    /// `T/200` grid refined to `1e-4 T`.
    pub fn for_period(t_sym: f64) -> Self {
        Self {
            grid_step: t_sym / 200.0,
            tol: 1e-4 * t_sym,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` over `[lo, hi)`. Grid ties resolve to the smallest argument.
pub fn minimize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, search: &SearchConfig) -> f64 {
    let n = ((hi - lo) / search.grid_step).round().max(1.0) as usize;
    let mut best_t = lo;
    let mut best_f = f64::INFINITY;
    for j in 0..n {
        let t = lo + j as f64 * search.grid_step;
        let v = f(t);
        if v < best_f {
            best_f = v;
            best_t = t;
        }
    }
    let top = hi - 1e-12 * (hi - lo);
    let mut a = (best_t - search.grid_step).max(lo);
    let mut b = (best_t + search.grid_step).min(top);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > search.tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    if f(t) < best_f {
        t
    } else {
        best_t
    }
}
