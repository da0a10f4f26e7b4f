//! Log-domain sum-product on a chain of clusters (a junction chain).
//!
//! Each cluster holds a table of log-potentials over the joint states of its
//! binary variables. Neighbouring clusters are tied by their shared
//! variables; with the running-intersection property the chain is a tree,
//! so one forward and one backward sweep give exact cluster marginals.

use crate::error::{Error, Result};

/// A cluster of binary variables. State bit `j` belongs to `vars[j]`; a set
/// bit means the symbol `-1`, a clear bit `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub vars: Vec<usize>,
    pub log_pot: Vec<f64>,
}

impl Cluster {
    pub fn new(vars: Vec<usize>) -> Self {
        let n = 1usize << vars.len();
        Self {
            vars,
            log_pot: vec![0.0; n],
        }
    }

    pub fn states(&self) -> usize {
        self.log_pot.len()
    }

    /// BPSK value of variable slot `j` in `state`.
    pub fn symbol(state: usize, j: usize) -> f64 {
        if state >> j & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainGraph {
    pub num_vars: usize,
    pub clusters: Vec<Cluster>,
}

/// Normalized log-beliefs of every cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainBeliefs {
    pub clusters: Vec<Cluster>,
    pub log_beliefs: Vec<Vec<f64>>,
}

pub(crate) fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

// Maps every state of `from` to the index of its restriction to `shared`.
fn projection(from: &[usize], shared: &[usize]) -> Vec<usize> {
    let slots: Vec<usize> = shared
        .iter()
        .map(|v| from.iter().position(|u| u == v).expect("shared variable missing"))
        .collect();
    (0..1usize << from.len())
        .map(|s| {
            slots
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &j)| acc | ((s >> j & 1) << k))
        })
        .collect()
}

impl ChainGraph {
    /// Checks variable ranges and the running-intersection property.
    pub fn validate(&self) -> Result<()> {
        let mut first = vec![usize::MAX; self.num_vars];
        let mut last = vec![0usize; self.num_vars];
        let mut count = vec![0usize; self.num_vars];
        for (c, cl) in self.clusters.iter().enumerate() {
            if cl.log_pot.len() != 1usize << cl.vars.len() {
                return Err(Error::Input(format!("cluster {c} table has the wrong size")));
            }
            for &v in &cl.vars {
                if v >= self.num_vars {
                    return Err(Error::Input(format!("cluster {c} refers to variable {v}")));
                }
                first[v] = first[v].min(c);
                last[v] = c;
                count[v] += 1;
            }
        }
        for v in 0..self.num_vars {
            if count[v] == 0 {
                return Err(Error::Input(format!("variable {v} is in no cluster")));
            }
            if last[v] - first[v] + 1 != count[v] {
                return Err(Error::Input(format!("variable {v} breaks the running intersection")));
            }
        }
        Ok(())
    }

    /// One forward and one backward sweep.
    pub fn run(&self) -> ChainBeliefs {
        let nc = self.clusters.len();
        let shared: Vec<Vec<usize>> = (1..nc)
            .map(|c| {
                self.clusters[c - 1]
                    .vars
                    .iter()
                    .copied()
                    .filter(|v| self.clusters[c].vars.contains(v))
                    .collect()
            })
            .collect();
        // proj_next[c]: state of c onto shared set with c+1
        // proj_prev[c]: state of c onto shared set with c-1
        let proj_next: Vec<Vec<usize>> = (0..nc.saturating_sub(1))
            .map(|c| projection(&self.clusters[c].vars, &shared[c]))
            .collect();
        let proj_prev: Vec<Vec<usize>> = (1..nc)
            .map(|c| projection(&self.clusters[c].vars, &shared[c - 1]))
            .collect();

        let mut alpha: Vec<Vec<f64>> = Vec::with_capacity(nc);
        for c in 0..nc {
            let pot = &self.clusters[c].log_pot;
            if c == 0 {
                alpha.push(pot.clone());
                continue;
            }
            let mut msg = vec![f64::NEG_INFINITY; 1 << shared[c - 1].len()];
            for (s, &a) in alpha[c - 1].iter().enumerate() {
                let t = proj_next[c - 1][s];
                msg[t] = log_sum_exp(msg[t], a);
            }
            normalize(&mut msg);
            alpha.push(pot.iter().zip(&proj_prev[c - 1]).map(|(p, &t)| p + msg[t]).collect());
        }

        let mut beta: Vec<Vec<f64>> = vec![Vec::new(); nc];
        if nc > 0 {
            beta[nc - 1] = vec![0.0; self.clusters[nc - 1].states()];
        }
        for c in (0..nc.saturating_sub(1)).rev() {
            let next = &self.clusters[c + 1];
            let mut msg = vec![f64::NEG_INFINITY; 1 << shared[c].len()];
            for s in 0..next.states() {
                let t = proj_prev[c][s];
                msg[t] = log_sum_exp(msg[t], next.log_pot[s] + beta[c + 1][s]);
            }
            normalize(&mut msg);
            beta[c] = proj_next[c].iter().map(|&t| msg[t]).collect();
        }

        let log_beliefs = alpha
            .into_iter()
            .zip(beta)
            .map(|(a, b)| {
                let mut v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                normalize(&mut v);
                v
            })
            .collect();
        ChainBeliefs {
            clusters: self.clusters.clone(),
            log_beliefs,
        }
    }
}

fn normalize(v: &mut [f64]) {
    let z = v.iter().fold(f64::NEG_INFINITY, |acc, &x| log_sum_exp(acc, x));
    if z.is_finite() {
        for x in v.iter_mut() {
            *x -= z;
        }
    }
}

impl ChainBeliefs {
    /// Joint probabilities of `vars` (all in cluster `c`), indexed by the
    /// same bit convention with bit `k` for `vars[k]`.
    pub fn marginal(&self, c: usize, vars: &[usize]) -> Vec<f64> {
        let proj = projection(&self.clusters[c].vars, vars);
        let mut out = vec![0.0; 1 << vars.len()];
        for (s, &lb) in self.log_beliefs[c].iter().enumerate() {
            out[proj[s]] += lb.exp();
        }
        out
    }
}
