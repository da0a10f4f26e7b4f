//! Zadoff-Chu preambles and transmit frames.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};

/// Transmitting end node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    A,
    B,
}

/// Preamble layout: a length-`q` ZC body wrapped in `g`-symbol cyclic
/// prefix and suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreambleSpec {
    pub q: usize,
    pub root: usize,
    pub g: usize,
}

impl PreambleSpec {
    pub fn new(q: usize, root: usize, g: usize) -> Result<Self> {
        let s = Self { q, root, g };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || self.q.is_multiple_of(2) {
            return config_err(format!("ZC length {} must be odd and positive", self.q));
        }
        if self.root == 0 || gcd(self.root, self.q) != 1 {
            return config_err(format!("ZC root {} must be coprime with length {}", self.root, self.q));
        }
        if self.g > self.q {
            return config_err(format!("guard {} exceeds ZC length {}", self.g, self.q));
        }
        Ok(())
    }

    /// Cyclic shift separating the two users' sequences.
    pub fn shift(&self) -> usize {
        self.q / 2
    }

    /// Total preamble length `q + 2g`.
    pub fn len(&self) -> usize {
        self.q + 2 * self.g
    }

    pub fn is_empty(&self) -> bool {
        self.q == 0
    }

    /// ZC body assigned to `node`.
    pub fn body(&self, node: Node) -> Vec<Complex64> {
        let (za, zb) = assign_pair(&zc_generate(self.q, self.root));
        match node {
            Node::A => za,
            Node::B => zb,
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `z[n] = exp(-j*pi*root*n*(n+1)/q)` for odd `q`.
pub fn zc_generate(q: usize, root: usize) -> Vec<Complex64> {
    (0..q)
        .map(|n| {
            // reduce the phase index mod 2q before converting to float
            let k = (root as u128 * n as u128 * (n as u128 + 1)) % (2 * q as u128);
            Complex64::from_polar(1.0, -PI * k as f64 / q as f64)
        })
        .collect()
}

/// Returns `(z_A, z_B)`: B uses the base sequence, A the base cyclically
/// shifted by `floor(q/2)`.
pub fn assign_pair(base: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let q = base.len();
    let shift = q / 2;
    let za = (0..q).map(|n| base[(n + shift) % q]).collect();
    (za, base.to_vec())
}

/// Wraps `z` with its last `g` entries in front and first `g` entries behind.
pub fn cyclic_extend(z: &[Complex64], g: usize) -> Result<Vec<Complex64>> {
    if g > z.len() {
        return Err(Error::Input(format!("guard {g} exceeds sequence length {}", z.len())));
    }
    let q = z.len();
    let mut out = Vec::with_capacity(q + 2 * g);
    out.extend_from_slice(&z[q - g..]);
    out.extend_from_slice(z);
    out.extend_from_slice(&z[..g]);
    Ok(out)
}

/// Preamble followed by BPSK data. Symbol `i` is sent at `i*T` relative to
/// the node's own timing.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    pub node: Node,
    pub spec: PreambleSpec,
    pub preamble: Vec<Complex64>,
    pub data: Vec<f64>,
}

impl SymbolFrame {
    /// Index of the first ZC body symbol.
    pub fn body_start(&self) -> usize {
        self.spec.g
    }

    /// Index of the first data symbol.
    pub fn data_start(&self) -> usize {
        self.preamble.len()
    }

    pub fn len(&self) -> usize {
        self.preamble.len() + self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Full complex symbol stream.
    pub fn symbols(&self) -> Vec<Complex64> {
        let mut s = self.preamble.clone();
        s.extend(self.data.iter().map(|&b| Complex64::new(b, 0.0)));
        s
    }
}

/// Builds `node`'s frame. Data entries must be exactly `+1` or `-1`.
pub fn build_frame(spec: &PreambleSpec, node: Node, data: &[f64]) -> Result<SymbolFrame> {
    spec.validate()?;
    if let Some(bad) = data.iter().find(|&&b| b != 1.0 && b != -1.0) {
        return Err(Error::Input(format!("data symbol {bad} is not BPSK")));
    }
    Ok(SymbolFrame {
        node,
        spec: *spec,
        preamble: cyclic_extend(&spec.body(node), spec.g)?,
        data: data.to_vec(),
    })
}
