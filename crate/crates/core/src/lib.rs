//! Asynchronous physical-layer network coding (APNC) with root-raised-cosine
//! pulses.
//!
//! Two end nodes transmit BPSK frames to a relay with a fractional symbol
//! misalignment. The relay estimates the misalignment from Zadoff-Chu
//! preambles, either from baud-rate or from double-baud-rate samples, and
//! decodes the XOR of the two messages with a truncated factor-graph
//! sum-product decoder. An LDPC code protects the XOR message in the coded
//! experiments.

// Index loops read closer to the matrix algebra; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod decoder;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod ldpc;
pub mod linalg;
pub mod preamble;
pub mod signal;

pub use error::{Error, Result};
