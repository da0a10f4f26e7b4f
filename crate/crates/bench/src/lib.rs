//! Fixtures shared by the benchmarks.

use apnc::harness::{Experiment, ExperimentConfig, Scenario, Solution};
use apnc::ldpc::LdpcCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Experiment for one scenario/solution pair at the usual defaults.
pub fn experiment(scenario: Scenario, solution: Solution, n: usize) -> Experiment {
    let cfg = ExperimentConfig {
        scenario,
        solution,
        n,
        ..Default::default()
    };
    Experiment::new(&cfg).expect("valid bench config")
}

/// Channel LLRs of a random codeword sent as BPSK over AWGN at `ebn0` dB.
pub fn noisy_llrs(code: &LdpcCode, ebn0: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
    let cw = code.encode(&msg).expect("message length matches");
    let rate = code.k() as f64 / code.n() as f64;
    let var = 1.0 / (2.0 * rate * 10f64.powf(ebn0 / 10.0));
    cw.iter()
        .map(|&b| {
            let noise: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(b) + var.sqrt() * noise;
            2.0 * y / var
        })
        .collect()
}
