use std::hint::black_box;

use apnc::harness::{Scenario, Solution};
use apnc::ldpc::{LdpcCode, DEFAULT_MAX_ITERS};
use apnc::signal::{rc_pulse, rrc_pulse, PulseConfig};
use apnc_bench::{experiment, noisy_llrs};
use criterion::{criterion_group, criterion_main, Criterion};

fn pulses(c: &mut Criterion) {
    let cfg = PulseConfig::with_beta(0.5);
    c.bench_function("rrc_rc_1000_points", |b| {
        b.iter(|| {
            (0..1000)
                .map(|i| {
                    let t = black_box(i as f64 * 0.017 - 8.0);
                    rrc_pulse(t, &cfg) + rc_pulse(t, &cfg)
                })
                .sum::<f64>()
        })
    });
}

fn trials(c: &mut Criterion) {
    let n0 = 0.1;
    let mut g = c.benchmark_group("trial");
    g.sample_size(20);
    for (name, scenario, solution) in [
        ("estimate_baud", Scenario::EstimatorMse, Solution::I),
        ("estimate_double", Scenario::EstimatorMse, Solution::II),
        ("decode_baud_n256", Scenario::DecoderSerAwgn, Solution::I),
        ("decode_double_n256", Scenario::DecoderSerAwgn, Solution::IV),
    ] {
        let exp = experiment(scenario, solution, 256);
        let mut trial = 0;
        g.bench_function(name, |b| {
            b.iter(|| {
                trial += 1;
                exp.run_trial(trial, n0).unwrap()
            })
        });
    }
    g.finish();
}

fn ldpc(c: &mut Criterion) {
    let code = LdpcCode::standard();
    let llr = noisy_llrs(&code, 2.0, 7);
    let mut g = c.benchmark_group("ldpc");
    g.sample_size(20);
    g.bench_function("construct_1024_512", |b| b.iter(LdpcCode::standard));
    g.bench_function("bp_decode_2dB", |b| {
        b.iter(|| code.bp_decode(black_box(&llr), DEFAULT_MAX_ITERS).unwrap())
    });
    g.finish();
}

criterion_group!(benches, pulses, trials, ldpc);
criterion_main!(benches);
