use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use planarhopf_bench::*;
use planarhopf_core::deformed_negative::{cointeraction_check_trunc, delta_minus};
use planarhopf_core::deformed_positive::{delta_plus, delta_plus_0, star_plus_tree};
use planarhopf_core::free_postlie::mkw_coproduct;
use planarhopf_core::rough_model::{delta_minus_pb, delta_plus_pb};
use planarhopf_core::MultiIndex;

fn kernels(c: &mut Criterion) {
    let w = mkw_input();
    c.bench_function("mkw 10 vertices", |b| b.iter(|| mkw_coproduct(black_box(&w))));

    let blue = blue_tree();
    let bcfg = blue_cfg();
    c.bench_function("delta_plus_pb", |b| b.iter(|| delta_plus_pb(black_box(&blue))));
    c.bench_function("delta_minus_pb", |b| b.iter(|| delta_minus_pb(black_box(&blue), &bcfg).unwrap()));

    let (x, y) = star_plus_pair();
    c.bench_function("star_plus", |b| b.iter(|| star_plus_tree(black_box(&x), black_box(&y)).unwrap()));

    let t = example_tree();
    let cfg = two_noise_cfg();
    let cap = MultiIndex(vec![2]);
    c.bench_function("delta_plus", |b| b.iter(|| delta_plus(black_box(&t), &cfg).unwrap()));
    c.bench_function("delta_plus_0 cap 2", |b| b.iter(|| delta_plus_0(black_box(&t), &cap).unwrap()));
    c.bench_function("delta_minus", |b| b.iter(|| delta_minus(black_box(&t), &cfg).unwrap()));

    let mut g = c.benchmark_group("cointeraction");
    g.sample_size(10);
    g.bench_function("truncated, worked example", |b| {
        b.iter(|| cointeraction_check_trunc(black_box(&t), &cap, &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
