use std::hint::black_box;

use cogs::analyzer::{factorize, per_frequency_slices, DEFAULT_MATCH_TOL, DEFAULT_THRESHOLD};
use cogs::constructors::{build_f6, F6Params};
use cogs::trainer::{init_net, make_dataset, Trainer};
use cogs::{analytic_loss, forward_loss, GroupSpec, TrainConfig, WeightZ};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn random_weight(d: usize, q: usize) -> WeightZ {
    let config = TrainConfig::new(GroupSpec::cyclic(d).unwrap(), q);
    WeightZ::from_real(&init_net(&config))
}

fn losses(c: &mut Criterion) {
    let mut g = c.benchmark_group("loss");
    for (d, q) in [(7, 20), (23, 128), (23, 512)] {
        let z = random_weight(d, q);
        let net = z.to_real();
        g.bench_with_input(BenchmarkId::new("analytic", format!("d{d}_q{q}")), &z, |b, z| {
            b.iter(|| analytic_loss(black_box(z)))
        });
        g.bench_with_input(BenchmarkId::new("forward", format!("d{d}_q{q}")), &net, |b, net| {
            b.iter(|| forward_loss(black_box(net)))
        });
    }
    g.finish();
}

fn training(c: &mut Criterion) {
    let mut g = c.benchmark_group("train_step");
    for (d, q) in [(7, 20), (23, 512)] {
        let config = TrainConfig { epochs: usize::MAX, ..TrainConfig::new(GroupSpec::cyclic(d).unwrap(), q) };
        let mut trainer = Trainer::new(config).unwrap();
        g.bench_function(format!("d{d}_q{q}"), |b| b.iter(|| trainer.step().unwrap()));
    }
    g.finish();
    let spec = GroupSpec::cyclic(23).unwrap();
    c.bench_function("make_dataset_d23", |b| b.iter(|| make_dataset(black_box(&spec), 0.9, 0).unwrap()));
}

fn factorization(c: &mut Criterion) {
    let spec = GroupSpec::cyclic(23).unwrap();
    let z = build_f6(&spec, &F6Params::default()).unwrap();
    let slice = per_frequency_slices(&z, DEFAULT_THRESHOLD).unwrap().remove(0);
    c.bench_function("factorize_order6", |b| b.iter(|| factorize(black_box(&slice), DEFAULT_MATCH_TOL).unwrap()));
}

criterion_group!(benches, losses, training, factorization);
criterion_main!(benches);
