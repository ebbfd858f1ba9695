use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hopfchain::chain::{build_transition_matrix_with, BuildOptions};
use hopfchain::exactmath::{int, mat_mul_with, rank_with};
use hopfchain::presets::Preset;
use hopfchain::shuffle::{descent_count, Alphabet, ShuffleAlgebra, Word};
use hopfchain::simulate::{composition_sampler, gsr_step, run_trajectories, NamedStatistic};
use hopfchain::{Exec, HopfAlgebra};

const MODES: [(&str, Exec); 2] = [("serial", Exec::Serial), ("parallel", Exec::Parallel)];

fn build(c: &mut Criterion) {
    let alg = ShuffleAlgebra::new(Alphabet::distinct(6));
    let spec = Preset::Riffle { hands: 2 }.expand(6).unwrap();
    let states = alg.sector_basis(&[1; 6]);
    let mut group = c.benchmark_group("build_riffle_n6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let opts = BuildOptions { exec, ..BuildOptions::default() };
                build_transition_matrix_with(&alg, &spec, black_box(states.clone()), opts).unwrap()
            })
        });
    }
    group.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let alg = ShuffleAlgebra::new(Alphabet::distinct(5));
    let spec = Preset::TopOrBottom { q: hopfchain::exactmath::rat(1, 3) }.expand(5).unwrap();
    let k = build_transition_matrix_with(&alg, &spec, alg.sector_basis(&[1; 5]), BuildOptions::default()).unwrap();
    let shifted = k.kernel().minus_scalar(&int(0)).unwrap();
    let mut group = c.benchmark_group("kernel_n5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("mat_mul", name), |b| {
            b.iter(|| mat_mul_with(black_box(k.kernel()), k.kernel(), exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("rank", name), |b| b.iter(|| rank_with(black_box(&shifted), exec)));
    }
    group.finish();
}

fn trajectories(c: &mut Criterion) {
    let spec = Preset::Riffle { hands: 2 }.expand(10).unwrap();
    let sampler = composition_sampler(&spec).unwrap();
    let start = Word((0..10).collect());
    let stats = [NamedStatistic::new("descents", |w: &Word| int(descent_count(w) as i64))];
    let mut group = c.benchmark_group("gsr_trajectories_n10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_trajectories(&start, 5, 20_000, |w, rng| gsr_step(w, &sampler, rng), &stats, black_box(1), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, build, linear_algebra, trajectories);
criterion_main!(benches);
