use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exclusion_bench::{exact_sep_cases, exact_shuffle_cases};
use exclusion_core::chain::{extremal_states, sep_space, shuffle_space, DEFAULT_STATE_CAP};
use exclusion_core::exact::{
    build_sep_generator, build_shuffle_generator, dirac, stationary_sep_measure,
    transient_distribution, ReversibleKernel,
};
use exclusion_core::sim::{
    coalescence_time, replica_rng, simulate_sep_coupling, simulate_shuffle_grand_coupling,
    ExtremalPair, SimOptions,
};
use exclusion_core::{KPermutation, Params, ShuffleParams};

fn generators(c: &mut Criterion) {
    let mut g = c.benchmark_group("generator_build");
    for p in exact_sep_cases() {
        let space = sep_space(p, DEFAULT_STATE_CAP).unwrap();
        g.bench_with_input(BenchmarkId::new("sep", format!("{p:?}")), &space, |b, s| {
            b.iter(|| build_sep_generator(black_box(s)))
        });
    }
    for p in exact_shuffle_cases() {
        let space = shuffle_space(p, DEFAULT_STATE_CAP).unwrap();
        g.bench_with_input(
            BenchmarkId::new("shuffle", format!("{p:?}")),
            &space,
            |b, s| b.iter(|| build_shuffle_generator(black_box(s))),
        );
    }
    g.finish();
}

fn transients(c: &mut Criterion) {
    let mut g = c.benchmark_group("transient");
    for p in exact_sep_cases() {
        let space = sep_space(p, DEFAULT_STATE_CAP).unwrap();
        let q = build_sep_generator(&space);
        let start = space.index_of(&extremal_states(p).0).unwrap();
        let nu0 = dirac(space.len(), start);
        g.bench_function(
            BenchmarkId::new("uniformization_t1", format!("{p:?}")),
            |b| b.iter(|| transient_distribution(&q, black_box(&nu0), 1.0).unwrap()),
        );
        let kernel = ReversibleKernel::new(&q, &stationary_sep_measure(&space)).unwrap();
        g.bench_function(
            BenchmarkId::new("dense_worst_case_t1", format!("{p:?}")),
            |b| b.iter(|| kernel.worst_case_distance(black_box(1.0)).unwrap()),
        );
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulation");
    g.sample_size(20);

    let p = Params::new(2, 256, 256).unwrap();
    g.bench_function("extremal_pair_1e5_steps_N256", |b| {
        b.iter(|| {
            let mut rng = replica_rng(1, 0);
            let mut pair = ExtremalPair::new(p);
            for _ in 0..100_000 {
                pair.step(&mut rng);
            }
            pair.area()
        })
    });

    let p = Params::new(2, 16, 16).unwrap();
    let mut replica = 0;
    g.bench_function("coalescence_time_N16", |b| {
        b.iter(|| {
            replica += 1;
            coalescence_time(p, 2, replica, u64::MAX)
        })
    });

    let p = Params::new(2, 32, 32).unwrap();
    let (top, bottom) = extremal_states(p);
    let opts = SimOptions::new(50.0);
    g.bench_function("sep_coupling_N32_t50", |b| {
        b.iter(|| simulate_sep_coupling(&[top.clone(), bottom.clone()], &opts, 3, 0).unwrap())
    });

    let p = ShuffleParams::new(2, 32).unwrap();
    g.bench_function("shuffle_coupling_N32_t50", |b| {
        b.iter(|| {
            simulate_shuffle_grand_coupling(
                &[KPermutation::top(p), KPermutation::bottom(p)],
                &opts,
                4,
                0,
                None,
            )
            .unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, generators, transients, simulation);
criterion_main!(benches);
