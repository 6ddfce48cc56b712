use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nlgames::kscolour::{cabello18, contextual_repair_search_with, count_valid_colourings_with, Enumeration};
use nlgames::magic::{magic_verify_nlbox_with, MagicGame, MagicNlBox};
use nlgames::quantum::{quantum_verify_with, QuantumResource};
use nlgames::{simulate_with, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ks_colourings(c: &mut Criterion) {
    let set = cabello18();
    let mut group = c.benchmark_group("ks_count_exhaustive");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| count_valid_colourings_with(exec, black_box(&set), Enumeration::Exhaustive))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("ks_repair_search");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| contextual_repair_search_with(exec, black_box(&set))));
    }
    group.finish();
}

fn magic_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("magic_verify_nlbox");
    group.sample_size(20);
    for n in [31, 101] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| magic_verify_nlbox_with(exec, n))
            });
        }
    }
    group.finish();
}

fn quantum_verify(c: &mut Criterion) {
    let resource = QuantumResource::standard(11).unwrap();
    let mut group = c.benchmark_group("quantum_verify_n11");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| quantum_verify_with(exec, black_box(&resource))));
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let game = MagicGame::new(5).unwrap();
    let wiring = MagicNlBox::new(5).unwrap();
    let resource = wiring.resource();
    let mut group = c.benchmark_group("simulate_magic5_100k");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| simulate_with(exec, &game, &wiring, &resource, 100_000, black_box(7)))
        });
    }
    group.finish();
}

criterion_group!(benches, ks_colourings, magic_verify, quantum_verify, simulation);
criterion_main!(benches);
