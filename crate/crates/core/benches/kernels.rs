use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use splice_quotient::genus::{self, GenusOptions};
use splice_quotient::hilbert::{molien_closed, molien_coeffs};
use splice_quotient::singularity::Singularity;
use splice_quotient::{fixtures, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn molien(c: &mut Criterion) {
    let s = Singularity::new(fixtures::figure_one()).unwrap();
    let v = s.graph.index_of("v1").unwrap();
    // the two-node branch at v1 has |H| = 180
    let branch = s.graph.branches(v).into_iter().find(|b| !b.graph.is_chain()).unwrap();
    let b = Singularity::new(branch.graph).unwrap();
    let bv = b.default_node().unwrap();
    let mut group = c.benchmark_group("molien_coeffs");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "fig1/v1"), &exec, |bench, &e| {
            bench.iter(|| molien_coeffs(black_box(&s), v, 200, e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new(name, "branch/order180"), &exec, |bench, &e| {
            bench.iter(|| molien_coeffs(black_box(&b), bv, 400, e).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("molien_closed");
    group.sample_size(10);
    let chars = s.group.characters();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "fig1/v0"), &exec, |bench, &e| {
            bench.iter(|| molien_closed(black_box(&s), s.graph.index_of("v0").unwrap(), &chars, e).unwrap())
        });
    }
    group.finish();
}

fn recursion(c: &mut Criterion) {
    let s = Singularity::new(fixtures::figure_one()).unwrap();
    let mut group = c.benchmark_group("pg_uac");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "fig1"), &exec, |bench, &e| {
            bench.iter(|| {
                let o = GenusOptions { exec: e, root: None, check_polynomial_part: false };
                genus::pg_uac(black_box(&s), o).unwrap().pg_uac
            })
        });
    }
    group.finish();
}

criterion_group!(benches, molien, recursion);
criterion_main!(benches);
