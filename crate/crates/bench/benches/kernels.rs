use codimlab_bench::{model, sparse_rows};
use codimlab_core::asymptotics::density_scan;
use codimlab_core::codim::{cocharacter_of, codimension_of, CodimConfig};
use codimlab_core::linalg::{rank_exact, rank_mod_p, DEFAULT_PRIMES};
use codimlab_core::repr::{phi_of_partition, DEFAULT_PREC};
use codimlab_core::{Partition, Rational};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn rank(c: &mut Criterion) {
    let rows = sparse_rows(400, 600, 6);
    c.bench_function("rank_mod_p 400x600", |b| {
        b.iter(|| rank_mod_p(black_box(&rows), 600, DEFAULT_PRIMES[0]))
    });
    c.bench_function("rank_exact 400x600", |b| b.iter(|| rank_exact(black_box(&rows))));
}

fn codimension(c: &mut Criterion) {
    let config = CodimConfig::default();
    let a = model(2, 1, "periodic:0", false);
    c.bench_function("c_7 A(2,1,0)", |b| b.iter(|| codimension_of(&a, 7, &config).unwrap()));
    let u = model(2, 1, "periodic:0", true);
    c.bench_function("c_5 unital A(2,1,0)", |b| b.iter(|| codimension_of(&u, 5, &config).unwrap()));
}

fn cocharacter(c: &mut Criterion) {
    let config = CodimConfig::default();
    let a = model(3, 1, "periodic:01", false);
    c.bench_function("cocharacter n=6 A(3,1,01)", |b| {
        b.iter(|| cocharacter_of(&a, 6, &config).unwrap())
    });
}

fn phi(c: &mut Criterion) {
    let lambda: Partition = "40,30,20,10".parse().unwrap();
    c.bench_function("phi (40,30,20,10)", |b| {
        b.iter(|| phi_of_partition(black_box(&lambda), 4, DEFAULT_PREC).unwrap())
    });
    let gamma = Rational::from((5, 2));
    let eps = Rational::from((1, 10_000));
    c.bench_function("density_scan 5/2", |b| {
        b.iter(|| density_scan(&gamma, &eps, DEFAULT_PREC).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = rank, codimension, cocharacter, phi
}
criterion_main!(benches);
