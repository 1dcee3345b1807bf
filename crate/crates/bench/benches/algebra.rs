use std::sync::Arc;

use cobweb::oracle::{counts_to, ChainKind};
use cobweb::{formulas, CobwebSequence, FinitePoset, IncidenceFunction, Vertex};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn poset(seq: CobwebSequence, n: usize) -> Arc<FinitePoset> {
    Arc::new(FinitePoset::build(seq, n).unwrap())
}

fn convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for n in [4, 5, 6] {
        let p = poset(CobwebSequence::pow2(), n);
        let zeta = IncidenceFunction::zeta(&p);
        let mu = zeta.invert().unwrap();
        group.bench_with_input(BenchmarkId::new("zeta*zeta", p.nu()), &zeta, |b, z| {
            b.iter(|| z.convolve(black_box(z)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("zeta*mu", p.nu()), &(zeta.clone(), mu), |b, (z, m)| {
            b.iter(|| z.convolve(black_box(m)).unwrap())
        });
    }
    group.finish();
}

// Iterated multiplication versus repeated squaring for eta^k.
fn powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("eta_power");
    let p = poset(CobwebSequence::naturals(), 10);
    let eta = IncidenceFunction::eta(&p);
    for k in [2usize, 5, 10] {
        group.bench_with_input(BenchmarkId::new("iterated", k), &k, |b, &k| b.iter(|| eta.power(black_box(k))));
        group.bench_with_input(BenchmarkId::new("squaring", k), &k, |b, &k| {
            b.iter(|| eta.power_by_squaring(black_box(k)))
        });
    }
    group.finish();
}

fn inversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("invert");
    for n in [4, 5, 6] {
        let p = poset(CobwebSequence::pow2(), n);
        let kernel = IncidenceFunction::chain_kernel(&p);
        group.bench_with_input(BenchmarkId::new("2delta-zeta", p.nu()), &kernel, |b, f| b.iter(|| f.invert().unwrap()));
    }
    group.finish();
}

// Closed form versus brute-force enumeration for all chains root -> top.
fn chain_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_chains_root_to_top");
    for n in [5, 6, 7] {
        let p = poset(CobwebSequence::pow2(), n);
        let top = Vertex::new(1, n);
        group.bench_with_input(BenchmarkId::new("closed_form", n), &p, |b, p| {
            b.iter(|| formulas::count_all_chains(p, Vertex::ROOT, black_box(top)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("enumeration", n), &p, |b, p| {
            b.iter(|| counts_to(p, black_box(top), ChainKind::AllChains).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, convolution, powers, inversion, chain_counting);
criterion_main!(benches);
