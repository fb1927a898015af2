use std::hint::black_box;
use std::sync::Arc;

use beauville_core::constructions::Abelian;
use beauville_core::criteria::classify;
use beauville_core::engine::{beauville_search_exhaustive, beauville_verify, beauville_verify_literal};
use beauville_core::family::{realize, Family, GroupSpec};
use beauville_core::nottingham::{realize_quotient, standard_structure, QuotientSpec};
use beauville_core::pc::Builtin;
use beauville_core::{Config, Group};
use criterion::{criterion_group, criterion_main, Criterion};

fn abelian(n: u32) -> Group {
    let a = Arc::new(Abelian::new(n));
    Group::realize(a.clone(), a.generators(), vec!["a".into(), "b".into()], Config::default()).unwrap()
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);
    for n in [7, 13] {
        group.bench_function(format!("C{n}xC{n}"), |b| b.iter(|| beauville_search_exhaustive(black_box(&abelian(n)))));
    }
    let h = Family::Pc { file: None, source: None, builtin: Some(Builtin::H34 { p: 5, r: 1 }) };
    group.bench_function("H3 p=5", |b| {
        b.iter(|| {
            let g = realize(&GroupSpec::from(h.clone())).unwrap().group;
            beauville_search_exhaustive(&g)
        })
    });
    group.finish();
}

fn verify(c: &mut Criterion) {
    let (q, g) = realize_quotient(QuotientSpec::Full { p: 5, k: 6 }, Config::default()).unwrap();
    let s = standard_structure(&q, &g);
    g.socle_index();
    c.bench_function("verify signature N/N_6", |b| b.iter(|| beauville_verify(&g, black_box(s.pair1), s.pair2)));
    c.bench_function("verify literal N/N_6", |b| b.iter(|| beauville_verify_literal(&g, black_box(s.pair1), s.pair2)));
}

fn criteria(c: &mut Criterion) {
    let g = realize(&GroupSpec::from(Family::PkQuotient { p: 5, k: 1, s: 4 })).unwrap().group;
    let mut group = c.benchmark_group("criteria");
    group.sample_size(10);
    group.bench_function("classify P_1 s=4", |b| b.iter(|| classify(black_box(&g))));
    group.finish();
}

criterion_group!(benches, exhaustive, verify, criteria);
criterion_main!(benches);
