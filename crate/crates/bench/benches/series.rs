use std::hint::black_box;

use beauville_core::lazard::{builtin_lie, LieBuiltin};
use beauville_core::nottingham::{a_series, b_series, TruncSeries};
use criterion::{criterion_group, criterion_main, Criterion};

fn nottingham(c: &mut Criterion) {
    for (p, k) in [(3, 15), (5, 30)] {
        let (a, b) = (a_series(p, k).unwrap(), b_series(p, k).unwrap());
        let ab: TruncSeries = a.compose(&b).unwrap();
        c.bench_function(&format!("compose p={p} k={k}"), |bn| bn.iter(|| black_box(&a).compose(black_box(&b))));
        c.bench_function(&format!("power p={p} k={k}"), |bn| bn.iter(|| black_box(&ab).pow(p as u64 * p as u64)));
        c.bench_function(&format!("commutator p={p} k={k}"), |bn| bn.iter(|| black_box(&a).commutator(&b)));
    }
}

fn lazard(c: &mut Criterion) {
    let ring = builtin_lie(LieBuiltin::L2, 7).unwrap();
    let x: Vec<u64> = (0..ring.dim() as u64).map(|i| i + 1).collect();
    let y: Vec<u64> = (0..ring.dim() as u64).map(|i| 3 * i + 2).collect();
    c.bench_function("bch L2 p=7", |b| b.iter(|| ring.bch(black_box(&x), black_box(&y))));
}

criterion_group!(benches, nottingham, lazard);
criterion_main!(benches);
