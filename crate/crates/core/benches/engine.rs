use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use m1plus::exact::{int, rat};
use m1plus::hvec::{default_grounds, test_basis, verify_h_commutation, verify_mutual_commutation};
use m1plus::par;
use m1plus::zhu::{Ambient, OvSpace};

fn modes(c: &mut Criterion) {
    let states = test_basis(&default_grounds(&[int(0), rat(3, 2)]), &int(5));
    let mut group = c.benchmark_group("hcomm-r3-weight5");
    group.sample_size(10);
    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            par::set_parallel(p);
            b.iter(|| verify_h_commutation(3, 3, &states).unwrap());
        });
    }
    group.finish();

    let mut group = c.benchmark_group("mutual-r3-weight5");
    group.sample_size(10);
    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            par::set_parallel(p);
            b.iter(|| verify_mutual_commutation(3, &states).unwrap());
        });
    }
    group.finish();
    par::set_parallel(true);
}

fn membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("ov-space-w8");
    group.sample_size(10);
    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &p| {
            par::set_parallel(p);
            b.iter(|| {
                let mut space = OvSpace::new(Ambient::FixedPoints);
                space.extend_to(8).unwrap();
                space.rank()
            });
        });
    }
    group.finish();
    par::set_parallel(true);
}

criterion_group!(benches, modes, membership);
criterion_main!(benches);
