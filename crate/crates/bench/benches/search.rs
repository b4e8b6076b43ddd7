use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minifix_bench::fixture;
use minifix_core::search::{top_k, Mode, Query};

fn search(c: &mut Criterion) {
    let f = fixture(1000, 10, 11);
    let mut group = c.benchmark_group("top5");
    group.sample_size(10);
    for mode in Mode::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(mode), &mode, |b, &mode| {
            b.iter(|| {
                for pe in &f.submissions {
                    let q = Query::new(pe, f.index.q);
                    top_k(&q, &f.index, 5, mode).unwrap();
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
