use criterion::{criterion_group, criterion_main, Criterion};
use minifix_bench::fixture;
use minifix_core::pipeline::{repair_ast, RepairConfig};
use minifix_core::repair::MinimizeConfig;

fn repair(c: &mut Criterion) {
    let f = fixture(200, 20, 11);
    let mut group = c.benchmark_group("repair");
    group.sample_size(10);
    let f = &f;
    let run = |cfg: RepairConfig| {
        move || {
            for pe in &f.submissions {
                let _ = repair_ast(pe, &f.index, &f.suite, &cfg);
            }
        }
    };
    let default = RepairConfig::default();
    let unpruned = RepairConfig {
        minimize: MinimizeConfig {
            prune: false,
            group: false,
            ..MinimizeConfig::default()
        },
        ..default
    };
    group.bench_function("default", |b| b.iter(run(default)));
    group.bench_function("no_prune_no_group", |b| b.iter(run(unpruned)));
    group.finish();
}

criterion_group!(benches, repair);
criterion_main!(benches);
