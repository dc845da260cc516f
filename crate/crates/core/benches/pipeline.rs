use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use g2dtg::par::Execution;
use g2dtg::pipeline::{Case, Pipeline, XFilter};

fn pipeline(exec: Execution) -> Pipeline {
    let mut p = Pipeline::default();
    p.options.execution = exec;
    p
}

const PATHS: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn analyze(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    for (case, lo, hi) in [(Case::Subfield, 1, 6), (Case::Ree, 0, 10)] {
        for (name, exec) in PATHS {
            let p = pipeline(exec);
            group.bench_with_input(
                BenchmarkId::new(name, format!("{case} {lo}..{hi}")),
                &(lo, hi),
                |b, &(lo, hi)| b.iter(|| p.analyze(case, black_box(lo..=hi), &XFilter::All).unwrap()),
            );
        }
    }
    group.finish();
}

fn verify_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_tables");
    for case in [Case::Subfield, Case::Ree] {
        let values: Vec<BigInt> = (case.min_n()..=12)
            .map(|n| Pipeline::default().table(case).family.params(n).unwrap().param().clone())
            .collect();
        for (name, exec) in PATHS {
            let p = pipeline(exec);
            group.bench_with_input(BenchmarkId::new(name, case), &values, |b, v| {
                b.iter(|| p.verify_tables(case, black_box(v), true).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, analyze, verify_tables);
criterion_main!(benches);
