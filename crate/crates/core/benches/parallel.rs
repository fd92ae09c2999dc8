//! Parallel versus sequential execution of the heavier exact checks.
//!
//! `par::set_parallel` flips every helper in `d2kit::par` between the rayon
//! pool and the calling thread; results are identical on both paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use d2kit::bialgebroid::{build_t_bialgebroid, verify_right_bialgebroid};
use d2kit::coalgebra::cod2_check;
use d2kit::depth_two::{d2_check, Side};
use d2kit::fixtures::{coalgebra_fixture, extension_fixture};
use d2kit::par::set_parallel;

const PATHS: [(&str, bool); 2] = [("parallel", true), ("sequential", false)];

fn d2_verdicts(c: &mut Criterion) {
    let mut group = c.benchmark_group("d2_both_sides");
    group.sample_size(10);
    for name in ["s3_a3", "s3_c2", "q_m2"] {
        let ext = extension_fixture(name).unwrap().build().unwrap();
        for (path, on) in PATHS {
            group.bench_with_input(BenchmarkId::new(path, name), &ext, |b, ext| {
                set_parallel(on);
                b.iter(|| (d2_check(ext, Side::Left).unwrap().0, d2_check(ext, Side::Right).unwrap().0));
            });
        }
    }
    set_parallel(true);
    group.finish();
}

fn t_bialgebroid_axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("t_bialgebroid_axioms");
    group.sample_size(10);
    let ext = extension_fixture("s3_a3").unwrap().build().unwrap();
    let qb = d2_check(&ext, Side::Right).unwrap().1.unwrap();
    let t = build_t_bialgebroid(&ext, &qb).unwrap();
    for (path, on) in PATHS {
        group.bench_function(BenchmarkId::new(path, "s3_a3"), |b| {
            set_parallel(on);
            b.iter(|| verify_right_bialgebroid(&t).unwrap().passed());
        });
    }
    set_parallel(true);
    group.finish();
}

fn cod2_verdicts(c: &mut Criterion) {
    let mut group = c.benchmark_group("cod2_left");
    group.sample_size(10);
    let g = coalgebra_fixture("h4_quotient").unwrap();
    for (path, on) in PATHS {
        group.bench_function(BenchmarkId::new(path, "h4_quotient"), |b| {
            set_parallel(on);
            b.iter(|| cod2_check(&g, Side::Left).unwrap().0);
        });
    }
    set_parallel(true);
    group.finish();
}

criterion_group!(benches, d2_verdicts, t_bialgebroid_axioms, cod2_verdicts);
criterion_main!(benches);
