use criterion::{criterion_group, criterion_main, Criterion};
use hyperlab_core::cohomology::{h2, FiniteModule};
use hyperlab_core::integer_rep::{examples, glz_conjugate, minimality_check, rational_irreducible};
use hyperlab_core::isolation::{standard_candidates, turing_gap};
use hyperlab_core::lie::{corpus, ricci_min};
use hyperlab_core::linalg::{smith_normal_form, IntMatrix};
use hyperlab_core::FiniteGroup;

fn cohomology(c: &mut Criterion) {
    let mut group = c.benchmark_group("h2");
    let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    let cases = [
        ("C6 on Z9", FiniteModule::trivial(FiniteGroup::cyclic(6), vec![9]).unwrap()),
        ("C2 on Z3^2 swap", FiniteModule::from_generators(FiniteGroup::cyclic(2), vec![3, 3], &[(1, swap)]).unwrap()),
        ("S3 on Z3", FiniteModule::trivial(FiniteGroup::symmetric3(), vec![3]).unwrap()),
        ("C12 on Z4", FiniteModule::trivial(FiniteGroup::cyclic(12), vec![4]).unwrap()),
    ];
    for (name, module) in &cases {
        group.bench_function(*name, |bench| bench.iter(|| h2(module).unwrap()));
    }
    group.finish();
}

fn integer_reps(c: &mut Criterion) {
    let mut group = c.benchmark_group("integer_rep");
    group.bench_function("smith 6x6", |bench| {
        let m = IntMatrix::from_rows(&[
            [2, 4, 4, -6, 1, 0],
            [-6, 6, 12, 3, 0, 2],
            [10, -4, -16, 5, 7, 1],
            [1, 1, 1, 1, 1, 1],
            [0, 3, -3, 9, 2, 2],
            [4, 0, 8, -2, 6, 5],
        ]);
        bench.iter(|| smith_normal_form(&m))
    });
    group.bench_function("irreducible beta", |bench| bench.iter(|| rational_irreducible(&examples::beta())));
    group.bench_function("glz beta vs alpha", |bench| {
        bench.iter(|| glz_conjugate(&examples::beta(), &examples::alpha(), 3).unwrap())
    });
    group.bench_function("minimality quarter turn", |bench| bench.iter(|| minimality_check(&examples::quarter_turn()).unwrap()));
    group.finish();
}

fn lie(c: &mut Criterion) {
    let l = corpus::direct_sum(&corpus::su2(), &corpus::su2());
    c.bench_function("ricci_min su2+su2", |bench| bench.iter(|| ricci_min(&l).unwrap()));
}

fn turing(c: &mut Criterion) {
    let mut group = c.benchmark_group("turing");
    group.sample_size(10);
    let candidates = standard_candidates();
    group.bench_function("all candidates mesh 0.1", |bench| bench.iter(|| turing_gap(&candidates, 0.1).unwrap()));
    group.finish();
}

criterion_group!(benches, cohomology, integer_reps, lie, turing);
criterion_main!(benches);
