use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use diffeo_bench::{delta_product, polynomial_horn, raw_points, square_complex};
use diffeo_core::corpus::expression_corpus;
use diffeo_core::fibrancy::{abelian_horn_filler, halfline_obstruction};
use diffeo_core::realize::realize;
use diffeo_core::simplicial::homology;
use diffeo_core::SimplicialSet;

fn normal_form(c: &mut Criterion) {
    let cx = square_complex();
    let pts = raw_points(&cx, 1024, 1);
    c.bench_function("normal_form/square_1024", |b| {
        b.iter(|| pts.iter().map(|p| cx.normal_form(black_box(p)).expect("normal form").coords[0]).sum::<f64>())
    });
}

fn product(c: &mut Criterion) {
    let mut g = c.benchmark_group("product");
    for (p, q) in [(1, 1), (2, 2), (2, 3)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{p}x{q}")), &(p, q), |b, &(p, q)| {
            b.iter(|| delta_product(black_box(p), black_box(q)))
        });
    }
    g.bench_function("realize_2x2", |b| {
        let s = delta_product(2, 2);
        b.iter(|| realize(black_box(&s)))
    });
    g.finish();
}

fn homology_bench(c: &mut Criterion) {
    let sphere = SimplicialSet::boundary_delta(4).expect("∂Δ⁴");
    let prod = delta_product(2, 2);
    c.bench_function("homology/boundary4_h3", |b| b.iter(|| homology(black_box(&sphere), 3)));
    c.bench_function("homology/delta2xdelta2_h2", |b| b.iter(|| homology(black_box(&prod), 2)));
}

fn jets(c: &mut Criterion) {
    let corpus = expression_corpus();
    let mut g = c.benchmark_group("jets");
    for name in ["section_c", "sphere_collapse_homotopy", "pair_product_h"] {
        let e = corpus.iter().find(|e| e.name == name).expect("corpus entry");
        let x = vec![0.5 * (e.lo + e.hi) + 0.01; e.map.arity_in];
        g.bench_function(name, |b| b.iter(|| e.map.eval_jet2(black_box(&x)).expect("jet")));
    }
    g.finish();
    c.bench_function("halfline_obstruction", |b| b.iter(halfline_obstruction));
}

fn filler(c: &mut Criterion) {
    let mut g = c.benchmark_group("filler");
    for n in 2..=4 {
        let f = polynomial_horn(n, 7);
        g.bench_with_input(BenchmarkId::new("build", n), &f, |b, f| b.iter(|| abelian_horn_filler(black_box(f))));
        let ft = abelian_horn_filler(&f).expect("filler");
        let x = vec![0.3; n];
        g.bench_with_input(BenchmarkId::new("eval", n), &ft, |b, ft| b.iter(|| ft.eval(black_box(&x))));
    }
    g.finish();
}

criterion_group!(benches, normal_form, product, homology_bench, jets, filler);
criterion_main!(benches);
