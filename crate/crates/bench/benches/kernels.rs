use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fekete_dyn::dynamics::{brolin_sample, DynGreenEvaluator, DEFAULT_BURN_IN};
use fekete_dyn::metric::{klimek_distance, GreenPair, GreenSide};
use fekete_dyn::polyarith::{chebyshev_monic, cyclotomic, int_roots, RootConfig};
use fekete_dyn::potential::{capacity_estimate, CompactSetModel};
use fekete_dyn::{Complex64, ComplexPolynomial};

fn roots(c: &mut Criterion) {
    let config = RootConfig::default();
    let phi = cyclotomic(101);
    c.bench_function("roots/cyclotomic_101", |b| {
        b.iter(|| int_roots(black_box(&phi), &config).unwrap())
    });
    let t = chebyshev_monic(64);
    c.bench_function("roots/chebyshev_64", |b| {
        b.iter(|| int_roots(black_box(&t), &config).unwrap())
    });
}

fn dyn_green(c: &mut Criterion) {
    let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[-1.0, 0.0, 1.0])).unwrap();
    let pts: Vec<Complex64> = (0..1024)
        .map(|k| Complex64::from_polar(1.5, k as f64 * 0.0061))
        .collect();
    c.bench_function("dyn_green/basilica_1024", |b| {
        b.iter(|| pts.iter().map(|&z| e.green(black_box(z))).sum::<f64>())
    });
}

fn brolin(c: &mut Criterion) {
    let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0])).unwrap();
    c.bench_function("brolin/chebyshev_4096", |b| {
        b.iter(|| brolin_sample(&e, 4096, DEFAULT_BURN_IN, black_box(1)).unwrap())
    });
}

fn klimek(c: &mut Criterion) {
    let e = DynGreenEvaluator::new(&ComplexPolynomial::from_real(&[-2.0, 0.0, 1.0])).unwrap();
    let pair = GreenPair {
        left: GreenSide::julia(e, 4096, 0).unwrap(),
        right: CompactSetModel::interval(-2.0, 2.0).unwrap().into(),
    };
    c.bench_function("klimek/chebyshev_vs_interval", |b| {
        b.iter(|| klimek_distance(black_box(&pair)).unwrap())
    });
}

fn fekete(c: &mut Criterion) {
    let square = CompactSetModel::polyline(vec![
        Complex64::new(-1.0, -1.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(-1.0, 1.0),
    ])
    .unwrap();
    c.bench_function("fekete/square_64", |b| {
        b.iter(|| capacity_estimate(black_box(&square), 64).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = roots, dyn_green, brolin, klimek, fekete
}
criterion_main!(benches);
