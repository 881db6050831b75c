use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use mflab_core::*;

fn subset(e: &FactoredEquation, s: &[usize]) -> MatrixFactorization {
    s_ideal(&SubsetModuleSpec::new(e, s).unwrap()).unwrap()
}

fn ext_engines(c: &mut Criterion) {
    let e = FactoredEquation::parse("x*y*(x+y)", None, 32003).unwrap();
    let (a, b) = (subset(&e, &[1]), subset(&e, &[2, 3]));
    let (pa, pb) = (PresentedModule::from_mf(&a), PresentedModule::from_mf(&b));
    let sched = Schedule::curves();
    c.bench_function("ext_periodic curve cold", |bch| {
        bch.iter_batched(
            Engine::default,
            |eng| eng.ext_periodic(&pa, &pb, 1, &sched).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("ext1_cocycle curve", |bch| {
        let eng = Engine::default();
        bch.iter(|| eng.ext1_cocycle_schedule(&a, &b, &sched).unwrap())
    });
    let (fa, fb) = (a.knoerrer("u", "v").unwrap(), b.knoerrer("u", "v").unwrap());
    let (pfa, pfb) = (PresentedModule::from_mf(&fa), PresentedModule::from_mf(&fb));
    let three = Schedule::threefolds();
    c.bench_function("ext_periodic knoerrer lift cold", |bch| {
        bch.iter_batched(
            Engine::default,
            |eng| eng.ext_periodic(&pfa, &pfb, 1, &three).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("torsion_probe tensor", |bch| {
        let eng = Engine::default();
        bch.iter(|| eng.tensor_mcm_check(&pa, &pb, &sched, 1).unwrap())
    });
}

fn polynomial_products(c: &mut Criterion) {
    let e = FactoredEquation::parse("x*y*(x+y)*(x-y)", None, 32003).unwrap();
    let m = subset(&e, &[1, 2])
        .direct_sum(&subset(&e, &[3]))
        .unwrap()
        .knoerrer("u", "v")
        .unwrap();
    c.bench_function("mat_mul 4x4 factorization", |bch| {
        bch.iter(|| m.phi().mat_mul(m.psi()).unwrap())
    });
}

fn ct(c: &mut Criterion) {
    let e = FactoredEquation::parse("x*y*(x+y)", None, 32003).unwrap();
    let cfg = CtConfig::new(&e, 0);
    let mut g = c.benchmark_group("ct_check");
    g.sample_size(10);
    g.bench_function("xy(x+y) omega 1,2,3", |bch| {
        bch.iter_batched(
            Engine::default,
            |eng| ct_check(&eng, &e, &[1, 2, 3], &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, ext_engines, polynomial_products, ct);
criterion_main!(benches);
