use mflab_core::suite::random_factorization;
use mflab_core::tools::{add_membership, iso_test};
use mflab_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u64 = 32003;

fn ring() -> RingCtx {
    RingCtx::new(&["x", "y", "z"], P).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Vec<(u16, u16, u16, u32)>> {
    prop::collection::vec((0u16..=3, 0u16..=3, 0u16..=3, 0u32..P as u32), 0..4)
        .prop_map(|ts| ts.into_iter().filter(|(a, b, c, _)| a + b + c <= 3).collect())
}

fn to_poly(ctx: &RingCtx, terms: &[(u16, u16, u16, u32)]) -> Poly {
    Poly::from_terms(
        ctx,
        terms.iter().map(|&(a, b, c, k)| (Monomial::from_exps(&[a, b, c]), k)),
    )
}

fn to_matrix(ctx: &RingCtx, rows: usize, cols: usize, e: &[Vec<(u16, u16, u16, u32)>]) -> PolyMatrix {
    let rows: Vec<Vec<Poly>> = (0..rows)
        .map(|i| (0..cols).map(|j| to_poly(ctx, &e[i * cols + j])).collect())
        .collect();
    PolyMatrix::from_rows(ctx, rows).unwrap()
}

fn triple() -> impl Strategy<Value = (usize, usize, usize, usize, Vec<Vec<(u16, u16, u16, u32)>>)> {
    (1usize..=4, 1usize..=4, 1usize..=4, 1usize..=4).prop_flat_map(|(a, b, c, d)| {
        (
            Just(a),
            Just(b),
            Just(c),
            Just(d),
            prop::collection::vec(poly_strategy(), a * b + b * c + c * d),
        )
    })
}

fn subset_module(e: &FactoredEquation, s: &[usize]) -> MatrixFactorization {
    s_ideal(&SubsetModuleSpec::new(e, s).unwrap()).unwrap()
}

fn nested(i: &[usize], j: &[usize]) -> bool {
    i.iter().all(|a| j.contains(a)) || j.iter().all(|b| i.contains(b))
}

/// Three pairwise non-proportional lines through the origin.
fn three_lines() -> impl Strategy<Value = String> {
    prop::collection::vec((1u32..50, 1u32..50), 3)
        .prop_filter("distinct slopes", |ls| {
            (0..3).all(|i| (i + 1..3).all(|j| (ls[i].0 * ls[j].1) % P as u32 != (ls[i].1 * ls[j].0) % P as u32))
        })
        .prop_map(|ls| {
            ls.iter()
                .map(|(a, b)| format!("({a}*x+{b}*y)"))
                .collect::<Vec<_>>()
                .join("*")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mat_mul_is_associative((a, b, c, d, entries) in triple()) {
        let ctx = ring();
        let x = to_matrix(&ctx, a, b, &entries[..a * b]);
        let y = to_matrix(&ctx, b, c, &entries[a * b..a * b + b * c]);
        let z = to_matrix(&ctx, c, d, &entries[a * b + b * c..]);
        let left = x.mat_mul(&y).unwrap().mat_mul(&z).unwrap();
        let right = x.mat_mul(&y.mat_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constructors_preserve_validity(seed in any::<u64>()) {
        let e = FactoredEquation::parse("x*y*(x+y)", None, P).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mf = random_factorization(&e, &mut rng).unwrap();
        prop_assert!(mf.validate().is_valid());
        prop_assert!(mf.knoerrer("u", "v").unwrap().validate().is_valid());
        prop_assert!(mf.syzygy().validate().is_valid());
        prop_assert!(mf.dual().validate().is_valid());
        prop_assert_eq!(mf.syzygy().syzygy(), mf.clone());
        prop_assert_eq!(mf.dual().dual(), mf);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn vanishing_is_nested_and_symmetric(f in three_lines()) {
        let e = FactoredEquation::parse(&f, None, P).unwrap();
        let engine = Engine::default();
        let sched = Schedule::curves();
        let subs = e.all_subsets();
        for i in &subs {
            for j in &subs {
                let (a, b) = (PresentedModule::from_mf(&subset_module(&e, i)), PresentedModule::from_mf(&subset_module(&e, j)));
                let fwd = engine.ext_periodic(&a, &b, 1, &sched).unwrap().vanishes();
                let back = engine.ext_periodic(&b, &a, 1, &sched).unwrap().vanishes();
                prop_assert_eq!(fwd, Some(nested(i, j)));
                prop_assert_eq!(fwd, back);
            }
        }
    }

    #[test]
    fn periodicity_and_syzygy_shift(i in 0usize..7, j in 0usize..7) {
        let e = FactoredEquation::parse("x*y*(x+y)", None, P).unwrap();
        let subs = e.all_subsets();
        let engine = Engine::default();
        let sched = Schedule::curves();
        let m = subset_module(&e, &subs[i]);
        let n = PresentedModule::from_mf(&subset_module(&e, &subs[j]));
        let pm = PresentedModule::from_mf(&m);
        let e1 = engine.ext_periodic(&pm, &n, 1, &sched).unwrap().stable();
        let e3 = engine.ext_periodic(&pm, &n, 3, &sched).unwrap().stable();
        let shifted = engine.ext_periodic(&PresentedModule::from_mf(&m.syzygy()), &n, 2, &sched).unwrap().stable();
        prop_assert!(e1.is_some());
        prop_assert_eq!(e1, e3);
        prop_assert_eq!(e1, shifted);
    }

    #[test]
    fn iso_is_reflexive_symmetric_and_sees_double_duals(i in 0usize..7, j in 0usize..7) {
        let e = FactoredEquation::parse("x*y*(x+y)", None, P).unwrap();
        let subs = e.all_subsets();
        let engine = Engine::default();
        let cfg = ToolConfig::new(Some(&e), 3);
        let a = subset_module(&e, &subs[i]);
        let b = subset_module(&e, &subs[j]);
        let (pa, pb) = (PresentedModule::from_mf(&a), PresentedModule::from_mf(&b));
        prop_assert_eq!(iso_test(&engine, &pa, &pa, &cfg).unwrap().verdict, IsoVerdict::Isomorphic);
        let dd = PresentedModule::from_mf(&a.dual().dual());
        prop_assert_eq!(iso_test(&engine, &pa, &dd, &cfg).unwrap().verdict, IsoVerdict::Isomorphic);
        let ab = iso_test(&engine, &pa, &pb, &cfg).unwrap();
        let ba = iso_test(&engine, &pb, &pa, &cfg).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        prop_assert_eq!(ab.verdict == IsoVerdict::Isomorphic, i == j);
        if ab.verdict == IsoVerdict::Isomorphic {
            prop_assert!(ab.forward.is_some() && ab.backward.is_some());
        }
    }

    #[test]
    fn membership_is_monotone(i in 0usize..7, j in 0usize..7) {
        let e = FactoredEquation::parse("x*y*(x+y)", None, P).unwrap();
        let subs = e.all_subsets();
        let engine = Engine::default();
        let cfg = ToolConfig::new(Some(&e), 5);
        let x = PresentedModule::from_mf(&subset_module(&e, &subs[i]));
        let y = PresentedModule::from_mf(&subset_module(&e, &subs[j]));
        prop_assert_eq!(add_membership(&engine, &x, &x, &cfg).unwrap().verdict, Membership::Member);
        let sum = x.direct_sum(&y).unwrap();
        prop_assert_eq!(add_membership(&engine, &x, &sum, &cfg).unwrap().verdict, Membership::Member);
    }
}
