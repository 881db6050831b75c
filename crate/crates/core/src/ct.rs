//! Cluster-tilting checks for reduced plane curves `f = f₁⋯fₙ`: the nested
//! objects `S^ω`, rigidity, catalog-level verification and the witness that
//! refutes cluster tilting when some factor is singular.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::{ExtResult, Schedule, StableDim};
use crate::mf::{s_ideal, FactoredEquation, MatrixFactorization, MfJson, SubsetModuleSpec};
use crate::poly::{Monomial, Poly, PolyMatrix};
use crate::tools::{add_membership, module_rank_vector, Membership, ToolConfig};
use crate::trunc::{Engine, PresentedModule};

/// Per-factor smoothness: `f_i ∉ m²`.
pub fn check_factor_smooth(eq: &FactoredEquation) -> Result<Vec<bool>> {
    if eq.ctx().nvars() != 2 {
        return Err(Error::Precondition(
            "factor smoothness is defined for plane curves".into(),
        ));
    }
    eq.factors().iter().map(|f| Ok(!f.linear_part()?.is_zero())).collect()
}

/// Vanishing of `Ext¹(S_I, S_J)` predicted by nestedness.
pub fn ext_oracle_nested(i: &[usize], j: &[usize]) -> bool {
    i.iter().all(|a| j.contains(a)) || j.iter().all(|b| i.contains(b))
}

fn check_permutation(omega: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if omega.len() != n {
        return Err(Error::Precondition(format!(
            "omega has {} entries, expected {n}",
            omega.len()
        )));
    }
    for &w in omega {
        if w == 0 || w > n || seen[w - 1] {
            return Err(Error::Precondition(format!("omega is not a permutation of 1..={n}")));
        }
        seen[w - 1] = true;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct OmegaObject {
    pub eq: FactoredEquation,
    pub omega: Vec<usize>,
    /// `{ω(1), …, ω(i)}` for `i = 1..n`, sorted.
    pub subsets: Vec<Vec<usize>>,
    pub summands: Vec<MatrixFactorization>,
}

impl OmegaObject {
    pub fn labels(&self) -> Vec<String> {
        self.subsets
            .iter()
            .map(|s| {
                SubsetModuleSpec::new(&self.eq, s)
                    .map(|x| x.label())
                    .unwrap_or_default()
            })
            .collect()
    }

    pub fn summand_modules(&self) -> Vec<PresentedModule> {
        self.summands.iter().map(PresentedModule::from_mf).collect()
    }

    pub fn module(&self) -> PresentedModule {
        PresentedModule::from_mf(&MatrixFactorization::direct_sum_all(&self.summands).expect("n >= 1"))
    }
}

pub fn build_s_omega(eq: &FactoredEquation, omega: &[usize]) -> Result<OmegaObject> {
    let n = eq.len();
    check_permutation(omega, n)?;
    let mut subsets = Vec::with_capacity(n);
    let mut summands = Vec::with_capacity(n);
    for i in 1..=n {
        let mut s = omega[..i].to_vec();
        s.sort_unstable();
        summands.push(s_ideal(&SubsetModuleSpec::new(eq, &s)?)?);
        subsets.push(s);
    }
    // basic: summands are separated by their generic ranks along the factors
    let ranks: Vec<Vec<usize>> = summands
        .iter()
        .map(|m| module_rank_vector(&PresentedModule::from_mf(m), eq, 3, 0))
        .collect::<Result<_>>()?;
    for a in 0..n {
        for b in a + 1..n {
            if ranks[a] == ranks[b] {
                return Err(Error::Precondition("S^omega is not basic".into()));
            }
        }
    }
    Ok(OmegaObject {
        eq: eq.clone(),
        omega: omega.to_vec(),
        subsets,
        summands,
    })
}

/// The non-free MCM module `(x, y)` over `S/(g)` for `g ∈ m²`, as the
/// factorization `([x, -b; y, a], [a, b; -y, x])` with `g = x·a + y·b`.
pub fn maximal_ideal_mf(g: &Poly) -> Result<MatrixFactorization> {
    let ctx = g.ctx();
    if ctx.nvars() != 2 {
        return Err(Error::Precondition("maximal ideal module needs a plane curve".into()));
    }
    if g.constant_term() != 0 {
        return Err(Error::NonLocal(g.to_string()));
    }
    if !g.linear_part()?.is_zero() {
        return Err(Error::NoWitness(format!("factor {g} is smooth")));
    }
    let x = Monomial::var(0);
    let y = Monomial::var(1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, &c) in g.terms() {
        if x.divides(m) {
            a.push((m.div(&x).expect("divisible"), c));
        } else {
            b.push((m.div(&y).expect("pure power of y"), c));
        }
    }
    let (a, b) = (Poly::from_terms(ctx, a), Poly::from_terms(ctx, b));
    let xv = Poly::var(ctx, 0);
    let yv = Poly::var(ctx, 1);
    let phi = PolyMatrix::from_rows(ctx, vec![vec![xv.clone(), -&b], vec![yv.clone(), a.clone()]])?;
    let psi = PolyMatrix::from_rows(ctx, vec![vec![a, b], vec![-&yv, xv]])?;
    let mf = MatrixFactorization::new(g.clone(), phi, psi)?;
    if mf.phi().constant_part().rank() != 0 || mf.psi().constant_part().rank() != 0 {
        return Err(Error::NoWitness("maximal ideal presentation degenerate".into()));
    }
    Ok(mf)
}

/// `M = syz_R N` where `N` is the maximal ideal module over `S/(f_i)`,
/// lifted to `f` by multiplying the complementary factors into `ψ`.
pub fn witness_non_ct(eq: &FactoredEquation, bad_index: usize) -> Result<PresentedModule> {
    let n = eq.len();
    if bad_index == 0 || bad_index > n {
        return Err(Error::BadSubset(format!("factor {bad_index} outside 1..={n}")));
    }
    let mut omega: Vec<usize> = (1..=n).filter(|&i| i != bad_index).collect();
    omega.push(bad_index);
    witness_for_omega(eq, &omega, bad_index)
}

/// Witness adapted to `S^ω`: with `A` the factors before `bad_index` in `ω`
/// and `B` those after it, `M = (f_A·ψ_N, f_B·φ_N)`. When the singular factor
/// comes last this is `syz_R N` as in [`witness_non_ct`].
pub fn witness_for_omega(eq: &FactoredEquation, omega: &[usize], bad_index: usize) -> Result<PresentedModule> {
    check_permutation(omega, eq.len())?;
    if bad_index == 0 || bad_index > eq.len() {
        return Err(Error::BadSubset(format!("factor {bad_index} outside 1..={}", eq.len())));
    }
    let pos = omega.iter().position(|&w| w == bad_index).expect("permutation");
    let g = &eq.factors()[bad_index - 1];
    let n_mf = maximal_ideal_mf(g)?;
    let fa = eq.subset_product(&omega[..pos]);
    let fb = eq.subset_product(&omega[pos + 1..]);
    let phi = n_mf.psi().scale(&fa);
    let psi = n_mf.phi().scale(&fb);
    let m = MatrixFactorization::new(eq.product(), phi, psi)?;
    Ok(PresentedModule::from_mf(&m))
}

#[derive(Debug, Clone)]
pub struct CtConfig {
    pub schedule: Schedule,
    /// Run the cocycle engine beside the periodic one.
    pub two_engines: bool,
    pub tools: ToolConfig,
}

impl CtConfig {
    pub fn new(eq: &FactoredEquation, seed: u64) -> Self {
        Self {
            schedule: Schedule::for_vars(eq.ctx().nvars()),
            two_engines: true,
            tools: ToolConfig::new(Some(eq), seed),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtPair {
    pub source: String,
    pub target: String,
    pub periodic: ExtResult,
    pub cocycle: Option<ExtResult>,
    /// Nestedness prediction, when both sides are subset modules.
    pub oracle_vanishes: Option<bool>,
    pub engines_agree: bool,
    pub oracle_agrees: bool,
}

/// `Ext¹(m, n)` with both engines, checked against the nestedness oracle.
pub fn ext_pair(
    engine: &Engine,
    m: (&str, &PresentedModule),
    n: (&str, &PresentedModule),
    oracle: Option<bool>,
    cfg: &CtConfig,
) -> Result<ExtPair> {
    let periodic = engine.ext_periodic(m.1, n.1, 1, &cfg.schedule)?;
    let cocycle = if cfg.two_engines {
        Some(engine.ext1_cocycle_schedule(m.1.require_mf()?, n.1.require_mf()?, &cfg.schedule)?)
    } else {
        None
    };
    let engines_agree = cocycle.as_ref().is_none_or(|c| c.stable_dim == periodic.stable_dim);
    let oracle_agrees = oracle.is_none_or(|o| periodic.vanishes() == Some(o));
    Ok(ExtPair {
        source: m.0.into(),
        target: n.0.into(),
        periodic,
        cocycle,
        oracle_vanishes: oracle,
        engines_agree,
        oracle_agrees,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub rigid: Option<bool>,
    pub pairs: Vec<ExtPair>,
    pub engine_faults: Vec<String>,
}

pub fn rigidity_check(engine: &Engine, obj: &OmegaObject, cfg: &CtConfig) -> Result<RigidityReport> {
    let labels = obj.labels();
    let mods = obj.summand_modules();
    let mut pairs = Vec::new();
    let mut faults = Vec::new();
    for a in 0..mods.len() {
        for b in 0..mods.len() {
            let oracle = ext_oracle_nested(&obj.subsets[a], &obj.subsets[b]);
            let pr = ext_pair(
                engine,
                (&labels[a], &mods[a]),
                (&labels[b], &mods[b]),
                Some(oracle),
                cfg,
            )?;
            if !pr.engines_agree {
                faults.push(format!("engines disagree on Ext1({}, {})", labels[a], labels[b]));
            }
            if !pr.oracle_agrees {
                faults.push(format!(
                    "nestedness oracle disagrees on Ext1({}, {})",
                    labels[a], labels[b]
                ));
            }
            pairs.push(pr);
        }
    }
    let rigid = if pairs.iter().any(|p| p.periodic.stable().is_none()) {
        None
    } else {
        Some(pairs.iter().all(|p| p.periodic.stable() == Some(0)))
    };
    Ok(RigidityReport {
        rigid,
        pairs,
        engine_faults: faults,
    })
}

#[derive(Debug, Clone)]
pub struct CatalogModule {
    pub label: String,
    pub module: PresentedModule,
    /// Subset when the module is some `S_I`.
    pub subset: Option<Vec<usize>>,
}

/// All `S_I` (with `R`), `S^ω`, one non-nested sum, and for each singular
/// factor the adapted witness and its syzygy.
pub fn default_catalog(eq: &FactoredEquation, omega: &[usize]) -> Result<Vec<CatalogModule>> {
    let mut out = Vec::new();
    for s in eq.all_subsets() {
        let spec = SubsetModuleSpec::new(eq, &s)?;
        out.push(CatalogModule {
            label: spec.label(),
            module: PresentedModule::from_mf(&s_ideal(&spec)?),
            subset: Some(s),
        });
    }
    let obj = build_s_omega(eq, omega)?;
    out.push(CatalogModule {
        label: "S^omega".into(),
        module: obj.module(),
        subset: None,
    });
    if eq.len() >= 2 {
        let a = &out[0];
        let b = &out[1];
        out.push(CatalogModule {
            label: format!("{}+{}", a.label, b.label),
            module: a.module.direct_sum(&b.module)?,
            subset: None,
        });
    }
    if eq.ctx().nvars() == 2 {
        for (i, smooth) in check_factor_smooth(eq)?.into_iter().enumerate() {
            if !smooth {
                let w = witness_for_omega(eq, omega, i + 1)?;
                let syz = PresentedModule::from_mf(&w.require_mf()?.syzygy());
                out.push(CatalogModule {
                    label: format!("W{}", i + 1),
                    module: w,
                    subset: None,
                });
                out.push(CatalogModule {
                    label: format!("syz W{}", i + 1),
                    module: syz,
                    subset: None,
                });
            }
        }
    }
    Ok(out)
}

fn sum_stable(rs: &[ExtPair]) -> StableDim {
    rs.iter()
        .try_fold(0usize, |acc, r| r.periodic.stable().map(|d| acc + d))
        .map_or(StableDim::Unstable, StableDim::Stable)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub label: String,
    pub module: MfJson,
    /// `Ext¹(S^ω_i, X)` per summand.
    pub ext_from_object: Vec<ExtPair>,
    /// `Ext¹(X, S^ω_i)` per summand.
    pub ext_to_object: Vec<ExtPair>,
    pub ext_m_x: StableDim,
    pub ext_x_m: StableDim,
    pub both_vanish: Option<bool>,
    pub membership: Membership,
    /// `both vanish ⇔ member`, or `None` when either side is undecided.
    pub biconditional: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CtOverall {
    ClusterTiltingOnCatalog,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Refutation {
    pub label: String,
    pub module: MfJson,
    pub ext_m_x: StableDim,
    pub ext_x_m: StableDim,
    pub membership: Membership,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntry>,
    pub refutation: Option<Refutation>,
    pub engine_faults: Vec<String>,
    pub overall: CtOverall,
}

/// Checks `Ext¹(X, M) = 0 = Ext¹(M, X) ⇔ X ∈ add(M)` for every catalog entry.
pub fn ct_catalog_check(
    engine: &Engine,
    obj: &OmegaObject,
    catalog: &[CatalogModule],
    cfg: &CtConfig,
) -> Result<CatalogReport> {
    let labels = obj.labels();
    let mods = obj.summand_modules();
    let m = obj.module();
    let mut entries = Vec::new();
    let mut faults = Vec::new();
    let mut refutation = None;
    let mut undecided = false;
    for x in catalog {
        if x.module.ctx() != m.ctx() || x.module.f() != m.f() {
            return Err(Error::ContextMismatch);
        }
        let mut from = Vec::new();
        let mut to = Vec::new();
        for (i, s) in mods.iter().enumerate() {
            let oracle = x.subset.as_ref().map(|xs| ext_oracle_nested(&obj.subsets[i], xs));
            from.push(ext_pair(engine, (&labels[i], s), (&x.label, &x.module), oracle, cfg)?);
            to.push(ext_pair(engine, (&x.label, &x.module), (&labels[i], s), oracle, cfg)?);
        }
        for pr in from.iter().chain(&to) {
            if !pr.engines_agree {
                faults.push(format!("engines disagree on Ext1({}, {})", pr.source, pr.target));
            }
            if !pr.oracle_agrees {
                faults.push(format!(
                    "nestedness oracle disagrees on Ext1({}, {})",
                    pr.source, pr.target
                ));
            }
        }
        let (mx, xm) = (sum_stable(&from), sum_stable(&to));
        let both_vanish = match (mx.value(), xm.value()) {
            (Some(a), Some(b)) => Some(a == 0 && b == 0),
            _ => None,
        };
        let membership = add_membership(engine, &x.module, &m, &cfg.tools)?.verdict;
        let biconditional = match (both_vanish, membership) {
            (Some(v), Membership::Member) => Some(v),
            (Some(v), Membership::NotMember) => Some(!v),
            _ => None,
        };
        match biconditional {
            None => undecided = true,
            Some(false) if refutation.is_none() => {
                refutation = Some(Refutation {
                    label: x.label.clone(),
                    module: x.module.require_mf()?.to_json(),
                    ext_m_x: mx,
                    ext_x_m: xm,
                    membership,
                })
            }
            _ => {}
        }
        entries.push(CatalogEntry {
            label: x.label.clone(),
            module: x.module.require_mf()?.to_json(),
            ext_from_object: from,
            ext_to_object: to,
            ext_m_x: mx,
            ext_x_m: xm,
            both_vanish,
            membership,
            biconditional,
        });
    }
    let overall = if refutation.is_some() {
        CtOverall::Refuted
    } else if undecided || !faults.is_empty() {
        CtOverall::Inconclusive
    } else {
        CtOverall::ClusterTiltingOnCatalog
    };
    Ok(CatalogReport {
        entries,
        refutation,
        engine_faults: faults,
        overall,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CtReport {
    pub equation: String,
    pub omega: Vec<usize>,
    pub summands: Vec<String>,
    /// Reminder that the verdict quantifies over the catalog only.
    pub scope: String,
    pub factor_smoothness: Vec<bool>,
    pub rigidity: RigidityReport,
    pub catalog: CatalogReport,
    pub overall: CtOverall,
}

/// Smoothness, rigidity and the catalog check on `S^ω` with the default catalog.
pub fn ct_check(engine: &Engine, eq: &FactoredEquation, omega: &[usize], cfg: &CtConfig) -> Result<CtReport> {
    let smooth = check_factor_smooth(eq)?;
    let obj = build_s_omega(eq, omega)?;
    let rigidity = rigidity_check(engine, &obj, cfg)?;
    let catalog = ct_catalog_check(engine, &obj, &default_catalog(eq, omega)?, cfg)?;
    let overall = match (rigidity.rigid, catalog.overall) {
        (_, CtOverall::Refuted) => CtOverall::Refuted,
        (Some(true), o) if rigidity.engine_faults.is_empty() => o,
        _ => CtOverall::Inconclusive,
    };
    Ok(CtReport {
        equation: eq.to_text(),
        omega: omega.to_vec(),
        summands: obj.labels(),
        scope: "cluster tilting verified against the listed catalog only".into(),
        factor_smoothness: smooth,
        rigidity,
        catalog,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(src: &str) -> FactoredEquation {
        FactoredEquation::parse(src, None, 32003).unwrap()
    }

    #[test]
    fn smoothness() {
        assert_eq!(
            check_factor_smooth(&eq("x*(x^2+y^3)*(x+y^2)")).unwrap(),
            vec![true, false, true]
        );
        assert!(check_factor_smooth(&eq("x*y*u")).is_err());
    }

    #[test]
    fn oracle() {
        assert!(ext_oracle_nested(&[1], &[1, 2]));
        assert!(!ext_oracle_nested(&[1], &[2]));
        assert!(ext_oracle_nested(&[2, 3], &[2, 3]));
    }

    #[test]
    fn s_omega_shapes() {
        let o = build_s_omega(&eq("x*y"), &[1, 2]).unwrap();
        assert_eq!(o.labels(), vec!["S{1}", "R"]);
        let o = build_s_omega(&eq("x*y*(x+y)"), &[2, 1, 3]).unwrap();
        assert_eq!(o.labels(), vec!["S{2}", "S{1,2}", "R"]);
        let o = build_s_omega(&eq("x^2+y^3"), &[1]).unwrap();
        assert_eq!(o.labels(), vec!["R"]);
        assert!(build_s_omega(&eq("x*y"), &[1, 1]).is_err());
        assert!(build_s_omega(&eq("x*y"), &[1]).is_err());
    }

    #[test]
    fn rigidity_examples() {
        let e = eq("x*y*(x+y)");
        let engine = Engine::default();
        let cfg = CtConfig::new(&e, 1);
        let r = rigidity_check(&engine, &build_s_omega(&e, &[3, 1, 2]).unwrap(), &cfg).unwrap();
        assert_eq!(r.rigid, Some(true));
        assert!(r.engine_faults.is_empty());
        // S_1 ⊕ S_2 over xy is not rigid
        let e = eq("x*y");
        let s = |i: usize| PresentedModule::from_mf(&s_ideal(&SubsetModuleSpec::new(&e, &[i]).unwrap()).unwrap());
        let ext = engine.ext_periodic(&s(1), &s(2), 1, &cfg.schedule).unwrap();
        assert_eq!(ext.stable(), Some(1));
    }

    #[test]
    fn maximal_ideal_of_cusp() {
        let e = eq("x^2+y^3");
        let n = maximal_ideal_mf(&e.factors()[0]).unwrap();
        assert!(n.validate().is_valid());
        assert_eq!(PresentedModule::from_mf(&n).min_generators(), 2);
        assert!(matches!(
            maximal_ideal_mf(&eq("x+y^2").factors()[0]),
            Err(Error::NoWitness(_))
        ));
    }

    #[test]
    fn witness_vanishing_pattern() {
        let e = eq("x*(x^2+y^3)");
        let engine = Engine::default();
        let cfg = CtConfig::new(&e, 2);
        let w = witness_non_ct(&e, 2).unwrap();
        assert!(w.mf().unwrap().validate().is_valid());
        let obj = build_s_omega(&e, &[1, 2]).unwrap();
        for s in obj.summand_modules() {
            assert_eq!(engine.ext_periodic(&s, &w, 1, &cfg.schedule).unwrap().stable(), Some(0));
            assert_eq!(engine.ext_periodic(&w, &s, 1, &cfg.schedule).unwrap().stable(), Some(0));
        }
        let mem = add_membership(&engine, &w, &obj.module(), &cfg.tools).unwrap();
        assert_eq!(mem.verdict, Membership::NotMember);
        assert!(witness_non_ct(&e, 1).is_err());
    }

    #[test]
    fn adapted_witness_when_singular_factor_comes_first() {
        let e = eq("x*(x^2+y^3)");
        let engine = Engine::default();
        let cfg = CtConfig::new(&e, 2);
        let w = witness_for_omega(&e, &[2, 1], 2).unwrap();
        let obj = build_s_omega(&e, &[2, 1]).unwrap();
        for s in obj.summand_modules() {
            assert_eq!(engine.ext_periodic(&s, &w, 1, &cfg.schedule).unwrap().stable(), Some(0));
            assert_eq!(engine.ext_periodic(&w, &s, 1, &cfg.schedule).unwrap().stable(), Some(0));
        }
    }

    #[test]
    fn ct_check_verdicts() {
        let engine = Engine::default();
        let e = eq("x*y");
        let r = ct_check(&engine, &e, &[2, 1], &CtConfig::new(&e, 4)).unwrap();
        assert_eq!(r.overall, CtOverall::ClusterTiltingOnCatalog);
        let e = eq("x*(x^2+y^3)");
        let r = ct_check(&engine, &e, &[1, 2], &CtConfig::new(&e, 4)).unwrap();
        assert_eq!(r.overall, CtOverall::Refuted);
        assert!(r.catalog.refutation.as_ref().unwrap().label.starts_with('W'));
    }
}
