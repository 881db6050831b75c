//! Config-driven battery of checks with deterministic JSON reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ct::{self, build_s_omega, ct_check, witness_non_ct, CtConfig, CtOverall, ExtPair};
use crate::endo::{ext_duality_check, pd_probe, perp_catalog, EndoConfig, PdResult};
use crate::error::Result;
use crate::field::DEFAULT_PRIME;
use crate::hom::{random_linear_form, Schedule, StableDim, TorsionVerdict};
use crate::mf::{s_ideal, FactoredEquation, MatrixFactorization, SubsetModuleSpec};
use crate::modspec::ModuleSpec;
use crate::poly::{Poly, PolyMatrix};
use crate::seed::derive_seed;
use crate::tools::{add_membership, iso_test, IsoVerdict, Membership, ToolConfig};
use crate::trunc::{Engine, PresentedModule};

pub const ARTIFACT_VERSION: &str = concat!("mflab ", env!("CARGO_PKG_VERSION"));

/// Fields embedded in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub artifact_version: String,
    pub p: u32,
    pub vars: Vec<String>,
    pub d_schedule: Schedule,
    pub seed: u64,
}

impl Envelope {
    pub fn new(p: u32, vars: &[String], d_schedule: &Schedule, seed: u64) -> Self {
        Self {
            artifact_version: ARTIFACT_VERSION.into(),
            p,
            vars: vars.to_vec(),
            d_schedule: d_schedule.clone(),
            seed,
        }
    }

    /// `{envelope fields..., body fields...}`.
    pub fn wrap<T: Serialize>(&self, body: &T) -> Result<Value> {
        let mut v = serde_json::to_value(self)?;
        let b = serde_json::to_value(body)?;
        match (&mut v, b) {
            (Value::Object(a), Value::Object(b)) => a.extend(b),
            (Value::Object(a), other) => {
                a.insert("result".into(), other);
            }
            _ => unreachable!("envelope is an object"),
        }
        Ok(v)
    }
}

fn default_prime() -> u32 {
    DEFAULT_PRIME
}
fn default_true() -> bool {
    true
}
fn default_min_pairs() -> usize {
    25
}
fn default_random_mfs() -> usize {
    20
}
fn default_transfer_pairs() -> usize {
    10
}
fn default_depth() -> usize {
    6
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_prime")]
    pub p: u32,
    #[serde(default)]
    pub seed: u64,
    /// Truncation orders for curves; defaults to `{8, 10, 12}`.
    #[serde(default)]
    pub d_schedule: Option<Schedule>,
    /// Truncation orders for rings in four variables; defaults to `{4, 5, 6}`.
    #[serde(default)]
    pub d_schedule_threefolds: Option<Schedule>,
    /// Recompute every check on the schedule extended by one step.
    #[serde(default = "default_true")]
    pub hygiene: bool,
    #[serde(default = "default_true")]
    pub two_engines: bool,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

impl SuiteConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        crate::field::check_modulus(cfg.p as u64)?;
        Ok(cfg)
    }

    fn schedule_for(&self, nvars: usize) -> Schedule {
        if nvars <= 2 {
            self.d_schedule.clone().unwrap_or_else(Schedule::curves)
        } else {
            self.d_schedule_threefolds.clone().unwrap_or_else(Schedule::threefolds)
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// `Ext¹(S_I, S_J) = 0` against nestedness on every ordered pair.
    Nestedness { f: String },
    /// Rigidity and catalog cluster tilting of `S^ω`; all permutations when
    /// `omegas` is omitted.
    ClusterTilting {
        f: String,
        #[serde(default)]
        omegas: Option<Vec<Vec<usize>>>,
    },
    /// Witness modules for singular factors refute cluster tilting.
    NonCt { f: String },
    /// Agreement of the six vanishing conditions on catalog pairs.
    SixWay {
        f: String,
        #[serde(default = "default_min_pairs")]
        min_pairs: usize,
    },
    /// Knörrer images: validity, syzygy compatibility and Ext transfer.
    Knoerrer {
        f: String,
        #[serde(default = "default_random_mfs")]
        random_mfs: usize,
        #[serde(default = "default_transfer_pairs")]
        transfer_pairs: usize,
    },
    /// `dim Ext¹(M, N) = dim Ext¹(N*, M*)` on all ordered `S_I` pairs.
    Duality { f: String },
    /// `xy + uv` with `M = R ⊕ knoerrer(S{1})`: perpendicular category and
    /// projective dimensions on a small catalog.
    Conifold {
        #[serde(default = "default_depth")]
        depth: usize,
    },
    /// Claims that the direct sum of the listed modules is rigid.
    RigidClaim { f: String, modules: Vec<String> },
}

impl CheckSpec {
    pub fn name(&self) -> String {
        match self {
            Self::Nestedness { f } => format!("nestedness {f}"),
            Self::ClusterTilting { f, .. } => format!("cluster_tilting {f}"),
            Self::NonCt { f } => format!("non_ct {f}"),
            Self::SixWay { f, .. } => format!("six_way {f}"),
            Self::Knoerrer { f, .. } => format!("knoerrer {f}"),
            Self::Duality { f } => format!("duality {f}"),
            Self::Conifold { .. } => "conifold x*y+u*v".into(),
            Self::RigidClaim { f, modules } => format!("rigid_claim {f} [{}]", modules.join(" + ")),
        }
    }
}

/// A reported dimension, compared across schedules by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimRecord {
    pub label: String,
    pub stable_dim: StableDim,
}

#[derive(Debug, Clone, Serialize)]
pub struct HygieneRecord {
    pub extended_schedule: Schedule,
    pub compared: usize,
    pub drift: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub vars: Vec<String>,
    pub d_schedule: Schedule,
    pub pass: bool,
    pub summary: String,
    pub engine_disagreements: Vec<String>,
    pub dims: Vec<DimRecord>,
    pub hygiene: Option<HygieneRecord>,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

struct Outcome {
    pass: bool,
    summary: String,
    disagreements: Vec<String>,
    dims: Vec<DimRecord>,
    details: Value,
    vars: Vec<String>,
}

impl Outcome {
    fn new(vars: &[String]) -> Self {
        Self {
            pass: true,
            summary: String::new(),
            disagreements: Vec::new(),
            dims: Vec::new(),
            details: Value::Null,
            vars: vars.to_vec(),
        }
    }

    fn record_pair(&mut self, pr: &ExtPair) {
        let label = format!("Ext1({}, {})", pr.source, pr.target);
        if let Some(c) = &pr.cocycle {
            self.dims.push(DimRecord {
                label: format!("{label} cocycle"),
                stable_dim: c.stable_dim,
            });
        }
        if !pr.engines_agree {
            self.disagreements.push(label.clone());
        }
        self.dims.push(DimRecord {
            label,
            stable_dim: pr.periodic.stable_dim,
        });
    }

    fn record(&mut self, label: impl Into<String>, d: StableDim) {
        self.dims.push(DimRecord {
            label: label.into(),
            stable_dim: d,
        });
    }
}

struct Ctx<'a> {
    engine: &'a Engine,
    cfg: &'a SuiteConfig,
    seed: u64,
    curves: Schedule,
    threefolds: Schedule,
}

impl Ctx<'_> {
    fn eq(&self, f: &str) -> Result<FactoredEquation> {
        FactoredEquation::parse(f, None, self.cfg.p as u64)
    }

    fn ct_config(&self, eq: &FactoredEquation, schedule: &Schedule) -> CtConfig {
        CtConfig {
            schedule: schedule.clone(),
            two_engines: self.cfg.two_engines,
            tools: ToolConfig::new(Some(eq), self.seed),
        }
    }
}

fn subset_module(eq: &FactoredEquation, s: &[usize]) -> Result<(String, PresentedModule)> {
    let spec = SubsetModuleSpec::new(eq, s)?;
    Ok((spec.label(), PresentedModule::from_mf(&s_ideal(&spec)?)))
}

/// `S_I` for every `I ⊆ {1..n}`, the empty set first as the zero module
/// `S/(1)`, so the square has `2^n` rows.
fn power_set_modules(eq: &FactoredEquation) -> Result<(Vec<Vec<usize>>, Vec<(String, PresentedModule)>)> {
    let f = eq.product();
    let zero = MatrixFactorization::from_1x1(&f, &Poly::one(f.ctx()), &f)?;
    let mut subs = vec![Vec::new()];
    let mut mods = vec![("S{}".to_string(), PresentedModule::from_mf(&zero))];
    for s in eq.all_subsets() {
        mods.push(subset_module(eq, &s)?);
        subs.push(s);
    }
    Ok((subs, mods))
}

fn schedule_label(s: &Schedule) -> String {
    format!("{:?}", s.levels())
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len())
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn nestedness(ctx: &Ctx, f: &str, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let cfg = ctx.ct_config(&eq, sched);
    let (subs, mods) = power_set_modules(&eq)?;
    let mut out = Outcome::new(eq.ctx().vars());
    let mut matrix = Vec::new();
    let mut mismatches = Vec::new();
    for (i, a) in mods.iter().enumerate() {
        let mut row = Vec::new();
        for (j, b) in mods.iter().enumerate() {
            let oracle = ct::ext_oracle_nested(&subs[i], &subs[j]);
            let pr = ct::ext_pair(ctx.engine, (&a.0, &a.1), (&b.0, &b.1), Some(oracle), &cfg)?;
            out.record_pair(&pr);
            row.push(pr.periodic.vanishes());
            if !pr.oracle_agrees {
                mismatches.push(format!("Ext1({}, {})", a.0, b.0));
            }
        }
        matrix.push(row);
    }
    out.pass = mismatches.is_empty() && out.disagreements.is_empty();
    out.summary = format!(
        "{} pairs, {} oracle mismatches, {} engine disagreements",
        subs.len() * subs.len(),
        mismatches.len(),
        out.disagreements.len()
    );
    out.details = json!({
        "labels": mods.iter().map(|m| m.0.clone()).collect::<Vec<_>>(),
        "vanishing": matrix,
        "mismatches": mismatches,
    });
    Ok(out)
}

fn cluster_tilting(ctx: &Ctx, f: &str, omegas: &Option<Vec<Vec<usize>>>, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let cfg = ctx.ct_config(&eq, sched);
    let omegas = omegas.clone().unwrap_or_else(|| permutations(eq.len()));
    let mut out = Outcome::new(eq.ctx().vars());
    let mut per = Vec::new();
    for w in &omegas {
        let rep = ct_check(ctx.engine, &eq, w, &cfg)?;
        for pr in &rep.rigidity.pairs {
            out.record_pair(pr);
        }
        for e in &rep.catalog.entries {
            for pr in e.ext_from_object.iter().chain(&e.ext_to_object) {
                out.record_pair(pr);
            }
        }
        out.pass &= rep.overall == CtOverall::ClusterTiltingOnCatalog;
        per.push(json!({
            "omega": w,
            "rigid": rep.rigidity.rigid,
            "overall": rep.overall,
            "catalog_size": rep.catalog.entries.len(),
            "faults": rep.rigidity.engine_faults.iter().chain(&rep.catalog.engine_faults).collect::<Vec<_>>(),
        }));
    }
    out.pass &= out.disagreements.is_empty();
    out.summary = format!(
        "{} permutations, {} cluster tilting on catalog",
        omegas.len(),
        per.iter()
            .filter(|p| p["overall"] == "cluster-tilting-on-catalog")
            .count()
    );
    out.details =
        json!({ "omegas": per, "scope": "catalog-level verification, weaker than quantifying over all MCM modules" });
    Ok(out)
}

fn non_ct(ctx: &Ctx, f: &str, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let cfg = ctx.ct_config(&eq, sched);
    let smooth = ct::check_factor_smooth(&eq)?;
    let mut out = Outcome::new(eq.ctx().vars());
    let mut per = Vec::new();
    let bad: Vec<usize> = (1..=eq.len()).filter(|&i| !smooth[i - 1]).collect();
    if bad.is_empty() {
        out.pass = false;
        out.summary = "every factor is smooth; no witness exists".into();
        return Ok(out);
    }
    for &i in &bad {
        let w = witness_non_ct(&eq, i)?;
        let mut omega: Vec<usize> = (1..=eq.len()).filter(|&k| k != i).collect();
        omega.push(i);
        let obj = build_s_omega(&eq, &omega)?;
        let labels = obj.labels();
        let mut vanish = true;
        for (l, s) in labels.iter().zip(obj.summand_modules()) {
            let a = ct::ext_pair(ctx.engine, (l, &s), ("W", &w), None, &cfg)?;
            let b = ct::ext_pair(ctx.engine, ("W", &w), (l, &s), None, &cfg)?;
            vanish &= a.periodic.stable() == Some(0) && b.periodic.stable() == Some(0);
            out.record_pair(&a);
            out.record_pair(&b);
        }
        let mem = add_membership(ctx.engine, &w, &obj.module(), &cfg.tools)?.verdict;
        let rep = ct_check(ctx.engine, &eq, &omega, &cfg)?;
        let ok = vanish && mem == Membership::NotMember && rep.overall == CtOverall::Refuted;
        out.pass &= ok;
        per.push(json!({
            "factor": i,
            "omega": omega,
            "witness": w.require_mf()?.to_json(),
            "ext_vanishes_both_sides": vanish,
            "membership": mem,
            "ct_check": rep.overall,
            "refuted_by": rep.catalog.refutation.as_ref().map(|r| r.label.clone()),
        }));
    }
    out.pass &= out.disagreements.is_empty();
    out.summary = format!("{} singular factor(s), all refuted: {}", bad.len(), out.pass);
    out.details = json!({ "witnesses": per });
    Ok(out)
}

fn torsion_value(v: TorsionVerdict) -> StableDim {
    match v {
        TorsionVerdict::TorsionFree => StableDim::Stable(0),
        TorsionVerdict::HasTorsion => StableDim::Stable(1),
        TorsionVerdict::Unstable => StableDim::Unstable,
    }
}

/// `S_I`, witnesses and their syzygies, then sums of consecutive entries
/// until the number of ordered pairs reaches `min_pairs`.
fn six_way_catalog(eq: &FactoredEquation, min_pairs: usize) -> Result<Vec<(String, PresentedModule)>> {
    let mut cat: Vec<(String, PresentedModule)> = eq
        .all_subsets()
        .iter()
        .map(|s| subset_module(eq, s))
        .collect::<Result<_>>()?;
    let smooth = ct::check_factor_smooth(eq)?;
    for i in 1..=eq.len() {
        if !smooth[i - 1] {
            let w = witness_non_ct(eq, i)?;
            let syz = PresentedModule::from_mf(&w.require_mf()?.syzygy());
            cat.push((format!("W{i}"), w));
            cat.push((format!("syz W{i}"), syz));
        }
    }
    let base = cat.len();
    let mut k = 0;
    while cat.len() * cat.len() < min_pairs {
        let (a, b) = (&cat[k % base], &cat[(k + 1) % base]);
        let m = a.1.direct_sum(&b.1)?;
        cat.push((format!("{}+{}", a.0, b.0), m));
        k += 1;
    }
    Ok(cat)
}

fn six_way(ctx: &Ctx, f: &str, min_pairs: usize, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let cat = six_way_catalog(&eq, min_pairs)?;
    let mut out = Outcome::new(eq.ctx().vars());
    let e = ctx.engine;
    let mut rows = Vec::new();
    let mut disagreements = 0;
    let mut unstable = 0;
    let duals: Vec<PresentedModule> = cat
        .iter()
        .map(|(_, m)| Ok(PresentedModule::from_mf(&m.require_mf()?.dual())))
        .collect::<Result<_>>()?;
    for (i, (la, a)) in cat.iter().enumerate() {
        for (j, (lb, b)) in cat.iter().enumerate() {
            let seed = derive_seed(ctx.seed, &format!("six:{la}:{lb}"));
            let e1 = e.ext_periodic(a, b, 1, sched)?;
            let e2 = e.ext_periodic(b, a, 1, sched)?;
            let t3 = e.tensor_mcm_check(a, b, sched, seed)?;
            let t4 = e.tensor_mcm_check(b, a, sched, seed)?;
            let tor5 = e.tor_periodic(&duals[i], b, 2, sched)?;
            let tor6 = e.tor_periodic(a, &duals[j], 2, sched)?;
            let verdicts = [
                e1.vanishes(),
                e2.vanishes(),
                t3.is_mcm(),
                t4.is_mcm(),
                tor5.vanishes(),
                tor6.vanishes(),
            ];
            let pair = format!("({la}, {lb})");
            out.record(format!("Ext1{pair}"), e1.stable_dim);
            out.record(format!("Ext1 reversed{pair}"), e2.stable_dim);
            out.record(format!("tensor MCM{pair}"), torsion_value(t3.verdict));
            out.record(format!("tensor MCM reversed{pair}"), torsion_value(t4.verdict));
            out.record(format!("Tor2(M*, N){pair}"), tor5.stable_dim);
            out.record(format!("Tor2(M, N*){pair}"), tor6.stable_dim);
            let stable: Vec<bool> = verdicts.iter().flatten().copied().collect();
            if stable.len() < 6 {
                unstable += 1;
            }
            if stable.windows(2).any(|w| w[0] != w[1]) {
                disagreements += 1;
            }
            rows.push(json!({ "pair": [la, lb], "verdicts": verdicts }));
        }
    }
    let pairs = cat.len() * cat.len();
    out.pass = disagreements == 0 && unstable == 0 && pairs >= min_pairs;
    out.summary = format!("{pairs} pairs, {disagreements} disagreements, {unstable} with unstable verdicts");
    out.details = json!({ "order": ["ext1", "ext1_reversed", "tensor_mcm", "tensor_mcm_reversed", "tor2_dual_first", "tor2_dual_second"], "pairs": rows });
    Ok(out)
}

/// Direct sums of `1..=3` subset modules under random unipotent and scalar
/// base changes.
pub fn random_factorization(eq: &FactoredEquation, rng: &mut ChaCha8Rng) -> Result<MatrixFactorization> {
    let subs = eq.all_subsets();
    let k = rng.gen_range(1..=3);
    let parts: Vec<MatrixFactorization> = (0..k)
        .map(|_| s_ideal(&SubsetModuleSpec::new(eq, &subs[rng.gen_range(0..subs.len())])?))
        .collect::<Result<_>>()?;
    let mf = MatrixFactorization::direct_sum_all(&parts)?;
    let n = mf.size();
    if n == 1 {
        return Ok(mf);
    }
    let ctx = eq.ctx();
    let elementary = |rng: &mut ChaCha8Rng| -> (PolyMatrix, PolyMatrix) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let t = random_linear_form(ctx, rng);
        let mut e = PolyMatrix::identity(ctx, n);
        let mut einv = PolyMatrix::identity(ctx, n);
        e.set(i, j, t.clone());
        einv.set(i, j, -&t);
        (e, einv)
    };
    let (p, pinv) = elementary(rng);
    let (q, qinv) = elementary(rng);
    let c = rng.gen_range(1..ctx.p());
    let scale = PolyMatrix::scalar(&Poly::constant(ctx, c as i64), n);
    let scale_inv = PolyMatrix::scalar(&Poly::constant(ctx, crate::field::inv(c, ctx.p()) as i64), n);
    mf.conjugate(&p.mat_mul(&scale)?, &scale_inv.mat_mul(&pinv)?, &q, &qinv)
}

fn knoerrer(ctx: &Ctx, f: &str, random_mfs: usize, transfer_pairs: usize, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let mut out = Outcome::new(eq.ctx().vars());
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, &format!("knoerrer:{f}")));
    let mut valid = 0;
    for _ in 0..random_mfs {
        let mf = random_factorization(&eq, &mut rng)?;
        if mf.validate().is_valid() && mf.knoerrer("u", "v")?.validate().is_valid() {
            valid += 1;
        }
    }
    let lifted_eq_ctx = eq.ctx().extend(&["u", "v"])?;
    let lifted_sched = &ctx.threefolds;
    let tools4 = ToolConfig::new(None, ctx.seed);
    let subs = eq.all_subsets();
    let mut syz_ok = Vec::new();
    for s in &subs {
        let m = s_ideal(&SubsetModuleSpec::new(&eq, s)?)?;
        let a = PresentedModule::from_mf(&m.syzygy().knoerrer("u", "v")?);
        let b = PresentedModule::from_mf(&m.knoerrer("u", "v")?.syzygy());
        let w = iso_test(ctx.engine, &a, &b, &tools4)?;
        syz_ok.push(w.verdict == IsoVerdict::Isomorphic);
    }
    let cfg_curve = ctx.ct_config(&eq, sched);
    let cfg_lift = CtConfig {
        schedule: lifted_sched.clone(),
        two_engines: ctx.cfg.two_engines,
        tools: tools4.clone(),
    };
    let mut transfer = Vec::new();
    let mut transfer_ok = true;
    'pairs: for s in &subs {
        for t in &subs {
            if transfer.len() >= transfer_pairs {
                break 'pairs;
            }
            let (la, a) = subset_module(&eq, s)?;
            let (lb, b) = subset_module(&eq, t)?;
            let fa = PresentedModule::from_mf(&a.require_mf()?.knoerrer("u", "v")?);
            let fb = PresentedModule::from_mf(&b.require_mf()?.knoerrer("u", "v")?);
            let down = ct::ext_pair(ctx.engine, (&la, &a), (&lb, &b), None, &cfg_curve)?;
            let (fla, flb) = (format!("F({la})"), format!("F({lb})"));
            let up = ct::ext_pair(ctx.engine, (&fla, &fa), (&flb, &fb), None, &cfg_lift)?;
            out.record_pair(&down);
            out.record_pair(&up);
            let ok = down.periodic.vanishes().is_some() && down.periodic.vanishes() == up.periodic.vanishes();
            transfer_ok &= ok;
            transfer.push(json!({ "pair": [la, lb], "ext1": down.periodic.stable_dim, "ext1_lifted": up.periodic.stable_dim, "transfer": ok }));
        }
    }
    out.pass = valid == random_mfs
        && syz_ok.iter().all(|&b| b)
        && transfer_ok
        && transfer.len() >= transfer_pairs.min(subs.len() * subs.len())
        && out.disagreements.is_empty();
    out.summary = format!(
        "{valid}/{random_mfs} random images valid, syzygy compatibility {}/{}, {} transfer pairs ok: {transfer_ok}",
        syz_ok.iter().filter(|&&b| b).count(),
        syz_ok.len(),
        transfer.len()
    );
    out.vars = lifted_eq_ctx.vars().to_vec();
    out.details = json!({
        "lifted_schedule": lifted_sched,
        "syzygy_compatibility": subs.iter().zip(&syz_ok).map(|(s, ok)| json!({"subset": s, "isomorphic": ok})).collect::<Vec<_>>(),
        "transfer": transfer,
    });
    Ok(out)
}

fn duality(ctx: &Ctx, f: &str, sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let (_, mods) = power_set_modules(&eq)?;
    let mut out = Outcome::new(eq.ctx().vars());
    let mut failures = Vec::new();
    for a in &mods {
        for b in &mods {
            let d = ext_duality_check(ctx.engine, &a.1, &b.1, sched)?;
            out.record(format!("Ext1({}, {})", a.0, b.0), d.forward.stable_dim);
            out.record(format!("Ext1({}*, {}*)", b.0, a.0), d.dual.stable_dim);
            if d.holds != Some(true) {
                failures.push(format!("({}, {})", a.0, b.0));
            }
        }
    }
    out.pass = failures.is_empty();
    out.summary = format!("{} pairs, {} failures", mods.len() * mods.len(), failures.len());
    out.details = json!({ "failures": failures });
    Ok(out)
}

fn conifold(ctx: &Ctx, depth: usize) -> Result<Outcome> {
    let eq = FactoredEquation::parse("x*y", None, ctx.cfg.p as u64)?;
    let k = s_ideal(&SubsetModuleSpec::new(&eq, &[1])?)?.knoerrer("u", "v")?;
    let r = MatrixFactorization::trivial(k.f());
    let m = PresentedModule::from_mf(&r.direct_sum(&k)?);
    let catalog: Vec<(String, PresentedModule)> = vec![
        ("R".into(), PresentedModule::from_mf(&r)),
        ("K".into(), PresentedModule::from_mf(&k)),
        ("K*".into(), PresentedModule::from_mf(&k.dual())),
        ("syz K".into(), PresentedModule::from_mf(&k.syzygy())),
        ("syz K*".into(), PresentedModule::from_mf(&k.dual().syzygy())),
    ];
    let sched = &ctx.threefolds;
    let mut out = Outcome::new(k.ctx().vars());
    let mut endo = EndoConfig::new(4, ctx.seed);
    endo.depth = depth;
    let perp = perp_catalog(ctx.engine, &m, &catalog, 1, sched)?;
    let mut rows = Vec::new();
    let mut pd_ok = true;
    let mut perp_ok = true;
    for ((label, x), pe) in catalog.iter().zip(&perp) {
        out.record(format!("Ext1(M, {label})"), pe.ext[0].stable_dim);
        let member = add_membership(ctx.engine, x, &m, &endo.tools)?.verdict;
        let agrees = match (pe.in_perp, member) {
            (Some(a), Membership::Member) => a,
            (Some(a), Membership::NotMember) => !a,
            _ => false,
        };
        perp_ok &= agrees;
        let (pd, res) = pd_probe(ctx.engine, &m, x, &endo)?;
        let within = matches!(pd, PdResult::Finite(d) if d <= 3);
        pd_ok &= within && !res.flagged && res.steps.iter().all(|s| s.hom_surjective != Some(false));
        out.record(
            format!("pd Hom(M, {label})"),
            match pd {
                PdResult::Finite(d) => StableDim::Stable(d),
                PdResult::Exceeds(_) => StableDim::Unstable,
            },
        );
        rows.push(
            json!({ "module": label, "in_perp": pe.in_perp, "member": member, "pd": pd, "steps": res.steps.len() }),
        );
    }
    out.pass = perp_ok && pd_ok;
    out.summary = format!("perp equals add(M) on catalog: {perp_ok}; pd <= 3 throughout: {pd_ok}");
    out.details = json!({
        "M": "R + knoerrer(S{1})",
        "note": "consistency evidence at catalog level, not a proof of the global dimension statement",
        "catalog": rows,
    });
    Ok(out)
}

fn rigid_claim(ctx: &Ctx, f: &str, modules: &[String], sched: &Schedule) -> Result<Outcome> {
    let eq = ctx.eq(f)?;
    let cfg = ctx.ct_config(&eq, sched);
    let mods: Vec<(String, PresentedModule)> = modules
        .iter()
        .map(|s| {
            let spec = ModuleSpec::parse(s)?;
            Ok((spec.to_string(), PresentedModule::from_mf(&spec.resolve(&eq)?)))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::new(eq.ctx().vars());
    let mut nonzero = Vec::new();
    for a in &mods {
        for b in &mods {
            let pr = ct::ext_pair(ctx.engine, (&a.0, &a.1), (&b.0, &b.1), None, &cfg)?;
            out.record_pair(&pr);
            if pr.periodic.stable() != Some(0) {
                nonzero.push(format!("Ext1({}, {}) = {:?}", a.0, b.0, pr.periodic.stable_dim));
            }
        }
    }
    out.pass = nonzero.is_empty() && out.disagreements.is_empty();
    out.summary = if out.pass {
        "claimed module is rigid".into()
    } else {
        format!("claim refuted: {}", nonzero.join(", "))
    };
    out.details = json!({ "nonvanishing": nonzero });
    Ok(out)
}

fn run_once(ctx: &Ctx, spec: &CheckSpec, curves: &Schedule) -> Result<Outcome> {
    match spec {
        CheckSpec::Nestedness { f } => nestedness(ctx, f, curves),
        CheckSpec::ClusterTilting { f, omegas } => cluster_tilting(ctx, f, omegas, curves),
        CheckSpec::NonCt { f } => non_ct(ctx, f, curves),
        CheckSpec::SixWay { f, min_pairs } => six_way(ctx, f, *min_pairs, curves),
        CheckSpec::Knoerrer {
            f,
            random_mfs,
            transfer_pairs,
        } => knoerrer(ctx, f, *random_mfs, *transfer_pairs, curves),
        CheckSpec::Duality { f } => duality(ctx, f, curves),
        CheckSpec::Conifold { depth } => conifold(ctx, *depth),
        CheckSpec::RigidClaim { f, modules } => rigid_claim(ctx, f, modules, curves),
    }
}

fn compare(base: &[DimRecord], ext: &[DimRecord]) -> (usize, Vec<String>) {
    let mut drift = Vec::new();
    let mut compared = 0;
    for (a, b) in base.iter().zip(ext) {
        if a.label != b.label {
            drift.push(format!("record mismatch: {} vs {}", a.label, b.label));
            continue;
        }
        compared += 1;
        if a.stable_dim != b.stable_dim || a.stable_dim == StableDim::Unstable {
            drift.push(format!("{}: {:?} -> {:?}", a.label, a.stable_dim, b.stable_dim));
        }
    }
    if base.len() != ext.len() {
        drift.push(format!("{} records vs {}", base.len(), ext.len()));
    }
    (compared, drift)
}

pub fn run_check(engine: &Engine, cfg: &SuiteConfig, index: usize, spec: &CheckSpec) -> Result<CheckReport> {
    let name = spec.name();
    let seed = derive_seed(cfg.seed, &format!("check:{index}:{name}"));
    let base = Ctx {
        engine,
        cfg,
        seed,
        curves: cfg.schedule_for(2),
        threefolds: cfg.schedule_for(4),
    };
    let primary = run_once(&base, spec, &base.curves)?;
    let main_schedule = if primary.vars.len() <= 2 {
        base.curves.clone()
    } else {
        base.threefolds.clone()
    };
    let hygiene = if cfg.hygiene {
        let ext_ctx = Ctx {
            engine,
            cfg,
            seed,
            curves: base.curves.extended(),
            threefolds: base.threefolds.extended(),
        };
        let second = run_once(&ext_ctx, spec, &ext_ctx.curves)?;
        let (compared, drift) = compare(&primary.dims, &second.dims);
        Some(HygieneRecord {
            extended_schedule: main_schedule.extended(),
            compared,
            drift,
        })
    } else {
        None
    };
    let pass = primary.pass && hygiene.as_ref().is_none_or(|h| h.drift.is_empty());
    Ok(CheckReport {
        name,
        vars: primary.vars,
        d_schedule: main_schedule,
        pass,
        summary: primary.summary,
        engine_disagreements: primary.disagreements,
        dims: primary.dims,
        hygiene,
        details: primary.details,
    })
}

pub fn run_suite(engine: &Engine, cfg: &SuiteConfig, mut progress: impl FnMut(&CheckReport)) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (i, spec) in cfg.checks.iter().enumerate() {
        let rep = run_check(engine, cfg, i, spec)?;
        progress(&rep);
        checks.push(rep);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    Ok(SuiteReport {
        checks,
        passed,
        failed,
        all_pass: failed == 0,
    })
}

/// Union of the variables used by the checks, in first-seen order.
pub fn suite_vars(report: &SuiteReport) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in &report.checks {
        for v in &c.vars {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
    out
}

pub fn suite_json(cfg: &SuiteConfig, report: &SuiteReport) -> Result<String> {
    let env = Envelope::new(cfg.p, &suite_vars(report), &cfg.schedule_for(2), cfg.seed);
    let mut v = env.wrap(report)?;
    if let Value::Object(o) = &mut v {
        o.insert(
            "d_schedule_threefolds".into(),
            serde_json::to_value(cfg.schedule_for(4))?,
        );
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

/// The schedule label used in summaries.
pub fn describe_schedule(s: &Schedule) -> String {
    schedule_label(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_order() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![1, 3, 2]);
        assert_eq!(permutations(1), vec![vec![1]]);
    }

    #[test]
    fn config_parsing() {
        let cfg = SuiteConfig::from_json_str(r#"{"seed": 3, "checks": [{"kind": "nestedness", "f": "x*y"}]}"#).unwrap();
        assert_eq!(cfg.p, 32003);
        assert_eq!(cfg.checks.len(), 1);
        assert!(SuiteConfig::from_json_str(r#"{"checks": [{"kind": "nope"}]}"#).is_err());
        assert!(SuiteConfig::from_json_str(r#"{"p": 4}"#).is_err());
    }

    #[test]
    fn small_suite_and_negative_control() {
        let cfg = SuiteConfig::from_json_str(
            r#"{"seed": 1, "checks": [
                {"kind": "nestedness", "f": "x*y"},
                {"kind": "rigid_claim", "f": "x*y", "modules": ["S{1}", "S{2}"]}
            ]}"#,
        )
        .unwrap();
        let engine = Engine::default();
        let rep = run_suite(&engine, &cfg, |_| {}).unwrap();
        assert!(rep.checks[0].pass);
        assert!(!rep.checks[1].pass);
        assert_eq!(rep.failed, 1);
        let empty = SuiteConfig::from_json_str("{}").unwrap();
        let rep = run_suite(&engine, &empty, |_| {}).unwrap();
        assert!(rep.all_pass && rep.checks.is_empty());
    }

    #[test]
    fn random_factorizations_are_valid() {
        let eq = FactoredEquation::parse("x*y*(x+y)", None, 32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            assert!(random_factorization(&eq, &mut rng).unwrap().validate().is_valid());
        }
    }
}
