//! Module-level predicates: generator counts, isomorphism, splitting,
//! `add(M)` membership and the pushforward sequence `0 → M → R^λ → M₁ → 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field;
use crate::hom::{random_linear_form, Schedule, TorsionVerdict};
use crate::linalg::{Echelon, ScalarMatrix, SparseVec};
use crate::mf::{FactoredEquation, MatrixFactorization, MfJson};
use crate::poly::{Poly, PolyMatrix};
use crate::seed::derive_seed;
use crate::trunc::{Engine, PresentedModule};

#[derive(Debug, Clone)]
pub struct ToolConfig {
    /// Level of the Hom spaces searched for isomorphisms and idempotents.
    pub hom_level: usize,
    /// Level of truncated dimension fingerprints.
    pub fp_level: usize,
    pub trials: usize,
    pub seed: u64,
    pub depth_cap: usize,
    pub rank_samples: usize,
    /// Factors of `f`, used for rank and per-factor fingerprints.
    pub eq: Option<FactoredEquation>,
}

impl ToolConfig {
    pub fn new(eq: Option<&FactoredEquation>, seed: u64) -> Self {
        Self {
            hom_level: 2,
            fp_level: 5,
            trials: 64,
            seed,
            depth_cap: 6,
            rank_samples: 5,
            eq: eq.cloned(),
        }
    }
}

pub fn min_generators(m: &PresentedModule) -> usize {
    m.min_generators()
}

/// Per-factor generic ranks, for any presentation (the `f` multiples vanish
/// at points of `V(f)`).
pub fn module_rank_vector(m: &PresentedModule, eq: &FactoredEquation, samples: usize, seed: u64) -> Result<Vec<usize>> {
    if eq.product() != *m.f() {
        return Err(Error::EquationMismatch(
            "rank vector against a different equation".into(),
        ));
    }
    let g = m.ngens();
    (0..eq.len())
        .map(|i| {
            let pts = eq.smooth_points(i, samples.max(1), derive_seed(seed, &format!("rank:{i}")))?;
            let mut votes: Vec<(usize, usize)> = Vec::new();
            for pt in &pts {
                let r = g - m.rel().eval(pt).rank();
                match votes.iter_mut().find(|(v, _)| *v == r) {
                    Some(e) => e.1 += 1,
                    None => votes.push((r, 1)),
                }
            }
            votes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            Ok(votes[0].0)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub name: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub separates: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoVerdict {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoWitness {
    pub verdict: IsoVerdict,
    /// Maps `M → N` and `N → M` surjective modulo `m`, as generator images.
    pub forward: Option<Vec<Vec<String>>>,
    pub backward: Option<Vec<Vec<String>>>,
    pub evidence: Vec<Fingerprint>,
    pub separated_by: Option<String>,
}

/// Fingerprints in increasing cost; the iso test stops at the first that separates.
fn fingerprints(
    engine: &Engine,
    m: &PresentedModule,
    n: &PresentedModule,
    cfg: &ToolConfig,
) -> Result<Vec<Fingerprint>> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<Fingerprint>, name: &str, l: Vec<usize>, r: Vec<usize>| {
        let sep = l != r;
        out.push(Fingerprint {
            name: name.into(),
            left: l,
            right: r,
            separates: sep,
        });
        sep
    };
    if push(
        &mut out,
        "min_generators",
        vec![m.min_generators()],
        vec![n.min_generators()],
    ) {
        return Ok(out);
    }
    if let Some(eq) = &cfg.eq {
        let l = module_rank_vector(m, eq, cfg.rank_samples, cfg.seed)?;
        let r = module_rank_vector(n, eq, cfg.rank_samples, cfg.seed)?;
        if push(&mut out, "rank_vector", l, r) {
            return Ok(out);
        }
    }
    let dims = |x: &PresentedModule| -> Result<Vec<usize>> {
        (2..=cfg.fp_level).map(|d| Ok(engine.truncate(x, d)?.dim())).collect()
    };
    if push(&mut out, "truncated_dims", dims(m)?, dims(n)?) {
        return Ok(out);
    }
    if let Some(eq) = &cfg.eq {
        if eq.len() > 1 {
            let profile = |x: &PresentedModule| -> Result<Vec<usize>> {
                eq.factors()
                    .iter()
                    .map(|fi| {
                        let q = x.with_relations(&PolyMatrix::scalar(fi, x.ngens()))?;
                        Ok(engine.truncate(&q, cfg.fp_level)?.dim())
                    })
                    .collect()
            };
            if push(&mut out, "factor_profile", profile(m)?, profile(n)?) {
                return Ok(out);
            }
        }
    }
    let lvl = cfg.fp_level;
    let end_m = engine.hom_dim(m, m, lvl)?;
    let end_n = engine.hom_dim(n, n, lvl)?;
    if push(&mut out, "end_dim", vec![end_m], vec![end_n]) {
        return Ok(out);
    }
    // M ≅ N forces Hom(M, N) ≅ Hom(N, M) ≅ End(M)
    let mn = engine.hom_dim(m, n, lvl)?;
    let nm = engine.hom_dim(n, m, lvl)?;
    push(
        &mut out,
        "cross_hom_dims",
        vec![end_m, mn, nm],
        vec![end_n, end_n, end_n],
    );
    Ok(out)
}

/// `rank([H(0) | rel_N(0)]) = g_N`: the map is onto `N/mN`.
fn surjective_mod_m(h: &PolyMatrix, n: &PresentedModule) -> bool {
    let g = n.ngens();
    let h0 = h.constant_part();
    let r0 = n.rel().constant_part();
    let p = h0.p();
    let mut data = Vec::with_capacity(g * (h0.cols() + r0.cols()));
    for i in 0..g {
        data.extend_from_slice(h0.row(i));
        data.extend_from_slice(r0.row(i));
    }
    ScalarMatrix::from_raw(g, h0.cols() + r0.cols(), p, data).rank() == g
}

fn random_combination(maps: &[PolyMatrix], rng: &mut ChaCha8Rng, template: &PolyMatrix) -> PolyMatrix {
    let p = template.ctx().p();
    let mut acc = PolyMatrix::zeros(template.ctx(), template.rows(), template.cols());
    for m in maps {
        let c = rng.gen_range(0..p);
        if c != 0 {
            acc = acc.add(&m.map(|e| e.scale(c))).expect("same shape");
        }
    }
    acc
}

pub fn iso_test(engine: &Engine, m: &PresentedModule, n: &PresentedModule, cfg: &ToolConfig) -> Result<IsoWitness> {
    if m.ctx() != n.ctx() || m.f() != n.f() {
        return Err(Error::TruncationMismatch("iso test across different rings".into()));
    }
    let evidence = fingerprints(engine, m, n, cfg)?;
    if let Some(fp) = evidence.iter().find(|f| f.separates) {
        return Ok(IsoWitness {
            verdict: IsoVerdict::NotIsomorphic,
            forward: None,
            backward: None,
            separated_by: Some(fp.name.clone()),
            evidence,
        });
    }
    if m.min_generators() == 0 {
        // both modules are zero
        return Ok(IsoWitness {
            verdict: IsoVerdict::Isomorphic,
            forward: Some(Vec::new()),
            backward: Some(Vec::new()),
            separated_by: None,
            evidence,
        });
    }
    let fwd = engine.hom_space(m, n, cfg.hom_level)?;
    let bwd = engine.hom_space(n, m, cfg.hom_level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &format!("iso:{}:{}", m.key(), n.key())));
    let tf = PolyMatrix::zeros(m.ctx(), n.ngens(), m.ngens());
    let tb = PolyMatrix::zeros(m.ctx(), m.ngens(), n.ngens());
    let mut found_f = None;
    let mut found_b = None;
    for _ in 0..cfg.trials.max(1) {
        if found_f.is_none() {
            let h = random_combination(&fwd.maps, &mut rng, &tf);
            if surjective_mod_m(&h, n) {
                found_f = Some(h);
            }
        }
        if found_b.is_none() {
            let h = random_combination(&bwd.maps, &mut rng, &tb);
            if surjective_mod_m(&h, m) {
                found_b = Some(h);
            }
        }
        if found_f.is_some() && found_b.is_some() {
            break;
        }
    }
    let verdict = if found_f.is_some() && found_b.is_some() {
        IsoVerdict::Isomorphic
    } else {
        IsoVerdict::Inconclusive
    };
    Ok(IsoWitness {
        verdict,
        forward: found_f.map(|h| h.to_text()),
        backward: found_b.map(|h| h.to_text()),
        evidence,
        separated_by: None,
    })
}

/// Splits a presentation along connected components of its support
/// (for factorizations, of φ and ψ together) and drops zero summands.
pub fn block_split(m: &PresentedModule) -> Result<Vec<PresentedModule>> {
    let parts: Vec<PresentedModule> = match m.mf() {
        Some(mf) => mf.block_components().iter().map(PresentedModule::from_mf).collect(),
        None => {
            let g = m.ngens();
            let rel = m.rel();
            let mut parent: Vec<usize> = (0..g).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            for c in 0..rel.cols() {
                let rows: Vec<usize> = (0..g).filter(|&i| !rel.get(i, c).is_zero()).collect();
                for w in rows.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    parent[a] = b;
                }
            }
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut slot: Vec<Option<usize>> = vec![None; g];
            for i in 0..g {
                let r = find(&mut parent, i);
                match slot[r] {
                    Some(k) => groups[k].push(i),
                    None => {
                        slot[r] = Some(groups.len());
                        groups.push(vec![i]);
                    }
                }
            }
            if groups.len() == 1 {
                vec![m.clone()]
            } else {
                groups
                    .iter()
                    .map(|rows| {
                        let cols: Vec<usize> = (0..rel.cols())
                            .filter(|&c| rows.iter().any(|&i| !rel.get(i, c).is_zero()))
                            .collect();
                        let sub = if cols.is_empty() {
                            PolyMatrix::zeros(m.ctx(), rows.len(), 1)
                        } else {
                            rel.submatrix(rows, &cols)
                        };
                        PresentedModule::general(m.f(), sub)
                    })
                    .collect::<Result<_>>()?
            }
        }
    };
    Ok(parts.into_iter().filter(|p| p.min_generators() > 0).collect())
}

/// `M/mM` as `k^g / im rel(0)`, with coordinates on the non-pivot part.
struct Fiber {
    ech: Echelon,
    free: Vec<usize>,
    g: usize,
    p: u32,
}

impl Fiber {
    fn new(m: &PresentedModule) -> Self {
        let r0 = m.rel().constant_part();
        let g = m.ngens();
        let p = r0.p();
        let mut ech = Echelon::new(g, p);
        for c in 0..r0.cols() {
            ech.insert(&crate::linalg::sparse_from_dense(&r0.column(c)));
        }
        let free = ech.free_columns();
        Self { ech, free, g, p }
    }

    fn dim(&self) -> usize {
        self.free.len()
    }

    /// Matrix of the endomorphism `h` on `M/mM`.
    fn induced(&self, h: &PolyMatrix) -> ScalarMatrix {
        let h0 = h.constant_part();
        let mu = self.dim();
        let mut out = ScalarMatrix::zeros(mu, mu, self.p);
        for (b, &col) in self.free.iter().enumerate() {
            let v: SparseVec = crate::linalg::sparse_from_dense(&h0.column(col));
            let r = self.ech.reduce(&v);
            for (c, x) in r {
                let row = self.free.iter().position(|&f| f == c as usize).expect("free column");
                out.set(row, b, x);
            }
        }
        let _ = self.g;
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitVerdict {
    IndecomposableLikely,
    Decomposes,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub verdict: SplitVerdict,
    pub factors: Vec<PresentedModule>,
    pub method: String,
}

fn eigenvalues(a: &ScalarMatrix) -> Vec<(u32, usize)> {
    let n = a.rows();
    let p = a.p();
    let mut out = Vec::new();
    let mut total = 0;
    for lam in 0..p {
        let mut s = a.clone();
        for i in 0..n {
            s.set(i, i, field::sub(a.get(i, i), lam, p));
        }
        let nullity = n - s.rank();
        if nullity > 0 {
            // algebraic multiplicity = nullity of (a - λ)^n
            let mut pw = s.clone();
            for _ in 1..n {
                pw = pw.mul(&s).expect("square");
            }
            let mult = n - pw.rank();
            out.push((lam, mult));
            total += mult;
            if total == n {
                break;
            }
        }
    }
    out
}

/// Projection onto the generalized `λ`-eigenspace of `a` along the others.
fn fitting_idempotent(a: &ScalarMatrix, lam: u32) -> ScalarMatrix {
    let n = a.rows();
    let p = a.p();
    let mut s = a.clone();
    for i in 0..n {
        s.set(i, i, field::sub(a.get(i, i), lam, p));
    }
    let mut b = ScalarMatrix::identity(n, p);
    for _ in 0..n {
        b = b.mul(&s).expect("square");
    }
    // columns: basis of ker b^n then basis of im b^n
    let ker = b.nullspace();
    let (rr, piv) = b.rref();
    let _ = rr;
    let im: Vec<Vec<u32>> = piv.iter().map(|&c| b.column(c)).collect();
    let mut pm = ScalarMatrix::zeros(n, n, p);
    for (j, v) in ker.iter().chain(im.iter()).enumerate() {
        for i in 0..n {
            pm.set(i, j, v[i]);
        }
    }
    let pinv = pm.inverse().expect("kernel and image are complementary");
    let mut d = ScalarMatrix::zeros(n, n, p);
    for i in 0..ker.len() {
        d.set(i, i, 1);
    }
    pm.mul(&d).and_then(|x| x.mul(&pinv)).expect("square")
}

fn truncate_matrix(a: &PolyMatrix, level: usize) -> PolyMatrix {
    a.map(|e| e.truncate(level))
}

/// Searches `End(M)` for an idempotent modulo `m`, lifts it and splits `M`.
pub fn indecomposable_probe(engine: &Engine, m: &PresentedModule, cfg: &ToolConfig) -> Result<SplitReport> {
    let blocks = block_split(m)?;
    if blocks.len() > 1 {
        return Ok(SplitReport {
            verdict: SplitVerdict::Decomposes,
            factors: blocks,
            method: "block structure of the presentation".into(),
        });
    }
    let Some(m) = blocks.into_iter().next() else {
        return Ok(SplitReport {
            verdict: SplitVerdict::Decomposes,
            factors: Vec::new(),
            method: "zero module".into(),
        });
    };
    let fiber = Fiber::new(&m);
    let mu = fiber.dim();
    if mu == 1 {
        return Ok(SplitReport {
            verdict: SplitVerdict::IndecomposableLikely,
            factors: vec![m],
            method: "cyclic module".into(),
        });
    }
    let lift_level = cfg.fp_level.max(cfg.hom_level + 2);
    let end = engine.hom_space(&m, &m, lift_level)?;
    let images: Vec<ScalarMatrix> = end.maps.iter().map(|h| fiber.induced(h)).collect();
    let p = m.ctx().p();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &format!("split:{}", m.key())));
    let mut split_found = false;
    let mut all_split_single = true;
    for _ in 0..cfg.trials.clamp(1, 16) {
        let coeffs: Vec<u32> = (0..images.len()).map(|_| rng.gen_range(0..p)).collect();
        let mut a = ScalarMatrix::zeros(mu, mu, p);
        for (c, img) in coeffs.iter().zip(&images) {
            a = a.add(&img.scale(*c));
        }
        let eig = eigenvalues(&a);
        let total: usize = eig.iter().map(|e| e.1).sum();
        if total < mu {
            all_split_single = false;
            continue;
        }
        if eig.len() == 1 {
            continue;
        }
        split_found = true;
        let e_bar = fitting_idempotent(&a, eig[0].0);
        // express ē in the span of the induced endomorphisms
        let mut sys = ScalarMatrix::zeros(mu * mu, images.len(), p);
        for (j, img) in images.iter().enumerate() {
            for r in 0..mu {
                for c in 0..mu {
                    sys.set(r * mu + c, j, img.get(r, c));
                }
            }
        }
        let rhs: Vec<u32> = (0..mu * mu).map(|k| e_bar.get(k / mu, k % mu)).collect();
        let Some(sol) = sys.solve(&rhs)? else {
            continue;
        };
        let ctx = m.ctx();
        let mut e = PolyMatrix::zeros(ctx, m.ngens(), m.ngens());
        for (c, h) in sol.iter().zip(&end.maps) {
            if *c != 0 {
                e = e.add(&h.map(|x| x.scale(*c)))?;
            }
        }
        let three = Poly::constant(ctx, 3);
        let two = Poly::constant(ctx, 2);
        for _ in 0..4 {
            let e2 = truncate_matrix(&e.mat_mul(&e)?, lift_level);
            let e3 = truncate_matrix(&e2.mat_mul(&e)?, lift_level);
            e = e2.scale(&three).sub(&e3.scale(&two))?;
        }
        let id = PolyMatrix::identity(ctx, m.ngens());
        let first = m.with_relations(&id.sub(&e)?)?;
        let second = m.with_relations(&e)?;
        if first.min_generators() == 0 || second.min_generators() == 0 {
            continue;
        }
        return Ok(SplitReport {
            verdict: SplitVerdict::Decomposes,
            factors: vec![first, second],
            method: "lifted idempotent of the endomorphism ring".into(),
        });
    }
    let verdict = if split_found || !all_split_single {
        SplitVerdict::Inconclusive
    } else {
        SplitVerdict::IndecomposableLikely
    };
    Ok(SplitReport {
        verdict,
        factors: vec![m],
        method: "random endomorphisms have a single eigenvalue modulo m".into(),
    })
}

/// Full decomposition with the recursion depth capped by `cfg.depth_cap`.
/// The flag reports whether every factor was certified indecomposable-likely.
pub fn decompose(engine: &Engine, m: &PresentedModule, cfg: &ToolConfig) -> Result<(Vec<PresentedModule>, bool)> {
    fn go(
        engine: &Engine,
        m: &PresentedModule,
        cfg: &ToolConfig,
        depth: usize,
        out: &mut Vec<PresentedModule>,
    ) -> Result<bool> {
        if depth > cfg.depth_cap {
            out.push(m.clone());
            return Ok(false);
        }
        let rep = indecomposable_probe(engine, m, cfg)?;
        match rep.verdict {
            SplitVerdict::IndecomposableLikely => {
                out.extend(rep.factors);
                Ok(true)
            }
            SplitVerdict::Inconclusive => {
                out.extend(rep.factors);
                Ok(false)
            }
            SplitVerdict::Decomposes => {
                let mut ok = true;
                for f in &rep.factors {
                    ok &= go(engine, f, cfg, depth + 1, out)?;
                }
                Ok(ok)
            }
        }
    }
    let mut out = Vec::new();
    let ok = go(engine, m, cfg, 0, &mut out)?;
    Ok((out, ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    NotMember,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorMatch {
    pub factor: usize,
    pub min_generators: usize,
    /// Index of the matching indecomposable summand of `M`.
    pub matched: Option<usize>,
    /// Fingerprint separating the factor from each summand of `M`, or `None`
    /// when the comparison was not a fingerprint rejection.
    pub separations: Vec<Option<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub verdict: Membership,
    pub x_factors: usize,
    pub m_factors: usize,
    pub matches: Vec<FactorMatch>,
}

pub fn add_membership(
    engine: &Engine,
    x: &PresentedModule,
    m: &PresentedModule,
    cfg: &ToolConfig,
) -> Result<MembershipReport> {
    let (xs, x_ok) = decompose(engine, x, cfg)?;
    let (ms, m_ok) = decompose(engine, m, cfg)?;
    let mut matches = Vec::new();
    let mut verdict = Membership::Member;
    for (i, xf) in xs.iter().enumerate() {
        let mut matched = None;
        let mut separations = Vec::new();
        let mut undecided = false;
        for (j, mf) in ms.iter().enumerate() {
            let w = iso_test(engine, xf, mf, cfg)?;
            match w.verdict {
                IsoVerdict::Isomorphic => {
                    matched = Some(j);
                    separations.push(None);
                    break;
                }
                IsoVerdict::NotIsomorphic => separations.push(w.separated_by),
                IsoVerdict::Inconclusive => {
                    undecided = true;
                    separations.push(None);
                }
            }
        }
        if matched.is_none() {
            if undecided || !x_ok || !m_ok {
                if verdict == Membership::Member {
                    verdict = Membership::Inconclusive;
                }
            } else {
                verdict = Membership::NotMember;
            }
        }
        matches.push(FactorMatch {
            factor: i,
            min_generators: xf.min_generators(),
            matched,
            separations,
        });
    }
    Ok(MembershipReport {
        verdict,
        x_factors: xs.len(),
        m_factors: ms.len(),
        matches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RankAccounting {
    pub rank_m: Vec<usize>,
    pub rank_m1: Vec<usize>,
    pub lambda: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PushforwardResult {
    pub m1: MfJson,
    pub lambda: usize,
    /// Generator images of the embedding `M → R^λ`.
    pub embedding: Vec<Vec<String>>,
    /// `(D, injective on M_D, dim R^λ_D = dim im + dim M₁_D)`.
    pub exactness: Vec<(usize, bool, bool)>,
    pub rank_accounting: RankAccounting,
    pub depth_m: usize,
    pub depth_m1: usize,
}

/// `0 → M → R^λ → M₁ → 0` obtained by dualizing a minimal presentation of `M*`.
pub fn pushforward(
    engine: &Engine,
    m: &PresentedModule,
    schedule: &Schedule,
    cfg: &ToolConfig,
) -> Result<PushforwardResult> {
    let mf = m.require_mf()?;
    if m.ctx().nvars() < 3 {
        return Err(Error::Precondition(
            "pushforward needs a hypersurface of dimension at least 2".into(),
        ));
    }
    let torsion = engine.torsion_probe(m, schedule, cfg.seed)?;
    if torsion.verdict != TorsionVerdict::TorsionFree {
        return Err(Error::Torsion(format!("{:?}", torsion.trace)));
    }
    let red = mf.reduce_units();
    let lambda = PresentedModule::from_mf(&red.dual()).min_generators();
    let m1 = red.syzygy();
    let m_red = PresentedModule::from_mf(&red);
    let m1_mod = PresentedModule::from_mf(&m1);
    let free = PresentedModule::from_mf(&MatrixFactorization::direct_sum_all(&vec![
        MatrixFactorization::trivial(
            red.f()
        );
        red.size()
    ])?);
    let mut exactness = Vec::new();
    for &d in schedule.levels() {
        let ker = engine.projected_kernel_between(&m_red, &free, red.psi(), d)?;
        let src = engine.truncate(&m_red, d)?;
        let dst = engine.truncate(&free, d)?;
        let img = src.apply_between(&dst, red.psi());
        let rank = crate::linalg::span_rank(&img, dst.dim(), dst.p());
        let m1_dim = engine.truncate(&m1_mod, d)?.dim();
        let degree_ok = dst.dim() == rank + m1_dim;
        if !ker.is_empty() {
            return Err(Error::Exactness {
                degree: d,
                msg: format!("embedding has a kernel of dimension {}", ker.len()),
            });
        }
        exactness.push((d, ker.is_empty(), degree_ok));
    }
    let eq = match &cfg.eq {
        Some(e) => e.clone(),
        None => FactoredEquation::new(m.ctx(), vec![m.f().clone()])?,
    };
    let rank_m = module_rank_vector(&m_red, &eq, cfg.rank_samples, cfg.seed)?;
    let rank_m1 = module_rank_vector(&m1_mod, &eq, cfg.rank_samples, cfg.seed)?;
    let holds = rank_m.iter().zip(&rank_m1).all(|(a, b)| a + b == lambda);
    let level = schedule.levels()[0];
    Ok(PushforwardResult {
        m1: m1.to_json(),
        lambda,
        embedding: red.psi().to_text(),
        exactness,
        rank_accounting: RankAccounting {
            rank_m,
            rank_m1,
            lambda,
            holds,
        },
        depth_m: engine.depth_probe(&m_red, level, cfg.seed)?,
        depth_m1: engine.depth_probe(&m1_mod, level, cfg.seed)?,
    })
}

/// Generic linear form, exposed for probes elsewhere in the crate.
pub fn generic_form(m: &PresentedModule, seed: u64, label: &str) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, label));
    random_linear_form(m.ctx(), &mut rng)
}
