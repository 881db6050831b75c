//! The endomorphism ring `A = End_R(M)`, resolutions of `Hom(M, N)` by
//! `add(M)`-approximations, a projective-dimension probe and Ext duality.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hom::{ExtResult, Schedule};
use crate::linalg::{self, Echelon, SparseVec};
use crate::mf::{MatrixFactorization, MfJson};
use crate::poly::{Poly, PolyMatrix};
use crate::tools::{add_membership, Membership, ToolConfig};
use crate::trunc::{Engine, MonomialIndex, PresentedModule, TruncatedModule};

/// Writes vectors in the span of a fixed family as combinations of it.
struct Decomposer {
    ech: Echelon,
    ncols: usize,
    nbasis: usize,
}

impl Decomposer {
    fn new(basis: &[SparseVec], ncols: usize, p: u32) -> Self {
        let nbasis = basis.len();
        let mut ech = Echelon::new(ncols + nbasis, p);
        for (i, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            v.push(((ncols + i) as u32, 1));
            ech.insert(&v);
        }
        Self { ech, ncols, nbasis }
    }

    fn coordinates(&self, v: &SparseVec) -> Option<Vec<u32>> {
        let r = self.ech.reduce(v);
        if r.iter().any(|&(i, _)| (i as usize) < self.ncols) {
            return None;
        }
        let p = self.ech.p();
        let mut out = vec![0u32; self.nbasis];
        for (i, x) in r {
            out[i as usize - self.ncols] = crate::field::neg(x, p);
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EndRing {
    pub level: usize,
    pub dim: usize,
    #[serde(skip)]
    pub basis: Vec<PolyMatrix>,
    /// `mult[a][b]` holds the coordinates of `basis[a] ∘ basis[b]`.
    pub mult: Vec<Vec<Vec<u32>>>,
    pub identity: Vec<u32>,
}

impl EndRing {
    pub fn product(&self, u: &[u32], v: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.dim];
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0 {
                continue;
            }
            for (b, &vb) in v.iter().enumerate() {
                if vb == 0 {
                    continue;
                }
                let c = crate::field::mul(ua, vb, p);
                for (k, &t) in self.mult[a][b].iter().enumerate() {
                    if t != 0 {
                        out[k] = crate::field::add(out[k], crate::field::mul(c, t, p), p);
                    }
                }
            }
        }
        out
    }

    pub fn is_idempotent(&self, u: &[u32], p: u32) -> bool {
        self.product(u, u, p) == u
    }
}

struct EndContext {
    decomposer: Decomposer,
    low: std::sync::Arc<crate::trunc::TruncatedModule>,
}

impl EndContext {
    fn coords(&self, h: &PolyMatrix) -> Option<Vec<u32>> {
        self.decomposer.coordinates(&self.low.from_poly_matrix(h))
    }
}

/// Truncated `End(M)` with composition constants.
pub fn end_ring(
    engine: &Engine,
    m: &PresentedModule,
    level: usize,
) -> Result<(EndRing, impl Fn(&PolyMatrix) -> Option<Vec<u32>>)> {
    let hom = engine.hom_space(m, m, level)?;
    let low = engine.truncate(m, level)?;
    let ncols = m.ngens() * low.dim();
    let p = m.ctx().p();
    let ctx = EndContext {
        decomposer: Decomposer::new(&hom.coords, ncols, p),
        low,
    };
    let dim = hom.maps.len();
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let prod = hom.maps[a].mat_mul(&hom.maps[b])?;
            mult[a][b] = ctx
                .coords(&prod)
                .ok_or_else(|| Error::TruncationMismatch("composition left the truncated Hom space".into()))?;
        }
    }
    let identity = ctx
        .coords(&PolyMatrix::identity(m.ctx(), m.ngens()))
        .ok_or_else(|| Error::TruncationMismatch("identity missing from End".into()))?;
    let ring = EndRing {
        level,
        dim,
        basis: hom.maps,
        mult,
        identity,
    };
    Ok((ring, move |h: &PolyMatrix| ctx.coords(h)))
}

/// Exact morphisms `(A0, A1)` of factorizations `X → Y` with
/// `A0·φ_X = φ_Y·A1` and entries of degree at most `delta`.
pub fn exact_morphisms(
    x: &MatrixFactorization,
    y: &MatrixFactorization,
    delta: usize,
) -> Result<Vec<(PolyMatrix, PolyMatrix)>> {
    if x.ctx() != y.ctx() || x.f() != y.f() {
        return Err(Error::EquationMismatch("morphism between different equations".into()));
    }
    let ctx = x.ctx();
    let nv = ctx.nvars();
    let (a, b) = (x.size(), y.size());
    let unk = MonomialIndex::new(nv, delta + 1);
    let dmax = x.phi().max_degree().max(y.phi().max_degree());
    let tgt = MonomialIndex::new(nv, delta + dmax + 1);
    let nu = unk.len();
    let nt = tgt.len();
    let p = ctx.p();
    let mut images = Vec::with_capacity(2 * a * b * nu);
    for which in 0..2 {
        for r in 0..b {
            for c in 0..a {
                for mi in 0..nu {
                    let mu = unk.monomial(mi);
                    let mut v: SparseVec = Vec::new();
                    if which == 0 {
                        // A0 = μ·E_rc contributes μ·φ_X[c, c'] at (r, c')
                        for cc in 0..a {
                            for (t, &k) in x.phi().get(c, cc).terms() {
                                let idx = tgt.index_of(&t.mul(&mu)).expect("degree bound");
                                v.push(((idx * b * a + r * a + cc) as u32, k));
                            }
                        }
                    } else {
                        // A1 = μ·E_rc contributes -φ_Y[r', r]·μ at (r', c)
                        for rr in 0..b {
                            for (t, &k) in y.phi().get(rr, r).terms() {
                                let idx = tgt.index_of(&t.mul(&mu)).expect("degree bound");
                                v.push(((idx * b * a + rr * a + c) as u32, crate::field::neg(k, p)));
                            }
                        }
                    }
                    v.sort_unstable_by_key(|e| e.0);
                    let mut merged: SparseVec = Vec::with_capacity(v.len());
                    for (i, x) in v {
                        match merged.last_mut() {
                            Some(last) if last.0 == i => last.1 = crate::field::add(last.1, x, p),
                            _ => merged.push((i, x)),
                        }
                    }
                    merged.retain(|e| e.1 != 0);
                    images.push(merged);
                }
            }
        }
    }
    let ker = linalg::kernel(&images, nt * a * b, p);
    Ok(ker
        .into_iter()
        .map(|v| {
            let mut a0 = PolyMatrix::zeros(ctx, b, a);
            let mut a1 = PolyMatrix::zeros(ctx, b, a);
            let mut cells: Vec<Poly> = vec![Poly::zero(ctx); 2 * a * b];
            for (j, c) in v {
                let j = j as usize;
                let mi = j % nu;
                let cell = j / nu;
                cells[cell].add_term(unk.monomial(mi), c);
            }
            for (cell, poly) in cells.into_iter().enumerate() {
                let (which, r, c) = (cell / (a * b), (cell % (a * b)) / a, cell % a);
                if which == 0 {
                    a0.set(r, c, poly);
                } else {
                    a1.set(r, c, poly);
                }
            }
            (a0, a1)
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct EndoConfig {
    /// Truncation order of the Hom spaces.
    pub level: usize,
    pub depth: usize,
    /// Largest entry degree tried for Hom generators.
    pub max_degree: usize,
    pub tools: ToolConfig,
}

impl EndoConfig {
    pub fn new(nvars: usize, seed: u64) -> Self {
        Self {
            level: if nvars <= 2 { 6 } else { 4 },
            depth: 6,
            max_degree: 4,
            tools: ToolConfig::new(None, seed),
        }
    }
}

/// Index of a generator of `M` spanning a free summand `R`.
fn free_generator(m: &MatrixFactorization) -> Option<usize> {
    let n = m.size();
    (0..n).find(|&i| {
        let phi = m.phi().get(i, i);
        let psi = m.psi().get(i, i);
        psi.is_constant()
            && !psi.is_zero()
            && !phi.is_zero()
            && (0..n).all(|k| k == i || (m.phi().get(i, k).is_zero() && m.phi().get(k, i).is_zero()))
    })
}

/// Drops zero and free summands visible after unit elimination.
fn stable_part(mf: &MatrixFactorization) -> Option<MatrixFactorization> {
    let reduced = mf.reduce_units().syzygy().reduce_units().syzygy();
    if reduced.size() == 1 && (reduced.phi().get(0, 0).is_constant() || reduced.psi().get(0, 0).is_constant()) {
        return None;
    }
    Some(reduced)
}

#[derive(Debug, Clone)]
struct Cover {
    x: MatrixFactorization,
    a0: PolyMatrix,
    a1: PolyMatrix,
    copies_of_m: usize,
    from_free: usize,
    hom_dim: usize,
    image_rank: usize,
}

/// Right `End(M)`-span of a morphism `M → Y`, as truncated coordinates.
fn a_span(low: &TruncatedModule, g: &PolyMatrix, end: &[PolyMatrix]) -> Result<Vec<SparseVec>> {
    end.iter().map(|e| Ok(low.from_poly_matrix(&g.mat_mul(e)?))).collect()
}

/// An `add(M)`-approximation `R^b ⊕ M^n → Y`: one copy of `R` per generator
/// of `Y` (the `Hom(R, Y)` generators) and an irredundant set of further
/// generators of `Hom(M, Y)` as a right `End(M)`-module.
fn cover(engine: &Engine, m: &MatrixFactorization, y: &MatrixFactorization, cfg: &EndoConfig) -> Result<Cover> {
    let mm = PresentedModule::from_mf(m);
    let ym = PresentedModule::from_mf(y);
    let ctx = m.ctx();
    let r = MatrixFactorization::trivial(m.f());
    let hom = engine.hom_space(&mm, &ym, cfg.level)?;
    let to_r = engine.hom_space(&mm, &PresentedModule::from_mf(&r), cfg.level)?;
    let end = engine.hom_space(&mm, &mm, cfg.level)?;
    let low = engine.truncate(&ym, cfg.level)?;
    let ncols = m.size() * low.dim();
    let p = ctx.p();
    let target = hom.dim();
    let b = y.size();

    let mut free_span = Vec::new();
    for j in 0..b {
        for h in &to_r.maps {
            let mut g = PolyMatrix::zeros(ctx, b, m.size());
            for c in 0..m.size() {
                g.set(j, c, h.get(0, c).clone());
            }
            free_span.push(low.from_poly_matrix(&g));
        }
    }
    let mut ech = Echelon::new(ncols, p);
    ech.insert_all(free_span.iter());
    let mut chosen: Vec<(PolyMatrix, PolyMatrix, Vec<SparseVec>)> = Vec::new();
    let mut delta = 0;
    while ech.rank() < target {
        if delta > cfg.max_degree {
            return Err(Error::Exactness {
                degree: cfg.level,
                msg: format!("Hom generators need entries of degree above {}", cfg.max_degree),
            });
        }
        for (a0, a1) in exact_morphisms(m, y, delta)? {
            if ech.contains(&low.from_poly_matrix(&a0)) {
                continue;
            }
            let span = a_span(&low, &a0, &end.maps)?;
            ech.insert_all(span.iter());
            chosen.push((a0, a1, span));
            if ech.rank() == target {
                break;
            }
        }
        delta += 1;
    }
    // drop generators whose span is covered by the others
    let mut k = chosen.len();
    while k > 0 {
        k -= 1;
        let mut e = Echelon::new(ncols, p);
        e.insert_all(free_span.iter());
        for (i, c) in chosen.iter().enumerate() {
            if i != k {
                e.insert_all(c.2.iter());
            }
        }
        if e.rank() == target {
            chosen.remove(k);
        }
    }
    let mut certificate = Echelon::new(ncols, p);
    certificate.insert_all(free_span.iter());
    for c in &chosen {
        certificate.insert_all(c.2.iter());
    }

    let mut parts = vec![r; b];
    parts.extend(std::iter::repeat_n(m.clone(), chosen.len()));
    let x = MatrixFactorization::direct_sum_all(&parts)?;
    let mut a0 = PolyMatrix::zeros(ctx, b, x.size());
    let mut a1 = PolyMatrix::zeros(ctx, b, x.size());
    for j in 0..b {
        a0.set(j, j, Poly::one(ctx));
        for rr in 0..b {
            a1.set(rr, j, y.psi().get(rr, j).clone());
        }
    }
    for (k, (g0, g1, _)) in chosen.iter().enumerate() {
        let off = b + k * m.size();
        for rr in 0..b {
            for c in 0..m.size() {
                a0.set(rr, off + c, g0.get(rr, c).clone());
                a1.set(rr, off + c, g1.get(rr, c).clone());
            }
        }
    }
    Ok(Cover {
        x,
        a0,
        a1,
        copies_of_m: chosen.len(),
        from_free: b,
        hom_dim: target,
        image_rank: certificate.rank(),
    })
}

/// Syzygy of the cone of `(A0, A1): X → Y`; for a surjection this is the
/// kernel up to free summands.
fn cone_kernel(
    x: &MatrixFactorization,
    y: &MatrixFactorization,
    a0: &PolyMatrix,
    a1: &PolyMatrix,
) -> Result<MatrixFactorization> {
    let ctx = x.ctx();
    let (na, nb) = (x.size(), y.size());
    let z = PolyMatrix::zeros(ctx, na, nb);
    let phi_c = PolyMatrix::block(y.phi(), a0, &z, &x.psi().neg())?;
    let psi_c = PolyMatrix::block(y.psi(), a1, &z, &x.phi().neg())?;
    MatrixFactorization::new(x.f().clone(), psi_c, phi_c)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolutionStep {
    pub index: usize,
    /// `None` for a zero or free module.
    pub module: Option<MfJson>,
    pub min_generators: usize,
    pub membership: Membership,
    /// Copies of `M` in the cover `R^b ⊕ M^n`, besides the `b` copies of `R`.
    pub cover_count: Option<usize>,
    pub generators_from_free: Option<usize>,
    pub hom_dim: Option<usize>,
    /// `Hom(M, M^n) → Hom(M, N_i)` onto at the working truncation.
    pub hom_surjective: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxResolution {
    pub level: usize,
    pub depth_cap: usize,
    pub steps: Vec<ResolutionStep>,
    pub pd: PdResult,
    /// Some stop test was inconclusive.
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdResult {
    Finite(usize),
    Exceeds(usize),
}

impl Serialize for PdResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PdResult::Finite(n) => s.serialize_u64(*n as u64),
            PdResult::Exceeds(d) => s.serialize_str(&format!("> {d}")),
        }
    }
}

/// Resolves `N` by `add(M)`-approximations `M^{n_i} → N_i` until some `N_i`
/// lies in `add(M)`.
pub fn construction_resolution(
    engine: &Engine,
    m: &PresentedModule,
    n: &PresentedModule,
    cfg: &EndoConfig,
) -> Result<ApproxResolution> {
    if cfg.depth > 8 {
        return Err(Error::Precondition("resolution depth is capped at 8".into()));
    }
    let m_mf = m.require_mf()?.clone();
    let n_mf = n.require_mf()?.clone();
    if free_generator(&m_mf).is_none() {
        let r = PresentedModule::from_mf(&MatrixFactorization::trivial(m.f()));
        if add_membership(engine, &r, m, &cfg.tools)?.verdict != Membership::Member {
            return Err(Error::Precondition("R is not a direct summand of M".into()));
        }
    }
    let m_mod = PresentedModule::from_mf(&m_mf);
    let mut steps = Vec::new();
    let mut cur = stable_part(&n_mf);
    let mut flagged = false;
    let mut pd = PdResult::Exceeds(cfg.depth);
    for i in 0..=cfg.depth {
        let Some(y) = cur.clone() else {
            steps.push(ResolutionStep {
                index: i,
                module: None,
                min_generators: 0,
                membership: Membership::Member,
                cover_count: None,
                generators_from_free: None,
                hom_dim: None,
                hom_surjective: None,
            });
            pd = PdResult::Finite(i);
            break;
        };
        let ym = PresentedModule::from_mf(&y);
        let membership = add_membership(engine, &ym, &m_mod, &cfg.tools)?.verdict;
        let mut step = ResolutionStep {
            index: i,
            module: Some(y.to_json()),
            min_generators: ym.min_generators(),
            membership,
            cover_count: None,
            generators_from_free: None,
            hom_dim: None,
            hom_surjective: None,
        };
        match membership {
            Membership::Member => {
                steps.push(step);
                pd = PdResult::Finite(i);
                break;
            }
            Membership::Inconclusive => flagged = true,
            Membership::NotMember => {}
        }
        if i == cfg.depth {
            steps.push(step);
            break;
        }
        let cv = cover(engine, &m_mf, &y, cfg)?;
        step.cover_count = Some(cv.copies_of_m);
        step.generators_from_free = Some(cv.from_free);
        step.hom_dim = Some(cv.hom_dim);
        step.hom_surjective = Some(cv.image_rank == cv.hom_dim);
        steps.push(step);
        cur = stable_part(&cone_kernel(&cv.x, &y, &cv.a0, &cv.a1)?);
    }
    Ok(ApproxResolution {
        level: cfg.level,
        depth_cap: cfg.depth,
        steps,
        pd,
        flagged,
    })
}

/// Projective dimension of `Hom(M, N)` over `End(M)`, up to the depth cap.
pub fn pd_probe(
    engine: &Engine,
    m: &PresentedModule,
    n: &PresentedModule,
    cfg: &EndoConfig,
) -> Result<(PdResult, ApproxResolution)> {
    let res = construction_resolution(engine, m, n, cfg)?;
    Ok((res.pd, res))
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityCheck {
    pub forward: ExtResult,
    pub dual: ExtResult,
    pub holds: Option<bool>,
}

/// `dim Ext¹(M, N) = dim Ext¹(N*, M*)`.
pub fn ext_duality_check(
    engine: &Engine,
    m: &PresentedModule,
    n: &PresentedModule,
    schedule: &Schedule,
) -> Result<DualityCheck> {
    let forward = engine.ext_periodic(m, n, 1, schedule)?;
    let nd = PresentedModule::from_mf(&n.require_mf()?.dual());
    let md = PresentedModule::from_mf(&m.require_mf()?.dual());
    let dual = engine.ext_periodic(&nd, &md, 1, schedule)?;
    let holds = match (forward.stable(), dual.stable()) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    Ok(DualityCheck { forward, dual, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerpEntry {
    pub label: String,
    pub ext: Vec<ExtResult>,
    /// `None` when some Ext is unstable.
    pub in_perp: Option<bool>,
}

/// Catalog members `X` with `Ext^i(M, X) = 0` for `1 ≤ i ≤ n`.
pub fn perp_catalog(
    engine: &Engine,
    m: &PresentedModule,
    catalog: &[(String, PresentedModule)],
    n: usize,
    schedule: &Schedule,
) -> Result<Vec<PerpEntry>> {
    if n == 0 {
        return Err(Error::Precondition("perpendicular depth starts at 1".into()));
    }
    catalog
        .iter()
        .map(|(label, x)| {
            let ext = (1..=n)
                .map(|i| engine.ext_periodic(m, x, i, schedule))
                .collect::<Result<Vec<_>>>()?;
            let in_perp = ext.iter().try_fold(true, |acc, e| e.vanishes().map(|v| acc && v));
            Ok(PerpEntry {
                label: label.clone(),
                ext,
                in_perp,
            })
        })
        .collect()
}
