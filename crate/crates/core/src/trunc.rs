//! Finite-dimensional models `M / m^L M` of finitely presented modules over
//! `R = S/(f)`.
//!
//! Coordinates of `(S/m^L)^g` are `monomial_index * g + generator`, with
//! monomials listed by ascending degree, so the coordinates of a lower level
//! form a prefix of those of a higher level. Relations are eliminated with
//! the lowest coordinate as pivot, which yields local-type standard monomials.
//!
//! Kernels are computed a few levels above the working level and projected
//! down (an Artin–Rees shift), which removes the spurious top-degree kernel
//! that plain truncation produces.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::mf::MatrixFactorization;
use crate::poly::{monomials_of_degree, Monomial, Poly, PolyMatrix, RingCtx};

pub const DEFAULT_MEMORY_CAP_MB: usize = 4096;
pub const MEMORY_CAP_ENV: &str = "MFLAB_MEMORY_CAP_MB";

/// A module `coker(rel) ⊗ R` given by a `g × r` relation matrix over `S`.
/// When built from a matrix factorization the relations already contain
/// `f·S^g`; otherwise the `f` multiples are added during truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PresentedModule {
    f: Poly,
    rel: PolyMatrix,
    mf: Option<MatrixFactorization>,
}

impl PresentedModule {
    pub fn from_mf(mf: &MatrixFactorization) -> Self {
        Self {
            f: mf.f().clone(),
            rel: mf.phi().clone(),
            mf: Some(mf.clone()),
        }
    }

    pub fn general(f: &Poly, rel: PolyMatrix) -> Result<Self> {
        if rel.ctx() != f.ctx() {
            return Err(Error::ContextMismatch);
        }
        if rel.rows() == 0 {
            return Err(Error::Shape("presentation needs at least one generator".into()));
        }
        Ok(Self {
            f: f.clone(),
            rel,
            mf: None,
        })
    }

    pub fn ctx(&self) -> &RingCtx {
        self.f.ctx()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn rel(&self) -> &PolyMatrix {
        &self.rel
    }

    pub fn mf(&self) -> Option<&MatrixFactorization> {
        self.mf.as_ref()
    }

    pub fn require_mf(&self) -> Result<&MatrixFactorization> {
        self.mf
            .as_ref()
            .ok_or_else(|| Error::Precondition("operation needs a matrix-factorization presentation".into()))
    }

    pub fn ngens(&self) -> usize {
        self.rel.rows()
    }

    pub fn max_degree(&self) -> usize {
        match &self.mf {
            Some(m) => m.max_degree(),
            None => self.rel.max_degree().max(self.f.degree().unwrap_or(0)),
        }
    }

    /// Cache key: canonical text of the presentation.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{:?}",
            self.ctx().vars().join(","),
            self.f,
            self.mf.is_some(),
            self.rel.to_text()
        )
    }

    /// `dim_k M/mM`.
    pub fn min_generators(&self) -> usize {
        self.ngens() - self.rel.constant_part().rank()
    }

    /// `coker(rel | extra)`.
    pub fn with_relations(&self, extra: &PolyMatrix) -> Result<Self> {
        Self::general(&self.f, PolyMatrix::hcat(&self.rel, extra)?)
    }

    /// `M ⊗_R N`, presented by `[rel_M ⊗ I | I ⊗ rel_N]`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.f != other.f {
            return Err(Error::EquationMismatch("tensor over different rings".into()));
        }
        let ctx = self.ctx();
        let a = self.rel.kron(&PolyMatrix::identity(ctx, other.ngens()));
        let b = PolyMatrix::identity(ctx, self.ngens()).kron(&other.rel);
        Self::general(&self.f, PolyMatrix::hcat(&a, &b)?)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.f != other.f {
            return Err(Error::EquationMismatch("direct sum over different rings".into()));
        }
        if let (Some(a), Some(b)) = (&self.mf, &other.mf) {
            return Ok(Self::from_mf(&a.direct_sum(b)?));
        }
        Self::general(&self.f, PolyMatrix::block_diag(&self.rel, &other.rel)?)
    }
}

impl std::fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.mf {
            Some(m) => write!(f, "{m:?}"),
            None => write!(f, "coker({:?}) over f = {}", self.rel, self.f),
        }
    }
}

/// Monomials of degree `< level` in ascending graded order.
#[derive(Debug)]
pub struct MonomialIndex {
    level: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, level: usize) -> Self {
        let monos: Vec<Monomial> = (0..level).flat_map(|d| monomials_of_degree(nvars, d)).collect();
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        Self { level, monos, index }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        self.monos[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    /// Number of monomials of degree `< d` (a prefix length).
    pub fn prefix(&self, d: usize) -> usize {
        self.monos.partition_point(|m| m.degree() < d)
    }

    /// Coordinates of `p · μ` in a free module of rank `g`, component `j`,
    /// dropping terms of degree `>= level`.
    pub fn times(&self, p: &Poly, mu: &Monomial, g: usize, j: usize, scale: u32) -> SparseVec {
        let prime = p.ctx().p();
        let mut out: SparseVec = p
            .terms()
            .filter_map(|(nu, c)| {
                let m = nu.mul(mu);
                if m.degree() >= self.level {
                    return None;
                }
                let idx = self.index[&m] as usize;
                Some(((idx * g + j) as u32, crate::field::mul(*c, scale, prime)))
            })
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

/// `M / m^L M` with a basis of standard coordinates.
pub struct TruncatedModule {
    level: usize,
    g: usize,
    p: u32,
    mons: Arc<MonomialIndex>,
    ech: Echelon,
    basis: Vec<u32>,
    pos: Vec<u32>,
}

const NOT_BASIS: u32 = u32::MAX;

/// Rejects coordinate spaces whose dense square would exceed the cap.
pub fn check_cap(coords: usize, cap_mb: usize) -> Result<()> {
    let bytes = (coords as u128) * (coords as u128) * 4;
    if bytes > (cap_mb as u128) << 20 {
        return Err(Error::TruncationTooLarge { coords, cap_mb });
    }
    Ok(())
}

impl TruncatedModule {
    pub fn build(m: &PresentedModule, level: usize, cap_mb: usize) -> Result<Self> {
        let mons = Arc::new(MonomialIndex::new(m.ctx().nvars(), level));
        Self::build_with(m, mons, cap_mb)
    }

    fn build_with(m: &PresentedModule, mons: Arc<MonomialIndex>, cap_mb: usize) -> Result<Self> {
        let level = mons.level();
        let g = m.ngens();
        let p = m.ctx().p();
        let coords = mons.len() * g;
        check_cap(coords, cap_mb)?;
        let mut ech = Echelon::new(coords, p);
        let mut acc = vec![0u32; coords];
        let mut cols: Vec<Vec<Poly>> = (0..m.rel.cols())
            .map(|c| (0..g).map(|r| m.rel.get(r, c).clone()).collect())
            .collect();
        if m.mf.is_none() {
            for j in 0..g {
                cols.push(
                    (0..g)
                        .map(|r| if r == j { m.f.clone() } else { Poly::zero(m.ctx()) })
                        .collect(),
                );
            }
        }
        for col in &cols {
            let Some(ord) = col.iter().filter_map(|e| e.order()).min() else {
                continue;
            };
            for mi in 0..mons.len() {
                let mu = mons.monomial(mi);
                if mu.degree() + ord >= level {
                    break;
                }
                let mut v: SparseVec = Vec::new();
                for (j, e) in col.iter().enumerate() {
                    if !e.is_zero() {
                        v.extend(mons.times(e, &mu, g, j, 1));
                    }
                }
                v.sort_unstable_by_key(|e| e.0);
                let r = ech.reduce_with(&v, &mut acc);
                ech.push_reduced(r);
            }
        }
        let basis: Vec<u32> = ech.free_columns().into_iter().map(|c| c as u32).collect();
        let mut pos = vec![NOT_BASIS; coords];
        for (i, &c) in basis.iter().enumerate() {
            pos[c as usize] = i as u32;
        }
        Ok(Self {
            level,
            g,
            p,
            mons,
            ech,
            basis,
            pos,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ngens(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self) -> usize {
        self.mons.len() * self.g
    }

    pub fn monomials(&self) -> &MonomialIndex {
        &self.mons
    }

    /// `(monomial, generator)` of a basis element.
    pub fn basis_element(&self, b: usize) -> (Monomial, usize) {
        let c = self.basis[b] as usize;
        (self.mons.monomial(c / self.g), c % self.g)
    }

    /// Normal form of a coordinate vector, expressed in basis indices.
    pub fn reduce(&self, v: &SparseVec, acc: &mut [u32]) -> SparseVec {
        self.ech
            .reduce_with(v, acc)
            .into_iter()
            .map(|(c, x)| (self.pos[c as usize], x))
            .collect()
    }

    pub fn scratch(&self) -> Vec<u32> {
        vec![0; self.coords()]
    }

    /// Images of the basis of `M_L^{a.cols}` under the polynomial matrix `a`,
    /// as vectors in `M_L^{a.rows}` (block `l` occupies `[l·dim, (l+1)·dim)`).
    pub fn apply_matrix(&self, a: &PolyMatrix) -> Vec<SparseVec> {
        let dim = self.dim();
        let mut acc = self.scratch();
        let mut out = Vec::with_capacity(a.cols() * dim);
        for k in 0..a.cols() {
            for b in 0..dim {
                let (mu, j) = self.basis_element(b);
                let mut v: SparseVec = Vec::new();
                for l in 0..a.rows() {
                    let e = a.get(l, k);
                    if e.is_zero() {
                        continue;
                    }
                    let raw = self.mons.times(e, &mu, self.g, j, 1);
                    let off = (l * dim) as u32;
                    v.extend(self.reduce(&raw, &mut acc).into_iter().map(|(i, x)| (i + off, x)));
                }
                out.push(v);
            }
        }
        out
    }

    /// Images of the basis of `self` under the map to `target` sending
    /// generator `j` to column `j` of `a` (`target.g × self.g`).
    pub fn apply_between(&self, target: &TruncatedModule, a: &PolyMatrix) -> Vec<SparseVec> {
        let mut acc = target.scratch();
        (0..self.dim())
            .map(|b| {
                let (mu, j) = self.basis_element(b);
                let mut raw = SparseVec::new();
                for l in 0..a.rows() {
                    let e = a.get(l, j);
                    if !e.is_zero() {
                        raw.extend(target.mons.times(e, &mu, target.g, l, 1));
                    }
                }
                raw.sort_unstable_by_key(|t| t.0);
                target.reduce(&raw, &mut acc)
            })
            .collect()
    }

    /// Maps a vector of `self^{blocks}` onto `lower^{blocks}` where `lower`
    /// is a truncation of the same presentation at a lower level.
    pub fn project(&self, v: &SparseVec, lower: &TruncatedModule, acc: &mut [u32]) -> SparseVec {
        let dim = self.dim();
        let ldim = lower.dim();
        let lcoords = lower.coords() as u32;
        let mut per_block: Vec<(usize, SparseVec)> = Vec::new();
        for &(i, x) in v {
            let blk = i as usize / dim;
            let c = self.basis[i as usize % dim];
            if c >= lcoords {
                continue;
            }
            match per_block.last_mut() {
                Some((b, vec)) if *b == blk => vec.push((c, x)),
                _ => per_block.push((blk, vec![(c, x)])),
            }
        }
        let mut out = SparseVec::new();
        for (blk, mut raw) in per_block {
            raw.sort_unstable_by_key(|e| e.0);
            let off = (blk * ldim) as u32;
            out.extend(lower.reduce(&raw, acc).into_iter().map(|(i, x)| (i + off, x)));
        }
        out
    }

    /// Converts a vector of `self^{blocks}` into a `g × blocks` polynomial matrix.
    pub fn to_poly_matrix(&self, ctx: &RingCtx, v: &SparseVec, blocks: usize) -> PolyMatrix {
        let dim = self.dim();
        let mut out = PolyMatrix::zeros(ctx, self.g, blocks);
        let mut cells: Vec<Poly> = vec![Poly::zero(ctx); self.g * blocks];
        for &(i, x) in v {
            let blk = i as usize / dim;
            let (mu, j) = self.basis_element(i as usize % dim);
            cells[j * blocks + blk].add_term(mu, x);
        }
        for j in 0..self.g {
            for blk in 0..blocks {
                out.set(j, blk, std::mem::replace(&mut cells[j * blocks + blk], Poly::zero(ctx)));
            }
        }
        out
    }

    /// Coordinates in `self^{a.cols}` of the columns of a polynomial matrix
    /// `a` (`g × blocks`), reduced to normal form.
    pub fn from_poly_matrix(&self, a: &PolyMatrix) -> SparseVec {
        let dim = self.dim();
        let mut acc = self.scratch();
        let mut out = SparseVec::new();
        let one = Monomial::one();
        for k in 0..a.cols() {
            let mut raw = SparseVec::new();
            for j in 0..self.g {
                raw.extend(self.mons.times(a.get(j, k), &one, self.g, j, 1));
            }
            raw.sort_unstable_by_key(|e| e.0);
            let off = (k * dim) as u32;
            out.extend(self.reduce(&raw, &mut acc).into_iter().map(|(i, x)| (i + off, x)));
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Levels added above the working level when computing kernels, on top
    /// of the largest entry degree of the maps involved.
    pub gap_extra: usize,
    pub memory_cap_mb: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            gap_extra: 2,
            memory_cap_mb: DEFAULT_MEMORY_CAP_MB,
        }
    }
}

impl EngineConfig {
    /// Default configuration with the memory cap taken from the environment.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(cap) = std::env::var(MEMORY_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            cfg.memory_cap_mb = cap;
        }
        cfg
    }
}

/// Shared truncation cache. Truncations are immutable once built, so the
/// engine can be used from several threads.
pub struct Engine {
    cfg: EngineConfig,
    cache: Mutex<HashMap<(String, usize), Arc<TruncatedModule>>>,
    mons: Mutex<HashMap<(usize, usize), Arc<MonomialIndex>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Self {
        Self {
            cfg,
            cache: Mutex::new(HashMap::new()),
            mons: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn monomial_index(&self, nvars: usize, level: usize) -> Arc<MonomialIndex> {
        let mut g = self.mons.lock().expect("monomial cache poisoned");
        g.entry((nvars, level))
            .or_insert_with(|| Arc::new(MonomialIndex::new(nvars, level)))
            .clone()
    }

    pub fn truncate(&self, m: &PresentedModule, level: usize) -> Result<Arc<TruncatedModule>> {
        let key = (m.key(), level);
        if let Some(t) = self.cache.lock().expect("truncation cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let mons = self.monomial_index(m.ctx().nvars(), level);
        let t = Arc::new(TruncatedModule::build_with(m, mons, self.cfg.memory_cap_mb)?);
        self.cache
            .lock()
            .expect("truncation cache poisoned")
            .insert(key, t.clone());
        Ok(t)
    }

    /// Artin–Rees shift for kernels of maps with entries up to `degree`.
    pub fn gap(&self, degree: usize) -> usize {
        degree + self.cfg.gap_extra
    }

    /// Basis (in `n_lo^{a.cols}` coordinates) of the kernel of `a` acting on
    /// `N^{a.cols} → N^{a.rows}`, computed at level `lo + gap` and projected
    /// to level `lo`.
    pub fn projected_kernel(&self, n: &PresentedModule, a: &PolyMatrix, lo: usize) -> Result<Vec<SparseVec>> {
        let gap = self.gap(a.max_degree().max(n.max_degree()));
        let hi = self.truncate(n, lo + gap)?;
        let low = self.truncate(n, lo)?;
        let images = hi.apply_matrix(a);
        let ker = linalg::kernel(&images, a.rows() * hi.dim(), hi.p());
        let mut acc = low.scratch();
        let projected: Vec<SparseVec> = ker.iter().map(|v| hi.project(v, &low, &mut acc)).collect();
        // keep an independent spanning set
        let mut ech = Echelon::new(a.cols() * low.dim(), hi.p());
        Ok(projected.into_iter().filter(|v| ech.insert(v).is_some()).collect())
    }

    /// Projected kernel of the map `src → dst` given by `a` on generators.
    pub fn projected_kernel_between(
        &self,
        src: &PresentedModule,
        dst: &PresentedModule,
        a: &PolyMatrix,
        lo: usize,
    ) -> Result<Vec<SparseVec>> {
        let gap = self.gap(a.max_degree().max(src.max_degree()).max(dst.max_degree()));
        let src_hi = self.truncate(src, lo + gap)?;
        let dst_hi = self.truncate(dst, lo + gap)?;
        let src_lo = self.truncate(src, lo)?;
        let images = src_hi.apply_between(&dst_hi, a);
        let ker = linalg::kernel(&images, dst_hi.dim(), src_hi.p());
        let mut acc = src_lo.scratch();
        let mut ech = Echelon::new(src_lo.dim(), src_hi.p());
        Ok(ker
            .iter()
            .map(|v| src_hi.project(v, &src_lo, &mut acc))
            .filter(|v| ech.insert(v).is_some())
            .collect())
    }

    /// `dim (ker out + m^lo) / (im inc + m^lo)` on `N^{out.cols}`.
    pub fn homology_dim(
        &self,
        n: &PresentedModule,
        out: &PolyMatrix,
        inc: Option<&PolyMatrix>,
        lo: usize,
    ) -> Result<usize> {
        let ker = self.projected_kernel(n, out, lo)?;
        let low = self.truncate(n, lo)?;
        let ncols = out.cols() * low.dim();
        let image = match inc {
            Some(b) => low.apply_matrix(b),
            None => Vec::new(),
        };
        Ok(linalg::quotient_dim(&ker, &image, ncols, low.p()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::{s_ideal, FactoredEquation, SubsetModuleSpec};

    fn eq(src: &str) -> FactoredEquation {
        FactoredEquation::parse(src, None, 32003).unwrap()
    }

    fn standard_monomials(t: &TruncatedModule, ctx: &RingCtx) -> Vec<String> {
        (0..t.dim())
            .map(|b| Poly::term(ctx, t.basis_element(b).0, 1).to_string())
            .collect()
    }

    #[test]
    fn basis_of_xy() {
        let e = eq("x*y");
        let r = PresentedModule::from_mf(&MatrixFactorization::trivial(&e.product()));
        let t = TruncatedModule::build(&r, 4, 64).unwrap();
        assert_eq!(t.dim(), 7);
        assert_eq!(
            standard_monomials(&t, e.ctx()),
            vec!["1", "y", "x", "y^2", "x^2", "y^3", "x^3"]
        );
    }

    #[test]
    fn basis_of_line() {
        let e = eq("x*y");
        let s1 = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        let t = TruncatedModule::build(&PresentedModule::from_mf(&s1), 3, 64).unwrap();
        assert_eq!(standard_monomials(&t, e.ctx()), vec!["1", "y", "y^2"]);
    }

    #[test]
    fn memory_cap_is_enforced() {
        let e = eq("x*y");
        let r = PresentedModule::from_mf(&MatrixFactorization::trivial(&e.product()));
        assert!(matches!(
            TruncatedModule::build(&r, 400, 1),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn projected_kernel_drops_boundary() {
        // multiplication by x on k[x] = S/(y): naive truncation has kernel x^{L-1}
        let e = eq("x*y");
        let s2 = PresentedModule::from_mf(&s_ideal(&SubsetModuleSpec::new(&e, &[2]).unwrap()).unwrap());
        let engine = Engine::default();
        let x = PolyMatrix::scalar(&Poly::var(e.ctx(), 0), 1);
        assert!(engine.projected_kernel(&s2, &x, 6).unwrap().is_empty());
        let y = PolyMatrix::scalar(&Poly::var(e.ctx(), 1), 1);
        assert_eq!(engine.projected_kernel(&s2, &y, 6).unwrap().len(), 6);
    }

    #[test]
    fn tensor_of_lines_is_residue_field() {
        let e = eq("x*y");
        let s1 = PresentedModule::from_mf(&s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap());
        let s2 = PresentedModule::from_mf(&s_ideal(&SubsetModuleSpec::new(&e, &[2]).unwrap()).unwrap());
        let t = s1.tensor(&s2).unwrap();
        assert_eq!(TruncatedModule::build(&t, 6, 64).unwrap().dim(), 1);
        assert_eq!(t.min_generators(), 1);
    }
}
