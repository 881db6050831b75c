//! Hom, Ext and Tor over `R = S/(f)` on truncated modules, plus the
//! torsion probe used as an MCM test for curves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::mf::MatrixFactorization;
use crate::poly::{Monomial, Poly, PolyMatrix, RingCtx};
use crate::seed::derive_seed;
use crate::trunc::{Engine, MonomialIndex, PresentedModule};

/// Strictly increasing truncation orders with at least three entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Schedule(Vec<usize>);

impl Schedule {
    pub fn new(levels: Vec<usize>) -> Result<Self> {
        if levels.len() < 3 {
            return Err(Error::BadSchedule(format!(
                "need at least 3 entries, got {}",
                levels.len()
            )));
        }
        if levels[0] < 2 {
            return Err(Error::BadSchedule("truncation orders start at 2".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadSchedule("entries must be strictly increasing".into()));
        }
        Ok(Self(levels))
    }

    /// `{8, 10, 12}`, used for curves.
    pub fn curves() -> Self {
        Self(vec![8, 10, 12])
    }

    /// `{4, 5, 6}`, used for hypersurfaces in four variables.
    pub fn threefolds() -> Self {
        Self(vec![4, 5, 6])
    }

    /// Default for a ring with `nvars` variables.
    pub fn for_vars(nvars: usize) -> Self {
        if nvars <= 2 {
            Self::curves()
        } else {
            Self::threefolds()
        }
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// The schedule with one more step of the same spacing as its last step.
    pub fn extended(&self) -> Self {
        let n = self.0.len();
        let step = self.0[n - 1] - self.0[n - 2];
        let mut v = self.0.clone();
        v.push(self.last() + step);
        Self(v)
    }
}

impl TryFrom<Vec<usize>> for Schedule {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Schedule> for Vec<usize> {
    fn from(s: Schedule) -> Self {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtKind {
    Ext,
    Tor,
}

/// A dimension that is either stable across the last three truncation orders
/// or reported as unstable. Serialized as an integer or the string `"unstable"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StableDim {
    Stable(usize),
    Unstable,
}

impl StableDim {
    pub fn value(&self) -> Option<usize> {
        match self {
            StableDim::Stable(d) => Some(*d),
            StableDim::Unstable => None,
        }
    }

    pub fn from_trace(dims: &[usize]) -> Self {
        match dims {
            [.., a, b, c] if a == b && b == c => StableDim::Stable(*c),
            _ => StableDim::Unstable,
        }
    }
}

impl Serialize for StableDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StableDim::Stable(d) => s.serialize_u64(*d as u64),
            StableDim::Unstable => s.serialize_str("unstable"),
        }
    }
}

impl<'de> Deserialize<'de> for StableDim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(StableDim::Stable(n)),
            Raw::S(s) if s == "unstable" => Ok(StableDim::Unstable),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad stable_dim `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtResult {
    pub kind: ExtKind,
    pub i: usize,
    pub dims: Vec<(usize, usize)>,
    pub stable_dim: StableDim,
}

impl ExtResult {
    pub fn new(kind: ExtKind, i: usize, dims: Vec<(usize, usize)>) -> Self {
        let trace: Vec<usize> = dims.iter().map(|d| d.1).collect();
        Self {
            kind,
            i,
            stable_dim: StableDim::from_trace(&trace),
            dims,
        }
    }

    pub fn stable(&self) -> Option<usize> {
        self.stable_dim.value()
    }

    pub fn vanishes(&self) -> Option<bool> {
        self.stable().map(|d| d == 0)
    }
}

/// Standard monomials of `S/((f) + m^D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationBasis {
    pub vars: Vec<String>,
    pub f: String,
    pub d: usize,
    pub monomials: Vec<String>,
    pub dim: usize,
}

/// Truncated module maps `M → N`, each a `g_N × g_M` polynomial matrix whose
/// column `k` is the image of generator `k`, valid modulo `m^level`.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub level: usize,
    pub maps: Vec<PolyMatrix>,
    pub coords: Vec<SparseVec>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionVerdict {
    TorsionFree,
    HasTorsion,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub verdict: TorsionVerdict,
    pub forms: Vec<String>,
    /// Per linear form, `(D, dim of the kernel of t on M_D)`.
    pub trace: Vec<Vec<(usize, usize)>>,
}

impl TorsionReport {
    pub fn is_mcm(&self) -> Option<bool> {
        match self.verdict {
            TorsionVerdict::TorsionFree => Some(true),
            TorsionVerdict::HasTorsion => Some(false),
            TorsionVerdict::Unstable => None,
        }
    }
}

pub const TORSION_TRIALS: usize = 3;

fn same_ring(a: &PresentedModule, b: &PresentedModule) -> Result<()> {
    if a.ctx() != b.ctx() {
        return Err(Error::TruncationMismatch("modules over different variable sets".into()));
    }
    if a.f() != b.f() {
        return Err(Error::TruncationMismatch(format!("`{}` vs `{}`", a.f(), b.f())));
    }
    Ok(())
}

/// A nonzero linear form with uniformly random coefficients.
pub fn random_linear_form(ctx: &RingCtx, rng: &mut ChaCha8Rng) -> Poly {
    let p = ctx.p();
    loop {
        let t = Poly::from_terms(ctx, (0..ctx.nvars()).map(|i| (Monomial::var(i), rng.gen_range(0..p))));
        if !t.is_zero() {
            return t;
        }
    }
}

impl Engine {
    pub fn truncation_basis(&self, ctx: &RingCtx, f: &Poly, d: usize) -> Result<TruncationBasis> {
        if f.is_zero() || f.constant_term() != 0 {
            return Err(Error::NonLocal(format!("`{f}` must be a nonzero nonunit")));
        }
        if d < 2 {
            return Err(Error::BadSchedule("truncation order must be at least 2".into()));
        }
        if f.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
        let r = PresentedModule::from_mf(&MatrixFactorization::trivial(f));
        let t = self.truncate(&r, d)?;
        let monomials = (0..t.dim())
            .map(|b| Poly::term(ctx, t.basis_element(b).0, 1).to_string())
            .collect();
        Ok(TruncationBasis {
            vars: ctx.vars().to_vec(),
            f: f.to_string(),
            d,
            monomials,
            dim: t.dim(),
        })
    }

    /// Truncated `Hom_R(M, N)` as the kernel of `rel_Mᵀ` on `N^{g_M}`.
    pub fn hom_space(&self, m: &PresentedModule, n: &PresentedModule, level: usize) -> Result<HomSpace> {
        same_ring(m, n)?;
        let relt = m.rel().transpose();
        let coords = self.projected_kernel(n, &relt, level)?;
        let low = self.truncate(n, level)?;
        let maps = coords
            .iter()
            .map(|v| low.to_poly_matrix(m.ctx(), v, m.ngens()))
            .collect();
        Ok(HomSpace { level, maps, coords })
    }

    pub fn hom_dim(&self, m: &PresentedModule, n: &PresentedModule, level: usize) -> Result<usize> {
        same_ring(m, n)?;
        self.homology_dim(n, &m.rel().transpose(), None, level)
    }

    /// `Ext^i_R(M, N)` from the dualized 2-periodic resolution of `M`.
    pub fn ext_periodic(
        &self,
        m: &PresentedModule,
        n: &PresentedModule,
        i: usize,
        schedule: &Schedule,
    ) -> Result<ExtResult> {
        if i == 0 {
            return Err(Error::Precondition("Ext index starts at 1".into()));
        }
        same_ring(m, n)?;
        let mf = m.require_mf()?;
        let (out, inc) = if i % 2 == 1 {
            (mf.psi().transpose(), mf.phi().transpose())
        } else {
            (mf.phi().transpose(), mf.psi().transpose())
        };
        let mut dims = Vec::new();
        for &d in schedule.levels() {
            dims.push((d, self.homology_dim(n, &out, Some(&inc), d)?));
        }
        Ok(ExtResult::new(ExtKind::Ext, i, dims))
    }

    /// `Tor_i^R(M, N)` from the 2-periodic resolution of `M` tensored with `N`.
    pub fn tor_periodic(
        &self,
        m: &PresentedModule,
        n: &PresentedModule,
        i: usize,
        schedule: &Schedule,
    ) -> Result<ExtResult> {
        if i == 0 {
            return Err(Error::Precondition("Tor index starts at 1".into()));
        }
        same_ring(m, n)?;
        let mf = m.require_mf()?;
        let (out, inc) = if i % 2 == 1 {
            (mf.phi().clone(), mf.psi().clone())
        } else {
            (mf.psi().clone(), mf.phi().clone())
        };
        let mut dims = Vec::new();
        for &d in schedule.levels() {
            dims.push((d, self.homology_dim(n, &out, Some(&inc), d)?));
        }
        Ok(ExtResult::new(ExtKind::Tor, i, dims))
    }

    /// `Ext¹(M, N)` as cocycles `(α, β)` modulo coboundaries in the Hom
    /// complex of the two factorizations over `S`, with entries truncated at
    /// degree `d`, `d+1`, `d+2`.
    pub fn ext1_cocycle(&self, m: &MatrixFactorization, n: &MatrixFactorization, d: usize) -> Result<ExtResult> {
        if m.ctx() != n.ctx() || m.f() != n.f() {
            return Err(Error::TruncationMismatch(
                "factorizations of different equations".into(),
            ));
        }
        let gap = self.gap(m.max_degree().max(n.max_degree()));
        let mut dims = Vec::new();
        for deg in d..d + 3 {
            dims.push((deg, self.cocycle_homology(m, n, deg + 1, deg + 1 + gap)?));
        }
        Ok(ExtResult::new(ExtKind::Ext, 1, dims))
    }

    /// The cocycle engine evaluated at the truncation orders of a schedule,
    /// so its trace lines up with [`Engine::ext_periodic`].
    pub fn ext1_cocycle_schedule(
        &self,
        m: &MatrixFactorization,
        n: &MatrixFactorization,
        schedule: &Schedule,
    ) -> Result<ExtResult> {
        if m.ctx() != n.ctx() || m.f() != n.f() {
            return Err(Error::TruncationMismatch(
                "factorizations of different equations".into(),
            ));
        }
        let gap = self.gap(m.max_degree().max(n.max_degree()));
        let mut dims = Vec::new();
        for &lo in schedule.levels() {
            dims.push((lo, self.cocycle_homology(m, n, lo, lo + gap)?));
        }
        Ok(ExtResult::new(ExtKind::Ext, 1, dims))
    }

    fn cocycle_homology(
        &self,
        m: &MatrixFactorization,
        n: &MatrixFactorization,
        lo: usize,
        hi: usize,
    ) -> Result<usize> {
        let ctx = m.ctx();
        let (nn, nm) = (n.size(), m.size());
        let block = nn * nm;
        let e = 2 * block;
        let hi_mons = self.monomial_index(ctx.nvars(), hi);
        let lo_mons = self.monomial_index(ctx.nvars(), lo);
        crate::trunc::check_cap(hi_mons.len() * e, self.config().memory_cap_mb)?;

        // δ¹(α, β) = (φ_n β + α ψ_m, ψ_n α + β φ_m)
        let d1 = |a: &PolyMatrix, b: &PolyMatrix| -> Result<(PolyMatrix, PolyMatrix)> {
            Ok((
                n.phi().mat_mul(b)?.add(&a.mat_mul(m.psi())?)?,
                n.psi().mat_mul(a)?.add(&b.mat_mul(m.phi())?)?,
            ))
        };
        // δ⁰(h, k) = (φ_n h − k φ_m, ψ_n k − h ψ_m)
        let d0 = |h: &PolyMatrix, k: &PolyMatrix| -> Result<(PolyMatrix, PolyMatrix)> {
            Ok((
                n.phi().mat_mul(h)?.sub(&k.mat_mul(m.phi())?)?,
                n.psi().mat_mul(k)?.sub(&h.mat_mul(m.psi())?)?,
            ))
        };
        let images = |mons: &MonomialIndex,
                      op: &dyn Fn(&PolyMatrix, &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)>|
         -> Result<Vec<SparseVec>> {
            let mut out = Vec::with_capacity(mons.len() * e);
            for mi in 0..mons.len() {
                let mu = mons.monomial(mi);
                let term = Poly::term(ctx, mu, 1);
                for ent in 0..e {
                    let (which, r, c) = (ent / block, (ent % block) / nm, ent % nm);
                    let mut a = PolyMatrix::zeros(ctx, nn, nm);
                    let mut b = PolyMatrix::zeros(ctx, nn, nm);
                    if which == 0 {
                        a.set(r, c, term.clone());
                    } else {
                        b.set(r, c, term.clone());
                    }
                    let (x, y) = op(&a, &b)?;
                    out.push(matrix_pair_coords(mons, &x, &y, e));
                }
            }
            Ok(out)
        };
        let ker_imgs = images(&hi_mons, &d1)?;
        let p = ctx.p();
        let ker = linalg::kernel(&ker_imgs, hi_mons.len() * e, p);
        let cut = (lo_mons.len() * e) as u32;
        let projected: Vec<SparseVec> = ker
            .into_iter()
            .map(|v| v.into_iter().filter(|&(i, _)| i < cut).collect())
            .collect();
        let image = images(&lo_mons, &d0)?;
        Ok(linalg::quotient_dim(&projected, &image, lo_mons.len() * e, p))
    }

    /// Kernel dimensions of generic linear forms acting on `M`. A module over
    /// a reduced curve is torsion-free exactly when these kernels vanish.
    pub fn torsion_probe(&self, m: &PresentedModule, schedule: &Schedule, seed: u64) -> Result<TorsionReport> {
        let ctx = m.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("torsion:{}", m.key())));
        let mut forms = Vec::new();
        let mut trace = Vec::new();
        for _ in 0..TORSION_TRIALS {
            let t = random_linear_form(ctx, &mut rng);
            let a = PolyMatrix::scalar(&t, 1);
            let mut row = Vec::new();
            for &d in schedule.levels() {
                row.push((d, self.nzd_kernel_dim(m, &a, d)?));
            }
            forms.push(t.to_string());
            trace.push(row);
        }
        let all_zero = trace.iter().all(|r| r.iter().all(|x| x.1 == 0));
        let stable_positive = trace.iter().all(|r| {
            let dims: Vec<usize> = r.iter().map(|x| x.1).collect();
            matches!(StableDim::from_trace(&dims), StableDim::Stable(k) if k > 0)
        });
        let verdict = if all_zero {
            TorsionVerdict::TorsionFree
        } else if stable_positive {
            TorsionVerdict::HasTorsion
        } else {
            TorsionVerdict::Unstable
        };
        Ok(TorsionReport { verdict, forms, trace })
    }

    /// Kernel of a `1×1` scalar action on a single copy of `M`.
    fn nzd_kernel_dim(&self, m: &PresentedModule, a: &PolyMatrix, d: usize) -> Result<usize> {
        Ok(self.projected_kernel(m, a, d)?.len())
    }

    /// `M ⊗ N*` is MCM, decided by the torsion probe.
    pub fn tensor_mcm_check(
        &self,
        m: &PresentedModule,
        n: &PresentedModule,
        schedule: &Schedule,
        seed: u64,
    ) -> Result<TorsionReport> {
        same_ring(m, n)?;
        let n_dual = PresentedModule::from_mf(&n.require_mf()?.dual());
        self.torsion_probe(&m.tensor(&n_dual)?, schedule, seed)
    }

    /// Length of a regular sequence of generic linear forms on `M`, capped
    /// at the Krull dimension of `R`, checked at level `d`.
    pub fn depth_probe(&self, m: &PresentedModule, d: usize, seed: u64) -> Result<usize> {
        let ctx = m.ctx();
        let dim_r = ctx.nvars() - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("depth:{}", m.key())));
        let mut cur = m.clone();
        for k in 0..dim_r {
            let t = random_linear_form(ctx, &mut rng);
            if cur.min_generators() == 0 {
                return Ok(dim_r);
            }
            if self.nzd_kernel_dim(&cur, &PolyMatrix::scalar(&t, 1), d)? > 0 {
                return Ok(k);
            }
            cur = cur.with_relations(&PolyMatrix::scalar(&t, cur.ngens()))?;
        }
        Ok(dim_r)
    }
}

fn matrix_pair_coords(mons: &MonomialIndex, x: &PolyMatrix, y: &PolyMatrix, e: usize) -> SparseVec {
    let block = x.rows() * x.cols();
    let mut out = SparseVec::new();
    for (k, mat) in [x, y].into_iter().enumerate() {
        for (idx, poly) in mat.entries().iter().enumerate() {
            for (mono, c) in poly.terms() {
                if mono.degree() >= mons.level() {
                    continue;
                }
                let mi = mons.index_of(mono).expect("monomial in range");
                out.push(((mi * e + k * block + idx) as u32, *c));
            }
        }
    }
    out.sort_unstable_by_key(|t| t.0);
    out
}
