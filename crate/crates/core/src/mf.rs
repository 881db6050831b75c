//! Matrix factorizations `(φ, ψ)` with `φψ = ψφ = f·I` and the standard
//! constructions on them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{identifiers, parse_factors, parse_poly};
use crate::poly::{product, Poly, PolyMatrix, RingCtx};
use crate::seed::derive_seed;

/// Outcome of [`validate_mf`]. On failure the first offending entry of the
/// first failing product is reported (1-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MfVerdict {
    Valid,
    Invalid {
        product: String,
        row: usize,
        col: usize,
        expected: String,
        found: String,
    },
}

impl MfVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, MfVerdict::Valid)
    }
}

pub fn validate_mf(f: &Poly, phi: &PolyMatrix, psi: &PolyMatrix) -> MfVerdict {
    let n = phi.rows();
    if phi.cols() != n || psi.rows() != n || psi.cols() != n {
        return MfVerdict::Invalid {
            product: "shape".into(),
            row: 0,
            col: 0,
            expected: format!("{n}x{n}"),
            found: format!("{}x{} and {}x{}", phi.rows(), phi.cols(), psi.rows(), psi.cols()),
        };
    }
    let zero = Poly::zero(f.ctx());
    for (name, a, b) in [("phi*psi", phi, psi), ("psi*phi", psi, phi)] {
        let prod = match a.mat_mul(b) {
            Ok(p) => p,
            Err(e) => {
                return MfVerdict::Invalid {
                    product: name.into(),
                    row: 0,
                    col: 0,
                    expected: "compatible matrices".into(),
                    found: e.to_string(),
                }
            }
        };
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { f } else { &zero };
                if prod.get(i, j) != want {
                    return MfVerdict::Invalid {
                        product: name.into(),
                        row: i + 1,
                        col: j + 1,
                        expected: want.to_string(),
                        found: prod.get(i, j).to_string(),
                    };
                }
            }
        }
    }
    MfVerdict::Valid
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFactorization {
    f: Poly,
    phi: PolyMatrix,
    psi: PolyMatrix,
}

impl MatrixFactorization {
    /// Checked constructor.
    pub fn new(f: Poly, phi: PolyMatrix, psi: PolyMatrix) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidMf("f is zero".into()));
        }
        if phi.ctx() != f.ctx() || psi.ctx() != f.ctx() {
            return Err(Error::ContextMismatch);
        }
        match validate_mf(&f, &phi, &psi) {
            MfVerdict::Valid => Ok(Self { f, phi, psi }),
            MfVerdict::Invalid {
                product,
                row,
                col,
                expected,
                found,
            } => Err(Error::InvalidMf(format!(
                "{product} entry ({row},{col}) is `{found}`, expected `{expected}`"
            ))),
        }
    }

    pub fn from_1x1(f: &Poly, a: &Poly, b: &Poly) -> Result<Self> {
        let c = f.ctx();
        Self::new(
            f.clone(),
            PolyMatrix::from_rows(c, vec![vec![a.clone()]])?,
            PolyMatrix::from_rows(c, vec![vec![b.clone()]])?,
        )
    }

    /// `(f, 1)`, whose cokernel is `R` itself.
    pub fn trivial(f: &Poly) -> Self {
        Self {
            f: f.clone(),
            phi: PolyMatrix::scalar(f, 1),
            psi: PolyMatrix::identity(f.ctx(), 1),
        }
    }

    pub fn ctx(&self) -> &RingCtx {
        self.f.ctx()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn size(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &PolyMatrix {
        &self.psi
    }

    pub fn validate(&self) -> MfVerdict {
        validate_mf(&self.f, &self.phi, &self.psi)
    }

    pub fn max_degree(&self) -> usize {
        self.phi.max_degree().max(self.psi.max_degree())
    }

    pub fn syzygy(&self) -> Self {
        Self {
            f: self.f.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
        }
    }

    pub fn dual(&self) -> Self {
        Self {
            f: self.f.clone(),
            phi: self.phi.transpose(),
            psi: self.psi.transpose(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ctx() != other.ctx() {
            return Err(Error::ContextMismatch);
        }
        if self.f != other.f {
            return Err(Error::EquationMismatch(format!("`{}` vs `{}`", self.f, other.f)));
        }
        Ok(Self {
            f: self.f.clone(),
            phi: PolyMatrix::block_diag(&self.phi, &other.phi)?,
            psi: PolyMatrix::block_diag(&self.psi, &other.psi)?,
        })
    }

    pub fn direct_sum_all(parts: &[Self]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    /// Knörrer's functor to `f + uv` over the ring with `u, v` adjoined.
    pub fn knoerrer(&self, u: &str, v: &str) -> Result<Self> {
        let ctx = self.ctx().extend(&[u, v])?;
        let phi = self.phi.embed(&ctx)?;
        let psi = self.psi.embed(&ctx)?;
        let n = self.size();
        let uu = PolyMatrix::scalar(&Poly::var_named(&ctx, u)?, n);
        let vv = PolyMatrix::scalar(&Poly::var_named(&ctx, v)?, n);
        let f = &self.f.embed(&ctx)? + &(&Poly::var_named(&ctx, u)? * &Poly::var_named(&ctx, v)?);
        let big_phi = PolyMatrix::block(&uu, &psi, &phi, &vv.neg())?;
        let big_psi = PolyMatrix::block(&vv, &psi, &phi, &uu.neg())?;
        Self::new(f, big_phi, big_psi)
    }

    /// The extension of `m` by `n` given by a cocycle `(α, β)`:
    /// `([φ_n, α; 0, φ_m], [ψ_n, β; 0, ψ_m])`.
    pub fn extension_from_cocycle(n: &Self, m: &Self, alpha: &PolyMatrix, beta: &PolyMatrix) -> Result<Self> {
        if n.f != m.f {
            return Err(Error::EquationMismatch("extension of different equations".into()));
        }
        for a in [alpha, beta] {
            if a.rows() != n.size() || a.cols() != m.size() {
                return Err(Error::Shape(format!("cocycle block must be {}x{}", n.size(), m.size())));
            }
        }
        let c1 = n.phi.mat_mul(beta)?.add(&alpha.mat_mul(&m.psi)?)?;
        if !c1.is_zero() {
            return Err(Error::CocycleFailure("phi_n*beta + alpha*psi_m != 0".into()));
        }
        let c2 = n.psi.mat_mul(alpha)?.add(&beta.mat_mul(&m.phi)?)?;
        if !c2.is_zero() {
            return Err(Error::CocycleFailure("psi_n*alpha + beta*phi_m != 0".into()));
        }
        let z = PolyMatrix::zeros(n.ctx(), m.size(), n.size());
        Self::new(
            n.f.clone(),
            PolyMatrix::block(&n.phi, alpha, &z, &m.phi)?,
            PolyMatrix::block(&n.psi, beta, &z, &m.psi)?,
        )
    }

    /// Conjugate `(P φ Q, Q⁻¹ ψ P⁻¹)` for scalar invertible `P`, `Q`.
    pub fn conjugate(&self, p: &PolyMatrix, p_inv: &PolyMatrix, q: &PolyMatrix, q_inv: &PolyMatrix) -> Result<Self> {
        Self::new(
            self.f.clone(),
            p.mat_mul(&self.phi)?.mat_mul(q)?,
            q_inv.mat_mul(&self.psi)?.mat_mul(p_inv)?,
        )
    }

    /// Splits off `1×1` blocks of the form `(f·u, 1/u)` where φ has a nonzero
    /// scalar entry, repeating until φ has no constant entries left. The
    /// cokernel is unchanged.
    pub fn reduce_units(&self) -> Self {
        let mut cur = self.clone();
        while let Some(next) = cur.eliminate_one_unit() {
            cur = next;
        }
        cur
    }

    fn eliminate_one_unit(&self) -> Option<Self> {
        let n = self.size();
        let p = self.ctx().p();
        let (i, j) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| {
            let e = self.phi.get(i, j);
            e.is_constant() && !e.is_zero()
        })?;
        if n == 1 {
            // coker of a unit is zero; keep a 1x1 representative of the zero module
            return None;
        }
        let c = self.phi.get(i, j).constant_term();
        let cinv = crate::field::inv(c, p);
        let ctx = self.ctx();
        // row ops: R_k -= (φ_kj / c) R_i ; col ops: C_l -= (φ_il / c) C_j
        let mut pm = PolyMatrix::identity(ctx, n);
        let mut pinv = PolyMatrix::identity(ctx, n);
        let mut qm = PolyMatrix::identity(ctx, n);
        let mut qinv = PolyMatrix::identity(ctx, n);
        for k in 0..n {
            if k != i {
                let m = self.phi.get(k, j).scale(cinv);
                pm.set(k, i, -&m);
                pinv.set(k, i, m);
            }
        }
        for l in 0..n {
            if l != j {
                let m = self.phi.get(i, l).scale(cinv);
                qm.set(j, l, -&m);
                qinv.set(j, l, m);
            }
        }
        let conj = self.conjugate(&pm, &pinv, &qm, &qinv).ok()?;
        let rows: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let cols: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let phi = conj.phi.submatrix(&rows, &cols);
        let psi = conj.psi.submatrix(&cols, &rows);
        Self::new(self.f.clone(), phi, psi).ok()
    }

    /// Diagonal blocks if φ and ψ are simultaneously block diagonal after a
    /// common permutation of indices. Connected components of the support graph.
    pub fn block_components(&self) -> Vec<Self> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for i in 0..n {
            for j in 0..n {
                if !self.phi.get(i, j).is_zero() || !self.psi.get(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match root_of[r] {
                Some(g) => groups[g].push(i),
                None => {
                    root_of[r] = Some(groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        groups
            .into_iter()
            .map(|g| Self {
                f: self.f.clone(),
                phi: self.phi.submatrix(&g, &g),
                psi: self.psi.submatrix(&g, &g),
            })
            .collect()
    }

    /// Per-factor generic ranks of `coker φ`, sampled at smooth points of
    /// each component with a majority vote.
    pub fn rank_vector(&self, eq: &FactoredEquation, samples: usize, seed: u64) -> Result<Vec<usize>> {
        if eq.ctx() != self.ctx() {
            return Err(Error::ContextMismatch);
        }
        if eq.product() != self.f {
            return Err(Error::EquationMismatch(format!(
                "factorization of `{}` does not multiply to `{}`",
                eq.product(),
                self.f
            )));
        }
        let samples = samples.max(1);
        let mut out = Vec::with_capacity(eq.len());
        for i in 0..eq.len() {
            let pts = eq.smooth_points(i, samples, derive_seed(seed, &format!("rank:{i}")))?;
            let mut votes: Vec<(usize, usize)> = Vec::new();
            for pt in &pts {
                let r = self.size() - self.phi.eval(pt).rank();
                match votes.iter_mut().find(|(v, _)| *v == r) {
                    Some(e) => e.1 += 1,
                    None => votes.push((r, 1)),
                }
            }
            votes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            out.push(votes[0].0);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> MfJson {
        MfJson {
            vars: self.ctx().vars().to_vec(),
            p: self.ctx().p(),
            f: self.f.to_string(),
            size: self.size(),
            phi: self.phi.to_text(),
            psi: self.psi.to_text(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json(doc: &MfJson) -> Result<Self> {
        let ctx = RingCtx::new(&doc.vars, doc.p as u64)?;
        let f = parse_poly(&doc.f, &ctx)?;
        let mat = |rows: &[Vec<String>]| -> Result<PolyMatrix> {
            if rows.len() != doc.size || rows.iter().any(|r| r.len() != doc.size) {
                return Err(Error::Shape(format!("expected {0}x{0} matrix", doc.size)));
            }
            PolyMatrix::from_rows(
                &ctx,
                rows.iter()
                    .map(|r| r.iter().map(|s| parse_poly(s, &ctx)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        Self::new(f, mat(&doc.phi)?, mat(&doc.psi)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    /// Moves the factorization into a context containing its variables.
    pub fn embed(&self, ctx: &RingCtx) -> Result<Self> {
        Ok(Self {
            f: self.f.embed(ctx)?,
            phi: self.phi.embed(ctx)?,
            psi: self.psi.embed(ctx)?,
        })
    }
}

impl fmt::Debug for MatrixFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MF(f = {}, phi = {:?}, psi = {:?})", self.f, self.phi, self.psi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfJson {
    pub vars: Vec<String>,
    pub p: u32,
    pub f: String,
    pub size: usize,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
}

/// `f = f_1 ⋯ f_n` with the factors kept separately.
#[derive(Clone, PartialEq, Eq)]
pub struct FactoredEquation {
    ctx: RingCtx,
    factors: Vec<Poly>,
}

impl FactoredEquation {
    pub fn new(ctx: &RingCtx, factors: Vec<Poly>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NonLocal("no factors".into()));
        }
        for f in &factors {
            if f.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            if f.is_zero() {
                return Err(Error::NonLocal("zero factor".into()));
            }
            if f.constant_term() != 0 {
                return Err(Error::NonLocal(format!(
                    "factor `{f}` is a unit or has a nonzero constant term"
                )));
            }
        }
        for i in 0..factors.len() {
            for j in 0..i {
                if proportional(&factors[i], &factors[j]) {
                    return Err(Error::NonLocal(format!(
                        "factors {} and {} are proportional; equation is not reduced",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self {
            ctx: ctx.clone(),
            factors,
        })
    }

    /// Parses factored text such as `x*y*(x+y)`. Variables default to the
    /// identifiers in order of first appearance.
    pub fn parse(src: &str, vars: Option<&[String]>, p: u64) -> Result<Self> {
        let vars = match vars {
            Some(v) => v.to_vec(),
            None => identifiers(src)?,
        };
        let ctx = RingCtx::new(&vars, p)?;
        let factors = parse_factors(src, &ctx)?;
        Self::new(&ctx, factors)
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self) -> Poly {
        product(&self.ctx, &self.factors)
    }

    /// `f_I` for a 1-based index set.
    pub fn subset_product(&self, subset: &[usize]) -> Poly {
        product(&self.ctx, subset.iter().map(|&i| &self.factors[i - 1]))
    }

    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        (1..=self.len()).filter(|i| !subset.contains(i)).collect()
    }

    /// All nonempty subsets in size-then-lexicographic order.
    pub fn all_subsets(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out: Vec<Vec<usize>> = (1u32..(1 << n))
            .map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
            .collect();
        out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    pub fn to_text(&self) -> String {
        self.factors
            .iter()
            .map(|f| if f.len() > 1 { format!("({f})") } else { f.to_string() })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Points on `V(f_i)` where the gradient of `f` is nonzero, found by
    /// fixing random coordinates and scanning one coordinate through F_p.
    pub fn smooth_points(&self, i: usize, count: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
        let p = self.ctx.p();
        let nv = self.ctx.nvars();
        let fi = &self.factors[i];
        let f = self.product();
        let grad: Vec<Poly> = (0..nv).map(|k| f.derivative(k)).collect();
        let scan_vars: Vec<usize> = (0..nv).filter(|&k| !fi.derivative(k).is_zero()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let max_attempts = 64 * count.max(1);
        for attempt in 0..max_attempts {
            if out.len() >= count || scan_vars.is_empty() {
                break;
            }
            let k = scan_vars[attempt % scan_vars.len()];
            let mut pt: Vec<u32> = (0..nv).map(|_| rng.gen_range(1..p)).collect();
            let start = rng.gen_range(0..p);
            let found = (0..p).map(|t| (start + t) % p).find(|&val| {
                pt[k] = val;
                fi.eval(&pt) == 0 && grad.iter().any(|g| g.eval(&pt) != 0)
            });
            if found.is_some() && !out.contains(&pt) {
                out.push(pt);
            }
        }
        if out.len() < count {
            return Err(Error::InsufficientPoints { factor: i + 1 });
        }
        Ok(out)
    }
}

impl fmt::Debug for FactoredEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    let (Some((ma, ca)), Some((mb, cb))) = (a.leading(), b.leading()) else {
        return false;
    };
    if ma != mb || a.len() != b.len() {
        return false;
    }
    let p = a.ctx().p();
    let r = crate::field::mul(ca, crate::field::inv(cb, p), p);
    &b.scale(r) == a
}

/// `S_I = S/(f_I)` for a nonempty index set `I` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetModuleSpec {
    pub eq: FactoredEquation,
    pub subset: Vec<usize>,
}

impl SubsetModuleSpec {
    pub fn new(eq: &FactoredEquation, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::BadSubset("empty index set".into()));
        }
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != subset.len() {
            return Err(Error::BadSubset("repeated index".into()));
        }
        if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > eq.len()) {
            return Err(Error::BadSubset(format!("index {bad} outside 1..={}", eq.len())));
        }
        Ok(Self {
            eq: eq.clone(),
            subset: s,
        })
    }

    pub fn is_full(&self) -> bool {
        self.subset.len() == self.eq.len()
    }

    pub fn label(&self) -> String {
        if self.is_full() {
            return "R".into();
        }
        format!(
            "S{{{}}}",
            self.subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// The `1×1` factorization `(f_I, f_{I^c})`; the full set gives `(f, 1)`.
pub fn s_ideal(spec: &SubsetModuleSpec) -> Result<MatrixFactorization> {
    let eq = &spec.eq;
    let a = eq.subset_product(&spec.subset);
    let b = eq.subset_product(&eq.complement(&spec.subset));
    MatrixFactorization::from_1x1(&eq.product(), &a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(src: &str) -> FactoredEquation {
        FactoredEquation::parse(src, None, 32003).unwrap()
    }

    fn poly(src: &str, ctx: &RingCtx) -> Poly {
        parse_poly(src, ctx).unwrap()
    }

    #[test]
    fn validate_examples() {
        let e = eq("x*y");
        let c = e.ctx();
        let f = e.product();
        assert!(MatrixFactorization::from_1x1(&f, &poly("x", c), &poly("y", c)).is_ok());
        let bad = validate_mf(
            &f,
            &PolyMatrix::from_rows(c, vec![vec![poly("x", c)]]).unwrap(),
            &PolyMatrix::from_rows(c, vec![vec![poly("x", c)]]).unwrap(),
        );
        match bad {
            MfVerdict::Invalid { row, col, found, .. } => {
                assert_eq!((row, col), (1, 1));
                assert_eq!(found, "x^2");
            }
            MfVerdict::Valid => panic!("x*x accepted for xy"),
        }
    }

    #[test]
    fn knoerrer_of_x_y() {
        let e = eq("x*y");
        let m = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        let k = m.knoerrer("u", "v").unwrap();
        assert!(k.validate().is_valid());
        assert_eq!(k.f().to_string(), "x*y + u*v");
        assert_eq!(k.phi().to_text(), vec![vec!["u", "y"], vec!["x", "32002*v"]]);
        assert_eq!(k.psi().to_text(), vec![vec!["v", "y"], vec!["x", "32002*u"]]);
        assert!(matches!(m.knoerrer("x", "v"), Err(Error::VariableCollision(_))));
        assert!(k.dual().validate().is_valid());
    }

    #[test]
    fn subset_modules() {
        let e = eq("x*y*(x+y)");
        let s1 = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        assert_eq!(s1.phi().get(0, 0).to_string(), "x");
        assert_eq!(s1.psi().get(0, 0).to_string(), "x*y + y^2");
        let full = s_ideal(&SubsetModuleSpec::new(&e, &[1, 2, 3]).unwrap()).unwrap();
        assert_eq!(full, MatrixFactorization::trivial(&e.product()));
        let s23 = s_ideal(&SubsetModuleSpec::new(&e, &[2, 3]).unwrap()).unwrap();
        assert_eq!(s1.syzygy(), s23);
        assert_eq!(s1.dual(), s1);
        assert!(SubsetModuleSpec::new(&e, &[]).is_err());
        assert!(SubsetModuleSpec::new(&e, &[4]).is_err());
        let sum = s1
            .direct_sum(&s_ideal(&SubsetModuleSpec::new(&e, &[1, 2]).unwrap()).unwrap())
            .unwrap();
        assert!(sum.validate().is_valid());
        assert_eq!(sum.block_components().len(), 2);
    }

    #[test]
    fn cocycles() {
        let e = eq("x*y");
        let c = e.ctx();
        let s1 = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        let s2 = s_ideal(&SubsetModuleSpec::new(&e, &[2]).unwrap()).unwrap();
        let z = PolyMatrix::zeros(c, 1, 1);
        let split = MatrixFactorization::extension_from_cocycle(&s2, &s1, &z, &z).unwrap();
        assert_eq!(split, s2.direct_sum(&s1).unwrap());
        // φ_n β + α ψ_m = yβ + αy = 0 and ψ_n α + β φ_m = xα + βx = 0
        let one = PolyMatrix::identity(c, 1);
        let ext = MatrixFactorization::extension_from_cocycle(&s2, &s1, &one, &one.neg()).unwrap();
        assert!(ext.validate().is_valid());
        assert!(matches!(
            MatrixFactorization::extension_from_cocycle(&s2, &s1, &one, &one),
            Err(Error::CocycleFailure(_))
        ));
    }

    #[test]
    fn rank_vectors() {
        let e = eq("x*y*(x+y)");
        let s1 = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        assert_eq!(s1.rank_vector(&e, 5, 7).unwrap(), vec![1, 0, 0]);
        let r = MatrixFactorization::trivial(&e.product());
        assert_eq!(r.rank_vector(&e, 5, 7).unwrap(), vec![1, 1, 1]);
        let d = s1.direct_sum(&s1).unwrap();
        assert_eq!(d.rank_vector(&e, 5, 7).unwrap(), vec![2, 0, 0]);
    }

    #[test]
    fn unit_reduction() {
        let e = eq("x*y");
        let c = e.ctx();
        let s1 = s_ideal(&SubsetModuleSpec::new(&e, &[1]).unwrap()).unwrap();
        let free0 = MatrixFactorization::trivial(&e.product()).syzygy();
        let sum = free0.direct_sum(&s1).unwrap();
        let p = PolyMatrix::from_rows(
            c,
            vec![vec![poly("1", c), poly("0", c)], vec![poly("y", c), poly("1", c)]],
        )
        .unwrap();
        let pinv = PolyMatrix::from_rows(
            c,
            vec![vec![poly("1", c), poly("0", c)], vec![poly("-y", c), poly("1", c)]],
        )
        .unwrap();
        let i2 = PolyMatrix::identity(c, 2);
        let mixed = sum.conjugate(&p, &pinv, &i2, &i2).unwrap();
        assert_eq!(mixed.reduce_units(), s1);
    }

    #[test]
    fn json_round_trip() {
        let e = eq("x*(x^2+y^3)");
        let m = s_ideal(&SubsetModuleSpec::new(&e, &[2]).unwrap()).unwrap();
        let s = m.to_json_string();
        assert_eq!(MatrixFactorization::from_json_str(&s).unwrap(), m);
        assert!(FactoredEquation::parse("x*x", None, 32003).is_err());
        assert!(FactoredEquation::parse("x*(1+y)", None, 32003).is_err());
    }
}
