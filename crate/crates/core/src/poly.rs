//! Sparse multivariate polynomials over a prime field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{self, FieldElem};
use crate::linalg::ScalarMatrix;

pub const MAX_VARS: usize = 6;

#[derive(Debug, PartialEq, Eq, Hash)]
struct CtxInner {
    vars: Vec<String>,
    p: u32,
}

/// Ordered variable names plus the characteristic. Cheap to clone.
#[derive(Clone, Debug)]
pub struct RingCtx(Arc<CtxInner>);

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for RingCtx {}

impl std::hash::Hash for RingCtx {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingCtx {
    pub fn new<S: AsRef<str>>(vars: &[S], p: u64) -> Result<Self> {
        let p = field::check_modulus(p)?;
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::BadContext(format!(
                "need between 1 and {MAX_VARS} variables, got {}",
                vars.len()
            )));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::BadContext(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::BadContext(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Self(Arc::new(CtxInner { vars, p })))
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Context with `extra` appended after the existing variables.
    pub fn extend(&self, extra: &[&str]) -> Result<Self> {
        for e in extra {
            if self.var_index(e).is_some() {
                return Err(Error::VariableCollision(e.to_string()));
            }
        }
        let mut vars = self.0.vars.clone();
        vars.extend(extra.iter().map(|s| s.to_string()));
        Self::new(&vars, self.p() as u64)
    }
}

/// Exponent vector. Slots past the context's variable count stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Self([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self(e)
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Self(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut e = [0; MAX_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.0[i] + other.0[i];
        }
        Self(e)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut e = [0; MAX_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.0[i] - other.0[i];
        }
        Some(Self(e))
    }

    pub fn exps(&self, nvars: usize) -> &[u16] {
        &self.0[..nvars]
    }

    fn write(&self, ctx: &RingCtx, out: &mut String) {
        let mut first = true;
        for (i, name) in ctx.vars().iter().enumerate() {
            let e = self.0[i];
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(name);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Graded lexicographic order with the first variable largest.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of total degree exactly `deg`, in
/// ascending graded-lex order.
pub fn monomials_of_degree(nvars: usize, deg: usize) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: usize, cur: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left as u16;
            out.push(Monomial(*cur));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(nvars, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = [0u16; MAX_VARS];
    rec(nvars, 0, deg, &mut cur, &mut out);
    out.sort();
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: RingCtx,
    terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero(ctx: &RingCtx) -> Self {
        Self {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &RingCtx, c: i64) -> Self {
        Self::term(ctx, Monomial::one(), field::reduce_i64(c, ctx.p()))
    }

    pub fn one(ctx: &RingCtx) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn var(ctx: &RingCtx, i: usize) -> Self {
        assert!(i < ctx.nvars());
        Self::term(ctx, Monomial::var(i), 1)
    }

    pub fn var_named(ctx: &RingCtx, name: &str) -> Result<Self> {
        let i = ctx.var_index(name).ok_or_else(|| Error::UnknownVariable {
            name: name.to_string(),
            pos: 0,
        })?;
        Ok(Self::var(ctx, i))
    }

    pub fn term(ctx: &RingCtx, m: Monomial, c: u32) -> Self {
        let mut terms = BTreeMap::new();
        let c = c % ctx.p();
        if c != 0 {
            terms.insert(m, c);
        }
        Self {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms(ctx: &RingCtx, it: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u32)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn coeff_elem(&self, m: &Monomial) -> FieldElem {
        FieldElem::from_raw(self.coeff(m), self.ctx.p())
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        let p = self.ctx.p();
        let c = c % p;
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = field::add(*e, c, p);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn homogeneous_part(&self, deg: usize) -> Poly {
        Self::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (*m, *c)),
        )
    }

    /// Degree-one component. Errors when the constant term is nonzero.
    pub fn linear_part(&self) -> Result<Poly> {
        if self.constant_term() != 0 {
            return Err(Error::NonLocal(format!("`{self}` has a nonzero constant term")));
        }
        Ok(self.homogeneous_part(1))
    }

    /// Drops every term of total degree `>= d`.
    pub fn truncate(&self, d: usize) -> Poly {
        Self::from_terms(
            &self.ctx,
            self.terms.iter().filter(|(m, _)| m.degree() < d).map(|(m, c)| (*m, *c)),
        )
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.ctx.p();
        Self::from_terms(&self.ctx, self.terms.iter().map(|(m, v)| (*m, field::mul(*v, c, p))))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Poly {
        let p = self.ctx.p();
        Self::from_terms(
            &self.ctx,
            self.terms.iter().map(|(k, v)| (k.mul(m), field::mul(*v, c, p))),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(&self.ctx);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, point: &[u32]) -> u32 {
        let p = self.ctx.p();
        let n = self.ctx.nvars();
        let mut acc = 0u32;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.exps(n).iter().enumerate() {
                if e > 0 {
                    t = field::mul(t, field::pow(point[i], e as u64, p), p);
                }
            }
            acc = field::add(acc, t, p);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let p = self.ctx.p();
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[var] -= 1;
            out.add_term(nm, field::mul(*c, e as u32 % p, p));
        }
        out
    }

    /// Re-homes the polynomial in `target`, mapping variables by name.
    pub fn embed(&self, target: &RingCtx) -> Result<Poly> {
        if target.p() != self.ctx.p() {
            return Err(Error::ContextMismatch);
        }
        let map: Vec<usize> = self
            .ctx
            .vars()
            .iter()
            .map(|v| target.var_index(v).ok_or(Error::ContextMismatch))
            .collect::<Result<_>>()?;
        let n = self.ctx.nvars();
        Ok(Self::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = [0u16; MAX_VARS];
                for (i, &x) in m.exps(n).iter().enumerate() {
                    e[map[i]] = x;
                }
                (Monomial(e), *c)
            }),
        ))
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let p = self.ctx.p();
        let lc_inv = field::inv(lc, p);
        let mut rem = self.clone();
        let mut quo = Poly::zero(&self.ctx);
        while let Some((m, c)) = rem.leading() {
            let q = m.div(&lm)?;
            let qc = field::mul(c, lc_inv, p);
            quo.add_term(q, qc);
            rem = &rem - &divisor.mul_monomial(&q, qc);
        }
        Some(quo)
    }

    fn check_ctx(&self, other: &Poly) {
        assert!(self.ctx == other.ctx, "polynomials from different rings");
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if m.degree() == 0 {
                out.push_str(&c.to_string());
            } else {
                if *c != 1 {
                    out.push_str(&c.to_string());
                    out.push('*');
                }
                m.write(&self.ctx, &mut out);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let p = self.ctx.p();
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, field::neg(*c, p));
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let p = self.ctx.p();
        let mut out = Poly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), field::mul(*ca, *cb, p));
            }
        }
        out
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.ctx.p();
        Poly::from_terms(&self.ctx, self.terms.iter().map(|(m, c)| (*m, field::neg(*c, p))))
    }
}

/// Product of a list of polynomials (one for the empty list).
pub fn product<'a>(ctx: &RingCtx, it: impl IntoIterator<Item = &'a Poly>) -> Poly {
    it.into_iter().fold(Poly::one(ctx), |acc, f| &acc * f)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ctx: RingCtx,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ctx: &RingCtx, rows: usize, cols: usize) -> Self {
        Self {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![Poly::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &RingCtx, n: usize) -> Self {
        Self::scalar(&Poly::one(ctx), n)
    }

    /// `c * I_n`.
    pub fn scalar(c: &Poly, n: usize) -> Self {
        let mut m = Self::zeros(c.ctx(), n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(ctx: &RingCtx, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for e in row {
                if e.ctx() != ctx {
                    return Err(Error::ContextMismatch);
                }
                entries.push(e);
            }
        }
        Ok(Self {
            ctx: ctx.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().filter_map(|e| e.degree()).max().unwrap_or(0)
    }

    pub fn mat_mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &PolyMatrix, op: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape("entrywise operation on different shapes".into()));
        }
        Ok(Self {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn map(&self, op: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        Self {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(op).collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|e| -e)
    }

    pub fn scale(&self, c: &Poly) -> PolyMatrix {
        self.map(|e| e * c)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn block(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> Result<PolyMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("incompatible blocks".into()));
        }
        let ctx = a.ctx.clone();
        for m in [b, c, d] {
            if m.ctx != ctx {
                return Err(Error::ContextMismatch);
            }
        }
        let mut out = PolyMatrix::zeros(&ctx, a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
        let ctx = a.ctx.clone();
        Self::block(
            a,
            &PolyMatrix::zeros(&ctx, a.rows, b.cols),
            &PolyMatrix::zeros(&ctx, b.rows, a.cols),
            b,
        )
    }

    /// Horizontal concatenation `[a | b]`.
    pub fn hcat(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
        if a.rows != b.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        let mut out = PolyMatrix::zeros(&a.ctx, a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
            for j in 0..b.cols {
                out.set(i, a.cols + j, b.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ctx, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &[u32]) -> ScalarMatrix {
        let p = self.ctx.p();
        let data = self.entries.iter().map(|e| e.eval(point)).collect();
        ScalarMatrix::from_raw(self.rows, self.cols, p, data)
    }

    /// Entrywise constant terms, i.e. the matrix reduced modulo the maximal ideal.
    pub fn constant_part(&self) -> ScalarMatrix {
        let p = self.ctx.p();
        let data = self.entries.iter().map(|e| e.constant_term()).collect();
        ScalarMatrix::from_raw(self.rows, self.cols, p, data)
    }

    pub fn embed(&self, target: &RingCtx) -> Result<PolyMatrix> {
        Ok(PolyMatrix {
            ctx: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.embed(target)).collect::<Result<_>>()?,
        })
    }

    /// Canonical text rows, as used in the JSON formats.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_text())
    }
}
