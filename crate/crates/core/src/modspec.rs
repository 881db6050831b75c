//! Textual module specifications: `R`, `S{1,2}`, a path to a factorization
//! JSON file, and the wrappers `knoerrer(X[, u, v])`, `syz(X)`, `dual(X)`,
//! `sum(X, Y, ..)`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::mf::{s_ideal, FactoredEquation, MatrixFactorization, SubsetModuleSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Free,
    Subset(Vec<usize>),
    Json(String),
    Knoerrer(Box<ModuleSpec>, String, String),
    Syzygy(Box<ModuleSpec>),
    Dual(Box<ModuleSpec>),
    Sum(Vec<ModuleSpec>),
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn syntax(src: &str, msg: &str) -> Error {
    Error::Syntax {
        pos: 0,
        msg: format!("module spec `{src}`: {msg}"),
    }
}

impl ModuleSpec {
    pub fn parse(src: &str) -> Result<Self> {
        let s = src.trim();
        if s == "R" {
            return Ok(Self::Free);
        }
        if let Some(inner) = s.strip_prefix("S{").and_then(|r| r.strip_suffix('}')) {
            let idx = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| syntax(src, "subset entries must be integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::Subset(idx));
        }
        if let Some(inner) = s
            .strip_prefix("sum")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
        {
            let parts = split_args(inner)
                .into_iter()
                .map(Self::parse)
                .collect::<Result<Vec<_>>>()?;
            if parts.len() < 2 {
                return Err(syntax(src, "sum needs at least two summands"));
            }
            return Ok(Self::Sum(parts));
        }
        for (name, kind) in [("knoerrer", 0), ("syz", 1), ("dual", 2)] {
            if let Some(rest) = s.strip_prefix(name).map(str::trim_start) {
                if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                    let args = split_args(inner);
                    let base = Box::new(Self::parse(args[0])?);
                    return match (kind, args.len()) {
                        (0, 1) => Ok(Self::Knoerrer(base, "u".into(), "v".into())),
                        (0, 3) => Ok(Self::Knoerrer(base, args[1].into(), args[2].into())),
                        (1, 1) => Ok(Self::Syzygy(base)),
                        (2, 1) => Ok(Self::Dual(base)),
                        _ => Err(syntax(src, "wrong number of arguments")),
                    };
                }
            }
        }
        if s.ends_with(".json") {
            return Ok(Self::Json(s.into()));
        }
        Err(syntax(
            src,
            "expected R, S{..}, a .json path, knoerrer(..), syz(..) or dual(..)",
        ))
    }

    /// Builds the factorization over the ring of `eq`, or over its Knörrer
    /// extension when wrapped.
    pub fn resolve(&self, eq: &FactoredEquation) -> Result<MatrixFactorization> {
        match self {
            Self::Free => Ok(MatrixFactorization::trivial(&eq.product())),
            Self::Subset(s) => s_ideal(&SubsetModuleSpec::new(eq, s)?),
            Self::Json(path) => {
                let text = std::fs::read_to_string(Path::new(path))
                    .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
                MatrixFactorization::from_json_str(&text)
            }
            Self::Knoerrer(b, u, v) => b.resolve(eq)?.knoerrer(u, v),
            Self::Syzygy(b) => Ok(b.resolve(eq)?.syzygy()),
            Self::Dual(b) => Ok(b.resolve(eq)?.dual()),
            Self::Sum(parts) => {
                let mfs = parts.iter().map(|p| p.resolve(eq)).collect::<Result<Vec<_>>>()?;
                MatrixFactorization::direct_sum_all(&mfs)
            }
        }
    }
}

impl std::fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Free => write!(f, "R"),
            Self::Subset(s) => write!(
                f,
                "S{{{}}}",
                s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
            Self::Json(p) => write!(f, "{p}"),
            Self::Knoerrer(b, u, v) if u == "u" && v == "v" => write!(f, "knoerrer({b})"),
            Self::Knoerrer(b, u, v) => write!(f, "knoerrer({b}, {u}, {v})"),
            Self::Syzygy(b) => write!(f, "syz({b})"),
            Self::Dual(b) => write!(f, "dual({b})"),
            Self::Sum(parts) => write!(
                f,
                "sum({})",
                parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

/// Resolves two specs and checks that they live over the same ring.
pub fn resolve_pair(
    eq: &FactoredEquation,
    a: &ModuleSpec,
    b: &ModuleSpec,
) -> Result<(MatrixFactorization, MatrixFactorization)> {
    let x = a.resolve(eq)?;
    let y = b.resolve(eq)?;
    if x.ctx() != y.ctx() {
        // a JSON factorization may spell the same ring with a subset of variables
        if let Ok(y2) = y.embed(x.ctx()) {
            if y2.f() == x.f() {
                return Ok((x, y2));
            }
        }
        if let Ok(x2) = x.embed(y.ctx()) {
            if x2.f() == y.f() {
                return Ok((x2, y));
            }
        }
        return Err(Error::ContextMismatch);
    }
    if x.f() != y.f() {
        return Err(Error::EquationMismatch(format!("{} vs {}", x.f(), y.f())));
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in [
            "R",
            "S{1,2}",
            "knoerrer(S{1})",
            "knoerrer(syz(S{2}), a, b)",
            "dual(R)",
            "m.json",
            "sum(R, knoerrer(S{1}))",
        ] {
            assert_eq!(ModuleSpec::parse(s).unwrap().to_string(), s);
        }
        assert!(ModuleSpec::parse("T{1}").is_err());
        assert!(ModuleSpec::parse("S{a}").is_err());
        assert!(ModuleSpec::parse("sum(R)").is_err());
    }

    #[test]
    fn resolve_specs() {
        let eq = FactoredEquation::parse("x*y", None, 32003).unwrap();
        let k = ModuleSpec::parse("knoerrer(S{1})").unwrap().resolve(&eq).unwrap();
        assert_eq!(k.ctx().nvars(), 4);
        assert_eq!(k.size(), 2);
        let s = ModuleSpec::parse("syz(S{1})").unwrap().resolve(&eq).unwrap();
        assert_eq!(s.phi().to_text(), vec![vec!["y".to_string()]]);
        let m = ModuleSpec::parse("sum(knoerrer(R), knoerrer(S{1}))")
            .unwrap()
            .resolve(&eq)
            .unwrap();
        assert_eq!(m.size(), 4);
        assert!(resolve_pair(&eq, &ModuleSpec::Free, &ModuleSpec::parse("knoerrer(R)").unwrap()).is_err());
    }
}
