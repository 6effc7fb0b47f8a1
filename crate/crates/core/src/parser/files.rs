//! Model and transform files.
//!
//! Both formats are line based:
//!
//! ```text
//! # coupled system with constant coefficients
//! kind = cr-system
//! vars = t, x
//! params = a1, a2, b1, b2, c1, c2
//! alpha1 = "a1"
//! ```
//!
//! `kind`, `vars` and `params` take bare comma-separated lists; every other
//! key takes a double-quoted expression.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::expr::{parse_expression_at, ExprError, Pos, Scope, RESERVED};
use crate::symbolic::{Expr, ZeroTester};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{pos}: syntax error: {message}")]
    Line { pos: Pos, message: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { key: String, line: usize },
    #[error("line {line}: key `{key}` does not belong to kind {kind}")]
    KindMismatch {
        kind: String,
        key: String,
        line: usize,
    },
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("invalid declaration: {0}")]
    Declaration(String),
    #[error("`{key}` must not depend on `{var}`")]
    VariableSeparation { key: String, var: String },
    #[error("the multiplier sigma1 + i*sigma2 vanishes identically")]
    InadmissibleSigma,
}

impl FileError {
    /// Position for errors tied to a spot in the file.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            FileError::Expr(e) => Some(e.pos()),
            FileError::Line { pos, .. } => Some(*pos),
            FileError::DuplicateKey { line, .. } | FileError::KindMismatch { line, .. } => {
                Some(Pos {
                    line: *line,
                    column: 1,
                })
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Scalar,
    ScalarComplex,
    CrSystem,
    GeneralSystem,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Scalar,
        ModelKind::ScalarComplex,
        ModelKind::CrSystem,
        ModelKind::GeneralSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Scalar => "scalar",
            ModelKind::ScalarComplex => "scalar-complex",
            ModelKind::CrSystem => "cr-system",
            ModelKind::GeneralSystem => "general-system",
        }
    }

    /// Coefficient keys in file order.
    pub fn keys(self) -> Vec<String> {
        let s = |v: &[&str]| v.iter().map(|k| k.to_string()).collect();
        match self {
            ModelKind::Scalar => s(&["alpha", "beta", "gamma"]),
            ModelKind::ScalarComplex => s(&[
                "alpha_re", "alpha_im", "beta_re", "beta_im", "gamma_re", "gamma_im",
            ]),
            ModelKind::CrSystem => s(&["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2"]),
            ModelKind::GeneralSystem => ["a", "b", "c"]
                .iter()
                .flat_map(|p| (1..=4).map(move |i| format!("{p}{i}")))
                .collect(),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = FileError;
    fn from_str(s: &str) -> Result<Self, FileError> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FileError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub kind: ModelKind,
    pub vars: [String; 2],
    pub params: Vec<String>,
    pub coefficients: BTreeMap<String, Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformFile {
    /// Variables of the transformed equation.
    pub vars: [String; 2],
    pub params: Vec<String>,
    pub phi: Expr,
    pub psi: Expr,
    pub sigma: Option<(Expr, Expr)>,
}

struct Entry {
    key: String,
    line: usize,
    raw: String,
    raw_pos: Pos,
    quoted: bool,
}

const LIST_KEYS: [&str; 3] = ["kind", "vars", "params"];

fn split_lines(text: &str) -> Result<Vec<Entry>, FileError> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, line) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = line.chars().count() - trimmed.chars().count();
        let Some(eq) = trimmed.find('=') else {
            return Err(FileError::Line {
                pos: Pos {
                    line: line_no,
                    column: indent + 1,
                },
                message: "expected `key = value`".into(),
            });
        };
        let key = trimmed[..eq].trim().to_string();
        let valid_key = !key.is_empty()
            && key
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-');
        if !valid_key {
            return Err(FileError::Line {
                pos: Pos {
                    line: line_no,
                    column: indent + 1,
                },
                message: format!("invalid key `{key}`"),
            });
        }
        let rest = &trimmed[eq + 1..];
        let lead = rest.chars().take_while(|c| c.is_whitespace()).count();
        let value = rest.trim_start();
        let value_col = indent + trimmed[..eq + 1].chars().count() + lead + 1;
        let (raw, quoted, raw_col) = if let Some(body) = value.strip_prefix('"') {
            let Some(close) = body.find('"') else {
                return Err(FileError::Line {
                    pos: Pos {
                        line: line_no,
                        column: value_col,
                    },
                    message: "unterminated string".into(),
                });
            };
            let tail = body[close + 1..].trim();
            if !(tail.is_empty() || tail.starts_with('#')) {
                return Err(FileError::Line {
                    pos: Pos {
                        line: line_no,
                        column: value_col + body[..close].chars().count() + 2,
                    },
                    message: "unexpected text after closing quote".into(),
                });
            }
            (body[..close].to_string(), true, value_col + 1)
        } else {
            let v = value.split('#').next().unwrap_or("").trim_end();
            (v.to_string(), false, value_col)
        };
        out.push(Entry {
            key,
            line: line_no,
            raw,
            raw_pos: Pos {
                line: line_no,
                column: raw_col,
            },
            quoted,
        });
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_list(e: &Entry) -> Result<Vec<String>, FileError> {
    if e.quoted {
        return Err(FileError::Line {
            pos: e.raw_pos,
            message: format!("`{}` takes a bare list", e.key),
        });
    }
    if e.raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    let items: Vec<String> = e.raw.split(',').map(|s| s.trim().to_string()).collect();
    if e.key != "kind" {
        for it in &items {
            if !is_identifier(it) {
                return Err(FileError::Line {
                    pos: e.raw_pos,
                    message: format!("`{it}` is not an identifier"),
                });
            }
        }
    }
    Ok(items)
}

/// Header lists plus the remaining entries, rejecting duplicates.
struct Sections {
    lists: BTreeMap<String, Vec<String>>,
    list_lines: BTreeMap<String, usize>,
    exprs: Vec<Entry>,
}

fn sections(text: &str) -> Result<Sections, FileError> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut lists = BTreeMap::new();
    let mut list_lines = BTreeMap::new();
    let mut exprs = Vec::new();
    for e in split_lines(text)? {
        if seen.insert(e.key.clone(), e.line).is_some() {
            return Err(FileError::DuplicateKey {
                key: e.key,
                line: e.line,
            });
        }
        if LIST_KEYS.contains(&e.key.as_str()) {
            lists.insert(e.key.clone(), parse_list(&e)?);
            list_lines.insert(e.key.clone(), e.line);
        } else {
            if !e.quoted {
                return Err(FileError::Line {
                    pos: e.raw_pos,
                    message: format!("`{}` takes a quoted expression", e.key),
                });
            }
            exprs.push(e);
        }
    }
    Ok(Sections {
        lists,
        list_lines,
        exprs,
    })
}

fn declared_vars(lists: &BTreeMap<String, Vec<String>>) -> Result<Option<[String; 2]>, FileError> {
    match lists.get("vars") {
        None => Ok(None),
        Some(v) if v.len() == 2 && v[0] != v[1] => Ok(Some([v[0].clone(), v[1].clone()])),
        Some(v) => Err(FileError::Declaration(format!(
            "vars must name two distinct variables, got {}",
            v.len()
        ))),
    }
}

fn check_names(vars: &[String; 2], params: &[String]) -> Result<(), FileError> {
    let mut all: Vec<&String> = vars.iter().chain(params).collect();
    for n in &all {
        if RESERVED.contains(&n.as_str()) {
            return Err(FileError::Declaration(format!("`{n}` is reserved")));
        }
    }
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(FileError::Declaration(format!("`{}` declared twice", w[0])));
    }
    Ok(())
}

fn parse_value(e: &Entry, scope: &Scope) -> Result<Expr, FileError> {
    Ok(parse_expression_at(&e.raw, scope, e.raw_pos)?)
}

pub fn parse_model(text: &str) -> Result<ModelFile, FileError> {
    let Sections { lists, exprs, .. } = sections(text)?;
    let kind: ModelKind = match lists.get("kind").map(Vec::as_slice) {
        Some([k]) => k.parse()?,
        Some(other) => return Err(FileError::UnknownKind(other.join(","))),
        None => return Err(FileError::MissingKey("kind".into())),
    };
    let vars = declared_vars(&lists)?.ok_or_else(|| FileError::MissingKey("vars".into()))?;
    let params = lists.get("params").cloned().unwrap_or_default();
    check_names(&vars, &params)?;
    let scope = Scope::new(&vars, &params);
    let keys = kind.keys();
    let mut coefficients = BTreeMap::new();
    for e in &exprs {
        if !keys.contains(&e.key) {
            return Err(FileError::KindMismatch {
                kind: kind.name().into(),
                key: e.key.clone(),
                line: e.line,
            });
        }
        coefficients.insert(e.key.clone(), parse_value(e, &scope)?);
    }
    if let Some(k) = keys.iter().find(|k| !coefficients.contains_key(*k)) {
        return Err(FileError::MissingKey(k.clone()));
    }
    Ok(ModelFile {
        kind,
        vars,
        params,
        coefficients,
    })
}

const TRANSFORM_KEYS: [&str; 4] = ["phi", "psi", "sigma1", "sigma2"];

pub fn parse_transform(text: &str) -> Result<TransformFile, FileError> {
    let Sections {
        lists,
        list_lines,
        exprs,
    } = sections(text)?;
    if let Some(&line) = list_lines.get("kind") {
        return Err(FileError::KindMismatch {
            kind: "transform".into(),
            key: "kind".into(),
            line,
        });
    }
    let vars = declared_vars(&lists)?.unwrap_or_else(|| ["t".into(), "x".into()]);
    let params = lists.get("params").cloned().unwrap_or_default();
    check_names(&vars, &params)?;
    let scope = Scope::new(&vars, &params);
    let mut found: BTreeMap<String, Expr> = BTreeMap::new();
    for e in &exprs {
        if !TRANSFORM_KEYS.contains(&e.key.as_str()) {
            return Err(FileError::KindMismatch {
                kind: "transform".into(),
                key: e.key.clone(),
                line: e.line,
            });
        }
        found.insert(e.key.clone(), parse_value(e, &scope)?);
    }
    let take = |k: &str| found.get(k).cloned();
    let phi = take("phi").ok_or_else(|| FileError::MissingKey("phi".into()))?;
    let psi = take("psi").ok_or_else(|| FileError::MissingKey("psi".into()))?;
    let sigma = match (take("sigma1"), take("sigma2")) {
        (None, None) => None,
        (Some(a), b) => Some((a, b.unwrap_or_else(Expr::zero))),
        (None, Some(b)) => Some((Expr::zero(), b)),
    };
    let t = TransformFile {
        vars,
        params,
        phi,
        psi,
        sigma,
    };
    t.validate()?;
    Ok(t)
}

impl TransformFile {
    /// The identity map on `vars`.
    pub fn identity(vars: [String; 2]) -> TransformFile {
        TransformFile {
            phi: Expr::var(&vars[0]),
            psi: Expr::var(&vars[1]),
            vars,
            params: Vec::new(),
            sigma: None,
        }
    }

    pub fn validate(&self) -> Result<(), FileError> {
        let [v1, v2] = &self.vars;
        let wrong = |key: &str, e: &Expr, var: &str| {
            if crate::symbolic::diff::is_free_of(e, var) {
                Ok(())
            } else {
                Err(FileError::VariableSeparation {
                    key: key.into(),
                    var: var.into(),
                })
            }
        };
        wrong("phi", &self.phi, v2)?;
        wrong("psi", &self.psi, v1)?;
        if let Some((s1, s2)) = &self.sigma {
            let n = s1.square() + s2.square();
            if matches!(ZeroTester::default().check(&n), Ok(v) if v.holds()) {
                return Err(FileError::InadmissibleSigma);
            }
        }
        Ok(())
    }
}

fn quote(e: &Expr) -> String {
    format!("\"{e}\"")
}

fn header(kind: Option<ModelKind>, vars: &[String; 2], params: &[String]) -> String {
    let mut s = String::new();
    if let Some(k) = kind {
        s.push_str(&format!("kind = {k}\n"));
    }
    s.push_str(&format!("vars = {}, {}\n", vars[0], vars[1]));
    if !params.is_empty() {
        s.push_str(&format!("params = {}\n", params.join(", ")));
    }
    s
}

pub fn render_model(m: &ModelFile) -> String {
    let mut s = header(Some(m.kind), &m.vars, &m.params);
    for k in m.kind.keys() {
        if let Some(e) = m.coefficients.get(&k) {
            s.push_str(&format!("{k} = {}\n", quote(e)));
        }
    }
    s
}

pub fn render_transform(t: &TransformFile) -> String {
    let mut s = header(None, &t.vars, &t.params);
    s.push_str(&format!("phi = {}\n", quote(&t.phi)));
    s.push_str(&format!("psi = {}\n", quote(&t.psi)));
    if let Some((a, b)) = &t.sigma {
        s.push_str(&format!("sigma1 = {}\n", quote(a)));
        s.push_str(&format!("sigma2 = {}\n", quote(b)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const CR: &str = "# constant coefficients\r\nkind = cr-system\r\nvars = t, x\r\n\
        params = a1, a2, b1, b2, c1, c2\r\nalpha1 = \"a1\"\r\nalpha2 = \"a2\"\r\n\
        beta1 = \"b1\"\r\nbeta2 = \"b2\"  # trailing\r\ngamma1 = \"c1\"\r\ngamma2 = \"c2\"\r\n";

    #[test]
    fn crlf_model_parses() {
        let m = parse_model(CR).unwrap();
        assert_eq!(m.kind, ModelKind::CrSystem);
        assert_eq!(m.coefficients["beta2"], Expr::param("b2"));
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
    }

    #[test]
    fn foreign_key_is_kind_mismatch() {
        let text = "kind = scalar\nvars = t, x\nalpha = \"t\"\nbeta = \"x\"\ngamma = \"0\"\nbeta2 = \"1\"\n";
        assert!(matches!(
            parse_model(text),
            Err(FileError::KindMismatch { line: 6, .. })
        ));
    }

    #[test]
    fn missing_and_duplicate_keys() {
        let text = "kind = scalar\nvars = t, x\nalpha = \"t\"\nbeta = \"x\"\n";
        assert_eq!(
            parse_model(text),
            Err(FileError::MissingKey("gamma".into()))
        );
        let text = "kind = scalar\nvars = t, x\nalpha = \"t\"\nalpha = \"x\"\n";
        assert!(matches!(
            parse_model(text),
            Err(FileError::DuplicateKey { line: 4, .. })
        ));
    }

    #[test]
    fn expression_errors_carry_file_positions() {
        let text = "kind = scalar\nvars = t, x\nalpha = \"2 t\"\nbeta = \"x\"\ngamma = \"0\"\n";
        let err = parse_model(text).unwrap_err();
        assert_eq!(
            err.pos(),
            Some(Pos {
                line: 3,
                column: 12
            })
        );
    }

    #[test]
    fn transform_separation_is_enforced() {
        let t = parse_transform("phi = \"sqrt(t)\"\npsi = \"(x-1)/2\"\n").unwrap();
        assert_eq!(t.phi, Expr::sqrt(Expr::var("t")));
        assert!(t.sigma.is_none());
        let err = parse_transform("phi = \"x\"\npsi = \"x\"\n").unwrap_err();
        assert!(matches!(err, FileError::VariableSeparation { .. }));
        let err = parse_transform("phi = \"t\"\npsi = \"x\"\nsigma1 = \"0\"\n").unwrap_err();
        assert_eq!(err, FileError::InadmissibleSigma);
    }
}
