//! Semi-invariants and joint invariants of scalar equations and CR systems.

pub mod formulas;
mod methods;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde_json::{json, Map, Value as Json};

use crate::model::{CRSystem, Frame, Model, ScalarHyperbolic};
use crate::parser::{parse_expression, Scope};
use crate::symbolic::canon::DEFAULT_BUDGET;
use crate::symbolic::{
    canonicalize, differentiate, substitute_raw, try_canonicalize, Bindings, ComplexExpr, Expr,
    Symbol, Value, ZeroTestError, ZeroTester,
};

pub use methods::{method_comparison, ComparisonRow, Relation};

use formulas::Printed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Scalar,
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SemiDep,
    SemiIndep,
    Joint,
}

/// Which expressions to report for the complex method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Path {
    Printed,
    #[default]
    Split,
    Both,
}

macro_rules! named {
    ($t:ident { $($v:ident => $s:literal),* }) => {
        impl $t {
            pub fn name(self) -> &'static str {
                match self { $($t::$v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($s => Ok($t::$v),)*
                    _ => Err(format!("unknown {}: {s}", stringify!($t).to_lowercase())),
                }
            }
        }
    };
}

named!(Method { Scalar => "scalar", Real => "real", Complex => "complex" });
named!(Family { SemiDep => "semi-dep", SemiIndep => "semi-indep", Joint => "joint" });
named!(Path { Printed => "printed", Split => "split", Both => "both" });

impl Method {
    pub const ALL: [Method; 3] = [Method::Scalar, Method::Real, Method::Complex];
}

impl Family {
    pub const ALL: [Family; 3] = [Family::SemiDep, Family::SemiIndep, Family::Joint];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Defined(Expr),
    Undefined { reason: String },
}

impl Entry {
    pub fn expr(&self) -> Option<&Expr> {
        match self {
            Entry::Defined(e) => Some(e),
            Entry::Undefined { .. } => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Entry::Defined(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureEntry {
    pub id: String,
    pub value: Entry,
    /// The typeset formula's value, kept when it differs from `value`.
    pub printed: Option<Expr>,
}

/// Printed and split formulas disagree for `id`.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub id: String,
    pub max_abs: f64,
    pub witness: Vec<(Symbol, Value)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSignature {
    pub method: Method,
    pub family: Family,
    pub entries: Vec<SignatureEntry>,
    pub discrepancies: Vec<Discrepancy>,
}

impl InvariantSignature {
    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id).map(|e| &e.value)
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn discrepancy_ids(&self) -> Vec<&str> {
        self.discrepancies.iter().map(|d| d.id.as_str()).collect()
    }

    pub fn to_json(&self) -> Json {
        let mut entries = Map::new();
        for e in &self.entries {
            let mut v = match &e.value {
                Entry::Defined(x) => json!({"status": "defined", "expr": x.to_string()}),
                Entry::Undefined { reason } => json!({"status": "undefined", "reason": reason}),
            };
            if let Some(p) = &e.printed {
                v["printed"] = json!(p.to_string());
            }
            entries.insert(e.id.clone(), v);
        }
        let discrepancies: Vec<Json> = self
            .discrepancies
            .iter()
            .map(|d| {
                json!({
                    "id": d.id,
                    "max_abs": d.max_abs,
                    "witness": witness_json(&d.witness),
                })
            })
            .collect();
        json!({
            "method": self.method.name(),
            "family": self.family.name(),
            "entries": entries,
            "discrepancies": discrepancies,
        })
    }
}

pub fn witness_json(point: &[(Symbol, Value)]) -> Json {
    let mut m = Map::new();
    for (s, v) in point {
        m.insert(s.to_string(), json!(v.to_string()));
    }
    Json::Object(m)
}

impl fmt::Display for InvariantSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} {}", self.method, self.family)?;
        for e in &self.entries {
            match &e.value {
                Entry::Defined(x) => writeln!(f, "{} = {x}", e.id)?,
                Entry::Undefined { reason } => writeln!(f, "{} undefined ({reason})", e.id)?,
            }
            if let Some(p) = &e.printed {
                writeln!(f, "{} printed = {p}", e.id)?;
            }
        }
        for d in &self.discrepancies {
            write!(
                f,
                "discrepancy {}: max |printed - split| = {:e} at",
                d.id, d.max_abs
            )?;
            for (s, v) in &d.witness {
                write!(f, " {s}={v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("method {method} does not apply to a {model} model")]
    NotApplicable { method: Method, model: &'static str },
    #[error("the general system is not CR-structured: {0}")]
    NotCr(String),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

/// One formula instantiated for a concrete model, before any zero tests.
#[derive(Debug, Clone)]
pub struct RawEntry {
    pub id: String,
    pub value: Expr,
    /// Labelled divisors; the entry is undefined if any vanishes identically.
    pub denominators: Vec<(String, Expr)>,
}

/// Names that formula texts may use as functions of `t, x`.
const FUNCTION_NAMES: [&str; 29] = [
    "alpha", "beta", "gamma", "h", "k", "alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2",
    "h1", "h2", "k1", "k2", "mu1", "mu2", "nu1", "nu2", "nu3", "nu4", "omega1", "omega2", "omega3",
    "omega4", "F1", "F2", "F3", "F4",
];

fn formula_scope() -> &'static Scope {
    static SCOPE: OnceLock<Scope> = OnceLock::new();
    SCOPE.get_or_init(|| {
        FUNCTION_NAMES
            .iter()
            .fold(Scope::new(&["t", "x"], &[] as &[&str]), |s, n| {
                s.with_function(n, &["t", "x"])
            })
    })
}

/// Parses a formula text in the generic `t, x` frame.
pub fn formula(text: &str) -> Expr {
    parse_expression(text, formula_scope())
        .unwrap_or_else(|e| panic!("bad built-in formula {text:?}: {e}"))
}

/// Replaces every generic jet in `f` by the matching derivative of its
/// binding, differentiating by `vars[0]` for `_t` and `vars[1]` for `_x`.
pub fn instantiate(f: &Expr, bindings: &[(&str, &Expr)], vars: &[String; 2]) -> Expr {
    let mut memo: HashMap<(String, Vec<u32>), Expr> = HashMap::new();
    let mut map = Bindings::new();
    for s in f.symbols() {
        let Symbol::Jet(j) = &s else { continue };
        let Some((_, base)) = bindings.iter().find(|(n, _)| **n == *j.name) else {
            continue;
        };
        let d = derive_memo(base, &j.name, &j.orders, vars, &mut memo);
        map.insert(s.clone(), d);
    }
    substitute_raw(f, &map)
}

fn derive_memo(
    base: &Expr,
    name: &str,
    orders: &[u32],
    vars: &[String; 2],
    memo: &mut HashMap<(String, Vec<u32>), Expr>,
) -> Expr {
    let key = (name.to_string(), orders.to_vec());
    if let Some(d) = memo.get(&key) {
        return d.clone();
    }
    let d = if let Some(i) = orders.iter().position(|&k| k > 0) {
        let mut lower = orders.to_vec();
        lower[i] -= 1;
        let prev = derive_memo(base, name, &lower, vars, memo);
        differentiate(&prev, &vars[i])
    } else {
        base.clone()
    };
    memo.insert(key, d.clone());
    d
}

fn instantiate_all(
    table: Vec<Printed>,
    bindings: &[(&str, &Expr)],
    vars: &[String; 2],
) -> Vec<RawEntry> {
    table
        .into_iter()
        .map(|p| RawEntry {
            id: p.id.to_string(),
            value: instantiate(&formula(&p.text), bindings, vars),
            denominators: p
                .denominators
                .iter()
                .map(|d| (d.clone(), instantiate(&formula(d), bindings, vars)))
                .collect(),
        })
        .collect()
}

fn scalar_bindings(s: &ScalarHyperbolic) -> [(&'static str, Expr); 3] {
    [
        ("alpha", canonicalize(&s.alpha.re)),
        ("beta", canonicalize(&s.beta.re)),
        ("gamma", canonicalize(&s.gamma.re)),
    ]
}

fn as_refs<'a>(b: &'a [(&'static str, Expr)]) -> Vec<(&'static str, &'a Expr)> {
    b.iter().map(|(n, e)| (*n, e)).collect()
}

/// Scalar `h`, `k` as canonical expressions.
pub fn scalar_hk(s: &ScalarHyperbolic) -> (Expr, Expr) {
    let b = scalar_bindings(s);
    let raw = instantiate_all(formulas::scalar_semi_dep(), &as_refs(&b), &s.frame.vars);
    (canonicalize(&raw[0].value), canonicalize(&raw[1].value))
}

/// Printed formulas of one family for a real scalar equation.
pub fn scalar_raw(s: &ScalarHyperbolic, family: Family) -> Vec<RawEntry> {
    let vars = &s.frame.vars;
    match family {
        Family::SemiDep => {
            let b = scalar_bindings(s);
            instantiate_all(formulas::scalar_semi_dep(), &as_refs(&b), vars)
        }
        Family::SemiIndep => {
            let b = scalar_bindings(s);
            instantiate_all(formulas::scalar_semi_indep(), &as_refs(&b), vars)
        }
        Family::Joint => {
            let (h, k) = scalar_hk(s);
            instantiate_all(formulas::scalar_joint(), &[("h", &h), ("k", &k)], vars)
        }
    }
}

fn system_bindings(s: &CRSystem) -> Vec<(&'static str, Expr)> {
    crate::model::COEFFICIENT_NAMES
        .iter()
        .zip(s.coefficients())
        .map(|(n, e)| (*n, canonicalize(e)))
        .collect()
}

/// `h1, h2, k1, k2` as canonical expressions.
pub fn system_hk(s: &CRSystem) -> [Expr; 4] {
    let b = system_bindings(s);
    let raw = instantiate_all(formulas::system_semi_dep(), &as_refs(&b), &s.frame.vars);
    [0, 1, 2, 3].map(|i| canonicalize(&raw[i].value))
}

/// The `μ, ν, ω` blocks of the joint complex invariants, printed form.
pub fn joint_intermediates(s: &CRSystem) -> Vec<(&'static str, Expr)> {
    let hk = system_hk(s);
    let b = hk_bindings(&hk);
    formulas::intermediates()
        .into_iter()
        .map(|(n, text)| (n, instantiate(&formula(&text), &b, &s.frame.vars)))
        .collect()
}

fn hk_bindings(hk: &[Expr; 4]) -> Vec<(&'static str, &Expr)> {
    vec![
        ("h1", &hk[0]),
        ("h2", &hk[1]),
        ("k1", &hk[2]),
        ("k2", &hk[3]),
    ]
}

/// Printed formulas of one family for a CR system under the real or
/// complex method.
pub fn system_printed_raw(s: &CRSystem, method: Method, family: Family) -> Vec<RawEntry> {
    let vars = &s.frame.vars;
    let coeffs = system_bindings(s);
    match (method, family) {
        (_, Family::SemiDep) => {
            instantiate_all(formulas::system_semi_dep(), &as_refs(&coeffs), vars)
        }
        (Method::Complex, Family::SemiIndep) => instantiate_all(
            formulas::system_semi_indep_complex(),
            &as_refs(&coeffs),
            vars,
        ),
        (_, Family::SemiIndep) => {
            instantiate_all(formulas::system_semi_indep_real(), &as_refs(&coeffs), vars)
        }
        (Method::Complex, Family::Joint) => {
            let hk = system_hk(s);
            let inter = joint_intermediates(s);
            let mut b = hk_bindings(&hk);
            b.extend(inter.iter().map(|(n, e)| (*n, e)));
            instantiate_all(formulas::system_joint_complex(), &b, vars)
        }
        (_, Family::Joint) => {
            let hk = system_hk(s);
            instantiate_all(formulas::system_joint_real(), &hk_bindings(&hk), vars)
        }
    }
}

fn split_pair(
    out: &mut Vec<RawEntry>,
    ids: [&str; 2],
    z: ComplexExpr,
    denominators: Vec<(String, Expr)>,
) {
    for (id, v) in ids.into_iter().zip([z.re, z.im]) {
        out.push(RawEntry {
            id: id.to_string(),
            value: v,
            denominators: denominators.clone(),
        });
    }
}

fn modulus(label: &str, z: &ComplexExpr) -> (String, Expr) {
    (format!("|{label}|^2"), z.norm_sq())
}

/// Complex-method entries obtained by splitting the scalar formulas in
/// complex arithmetic.
pub fn system_split_raw(s: &CRSystem, family: Family) -> Vec<RawEntry> {
    let [v1, v2] = &s.frame.vars;
    let d = |z: &ComplexExpr, v: &str| z.map(|c| differentiate(c, v));
    let mut out = Vec::new();
    match family {
        Family::SemiDep => {
            let hk = system_hk(s);
            for (id, e) in ["h1", "h2", "k1", "k2"].iter().zip(hk) {
                out.push(RawEntry {
                    id: id.to_string(),
                    value: e,
                    denominators: vec![],
                });
            }
        }
        Family::SemiIndep => {
            let (a, b, g) = (
                s.alpha().canonical(),
                s.beta().canonical(),
                s.gamma().canonical(),
            );
            let (a_t, a_x) = (d(&a, v1), d(&a, v2));
            let (b_t, b_x) = (d(&b, v1), d(&b, v2));
            let (g_t, g_x) = (d(&g, v1), d(&g, v2));
            let (ma, mb, mat) = (
                modulus("alpha", &a),
                modulus("beta", &b),
                modulus("alpha_t", &a_t),
            );
            split_pair(
                &mut out,
                ["I1c", "I2c"],
                g.div_raw(&(&a * &b)),
                vec![ma.clone(), mb.clone()],
            );
            split_pair(
                &mut out,
                ["I3c", "I4c"],
                (&a * &b).div_raw(&a_t),
                vec![mat.clone()],
            );
            split_pair(
                &mut out,
                ["I5c", "I6c"],
                b_x.div_raw(&a_t),
                vec![mat.clone()],
            );
            split_pair(&mut out, ["I7c", "I8c"], g.div_raw(&a_t), vec![mat.clone()]);
            let num = &a * &(&(&b * &g_t) - &(&g * &b_t));
            let den = &b * &(&a_t * &a_t);
            split_pair(
                &mut out,
                ["I9c", "I10c"],
                num.div_raw(&den),
                vec![mat.clone(), mb],
            );
            let num = &(&a * &g_x) - &(&g * &a_x);
            let den = &(&a * &a) * &a_t;
            split_pair(&mut out, ["I11c", "I12c"], num.div_raw(&den), vec![mat, ma]);
        }
        Family::Joint => {
            let [h1, h2, k1, k2] = system_hk(s);
            let h = ComplexExpr::new(h1, h2);
            let k = ComplexExpr::new(k1, k2);
            let (h_t, h_x, k_t, k_x) = (d(&h, v1), d(&h, v2), d(&k, v1), d(&k, v2));
            let (h_tx, k_tx) = (d(&h_t, v2), d(&k_t, v2));
            let (h_tt, k_tt, h_xx, k_xx) = (d(&h_t, v1), d(&k_t, v1), d(&h_x, v2), d(&k_x, v2));
            let mh = vec![modulus("h", &h)];
            let mul = |a: &ComplexExpr, b: &ComplexExpr| a * b;
            let sub = |a: ComplexExpr, b: ComplexExpr| &a - &b;
            let wronsk = |hd: &ComplexExpr, kd: &ComplexExpr| sub(mul(&h, kd), mul(&k, hd));
            let three = Expr::int(3);
            // h k h'' - h^2 k'' - 3 k h'^2 + 3 h h' k'
            let second =
                |hd: &ComplexExpr, kd: &ComplexExpr, hdd: &ComplexExpr, kdd: &ComplexExpr| {
                    let t1 = mul(&mul(&h, &k), hdd);
                    let t2 = mul(&mul(&h, &h), kdd);
                    let t3 = mul(&mul(&k, hd), hd).scale(&three);
                    let t4 = mul(&mul(&h, hd), kd).scale(&three);
                    &sub(sub(t1, t2), t3) + &t4
                };
            split_pair(
                &mut out,
                ["J11", "J12"],
                h.div_raw(&k),
                vec![modulus("k", &k)],
            );
            let j2 = mul(&wronsk(&h_t, &k_t), &wronsk(&h_x, &k_x)).div_raw(&h.powi_raw(5));
            split_pair(&mut out, ["J13", "J14"], j2, mh.clone());
            let num = &sub(&mul(&k, &h_tx) + &mul(&h, &k_tx), mul(&h_t, &k_x)) - &mul(&h_x, &k_t);
            split_pair(
                &mut out,
                ["J15", "J16"],
                num.div_raw(&h.powi_raw(3)),
                mh.clone(),
            );
            let num = mul(&k, &sub(mul(&h, &h_tx), mul(&h_t, &h_x)));
            split_pair(
                &mut out,
                ["J17", "J18"],
                num.div_raw(&h.powi_raw(4)),
                mh.clone(),
            );
            let wx = wronsk(&h_x, &k_x);
            let num = mul(&mul(&wx, &wx), &second(&h_t, &k_t, &h_tt, &k_tt));
            split_pair(
                &mut out,
                ["J19", "J20"],
                num.div_raw(&h.powi_raw(9)),
                mh.clone(),
            );
            let wt = wronsk(&h_t, &k_t);
            let num = mul(&mul(&wt, &wt), &second(&h_x, &k_x, &h_xx, &k_xx));
            split_pair(&mut out, ["J21", "J22"], num.div_raw(&h.powi_raw(9)), mh);
        }
    }
    out
}

/// Computes invariant signatures.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    pub tester: ZeroTester,
    pub path: Path,
}

impl Engine {
    pub fn new(tester: ZeroTester, path: Path) -> Engine {
        Engine { tester, path }
    }

    pub fn compute(
        &self,
        model: &Model,
        method: Method,
        family: Family,
    ) -> Result<InvariantSignature, InvariantError> {
        match (model, method) {
            (Model::Scalar(s), Method::Scalar) if s.is_real() => self.scalar(s, family),
            (Model::Scalar(s), Method::Real | Method::Complex) => {
                self.system(&s.realify(), method, family)
            }
            (Model::System(s), Method::Real | Method::Complex) => self.system(s, method, family),
            (Model::General(g), Method::Real | Method::Complex) => {
                let s = g
                    .cr_check(&self.tester)
                    .map_err(|v| InvariantError::NotCr(v.to_string()))?;
                self.system(&s, method, family)
            }
            _ => Err(InvariantError::NotApplicable {
                method,
                model: model.kind_name(),
            }),
        }
    }

    /// Scalar method on a real equation; imaginary parts are ignored.
    pub fn scalar(
        &self,
        s: &ScalarHyperbolic,
        family: Family,
    ) -> Result<InvariantSignature, InvariantError> {
        let raw = scalar_raw(s, family);
        self.finish(Method::Scalar, family, raw, None)
    }

    pub fn system(
        &self,
        s: &CRSystem,
        method: Method,
        family: Family,
    ) -> Result<InvariantSignature, InvariantError> {
        if method == Method::Scalar {
            return Err(InvariantError::NotApplicable {
                method,
                model: "cr-system",
            });
        }
        if method == Method::Real || family == Family::SemiDep {
            return self.finish(method, family, system_printed_raw(s, method, family), None);
        }
        match self.path {
            Path::Printed => {
                self.finish(method, family, system_printed_raw(s, method, family), None)
            }
            Path::Split => self.finish(method, family, system_split_raw(s, family), None),
            Path::Both => {
                let printed = system_printed_raw(s, method, family);
                self.finish(method, family, system_split_raw(s, family), Some(printed))
            }
        }
    }

    /// Generic-coefficient signature, e.g. for display.
    pub fn generic(
        &self,
        frame: Frame,
        method: Method,
        family: Family,
    ) -> Result<InvariantSignature, InvariantError> {
        self.system(&CRSystem::generic(frame), method, family)
    }

    fn finish(
        &self,
        method: Method,
        family: Family,
        raw: Vec<RawEntry>,
        printed: Option<Vec<RawEntry>>,
    ) -> Result<InvariantSignature, InvariantError> {
        let mut vanishing: HashMap<Expr, bool> = HashMap::new();
        let mut entries = Vec::new();
        let mut discrepancies = Vec::new();
        for (i, r) in raw.iter().enumerate() {
            let value = self.settle(r, &mut vanishing)?;
            let mut alt = None;
            if let (Some(p), true) = (printed.as_ref().map(|p| &p[i]), value.is_defined()) {
                debug_assert_eq!(p.id, r.id);
                if self.undefined(p, &mut vanishing)?.is_none() {
                    let diff = &p.value - &r.value;
                    let sampler = self.tester.sampling_only();
                    if !sampler.check(&diff)?.holds() {
                        let w = sampler.deviation(&diff)?;
                        let (max_abs, witness) = match w {
                            Some(w) => (w.value.to_f64().abs(), w.point),
                            None => (0.0, Vec::new()),
                        };
                        discrepancies.push(Discrepancy {
                            id: r.id.clone(),
                            max_abs,
                            witness,
                        });
                        alt = Some(self.canonical(&p.value));
                    }
                }
            }
            entries.push(SignatureEntry {
                id: r.id.clone(),
                value,
                printed: alt,
            });
        }
        Ok(InvariantSignature {
            method,
            family,
            entries,
            discrepancies,
        })
    }

    fn settle(
        &self,
        r: &RawEntry,
        seen: &mut HashMap<Expr, bool>,
    ) -> Result<Entry, InvariantError> {
        Ok(match self.undefined(r, seen)? {
            Some(reason) => Entry::Undefined { reason },
            None => Entry::Defined(self.canonical(&r.value)),
        })
    }

    /// Reason the entry is undefined, if a denominator vanishes identically.
    fn undefined(
        &self,
        r: &RawEntry,
        seen: &mut HashMap<Expr, bool>,
    ) -> Result<Option<String>, InvariantError> {
        for (label, den) in &r.denominators {
            let zero = match seen.get(den) {
                Some(&z) => z,
                None => {
                    let z = self.tester.check(den)?.holds();
                    seen.insert(den.clone(), z);
                    z
                }
            };
            if zero {
                return Ok(Some(format!("{label} vanishes identically")));
            }
        }
        Ok(None)
    }

    fn canonical(&self, e: &Expr) -> Expr {
        let budget = self.tester.budget.unwrap_or(DEFAULT_BUDGET);
        try_canonicalize(e, budget).unwrap_or_else(|_| e.clone())
    }
}
