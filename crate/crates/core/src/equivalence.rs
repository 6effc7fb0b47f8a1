//! Comparing invariant signatures of two models, and checking that a point
//! transform carries one model onto another.
//!
//! A transform maps `A` to `B` when `apply(A, T) = B`: the variables of `A`
//! are `φ`, `ψ` of the variables of `B`, and `w_A = σ u_B`.

use std::fmt;

use serde_json::{json, Map, Value as Json};

use crate::invariants::{witness_json, Engine, Entry, Family, InvariantError, Method};
use crate::model::{Model, PointTransform, TransformError};
use crate::symbolic::{canonicalize, Expr, Witness, ZeroTestError, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquivalenceError {
    #[error("cannot compare a {0} model with a {1} model")]
    KindMismatch(&'static str, &'static str),
    #[error("the transformed model lives in ({0}) but the target in ({1})")]
    VariableMismatch(String, String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Match,
    Mismatch(Witness),
    BothUndefined,
    OneUndefined { defined_in: &'static str },
    NeedsMap,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch(_) => "mismatch",
            Status::BothUndefined => "both-undefined",
            Status::OneUndefined { .. } => "one-undefined",
            Status::NeedsMap => "needs-map",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryStatus {
    pub family: Family,
    pub id: String,
    pub status: Status,
}

impl EntryStatus {
    pub fn key(&self) -> String {
        format!("{}/{}", self.family, self.id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    NecessaryConditionsHold,
    /// Key of the first mismatching entry.
    Obstructed(String),
}

/// One coefficient of `apply(A, T) - B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub coefficient: String,
    pub value: Expr,
    pub verdict: ZeroVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub entries: Vec<EntryStatus>,
    /// Families left out, with the reason.
    pub skipped: Vec<(Family, String)>,
    pub verdict: Verdict,
    pub residuals: Option<Vec<Residual>>,
}

impl ComparisonReport {
    pub fn status(&self, family: Family, id: &str) -> Option<&Status> {
        self.entries
            .iter()
            .find(|e| e.family == family && e.id == id)
            .map(|e| &e.status)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &EntryStatus> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, Status::Mismatch(_)))
    }

    pub fn to_json(&self) -> Json {
        let mut entries = Map::new();
        for e in &self.entries {
            let mut v = json!({"status": e.status.label()});
            match &e.status {
                Status::Mismatch(w) => {
                    v["witness"] = witness_json(&w.point);
                    v["value"] = json!(w.value.to_string());
                }
                Status::OneUndefined { defined_in } => v["defined_in"] = json!(defined_in),
                _ => {}
            }
            entries.insert(e.key(), v);
        }
        let verdict = match &self.verdict {
            Verdict::NecessaryConditionsHold => json!({"status": "necessary-conditions-hold"}),
            Verdict::Obstructed(first) => json!({"status": "obstructed", "first": first}),
        };
        let residuals = self.residuals.as_ref().map(|rs| residuals_json(rs));
        json!({
            "verdict": verdict,
            "entries": entries,
            "residuals": residuals.unwrap_or(Json::Null),
            "skipped": self
                .skipped
                .iter()
                .map(|(f, r)| json!({"family": f.name(), "reason": r}))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn residuals_json(rs: &[Residual]) -> Json {
    let mut m = Map::new();
    for r in rs {
        m.insert(
            r.coefficient.clone(),
            json!({"value": r.value.to_string(), "verdict": r.verdict.label()}),
        );
    }
    Json::Object(m)
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{} {}", e.key(), e.status.label())?;
            if let Status::Mismatch(w) = &e.status {
                write!(f, " (difference {} at", w.value)?;
                for (s, v) in &w.point {
                    write!(f, " {s}={v}")?;
                }
                write!(f, ")")?;
            }
            writeln!(f)?;
        }
        for (fam, why) in &self.skipped {
            writeln!(f, "{fam} skipped: {why}")?;
        }
        if let Some(rs) = &self.residuals {
            for r in rs {
                writeln!(
                    f,
                    "residual {} = {} [{}]",
                    r.coefficient,
                    r.value,
                    r.verdict.label()
                )?;
            }
        }
        match &self.verdict {
            Verdict::NecessaryConditionsHold => writeln!(f, "verdict: necessary-conditions-hold"),
            Verdict::Obstructed(first) => writeln!(f, "verdict: obstructed at {first}"),
        }
    }
}

fn same_kind(a: &Model, b: &Model) -> Result<(), EquivalenceError> {
    let class = |m: &Model| match m {
        Model::Scalar(_) => 0,
        _ => 1,
    };
    if class(a) != class(b) {
        return Err(EquivalenceError::KindMismatch(a.kind_name(), b.kind_name()));
    }
    Ok(())
}

/// Covariance degree of an entry: `h`, `k` and their components scale by
/// `φ′ψ′`, every other printed entry is unchanged.
pub fn weight_degree(family: Family) -> i64 {
    match family {
        Family::SemiDep => 1,
        _ => 0,
    }
}

/// Compares the signatures of `a` and `b`.
///
/// Without a map only parameter-only entries are compared; with a map,
/// `a`'s entries are pulled through it, scaled by `(φ′ψ′)^degree` and
/// tested against `b`'s.
pub fn compare(
    engine: &Engine,
    a: &Model,
    b: &Model,
    map: Option<&PointTransform>,
    method: Method,
    families: &[Family],
) -> Result<ComparisonReport, EquivalenceError> {
    same_kind(a, b)?;
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    let old = &a.frame().vars;
    for &family in families {
        if let (Family::SemiIndep, Some(t)) = (family, map) {
            if t.sigma
                .as_ref()
                .is_some_and(|s| !(s.re.is_one() && s.im.is_zero()))
            {
                skipped.push((
                    family,
                    "not invariant under a change of the dependent variable".to_string(),
                ));
                continue;
            }
        }
        let sa = engine.compute(a, method, family)?;
        let sb = engine.compute(b, method, family)?;
        let weight = map.map(|t| {
            let w = canonicalize(&(t.phi_prime() * t.psi_prime()));
            Expr::powi(w, weight_degree(family))
        });
        for (ea, eb) in sa.entries.iter().zip(&sb.entries) {
            let status = match (&ea.value, &eb.value) {
                (Entry::Undefined { .. }, Entry::Undefined { .. }) => Status::BothUndefined,
                (Entry::Undefined { .. }, _) => Status::OneUndefined { defined_in: "b" },
                (_, Entry::Undefined { .. }) => Status::OneUndefined { defined_in: "a" },
                (Entry::Defined(x), Entry::Defined(y)) => match (map, &weight) {
                    (Some(t), Some(w)) => {
                        let pulled = t.pull_back(x, old);
                        verdict_status(engine.tester.check(&(&(&pulled * w) - y))?)
                    }
                    _ if x.is_parameter_only() && y.is_parameter_only() => {
                        verdict_status(engine.tester.check(&(x - y))?)
                    }
                    _ => Status::NeedsMap,
                },
            };
            entries.push(EntryStatus {
                family,
                id: ea.id.clone(),
                status,
            });
        }
    }
    let verdict = entries
        .iter()
        .find(|e| matches!(e.status, Status::Mismatch(_)))
        .map(|e| Verdict::Obstructed(e.key()))
        .unwrap_or(Verdict::NecessaryConditionsHold);
    Ok(ComparisonReport {
        entries,
        skipped,
        verdict,
        residuals: None,
    })
}

fn verdict_status(v: ZeroVerdict) -> Status {
    match v {
        ZeroVerdict::NonZero(w) => Status::Mismatch(w),
        _ => Status::Match,
    }
}

/// Result of [`verify_mapping`].
#[derive(Debug, Clone, PartialEq)]
pub struct MappingCheck {
    pub transformed: Model,
    pub residuals: Vec<Residual>,
}

impl MappingCheck {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| r.verdict.holds())
    }
}

/// Applies `map` to `a` and tests each coefficient against `b`.
pub fn verify_mapping(
    engine: &Engine,
    a: &Model,
    b: &Model,
    map: &PointTransform,
) -> Result<MappingCheck, EquivalenceError> {
    same_kind(a, b)?;
    let transformed = a.apply(map)?;
    let (tv, bv) = (&transformed.frame().vars, &b.frame().vars);
    if tv != bv {
        return Err(EquivalenceError::VariableMismatch(
            tv.join(", "),
            bv.join(", "),
        ));
    }
    let lhs = coefficient_table(&transformed);
    let rhs = coefficient_table(b);
    let mut residuals = Vec::new();
    for ((name, x), (_, y)) in lhs.into_iter().zip(rhs) {
        let value = canonicalize(&(&x - &y));
        let verdict = engine.tester.check(&value)?;
        residuals.push(Residual {
            coefficient: name,
            value,
            verdict,
        });
    }
    Ok(MappingCheck {
        transformed,
        residuals,
    })
}

/// Coefficients under uniform names: scalars as real and imaginary parts,
/// systems (general ones via their CR form when possible) as CR entries.
fn coefficient_table(m: &Model) -> Vec<(String, Expr)> {
    match m {
        Model::Scalar(s) => [("alpha", &s.alpha), ("beta", &s.beta), ("gamma", &s.gamma)]
            .into_iter()
            .flat_map(|(n, c)| {
                [
                    (format!("{n}_re"), c.re.clone()),
                    (format!("{n}_im"), c.im.clone()),
                ]
            })
            .collect(),
        _ => {
            let f = m.to_file();
            let kind = f.kind;
            kind.keys()
                .into_iter()
                .map(|k| {
                    let v = f.coefficients[&k].clone();
                    (k, v)
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_transform;

    fn model(text: &str) -> Model {
        Model::from_text(text).unwrap()
    }

    const EQ45: &str = "kind = scalar\nvars = t, x\nparams = a, b, c\n\
        alpha = \"a - 1/x\"\nbeta = \"b + 2/t\"\ngamma = \"c - b/x + 2*a/t - 2/(t*x)\"\n";
    const EQ46: &str = "kind = scalar\nvars = t, x\nparams = a, b, c\n\
        alpha = \"a\"\nbeta = \"b\"\ngamma = \"c\"\n";

    #[test]
    fn constant_semi_invariants_match_without_map() {
        let r = compare(
            &Engine::default(),
            &model(EQ45),
            &model(EQ46),
            None,
            Method::Scalar,
            &[Family::SemiDep],
        )
        .unwrap();
        assert_eq!(r.status(Family::SemiDep, "h"), Some(&Status::Match));
        assert_eq!(r.verdict, Verdict::NecessaryConditionsHold);
    }

    #[test]
    fn function_valued_entries_need_a_map() {
        let r = compare(
            &Engine::default(),
            &model(EQ45),
            &model(EQ45),
            None,
            Method::Scalar,
            &[Family::SemiIndep],
        )
        .unwrap();
        assert_eq!(r.status(Family::SemiIndep, "I1"), Some(&Status::NeedsMap));
    }

    #[test]
    fn multiplier_maps_and_skips_semi_indep() {
        let t: PointTransform = parse_transform("sigma1 = \"x/t^2\"\nphi = \"t\"\npsi = \"x\"\n")
            .unwrap()
            .into();
        let e = Engine::default();
        let check = verify_mapping(&e, &model(EQ45), &model(EQ46), &t).unwrap();
        assert!(check.holds());
        let r = compare(
            &e,
            &model(EQ45),
            &model(EQ46),
            Some(&t),
            Method::Scalar,
            &Family::ALL,
        )
        .unwrap();
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.verdict, Verdict::NecessaryConditionsHold);
    }

    #[test]
    fn different_constants_obstruct() {
        let other = EQ46.replace("gamma = \"c\"", "gamma = \"c + 1\"");
        let r = compare(
            &Engine::default(),
            &model(EQ46),
            &model(&other),
            None,
            Method::Scalar,
            &[Family::SemiDep],
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed("semi-dep/h".into()));
        let j = r.to_json();
        assert_eq!(j["verdict"]["status"], "obstructed");
        assert_eq!(j["entries"]["semi-dep/h"]["status"], "mismatch");
    }

    #[test]
    fn scalar_and_system_do_not_compare() {
        let sys = "kind = cr-system\nvars = t, x\nalpha1 = \"1\"\nalpha2 = \"0\"\n\
            beta1 = \"0\"\nbeta2 = \"0\"\ngamma1 = \"0\"\ngamma2 = \"0\"\n";
        let err = compare(
            &Engine::default(),
            &model(EQ46),
            &model(sys),
            None,
            Method::Real,
            &[Family::SemiDep],
        )
        .unwrap_err();
        assert!(matches!(err, EquivalenceError::KindMismatch(..)));
    }
}
