//! Recomputes the worked examples and checks them against their expected
//! values and maps.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value as Json};

use crate::equivalence::{compare, verify_mapping, EquivalenceError};
use crate::fixtures::{self, Expectation, FixtureCase, Side};
use crate::invariants::{Engine, Entry, Family, InvariantSignature, Method};
use crate::model::Model;
use crate::parser::parse_expression;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Failed as expected.
    Known {
        note: &'static str,
        detail: String,
    },
    /// Passed although a discrepancy was expected.
    UnexpectedPass {
        note: &'static str,
    },
}

impl Outcome {
    fn judge(ok: bool, expectation: Expectation, detail: impl FnOnce() -> String) -> Outcome {
        match (ok, expectation) {
            (true, Expectation::MustMatch) => Outcome::Pass,
            (false, Expectation::MustMatch) => Outcome::Fail(detail()),
            (false, Expectation::KnownDiscrepancy(note)) => Outcome::Known {
                note,
                detail: detail(),
            },
            (true, Expectation::KnownDiscrepancy(note)) => Outcome::UnexpectedPass { note },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail(_) => "FAIL",
            Outcome::Known { .. } => "known-discrepancy",
            Outcome::UnexpectedPass { .. } => "unexpected-pass",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub id: &'static str,
    pub checks: Vec<Check>,
}

impl CaseReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome.is_failure())
    }

    pub fn known(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Known { .. }))
    }

    pub fn to_json(&self) -> Json {
        let checks: Vec<Json> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({"check": c.label, "outcome": c.outcome.label()});
                match &c.outcome {
                    Outcome::Fail(d) => v["detail"] = json!(d),
                    Outcome::Known { note, detail } => {
                        v["note"] = json!(note);
                        v["detail"] = json!(detail);
                    }
                    Outcome::UnexpectedPass { note } => v["note"] = json!(note),
                    Outcome::Pass => {}
                }
                v
            })
            .collect();
        json!({"id": self.id, "checks": checks})
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}: {}", self.id, c.label, c.outcome.label())?;
            match &c.outcome {
                Outcome::Fail(d) => write!(f, " ({d})")?,
                Outcome::Known { note, detail } => write!(f, " ({note}; {detail})")?,
                Outcome::UnexpectedPass { note } => write!(f, " ({note})")?,
                Outcome::Pass => {}
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type SigCache = HashMap<(bool, Method, Family), InvariantSignature>;

fn signature<'a>(
    engine: &Engine,
    cache: &'a mut SigCache,
    m: &Model,
    is_source: bool,
    method: Method,
    family: Family,
) -> Result<&'a InvariantSignature, EquivalenceError> {
    let key = (is_source, method, family);
    if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
        let sig = engine.compute(m, method, family)?;
        e.insert(sig);
    }
    Ok(&cache[&key])
}

/// Runs every check of one case.
pub fn run_case(engine: &Engine, case: &FixtureCase) -> Result<CaseReport, EquivalenceError> {
    let source = fixtures::model(case.source);
    let target = fixtures::model(case.target);
    let mut checks = Vec::new();
    for m in &case.maps {
        let t = fixtures::transform(m.file);
        let (a, b, arrow) = if m.reverse {
            (&target, &source, "target -> source")
        } else {
            (&source, &target, "source -> target")
        };
        let check = verify_mapping(engine, a, b, &t)?;
        let outcome = Outcome::judge(check.holds(), m.expectation, || {
            let bad: Vec<String> = check
                .residuals
                .iter()
                .filter(|r| !r.verdict.holds())
                .map(|r| format!("{} residual {}", r.coefficient, r.value))
                .collect();
            bad.join(", ")
        });
        checks.push(Check {
            label: format!("map {} {arrow}", m.file),
            outcome,
        });
        if m.expectation == Expectation::MustMatch {
            let method = case.method();
            let report = compare(engine, a, b, Some(&t), method, &Family::ALL)?;
            let bad: Vec<String> = report.mismatches().map(|e| e.key()).collect();
            checks.push(Check {
                label: format!("compare under {} ({method})", m.file),
                outcome: Outcome::judge(bad.is_empty(), Expectation::MustMatch, || {
                    format!("mismatches: {}", bad.join(", "))
                }),
            });
        }
    }
    let mut cache = SigCache::new();
    for e in &case.values {
        let (m, is_source) = match e.side {
            Side::Source => (&source, true),
            Side::Target => (&target, false),
        };
        let name = if is_source { case.source } else { case.target };
        let sig = signature(engine, &mut cache, m, is_source, e.method, e.family)?;
        let want = parse_expression(e.value, &m.frame().scope())
            .unwrap_or_else(|err| panic!("bad expected value {}: {err}", e.value));
        let (ok, got) = match sig.get(e.id) {
            Some(Entry::Defined(x)) => (engine.tester.check(&(x - &want))?.holds(), x.to_string()),
            Some(Entry::Undefined { reason }) => (false, format!("undefined: {reason}")),
            None => (false, "missing".to_string()),
        };
        checks.push(Check {
            label: format!("{name} {} {} {} = {}", e.method, e.family, e.id, e.value),
            outcome: Outcome::judge(ok, e.expectation, || format!("computed {got}")),
        });
    }
    Ok(CaseReport {
        id: case.id,
        checks,
    })
}

/// Runs all cases of example `n` (1 to 5), or every case for `None`.
pub fn run_example(engine: &Engine, n: Option<u8>) -> Result<Vec<CaseReport>, EquivalenceError> {
    fixtures::cases()
        .iter()
        .filter(|c| n.is_none_or(|n| c.example == n))
        .map(|c| run_case(engine, c))
        .collect()
}
