//! Relating complex-method invariants to real-method ones.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use super::{Engine, Entry, Family, InvariantError, InvariantSignature, Method};
use crate::model::CRSystem;
use crate::symbolic::{evaluate_exact, ExactPoint, Exponent, Expr, Symbol};

const EXPONENTS: [i64; 4] = [-2, -1, 1, 2];
const SCREEN_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// Equal to a single real entry.
    Componentwise(String),
    /// Equal to `r_i^a r_j^b` (or `r_i^a`) for real entries.
    Bilinear(String),
    Distinct,
    Undefined,
}

impl Relation {
    pub fn label(&self) -> &'static str {
        match self {
            Relation::Componentwise(_) => "componentwise",
            Relation::Bilinear(_) => "bilinear",
            Relation::Distinct => "distinct",
            Relation::Undefined => "undefined",
        }
    }

    pub fn reduces(&self) -> bool {
        matches!(self, Relation::Componentwise(_) | Relation::Bilinear(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub complex: String,
    pub relation: Relation,
}

impl fmt::Display for ComparisonRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.relation {
            Relation::Componentwise(w) | Relation::Bilinear(w) => {
                write!(f, "{} {} {w}", self.complex, self.relation.label())
            }
            r => write!(f, "{} {}", self.complex, r.label()),
        }
    }
}

impl ComparisonRow {
    pub fn to_json(&self) -> Json {
        let with = match &self.relation {
            Relation::Componentwise(w) | Relation::Bilinear(w) => json!(w),
            _ => Json::Null,
        };
        json!({"complex": self.complex, "relation": self.relation.label(), "real": with})
    }
}

struct Candidate {
    label: String,
    expr: Expr,
    values: Vec<BigRational>,
}

/// For each complex semi-invariant and joint invariant, whether it equals a
/// real-method entry or a product of powers of two of them.
pub fn method_comparison(
    engine: &Engine,
    s: &CRSystem,
) -> Result<Vec<ComparisonRow>, InvariantError> {
    let mut rows = Vec::new();
    for family in [Family::SemiIndep, Family::Joint] {
        let real = engine.system(s, Method::Real, family)?;
        let complex = engine.system(s, Method::Complex, family)?;
        rows.extend(compare_family(engine, &real, &complex)?);
    }
    Ok(rows)
}

fn defined(sig: &InvariantSignature) -> Vec<(String, Expr)> {
    sig.entries
        .iter()
        .filter_map(|e| e.value.expr().map(|x| (e.id.clone(), x.clone())))
        .collect()
}

fn compare_family(
    engine: &Engine,
    real: &InvariantSignature,
    complex: &InvariantSignature,
) -> Result<Vec<ComparisonRow>, InvariantError> {
    let reals = defined(real);
    let mut all: Vec<&Expr> = reals.iter().map(|(_, e)| e).collect();
    let cs = defined(complex);
    all.extend(cs.iter().map(|(_, e)| e));
    let points = screen_points(&all, engine.tester.seed);
    let candidates = monomials(&reals, &points);
    let mut rows = Vec::new();
    for entry in &complex.entries {
        let relation = match &entry.value {
            Entry::Undefined { .. } => Relation::Undefined,
            Entry::Defined(c) => {
                let cv: Option<Vec<BigRational>> =
                    points.iter().map(|p| evaluate_exact(c, p).ok()).collect();
                let mut found = Relation::Distinct;
                for cand in &candidates {
                    if cv.as_ref().is_some_and(|v| *v != cand.values) {
                        continue;
                    }
                    if engine.tester.check(&(c - &cand.expr))?.holds() {
                        found = if cand.label.contains('^') || cand.label.contains('*') {
                            Relation::Bilinear(cand.label.clone())
                        } else {
                            Relation::Componentwise(cand.label.clone())
                        };
                        break;
                    }
                }
                found
            }
        };
        rows.push(ComparisonRow {
            complex: entry.id.clone(),
            relation,
        });
    }
    Ok(rows)
}

/// Integer points at which every expression evaluates exactly.
fn screen_points(exprs: &[&Expr], seed: u64) -> Vec<ExactPoint> {
    let mut symbols: Vec<Symbol> = Vec::new();
    for e in exprs {
        for s in e.symbols() {
            if !symbols.contains(&s) {
                symbols.push(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut points = Vec::new();
    for _ in 0..SCREEN_POINTS * 20 {
        if points.len() == SCREEN_POINTS {
            break;
        }
        let p: ExactPoint = symbols
            .iter()
            .map(|s| {
                (
                    s.clone(),
                    BigRational::from_integer(rng.gen_range(-97i64..=97).into()),
                )
            })
            .collect();
        if exprs.iter().all(|e| evaluate_exact(e, &p).is_ok()) {
            points.push(p);
        }
    }
    points
}

fn monomials(reals: &[(String, Expr)], points: &[ExactPoint]) -> Vec<Candidate> {
    let values: Vec<Option<Vec<BigRational>>> = reals
        .iter()
        .map(|(_, e)| points.iter().map(|p| evaluate_exact(e, p).ok()).collect())
        .collect();
    let pow = |v: &[BigRational], a: i64| -> Option<Vec<BigRational>> {
        v.iter()
            .map(|q| {
                if a < 0 && q.is_zero() {
                    None
                } else if a < 0 {
                    Some(num_traits::pow(q.recip(), (-a) as usize))
                } else {
                    Some(num_traits::pow(q.clone(), a as usize))
                }
            })
            .collect()
    };
    let label = |id: &str, a: i64| {
        if a == 1 {
            id.to_string()
        } else {
            format!("{id}^{a}")
        }
    };
    let mut out = Vec::new();
    for (i, (id, e)) in reals.iter().enumerate() {
        let Some(v) = &values[i] else { continue };
        for a in EXPONENTS {
            if let Some(pv) = pow(v, a) {
                out.push(Candidate {
                    label: label(id, a),
                    expr: Expr::pow(e.clone(), Exponent::from_integer(a)),
                    values: pv,
                });
            }
        }
    }
    for i in 0..reals.len() {
        for j in i + 1..reals.len() {
            let (Some(vi), Some(vj)) = (&values[i], &values[j]) else {
                continue;
            };
            for a in EXPONENTS {
                for b in EXPONENTS {
                    let (Some(pi), Some(pj)) = (pow(vi, a), pow(vj, b)) else {
                        continue;
                    };
                    let prod = pi.iter().zip(&pj).map(|(x, y)| x * y).collect();
                    out.push(Candidate {
                        label: format!("{}*{}", label(&reals[i].0, a), label(&reals[j].0, b)),
                        expr: Expr::pow(reals[i].1.clone(), Exponent::from_integer(a))
                            * Expr::pow(reals[j].1.clone(), Exponent::from_integer(b)),
                        values: prod,
                    });
                }
            }
        }
    }
    // exact zero is representable by any vanishing real entry; keep the
    // constant one for entries such as ratios of equal quantities
    out.push(Candidate {
        label: "1".into(),
        expr: Expr::one(),
        values: vec![BigRational::one(); points.len()],
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Frame;

    #[test]
    fn uncoupled_semi_invariants_reduce() {
        let mut s = CRSystem::generic(Frame::new("t", "x", &[]));
        s.alpha2 = Expr::zero();
        s.beta2 = Expr::zero();
        s.gamma2 = Expr::zero();
        let rows = method_comparison(&Engine::default(), &s).unwrap();
        for r in &rows {
            if r.complex.starts_with('I') || r.complex == "J11" || r.complex == "J12" {
                assert!(r.relation.reduces(), "{r}");
            }
        }
    }

    #[test]
    fn generic_system_has_distinct_entries() {
        let s = CRSystem::generic(Frame::new("t", "x", &[]));
        let rows = method_comparison(&Engine::default(), &s).unwrap();
        let get = |id: &str| {
            rows.iter()
                .find(|r| r.complex == id)
                .unwrap()
                .relation
                .clone()
        };
        assert_eq!(get("I5c"), Relation::Distinct);
        assert_eq!(get("I6c"), Relation::Distinct);
        assert_eq!(get("J11"), Relation::Distinct);
    }
}
