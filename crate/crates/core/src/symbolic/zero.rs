//! Randomized identity testing.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::canon::{try_canonicalize, DEFAULT_BUDGET};
use super::eval::{
    evaluate_exact, evaluate_float_magnitude, leaf_symbol, EvalError, ExactPoint, FloatPoint, Value,
};
use super::expr::{Expr, Node, Symbol};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 64;

const EXACT_RANGE: i64 = 1_000_000;
const ROOT_RANGE: i64 = 1_000;
const FLOAT_RANGE: f64 = 10.0;
const REL_TOL: f64 = 1e-9;
const MAG_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<(Symbol, Value)>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroVerdict {
    ProvenZero,
    LikelyZero { samples: usize },
    NonZero(Witness),
}

impl ZeroVerdict {
    /// True for `ProvenZero` and `LikelyZero`.
    pub fn holds(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ProvenZero => "proven-zero",
            ZeroVerdict::LikelyZero { .. } => "likely-zero",
            ZeroVerdict::NonZero(_) => "nonzero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZeroTestError {
    #[error("sampling exhausted: {attempts} consecutive draws hit singular points")]
    SamplingExhausted { attempts: usize },
    #[error("sample count must be at least 1")]
    NoSamples,
}

/// Settings for [`ZeroTester::check`].
#[derive(Debug, Clone, Copy)]
pub struct ZeroTester {
    pub seed: u64,
    pub samples: usize,
    /// Term budget for the canonical-form attempt; `None` samples directly.
    pub budget: Option<usize>,
}

impl Default for ZeroTester {
    fn default() -> Self {
        ZeroTester {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            budget: Some(DEFAULT_BUDGET),
        }
    }
}

/// Decides whether `e` vanishes identically.
pub fn is_identically_zero(
    e: &Expr,
    seed: u64,
    samples: usize,
) -> Result<ZeroVerdict, ZeroTestError> {
    ZeroTester {
        seed,
        samples,
        budget: Some(DEFAULT_BUDGET),
    }
    .check(e)
}

impl ZeroTester {
    pub fn new(seed: u64, samples: usize) -> ZeroTester {
        ZeroTester {
            seed,
            samples,
            ..ZeroTester::default()
        }
    }

    /// Skips the canonical form and samples the raw tree.
    pub fn sampling_only(self) -> ZeroTester {
        ZeroTester {
            budget: None,
            ..self
        }
    }

    pub fn check(&self, e: &Expr) -> Result<ZeroVerdict, ZeroTestError> {
        if self.samples == 0 {
            return Err(ZeroTestError::NoSamples);
        }
        let mut target = e.clone();
        if let Some(budget) = self.budget {
            if let Ok(c) = try_canonicalize(e, budget) {
                if c.is_zero() {
                    return Ok(ZeroVerdict::ProvenZero);
                }
                if let Some(q) = c.as_const() {
                    return Ok(ZeroVerdict::NonZero(Witness {
                        point: Vec::new(),
                        value: Value::Exact(q.clone()),
                    }));
                }
                target = c;
            }
        }
        self.sample(&target)
    }

    fn sample(&self, e: &Expr) -> Result<ZeroVerdict, ZeroTestError> {
        let plan = SamplePlan::of(e);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let limit = 10 * self.samples;
        let mut failures = 0;
        let mut passed = 0;
        while passed < self.samples {
            let outcome = if plan.transcendental {
                plan.float_draw(e, &mut rng)
            } else {
                plan.exact_draw(e, &mut rng)
            };
            match outcome {
                Draw::Zero => {
                    passed += 1;
                    failures = 0;
                }
                Draw::NonZero(w) => return Ok(ZeroVerdict::NonZero(w)),
                Draw::Singular => {
                    failures += 1;
                    if failures >= limit {
                        return Err(ZeroTestError::SamplingExhausted { attempts: failures });
                    }
                }
            }
        }
        Ok(ZeroVerdict::LikelyZero {
            samples: self.samples,
        })
    }
}

impl ZeroTester {
    /// Samples `e` at `samples` regular points and returns the point of
    /// largest magnitude, or `None` when every sample vanished.
    pub fn deviation(&self, e: &Expr) -> Result<Option<Witness>, ZeroTestError> {
        if self.samples == 0 {
            return Err(ZeroTestError::NoSamples);
        }
        let plan = SamplePlan::of(e);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let limit = 10 * self.samples;
        let (mut failures, mut taken) = (0, 0);
        let mut best: Option<Witness> = None;
        while taken < self.samples {
            let outcome = if plan.transcendental {
                plan.float_draw(e, &mut rng)
            } else {
                plan.exact_draw(e, &mut rng)
            };
            match outcome {
                Draw::Singular => {
                    failures += 1;
                    if failures >= limit {
                        return Err(ZeroTestError::SamplingExhausted { attempts: failures });
                    }
                    continue;
                }
                Draw::NonZero(w) => {
                    let bigger = best
                        .as_ref()
                        .is_none_or(|b| w.value.to_f64().abs() > b.value.to_f64().abs());
                    if bigger {
                        best = Some(w);
                    }
                }
                Draw::Zero => {}
            }
            failures = 0;
            taken += 1;
        }
        Ok(best)
    }
}

enum Draw {
    Zero,
    NonZero(Witness),
    Singular,
}

/// Which symbols to bind and how.
struct SamplePlan {
    symbols: Vec<Symbol>,
    /// Root index per symbol: sampled values are perfect powers of it.
    roots: BTreeMap<Symbol, i64>,
    transcendental: bool,
}

fn is_tolerably_zero(v: f64, mag: f64) -> bool {
    v.abs() <= REL_TOL * mag.max(MAG_FLOOR)
}

impl SamplePlan {
    fn of(e: &Expr) -> SamplePlan {
        let mut roots: BTreeMap<Symbol, i64> = BTreeMap::new();
        let mut transcendental = false;
        e.visit(&mut |n| match n.node() {
            Node::Power(b, ex) if !ex.is_integer() => {
                if let Some(s) = leaf_symbol(b) {
                    let r = roots.entry(s).or_insert(1);
                    *r = r.lcm(ex.denom());
                }
            }
            Node::Func(..) => transcendental = true,
            _ => {}
        });
        let symbols: BTreeSet<Symbol> = e.symbols();
        SamplePlan {
            symbols: symbols.into_iter().collect(),
            roots,
            transcendental,
        }
    }

    fn exact_draw(&self, e: &Expr, rng: &mut ChaCha8Rng) -> Draw {
        let mut point = ExactPoint::new();
        for s in &self.symbols {
            let v = match self.roots.get(s) {
                Some(&k) => {
                    let base: i64 = rng.gen_range(1..=ROOT_RANGE);
                    num_traits::pow(BigInt::from(base), k as usize)
                }
                None => BigInt::from(rng.gen_range(-EXACT_RANGE..=EXACT_RANGE)),
            };
            point.insert(s.clone(), BigRational::from_integer(v));
        }
        match evaluate_exact(e, &point) {
            Ok(v) if v.is_zero() => Draw::Zero,
            Ok(v) => Draw::NonZero(self.witness_exact(&point, Value::Exact(v))),
            Err(EvalError::NotExact) => {
                let fp: FloatPoint = point
                    .iter()
                    .map(|(k, v)| (k.clone(), super::expr::rational_to_f64(v)))
                    .collect();
                match evaluate_float_magnitude(e, &fp) {
                    Ok((v, mag)) if is_tolerably_zero(v, mag) => Draw::Zero,
                    Ok((v, _)) => Draw::NonZero(self.witness_exact(&point, Value::Float(v))),
                    Err(_) => Draw::Singular,
                }
            }
            Err(_) => Draw::Singular,
        }
    }

    fn float_draw(&self, e: &Expr, rng: &mut ChaCha8Rng) -> Draw {
        let mut point = FloatPoint::new();
        for s in &self.symbols {
            let v = if self.roots.contains_key(s) {
                rng.gen_range(0.1..FLOAT_RANGE)
            } else {
                rng.gen_range(-FLOAT_RANGE..FLOAT_RANGE)
            };
            point.insert(s.clone(), v);
        }
        match evaluate_float_magnitude(e, &point) {
            Ok((v, mag)) if is_tolerably_zero(v, mag) => Draw::Zero,
            Ok((v, _)) => Draw::NonZero(Witness {
                point: self
                    .symbols
                    .iter()
                    .map(|s| (s.clone(), Value::Float(point[s])))
                    .collect(),
                value: Value::Float(v),
            }),
            Err(_) => Draw::Singular,
        }
    }

    fn witness_exact(&self, point: &ExactPoint, value: Value) -> Witness {
        Witness {
            point: self
                .symbols
                .iter()
                .map(|s| (s.clone(), Value::Exact(point[s].clone())))
                .collect(),
            value,
        }
    }
}
