//! Exact and floating evaluation.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::expr::{exact_root, pow_rational, rational_to_f64, Expr, FuncKind, Node, Symbol};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => rational_to_f64(q),
            Value::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(f) => *f == 0.0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Value::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("domain error: {0}")]
    DomainError(String),
    /// Raised by the exact evaluator for transcendental nodes and inexact roots.
    #[error("value is not an exact rational")]
    NotExact,
}

pub type ExactPoint = HashMap<Symbol, BigRational>;
pub type FloatPoint = HashMap<Symbol, f64>;

pub(crate) fn leaf_symbol(e: &Expr) -> Option<Symbol> {
    match e.node() {
        Node::Var(n) | Node::Param(n) => Some(Symbol::Name(n.clone())),
        Node::Jet(j) => Some(Symbol::Jet(j.clone())),
        _ => None,
    }
}

/// Exact rational evaluation.
pub fn evaluate_exact(e: &Expr, point: &ExactPoint) -> Result<BigRational, EvalError> {
    let mut memo = HashMap::new();
    exact(e, point, &mut memo)
}

fn exact(
    e: &Expr,
    point: &ExactPoint,
    memo: &mut HashMap<usize, BigRational>,
) -> Result<BigRational, EvalError> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(v.clone());
    }
    let v = match e.node() {
        Node::Const(q) => q.clone(),
        Node::Var(_) | Node::Param(_) | Node::Jet(_) => {
            let s = leaf_symbol(e).unwrap();
            point
                .get(&s)
                .cloned()
                .ok_or_else(|| EvalError::UnboundSymbol(s.to_string()))?
        }
        Node::Sum(terms) => {
            let mut acc = BigRational::zero();
            for t in terms {
                acc += exact(t, point, memo)?;
            }
            acc
        }
        Node::Product(factors) => {
            let mut acc = BigRational::from_integer(1.into());
            for f in factors {
                let v = exact(f, point, memo)?;
                if v.is_zero() {
                    // keep evaluating so division by zero elsewhere is reported
                    acc = BigRational::zero();
                } else {
                    acc *= v;
                }
            }
            acc
        }
        Node::Power(b, ex) => {
            let bv = exact(b, point, memo)?;
            if ex.is_integer() {
                pow_rational(&bv, *ex.numer()).ok_or(EvalError::DivisionByZero)?
            } else {
                if bv.is_zero() && ex.is_negative() {
                    return Err(EvalError::DivisionByZero);
                }
                let q = *ex.denom() as u32;
                if bv.is_negative() && q.is_multiple_of(2) {
                    return Err(EvalError::DomainError(format!(
                        "even root of negative value {bv}"
                    )));
                }
                let r = exact_root(&bv, q).ok_or(EvalError::NotExact)?;
                pow_rational(&r, *ex.numer()).ok_or(EvalError::DivisionByZero)?
            }
        }
        Node::Func(..) => return Err(EvalError::NotExact),
    };
    memo.insert(e.ptr(), v.clone());
    Ok(v)
}

enum Op {
    Const(BigRational),
    Leaf(usize),
    Sum(Vec<usize>),
    Product(Vec<usize>),
    Power(usize, super::expr::Exponent),
}

/// Several expressions compiled into one straight-line program in which
/// structurally equal subexpressions are evaluated once.
pub struct Program {
    ops: Vec<Op>,
    leaves: Vec<Symbol>,
    outputs: Vec<usize>,
}

impl Program {
    /// Compiles `exprs`; `None` if any of them contains `ln` or `exp`.
    pub fn compile<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> Option<Program> {
        let mut p = Program {
            ops: Vec::new(),
            leaves: Vec::new(),
            outputs: Vec::new(),
        };
        let mut seen: HashMap<Expr, usize> = HashMap::new();
        for e in exprs {
            let i = p.add(e, &mut seen)?;
            p.outputs.push(i);
        }
        Some(p)
    }

    fn add(&mut self, e: &Expr, seen: &mut HashMap<Expr, usize>) -> Option<usize> {
        if let Some(&i) = seen.get(e) {
            return Some(i);
        }
        let op = match e.node() {
            Node::Const(q) => Op::Const(q.clone()),
            Node::Var(_) | Node::Param(_) | Node::Jet(_) => {
                self.leaves.push(leaf_symbol(e).unwrap());
                Op::Leaf(self.leaves.len() - 1)
            }
            Node::Sum(ts) => Op::Sum(
                ts.iter()
                    .map(|t| self.add(t, seen))
                    .collect::<Option<_>>()?,
            ),
            Node::Product(fs) => Op::Product(
                fs.iter()
                    .map(|f| self.add(f, seen))
                    .collect::<Option<_>>()?,
            ),
            Node::Power(b, ex) => Op::Power(self.add(b, seen)?, *ex),
            Node::Func(..) => return None,
        };
        self.ops.push(op);
        seen.insert(e.clone(), self.ops.len() - 1);
        Some(self.ops.len() - 1)
    }

    /// Number of distinct operations.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Evaluates every output at `point`; errors stay local to the outputs
    /// that depend on them.
    pub fn evaluate(&self, point: &ExactPoint) -> Vec<Result<BigRational, EvalError>> {
        let mut vals: Vec<Result<BigRational, EvalError>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Const(q) => Ok(q.clone()),
                Op::Leaf(i) => {
                    let s = &self.leaves[*i];
                    point
                        .get(s)
                        .cloned()
                        .ok_or_else(|| EvalError::UnboundSymbol(s.to_string()))
                }
                Op::Sum(ts) => fold_unreduced(ts, &vals, 0, |(n, d), v| {
                    if d == v.denom() {
                        *n += v.numer();
                    } else {
                        *n = &*n * v.denom() + v.numer() * &*d;
                        *d *= v.denom();
                    }
                }),
                Op::Product(fs) => fold_unreduced(fs, &vals, 1, |(n, d), v| {
                    *n *= v.numer();
                    *d *= v.denom();
                }),
                Op::Power(b, ex) => vals[*b].clone().and_then(|bv| {
                    if ex.is_integer() {
                        return pow_rational(&bv, *ex.numer()).ok_or(EvalError::DivisionByZero);
                    }
                    if bv.is_zero() && ex.is_negative() {
                        return Err(EvalError::DivisionByZero);
                    }
                    let q = *ex.denom() as u32;
                    if bv.is_negative() && q.is_multiple_of(2) {
                        return Err(EvalError::DomainError(format!(
                            "even root of negative value {bv}"
                        )));
                    }
                    let r = exact_root(&bv, q).ok_or(EvalError::NotExact)?;
                    pow_rational(&r, *ex.numer()).ok_or(EvalError::DivisionByZero)
                }),
            };
            vals.push(v);
        }
        self.outputs.iter().map(|&i| vals[i].clone()).collect()
    }
}

/// Combines the values at `ix` into one fraction and reduces it once.
fn fold_unreduced(
    ix: &[usize],
    vals: &[Result<BigRational, EvalError>],
    identity: i32,
    mut step: impl FnMut((&mut BigInt, &mut BigInt), &BigRational),
) -> Result<BigRational, EvalError> {
    let (mut n, mut d) = (BigInt::from(identity), BigInt::from(1));
    let mut first = true;
    for &i in ix {
        let v = vals[i].as_ref().map_err(Clone::clone)?;
        if first {
            (n, d) = (v.numer().clone(), v.denom().clone());
            first = false;
        } else {
            step((&mut n, &mut d), v);
        }
    }
    Ok(BigRational::new(n, d))
}

/// Floating evaluation.
pub fn evaluate_float(e: &Expr, point: &FloatPoint) -> Result<f64, EvalError> {
    Ok(evaluate_float_magnitude(e, point)?.0)
}

/// Floating evaluation returning the value and a magnitude scale.
///
/// The scale sums absolute values over sums and multiplies them over
/// products, so cancellation in a sum leaves the scale large.
pub fn evaluate_float_magnitude(e: &Expr, point: &FloatPoint) -> Result<(f64, f64), EvalError> {
    let mut memo = HashMap::new();
    float(e, point, &mut memo)
}

fn finite(v: f64, what: &str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::DomainError(format!("{what} is not finite")))
    }
}

fn float(
    e: &Expr,
    point: &FloatPoint,
    memo: &mut HashMap<usize, (f64, f64)>,
) -> Result<(f64, f64), EvalError> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(*v);
    }
    let v = match e.node() {
        Node::Const(q) => {
            let f = rational_to_f64(q);
            (f, f.abs())
        }
        Node::Var(_) | Node::Param(_) | Node::Jet(_) => {
            let s = leaf_symbol(e).unwrap();
            let f = *point
                .get(&s)
                .ok_or_else(|| EvalError::UnboundSymbol(s.to_string()))?;
            (f, f.abs())
        }
        Node::Sum(terms) => {
            let (mut v, mut m) = (0.0, 0.0);
            for t in terms {
                let (tv, tm) = float(t, point, memo)?;
                v += tv;
                m += tm;
            }
            (finite(v, "sum")?, m)
        }
        Node::Product(factors) => {
            let (mut v, mut m) = (1.0, 1.0);
            for f in factors {
                let (fv, fm) = float(f, point, memo)?;
                v *= fv;
                m *= fm;
            }
            (finite(v, "product")?, m)
        }
        Node::Power(b, ex) => {
            let (bv, bm) = float(b, point, memo)?;
            if bv == 0.0 && ex.is_negative() {
                return Err(EvalError::DivisionByZero);
            }
            let v = if ex.is_integer() {
                let n = *ex.numer();
                match n.to_i32() {
                    Some(k) => bv.powi(k),
                    None => bv.powf(n as f64),
                }
            } else {
                let p = *ex.numer() as f64 / *ex.denom() as f64;
                if bv < 0.0 {
                    if ex.denom() % 2 == 0 {
                        return Err(EvalError::DomainError(format!(
                            "even root of negative value {bv}"
                        )));
                    }
                    let mag = (-bv).powf(p);
                    if ex.numer() % 2 == 0 {
                        mag
                    } else {
                        -mag
                    }
                } else {
                    bv.powf(p)
                }
            };
            let v = finite(v, "power")?;
            let m = if ex.is_positive() {
                bm.powf(*ex.numer() as f64 / *ex.denom() as f64)
            } else {
                v.abs()
            };
            (v, m)
        }
        Node::Func(kind, arg) => {
            let (a, _) = float(arg, point, memo)?;
            let v = match kind {
                FuncKind::Ln => {
                    if a <= 0.0 {
                        return Err(EvalError::DomainError(format!(
                            "ln of non-positive value {a}"
                        )));
                    }
                    a.ln()
                }
                FuncKind::Exp => finite(a.exp(), "exp")?,
            };
            (v, v.abs())
        }
    };
    memo.insert(e.ptr(), v);
    Ok(v)
}

/// Evaluates exactly when possible and in floating point otherwise.
pub fn evaluate(e: &Expr, point: &ExactPoint) -> Result<Value, EvalError> {
    match evaluate_exact(e, point) {
        Ok(q) => Ok(Value::Exact(q)),
        Err(EvalError::NotExact) => {
            let fp: FloatPoint = point
                .iter()
                .map(|(k, v)| (k.clone(), rational_to_f64(v)))
                .collect();
            evaluate_float(e, &fp).map(Value::Float)
        }
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn evaluates_quotient_exactly() {
        // c/(a b z1^2) at a=1, b=2, c=4, z1=1
        let (a, b, c) = (Expr::param("a"), Expr::param("b"), Expr::param("c"));
        let z1 = Expr::var("z1");
        let e = &c / (&a * &b * Expr::powi(z1, 2));
        let point: ExactPoint = [("a", 1), ("b", 2), ("c", 4), ("z1", 1)]
            .into_iter()
            .map(|(k, v)| (Symbol::name(k), q(v)))
            .collect();
        assert_eq!(evaluate(&e, &point).unwrap(), Value::Exact(q(2)));
    }

    #[test]
    fn program_shares_subterms_and_keeps_errors_local() {
        let (t, x) = (Expr::var("t"), Expr::var("x"));
        let u = &t * &x + 1;
        let exprs = [
            Expr::powi(u.clone(), 2) - &t,
            Expr::one() / (&x - 2),
            u.clone() * Expr::rational(1, 3),
        ];
        let p = Program::compile(&exprs).unwrap();
        let point: ExactPoint = [(Symbol::name("t"), q(3)), (Symbol::name("x"), q(2))]
            .into_iter()
            .collect();
        let got = p.evaluate(&point);
        assert_eq!(got[0], Ok(q(46)));
        assert_eq!(got[1], Err(EvalError::DivisionByZero));
        assert_eq!(got[2], Ok(BigRational::new(7.into(), 3.into())));
        for (e, v) in exprs.iter().zip(&got).filter(|(_, v)| v.is_ok()) {
            assert_eq!(
                evaluate(e, &point).unwrap(),
                Value::Exact(v.clone().unwrap())
            );
        }
        assert!(Program::compile(&[Expr::exp(t)]).is_none());
    }

    #[test]
    fn reports_division_by_zero_and_unbound() {
        let x = Expr::var("x");
        let e = Expr::one() / &x;
        let point: ExactPoint = [(Symbol::name("x"), q(0))].into_iter().collect();
        assert_eq!(evaluate(&e, &point), Err(EvalError::DivisionByZero));
        assert!(matches!(
            evaluate(&e, &ExactPoint::new()),
            Err(EvalError::UnboundSymbol(_))
        ));
    }

    #[test]
    fn roots_fall_back_to_float() {
        let x = Expr::var("x");
        let point: ExactPoint = [(Symbol::name("x"), q(4))].into_iter().collect();
        assert_eq!(
            evaluate(&Expr::sqrt(x.clone()), &point).unwrap(),
            Value::Exact(q(2))
        );
        let point: ExactPoint = [(Symbol::name("x"), q(2))].into_iter().collect();
        let v = evaluate(&Expr::sqrt(x.clone()), &point).unwrap();
        assert!((v.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let point: ExactPoint = [(Symbol::name("x"), q(-2))].into_iter().collect();
        assert!(matches!(
            evaluate(&Expr::ln(x), &point),
            Err(EvalError::DomainError(_))
        ));
    }
}
