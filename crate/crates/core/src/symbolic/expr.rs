//! Immutable expression trees.
//!
//! Trees are built through smart constructors that flatten nested sums and
//! products and fold numeric constants, but otherwise keep the shape the
//! caller gave them. The canonical form lives in [`crate::symbolic::canon`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Name = Arc<str>;
pub type Exponent = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncKind {
    Ln,
    Exp,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Ln => "ln",
            FuncKind::Exp => "exp",
        }
    }
}

/// An opaque arbitrary function together with a derivative multi-index.
///
/// `orders[i]` counts derivatives with respect to `args[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub name: Name,
    pub args: Arc<[Name]>,
    pub orders: Vec<u32>,
}

impl Jet {
    pub fn new(name: impl Into<Name>, args: &[&str]) -> Jet {
        let args: Vec<Name> = args.iter().map(|a| Name::from(*a)).collect();
        let orders = vec![0; args.len()];
        Jet {
            name: name.into(),
            args: args.into(),
            orders,
        }
    }

    pub fn with_args(name: Name, args: Arc<[Name]>) -> Jet {
        let orders = vec![0; args.len()];
        Jet { name, args, orders }
    }

    /// Total derivative order.
    pub fn order(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.args.iter().any(|a| &**a == var)
    }

    /// The jet differentiated once more by `var`, or `None` when the
    /// function does not depend on `var`.
    pub fn bump(&self, var: &str) -> Option<Jet> {
        let idx = self.args.iter().position(|a| &**a == var)?;
        let mut next = self.clone();
        next.orders[idx] += 1;
        Some(next)
    }

    pub fn base(&self) -> Jet {
        Jet::with_args(self.name.clone(), self.args.clone())
    }

    /// Identifier used when rendering, e.g. `F3_t_x` for the mixed derivative.
    pub fn display_name(&self) -> String {
        let mut s = self.name.to_string();
        for (arg, &k) in self.args.iter().zip(&self.orders) {
            for _ in 0..k {
                s.push('_');
                s.push_str(arg);
            }
        }
        s
    }
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Const(BigRational),
    Var(Name),
    Param(Name),
    Jet(Jet),
    Func(FuncKind, Expr),
    Power(Expr, Exponent),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// Name of a bindable leaf: a variable or parameter by name, or a jet of an
/// arbitrary function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Name(Name),
    Jet(Jet),
}

impl Symbol {
    pub fn name(n: &str) -> Symbol {
        Symbol::Name(Name::from(n))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Name(n) => f.write_str(n),
            Symbol::Jet(j) => f.write_str(&j.display_name()),
        }
    }
}

pub(crate) fn big(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Exact `q`-th root of a non-negative rational when it exists.
pub(crate) fn exact_root(v: &BigRational, q: u32) -> Option<BigRational> {
    if q == 1 {
        return Some(v.clone());
    }
    if v.is_negative() {
        if q % 2 == 1 {
            return exact_root(&-v, q).map(|r| -r);
        }
        return None;
    }
    let n = v.numer().nth_root(q);
    let d = v.denom().nth_root(q);
    if num_traits::pow(n.clone(), q as usize) == *v.numer()
        && num_traits::pow(d.clone(), q as usize) == *v.denom()
    {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn pow_rational(base: &BigRational, e: i64) -> Option<BigRational> {
    if e >= 0 {
        Some(num_traits::pow(base.clone(), e as usize))
    } else if base.is_zero() {
        None
    } else {
        Some(num_traits::pow(base.recip(), (-e) as usize))
    }
}

impl Expr {
    pub fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(q: BigRational) -> Expr {
        Expr::from_node(Node::Const(q))
    }

    pub fn int(i: i64) -> Expr {
        Expr::constant(big(i))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(name: &str) -> Expr {
        Expr::from_node(Node::Var(Name::from(name)))
    }

    pub fn param(name: &str) -> Expr {
        Expr::from_node(Node::Param(Name::from(name)))
    }

    pub fn jet(jet: Jet) -> Expr {
        Expr::from_node(Node::Jet(jet))
    }

    /// An arbitrary function of `args` with no derivatives taken.
    pub fn arb(name: &str, args: &[&str]) -> Expr {
        Expr::jet(Jet::new(name, args))
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut constant = BigRational::zero();
        let mut terms = Vec::new();
        fn push(e: Expr, constant: &mut BigRational, terms: &mut Vec<Expr>) {
            match e.node() {
                Node::Const(q) => *constant += q,
                Node::Sum(inner) => {
                    for t in inner {
                        push(t.clone(), constant, terms);
                    }
                }
                _ => terms.push(e),
            }
        }
        for e in items {
            push(e, &mut constant, &mut terms);
        }
        if !constant.is_zero() {
            terms.push(Expr::constant(constant));
        }
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap(),
            _ => Expr::from_node(Node::Sum(terms)),
        }
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        fn push(e: Expr, coeff: &mut BigRational, factors: &mut Vec<Expr>) {
            match e.node() {
                Node::Const(q) => *coeff *= q,
                Node::Product(inner) => {
                    for f in inner {
                        push(f.clone(), coeff, factors);
                    }
                }
                _ => factors.push(e),
            }
        }
        for e in items {
            push(e, &mut coeff, &mut factors);
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        if factors.is_empty() {
            return Expr::constant(coeff);
        }
        if !coeff.is_one() {
            factors.insert(0, Expr::constant(coeff));
        }
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::from_node(Node::Product(factors))
        }
    }

    pub fn pow(base: Expr, e: Exponent) -> Expr {
        if e.is_zero() {
            return Expr::one();
        }
        if e.is_one() {
            return base;
        }
        match base.node() {
            Node::Const(q) => {
                if e.is_integer() {
                    if let Some(v) = pow_rational(q, *e.numer()) {
                        return Expr::constant(v);
                    }
                } else if let Some(root) = exact_root(q, *e.denom() as u32) {
                    if let Some(v) = pow_rational(&root, *e.numer()) {
                        return Expr::constant(v);
                    }
                }
            }
            Node::Power(inner, e0) if e.is_integer() && e0.is_integer() => {
                return Expr::pow(inner.clone(), e * e0);
            }
            _ => {}
        }
        Expr::from_node(Node::Power(base, e))
    }

    pub fn powi(base: Expr, e: i64) -> Expr {
        Expr::pow(base, Exponent::from_integer(e))
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::pow(arg, Exponent::new(1, 2))
    }

    pub fn ln(arg: Expr) -> Expr {
        if arg.is_one() {
            return Expr::zero();
        }
        Expr::from_node(Node::Func(FuncKind::Ln, arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        if arg.is_zero() {
            return Expr::one();
        }
        Expr::from_node(Node::Func(FuncKind::Exp, arg))
    }

    pub fn func(kind: FuncKind, arg: Expr) -> Expr {
        match kind {
            FuncKind::Ln => Expr::ln(arg),
            FuncKind::Exp => Expr::exp(arg),
        }
    }

    pub fn recip(&self) -> Expr {
        Expr::powi(self.clone(), -1)
    }

    pub fn square(&self) -> Expr {
        Expr::powi(self.clone(), 2)
    }

    /// True when the tree contains `ln` or `exp` nodes.
    pub fn has_transcendental(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(e.node(), Node::Func(..)) {
                found = true;
            }
        });
        found
    }

    /// Pre-order visit of every node, shared subtrees visited once.
    pub fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.ptr()) {
                continue;
            }
            f(&e);
            match e.node() {
                Node::Func(_, a) | Node::Power(a, _) => stack.push(a.clone()),
                Node::Product(items) | Node::Sum(items) => stack.extend(items.iter().cloned()),
                _ => {}
            }
        }
    }

    /// All bindable leaves of the tree.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |e| match e.node() {
            Node::Var(n) | Node::Param(n) => {
                out.insert(Symbol::Name(n.clone()));
            }
            Node::Jet(j) => {
                out.insert(Symbol::Jet(j.clone()));
            }
            _ => {}
        });
        out
    }

    /// True when the tree mentions no variables and no jets.
    pub fn is_parameter_only(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |e| {
            if matches!(e.node(), Node::Var(_) | Node::Jet(_)) {
                ok = false;
            }
        });
        ok
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        let mut found = false;
        self.visit(&mut |e| match e.node() {
            Node::Var(n) if &**n == name => found = true,
            Node::Jet(j) if j.depends_on(name) => found = true,
            _ => {}
        });
        found
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl $trait<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, Expr::int(rhs))
            }
        }
        impl $trait<i64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), Expr::int(rhs))
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum([a, b]));
binop!(Sub, sub, |a, b| Expr::sum([a, -b]));
binop!(Mul, mul, |a, b| Expr::product([a, b]));
binop!(Div, div, |a, b| Expr::product([a, b.recip()]));

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self])
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl From<i64> for Expr {
    fn from(i: i64) -> Expr {
        Expr::int(i)
    }
}

// ---------------------------------------------------------------------------
// Rendering. The output is accepted by the expression parser.

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_exponent(e: &Exponent) -> String {
    if e.is_integer() && *e.numer() >= 0 {
        e.numer().to_string()
    } else if e.is_integer() {
        format!("({})", e.numer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

/// Splits a term into (is_negative, magnitude rendering precedence, text).
struct Rendered {
    text: String,
    prec: u8,
}

fn wrap(r: Rendered, min: u8) -> String {
    if r.prec < min {
        format!("({})", r.text)
    } else {
        r.text
    }
}

/// Numerator and denominator factor lists of a product-like expression.
fn split_fraction(e: &Expr) -> (BigRational, Vec<Expr>, Vec<Expr>) {
    let mut coeff = BigRational::one();
    let mut num = Vec::new();
    let mut den = Vec::new();
    let items: Vec<Expr> = match e.node() {
        Node::Product(items) => items.clone(),
        _ => vec![e.clone()],
    };
    for f in items {
        match f.node() {
            Node::Const(q) => coeff *= q,
            Node::Power(b, ex) if ex.is_negative() => den.push(Expr::pow(b.clone(), -ex)),
            _ => num.push(f.clone()),
        }
    }
    (coeff, num, den)
}

fn render(e: &Expr) -> Rendered {
    match e.node() {
        Node::Const(q) => {
            let prec = if q.is_negative() {
                PREC_SUM
            } else if q.is_integer() {
                PREC_ATOM
            } else {
                PREC_PRODUCT
            };
            Rendered {
                text: fmt_rational(q),
                prec,
            }
        }
        Node::Var(n) | Node::Param(n) => Rendered {
            text: n.to_string(),
            prec: PREC_ATOM,
        },
        Node::Jet(j) => Rendered {
            text: j.display_name(),
            prec: PREC_ATOM,
        },
        Node::Func(k, a) => Rendered {
            text: format!("{}({})", k.name(), render(a).text),
            prec: PREC_ATOM,
        },
        Node::Sum(terms) => {
            let mut text = String::new();
            for (i, t) in terms.iter().enumerate() {
                let (neg, body) = render_signed(t);
                if i == 0 {
                    if neg {
                        text.push('-');
                    }
                } else if neg {
                    text.push_str(" - ");
                } else {
                    text.push_str(" + ");
                }
                text.push_str(&wrap(body, PREC_PRODUCT));
            }
            Rendered {
                text,
                prec: PREC_SUM,
            }
        }
        Node::Power(..) | Node::Product(_) => {
            let (neg, body) = render_signed(e);
            if neg {
                Rendered {
                    text: format!("-{}", wrap(body, PREC_PRODUCT)),
                    prec: PREC_SUM,
                }
            } else {
                body
            }
        }
    }
}

/// Renders a product-like term as sign plus magnitude.
fn render_signed(e: &Expr) -> (bool, Rendered) {
    match e.node() {
        Node::Const(q) => {
            let r = render(&Expr::constant(q.abs()));
            (q.is_negative(), r)
        }
        Node::Product(_) | Node::Power(..) => {
            let (coeff, num, den) = split_fraction(e);
            let neg = coeff.is_negative();
            let coeff = coeff.abs();
            let mut num_parts: Vec<String> = Vec::new();
            if !coeff.numer().is_one() || num.is_empty() {
                num_parts.push(coeff.numer().to_string());
            }
            for f in &num {
                num_parts.push(render_factor(f));
            }
            let mut den_parts: Vec<String> = Vec::new();
            if !coeff.denom().is_one() {
                den_parts.push(coeff.denom().to_string());
            }
            for f in &den {
                den_parts.push(render_factor(f));
            }
            let num_text = num_parts.join("*");
            let text = match den_parts.len() {
                0 => num_text,
                1 => format!("{num_text}/{}", den_parts[0]),
                _ => format!("{num_text}/({})", den_parts.join("*")),
            };
            let prec = if den_parts.is_empty() && num_parts.len() == 1 {
                if num.len() == 1 {
                    match num[0].node() {
                        Node::Power(..) => PREC_POWER,
                        _ => render(&num[0]).prec.max(PREC_PRODUCT),
                    }
                } else {
                    PREC_ATOM
                }
            } else {
                PREC_PRODUCT
            };
            (neg, Rendered { text, prec })
        }
        Node::Sum(_) => (false, render(e)),
        _ => (false, render(e)),
    }
}

fn render_factor(f: &Expr) -> String {
    match f.node() {
        Node::Power(b, e) => {
            format!("{}^{}", wrap(render(b), PREC_ATOM), fmt_exponent(e))
        }
        _ => {
            let r = render(f);
            // a factor followed by `/` or `*` must bind tighter than a product
            wrap(r, PREC_POWER)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self).text)
    }
}

/// Lossy conversion used only for diagnostics.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // scale down huge numerators and denominators together
            let nb = q.numer().bits() as i64;
            let db = q.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_flattens_and_folds_constants() {
        let x = Expr::var("x");
        let e = Expr::sum([Expr::int(1), Expr::sum([x.clone(), Expr::int(2)])]);
        assert_eq!(e.to_string(), "x + 3");
        assert_eq!(Expr::sum([Expr::int(1), Expr::int(-1)]), Expr::zero());
    }

    #[test]
    fn product_with_zero_collapses() {
        let x = Expr::var("x");
        assert!(Expr::product([Expr::zero(), x]).is_zero());
    }

    #[test]
    fn power_of_constant_folds() {
        assert_eq!(Expr::powi(Expr::int(2), -2), Expr::rational(1, 4));
        assert_eq!(Expr::sqrt(Expr::rational(9, 4)), Expr::rational(3, 2));
        assert!(matches!(Expr::sqrt(Expr::int(2)).node(), Node::Power(..)));
    }

    #[test]
    fn rendering_uses_division_and_signs() {
        let x = Expr::var("x");
        let a1 = Expr::param("a1");
        let e = &a1 - Expr::one() / &x;
        assert_eq!(e.to_string(), "a1 - 1/x");
        let t = Expr::var("t");
        let e = Expr::int(-2) * &x / (Expr::int(3) * &t);
        assert_eq!(e.to_string(), "-2*x/(3*t)");
        assert_eq!(Expr::sqrt(t.clone()).to_string(), "t^(1/2)");
        assert_eq!(Expr::powi(t + x, 2).to_string(), "(t + x)^2");
    }

    #[test]
    fn jet_names_list_derivative_variables() {
        let j = Jet::new("F3", &["t", "x"])
            .bump("t")
            .unwrap()
            .bump("x")
            .unwrap();
        assert_eq!(j.display_name(), "F3_t_x");
        assert_eq!(j.order(), 2);
        assert!(Jet::new("xi1", &["t"]).bump("x").is_none());
    }
}
