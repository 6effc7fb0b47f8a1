//! Differentiation and substitution on raw trees.
//!
//! Both walk the tree once with a memo keyed by node identity, so shared
//! subtrees stay shared in the result.

use std::collections::HashMap;

use num_traits::One;

use super::canon::canonicalize;
use super::eval::leaf_symbol;
use super::expr::{Exponent, Expr, FuncKind, Node, Symbol};

fn derive_with(
    e: &Expr,
    leaf: &dyn Fn(&Expr) -> Expr,
    memo: &mut HashMap<usize, (Expr, Expr)>,
) -> Expr {
    if let Some((_, d)) = memo.get(&e.ptr()) {
        return d.clone();
    }
    let d = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Var(_) | Node::Param(_) | Node::Jet(_) => leaf(e),
        Node::Sum(terms) => Expr::sum(terms.iter().map(|t| derive_with(t, leaf, memo))),
        Node::Product(factors) => {
            let ds: Vec<Expr> = factors.iter().map(|f| derive_with(f, leaf, memo)).collect();
            let mut terms = Vec::new();
            for (i, di) in ds.iter().enumerate() {
                if di.is_zero() {
                    continue;
                }
                let mut fs: Vec<Expr> = factors
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, f)| f.clone())
                    .collect();
                fs.push(di.clone());
                terms.push(Expr::product(fs));
            }
            Expr::sum(terms)
        }
        Node::Power(b, ex) => {
            let db = derive_with(b, leaf, memo);
            if db.is_zero() {
                Expr::zero()
            } else {
                Expr::product([
                    Expr::constant(num_rational::BigRational::new(
                        (*ex.numer()).into(),
                        (*ex.denom()).into(),
                    )),
                    Expr::pow(b.clone(), ex - Exponent::one()),
                    db,
                ])
            }
        }
        Node::Func(kind, arg) => {
            let da = derive_with(arg, leaf, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                match kind {
                    FuncKind::Ln => Expr::product([da, arg.recip()]),
                    FuncKind::Exp => Expr::product([e.clone(), da]),
                }
            }
        }
    };
    memo.insert(e.ptr(), (e.clone(), d.clone()));
    d
}

/// Total derivative with respect to the variable `var`, without
/// canonicalization. Jets of functions depending on `var` gain one order.
pub fn derivative(e: &Expr, var: &str) -> Expr {
    let leaf = |x: &Expr| match x.node() {
        Node::Var(n) if &**n == var => Expr::one(),
        Node::Jet(j) => j.bump(var).map(Expr::jet).unwrap_or_else(Expr::zero),
        _ => Expr::zero(),
    };
    derive_with(e, &leaf, &mut HashMap::new())
}

/// Canonicalized total derivative.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    canonicalize(&derivative(e, var))
}

/// Partial derivative treating every variable, parameter and jet as an
/// independent coordinate.
pub fn partial(e: &Expr, coordinate: &Symbol) -> Expr {
    let leaf = |x: &Expr| {
        if leaf_symbol(x).as_ref() == Some(coordinate) {
            Expr::one()
        } else {
            Expr::zero()
        }
    };
    derive_with(e, &leaf, &mut HashMap::new())
}

pub type Bindings = HashMap<Symbol, Expr>;

/// Simultaneous substitution without canonicalization.
///
/// A binding for an underived function (a jet with all orders zero) also
/// replaces its derivative jets by the matching derivatives of the binding.
pub fn substitute_raw(e: &Expr, bindings: &Bindings) -> Expr {
    if bindings.is_empty() {
        return e.clone();
    }
    let mut memo = HashMap::new();
    subst(e, bindings, &mut memo)
}

fn subst(e: &Expr, bindings: &Bindings, memo: &mut HashMap<usize, (Expr, Expr)>) -> Expr {
    if let Some((_, r)) = memo.get(&e.ptr()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Var(_) | Node::Param(_) => bindings
            .get(&leaf_symbol(e).unwrap())
            .cloned()
            .unwrap_or_else(|| e.clone()),
        Node::Jet(j) => {
            if let Some(r) = bindings.get(&Symbol::Jet(j.clone())) {
                r.clone()
            } else if j.order() > 0 {
                match bindings.get(&Symbol::Jet(j.base())) {
                    Some(base) => {
                        let mut d = base.clone();
                        for (arg, &k) in j.args.iter().zip(&j.orders) {
                            for _ in 0..k {
                                d = derivative(&d, arg);
                            }
                        }
                        d
                    }
                    None => e.clone(),
                }
            } else {
                e.clone()
            }
        }
        Node::Sum(items) | Node::Product(items) => {
            let new: Vec<Expr> = items.iter().map(|x| subst(x, bindings, memo)).collect();
            if new.iter().zip(items).all(|(a, b)| a.ptr() == b.ptr()) {
                e.clone()
            } else if matches!(e.node(), Node::Sum(_)) {
                Expr::sum(new)
            } else {
                Expr::product(new)
            }
        }
        Node::Power(b, ex) => {
            let nb = subst(b, bindings, memo);
            if nb.ptr() == b.ptr() {
                e.clone()
            } else {
                Expr::pow(nb, *ex)
            }
        }
        Node::Func(kind, arg) => {
            let na = subst(arg, bindings, memo);
            if na.ptr() == arg.ptr() {
                e.clone()
            } else {
                Expr::func(*kind, na)
            }
        }
    };
    memo.insert(e.ptr(), (e.clone(), r.clone()));
    r
}

/// Canonicalized simultaneous substitution.
pub fn substitute(e: &Expr, bindings: &Bindings) -> Expr {
    canonicalize(&substitute_raw(e, bindings))
}

/// Whether `e` is independent of `var` once canonicalized.
pub fn is_free_of(e: &Expr, var: &str) -> bool {
    !canonicalize(e).mentions_var(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::expr::Jet;

    #[test]
    fn power_rule() {
        let (a, z1) = (Expr::param("a"), Expr::var("z1"));
        let e = Expr::int(2) * &a * Expr::powi(z1.clone(), 2);
        assert_eq!(
            differentiate(&e, "z1"),
            canonicalize(&(Expr::int(4) * &a * &z1))
        );
    }

    #[test]
    fn parameters_are_constants() {
        let (a, t) = (Expr::param("a"), Expr::var("t"));
        assert_eq!(differentiate(&(&a * &t), "t"), a);
        assert!(differentiate(&a, "t").is_zero());
    }

    #[test]
    fn jets_bump_their_multi_index() {
        let f = Expr::arb("F3", &["t", "x"]);
        let d1 = differentiate(&f, "t");
        let d2 = differentiate(&d1, "t");
        match d2.node() {
            Node::Jet(j) => assert_eq!(j.orders, vec![2, 0]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(differentiate(&Expr::arb("xi1", &["t"]), "x").is_zero());
    }

    #[test]
    fn substitution_of_sqrt() {
        let (a, z1, t) = (Expr::param("a"), Expr::var("z1"), Expr::var("t"));
        let e = Expr::int(2) * &a * Expr::powi(z1, 2);
        let b: Bindings = [(Symbol::name("z1"), Expr::sqrt(t.clone()))]
            .into_iter()
            .collect();
        assert_eq!(substitute(&e, &b), canonicalize(&(Expr::int(2) * &a * &t)));
        assert_eq!(substitute(&t, &Bindings::new()), t);
    }

    #[test]
    fn function_binding_reaches_derivative_jets() {
        let f = Jet::new("f", &["t"]);
        let ft = Expr::jet(f.bump("t").unwrap());
        let t = Expr::var("t");
        let b: Bindings = [(Symbol::Jet(f), Expr::powi(t.clone(), 3))]
            .into_iter()
            .collect();
        assert_eq!(
            substitute(&ft, &b),
            canonicalize(&(Expr::int(3) * Expr::powi(t, 2)))
        );
    }

    #[test]
    fn partial_treats_jets_as_coordinates() {
        let a = Expr::arb("alpha", &["t", "x"]);
        let at = differentiate(&a, "t");
        let e = &a * &at;
        let sym = match at.node() {
            Node::Jet(j) => Symbol::Jet(j.clone()),
            _ => unreachable!(),
        };
        assert_eq!(canonicalize(&partial(&e, &sym)), a);
    }
}
