//! Canonical form: a reduced quotient of expanded polynomials over atoms.
//!
//! Atoms are variables, parameters, jets, `ln`/`exp` of canonical arguments,
//! and radicals of canonical non-monomial bases. Atom exponents are rational,
//! and the numerator may carry negative ones, so monomials are units. The
//! denominator is an integer-primitive polynomial with no monomial content and
//! a positive leading coefficient.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expr::{exact_root, pow_rational, Exponent, Expr, FuncKind, Node};
use super::mpoly::{self, MPoly};

/// Term budget used by [`canonicalize`].
pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum CanonError {
    #[error("expression too large to canonicalize within the term budget")]
    Budget,
    #[error("division by an identically zero expression")]
    DivisionByZero,
}

type AtomId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
struct Mono(Vec<(AtomId, Exponent)>);

impl Mono {
    fn single(id: AtomId, e: Exponent) -> Mono {
        if e.is_zero() {
            Mono::default()
        } else {
            Mono(vec![(id, e)])
        }
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j]);
                j += 1;
            } else {
                let e = self.0[i].1 + other.0[j].1;
                if !e.is_zero() {
                    out.push((self.0[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    fn pow(&self, e: Exponent) -> Mono {
        if e.is_zero() {
            return Mono::default();
        }
        Mono(self.0.iter().map(|&(a, k)| (a, k * e)).collect())
    }

    fn exponent(&self, id: AtomId) -> Exponent {
        self.0
            .iter()
            .find(|(a, _)| *a == id)
            .map(|(_, e)| *e)
            .unwrap_or_else(Exponent::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
struct Poly(BTreeMap<Mono, BigRational>);

impl Poly {
    fn constant(c: BigRational) -> Poly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Mono::default(), c);
        }
        Poly(m)
    }

    fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    fn term(c: BigRational, m: Mono) -> Poly {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        Poly(map)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1
            && self
                .0
                .iter()
                .next()
                .is_some_and(|(m, c)| m.0.is_empty() && c.is_one())
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn single(&self) -> Option<(&Mono, &BigRational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    fn add_assign(&mut self, other: &Poly, sign: bool) {
        for (m, c) in &other.0 {
            let entry = self.0.entry(m.clone()).or_insert_with(BigRational::zero);
            if sign {
                *entry += c;
            } else {
                *entry -= c;
            }
            if entry.is_zero() {
                self.0.remove(m);
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other, true);
        out
    }

    fn scale_term(&self, c: &BigRational, m: &Mono) -> Poly {
        Poly(self.0.iter().map(|(m2, c2)| (m2.mul(m), c2 * c)).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        if let Some((m, c)) = other.single() {
            return self.scale_term(c, m);
        }
        if let Some((m, c)) = self.single() {
            return other.scale_term(c, m);
        }
        let mut acc: HashMap<Mono, BigRational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                *acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Poly(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    fn atoms(&self) -> Vec<AtomId> {
        let mut ids: Vec<AtomId> = self
            .0
            .keys()
            .flat_map(|m| m.0.iter().map(|(a, _)| *a))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    fn constant(c: BigRational) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn as_constant(&self) -> Option<BigRational> {
        if !self.den.is_one() {
            return None;
        }
        match self.num.0.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.num.0.iter().next().unwrap();
                m.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum AtomKey {
    Leaf(Expr),
    Func(FuncKind, Expr),
    Radical(Expr),
}

struct AtomInfo {
    render: Expr,
    radical_base: Option<RatFun>,
}

/// Integer image of a pair of polynomials sharing one variable numbering.
struct IntImage {
    atoms: Vec<AtomId>,
    scale: Vec<i64>,
}

impl IntImage {
    fn new(polys: &[&Poly]) -> IntImage {
        let mut atoms: Vec<AtomId> = polys.iter().flat_map(|p| p.atoms()).collect();
        atoms.sort_unstable();
        atoms.dedup();
        let mut scale = vec![1i64; atoms.len()];
        for p in polys {
            for m in p.0.keys() {
                for (a, e) in &m.0 {
                    let idx = atoms.binary_search(a).unwrap();
                    scale[idx] = scale[idx].lcm(e.denom());
                }
            }
        }
        IntImage { atoms, scale }
    }

    /// Writes `p = c * m * M` with `c` a rational constant, `m` a monomial
    /// and `M` an integer polynomial; returns `(M, c, m)`.
    fn to_mpoly(&self, p: &Poly) -> (MPoly, BigRational, Mono) {
        let n = self.atoms.len();
        let mut shift = vec![i64::MAX; n];
        let mut scaled: Vec<(Vec<i64>, &BigRational)> = Vec::with_capacity(p.len());
        for (m, c) in &p.0 {
            let mut e = vec![0i64; n];
            for (a, k) in &m.0 {
                let idx = self.atoms.binary_search(a).unwrap();
                e[idx] = (k * self.scale[idx]).to_integer();
            }
            scaled.push((e, c));
        }
        for (e, _) in &scaled {
            for i in 0..n {
                shift[i] = shift[i].min(e[i]);
            }
        }
        let mut lcm = BigInt::one();
        for (_, c) in &scaled {
            lcm = lcm.lcm(c.denom());
        }
        let unit_m = Mono(
            shift
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != 0 && s != i64::MAX)
                .map(|(i, &s)| (self.atoms[i], Exponent::new(s, self.scale[i])))
                .collect(),
        );
        let lcm_q = BigRational::from_integer(lcm);
        let poly = MPoly::from_terms(
            n,
            scaled.into_iter().map(|(e, c)| {
                let exps = e.iter().zip(&shift).map(|(k, s)| (k - s) as u32).collect();
                (exps, (c * &lcm_q).to_integer())
            }),
        );
        (poly, lcm_q.recip(), unit_m)
    }

    fn poly_of(&self, m: &MPoly) -> Poly {
        let mut out = BTreeMap::new();
        for (e, c) in m.terms() {
            let mono: Vec<(AtomId, Exponent)> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (self.atoms[i], Exponent::new(k as i64, self.scale[i])))
                .collect();
            out.insert(Mono(mono), BigRational::from_integer(c.clone()));
        }
        Poly(out)
    }
}

/// Greatest common divisor of `a` and `b` with cofactors, or `None` when the
/// gcd is a unit or could not be found within `limit` terms.
fn gcd_cofactors(a: &Poly, b: &Poly, limit: usize) -> Option<(Poly, Poly, Poly)> {
    if a.len() <= 1 || b.len() <= 1 {
        return None;
    }
    let img = IntImage::new(&[a, b]);
    let (ma, ca, ua) = img.to_mpoly(a);
    let (mb, cb, ub) = img.to_mpoly(b);
    let g = mpoly::gcd_bounded(&ma, &mb, limit)?;
    if g.len() <= 1 {
        return None;
    }
    let qa = ma.div_exact(&g).expect("gcd divides its arguments");
    let qb = mb.div_exact(&g).expect("gcd divides its arguments");
    Some((
        img.poly_of(&g),
        img.poly_of(&qa).scale_term(&ca, &ua),
        img.poly_of(&qb).scale_term(&cb, &ub),
    ))
}

/// The canonicalizer's working state: the atom table and a memo keyed by
/// node identity.
pub(crate) struct Canon {
    atoms: Vec<AtomInfo>,
    index: HashMap<AtomKey, AtomId>,
    memo: HashMap<usize, (Expr, RatFun)>,
    budget: usize,
    has_radicals: bool,
}

impl Canon {
    pub(crate) fn new(budget: usize) -> Canon {
        Canon {
            atoms: Vec::new(),
            index: HashMap::new(),
            memo: HashMap::new(),
            budget,
            has_radicals: false,
        }
    }

    fn atom(&mut self, key: AtomKey, render: Expr, radical_base: Option<RatFun>) -> AtomId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        if radical_base.is_some() {
            self.has_radicals = true;
        }
        self.atoms.push(AtomInfo {
            render,
            radical_base,
        });
        self.index.insert(key, id);
        id
    }

    /// Refuses products whose term count could exceed the budget.
    fn guard(&self, pairs: &[(&Poly, &Poly)]) -> Result<(), CanonError> {
        for (a, b) in pairs {
            if a.len().saturating_mul(b.len()) > self.budget {
                return Err(CanonError::Budget);
            }
        }
        Ok(())
    }

    fn check(&self, rf: &RatFun) -> Result<(), CanonError> {
        if rf.size() > self.budget {
            Err(CanonError::Budget)
        } else {
            Ok(())
        }
    }

    fn normalize(&mut self, mut num: Poly, mut den: Poly) -> Result<RatFun, CanonError> {
        if den.is_zero() {
            return Err(CanonError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::constant(BigRational::zero()));
        }
        if let Some((m, c)) = den.single() {
            let inv_c = c.recip();
            let inv_m = m.pow(-Exponent::one());
            num = num.scale_term(&inv_c, &inv_m);
            den = Poly::one();
        } else {
            // rational content
            let mut g = BigInt::zero();
            let mut l = BigInt::one();
            for c in den.0.values() {
                g = g.gcd(c.numer());
                l = l.lcm(c.denom());
            }
            let mut k = BigRational::new(g, l);
            if den.0.values().next().unwrap().is_negative() {
                k = -k;
            }
            // monomial content
            let atoms = den.atoms();
            let mut content = Vec::new();
            for a in atoms {
                let min = den
                    .0
                    .keys()
                    .map(|m| m.exponent(a))
                    .min()
                    .unwrap_or_else(Exponent::zero);
                if !min.is_zero() {
                    content.push((a, min));
                }
            }
            let content = Mono(content);
            if !k.is_one() || !content.0.is_empty() {
                let inv_k = k.recip();
                let inv_m = content.pow(-Exponent::one());
                den = den.scale_term(&inv_k, &inv_m);
                num = num.scale_term(&inv_k, &inv_m);
            }
        }
        let rf = RatFun { num, den };
        self.check(&rf)?;
        if self.has_radicals {
            return self.reduce_radicals(rf);
        }
        Ok(rf)
    }

    fn add(&mut self, a: &RatFun, b: &RatFun) -> Result<RatFun, CanonError> {
        if a.is_zero() {
            return Ok(b.clone());
        }
        if b.is_zero() {
            return Ok(a.clone());
        }
        if a.den == b.den {
            let t = a.num.add(&b.num);
            if a.den.is_one() {
                let rf = RatFun::from_poly(t);
                self.check(&rf)?;
                return Ok(rf);
            }
            return match gcd_cofactors(&t, &a.den, self.budget) {
                None => self.normalize(t, a.den.clone()),
                Some((_, t2, d2)) => self.normalize(t2, d2),
            };
        }
        match gcd_cofactors(&a.den, &b.den, self.budget) {
            None => {
                self.guard(&[(&a.num, &b.den), (&b.num, &a.den), (&a.den, &b.den)])?;
                let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
                let den = a.den.mul(&b.den);
                self.normalize(num, den)
            }
            Some((g, bp, dp)) => {
                self.guard(&[(&a.num, &dp), (&b.num, &bp), (&bp, &dp)])?;
                let t = a.num.mul(&dp).add(&b.num.mul(&bp));
                let base = bp.mul(&dp);
                match gcd_cofactors(&t, &g, self.budget) {
                    None => self.normalize(t, base.mul(&g)),
                    Some((_, t2, g2)) => self.normalize(t2, base.mul(&g2)),
                }
            }
        }
    }

    fn mul(&mut self, a: &RatFun, b: &RatFun) -> Result<RatFun, CanonError> {
        if a.is_zero() || b.is_zero() {
            return Ok(RatFun::constant(BigRational::zero()));
        }
        if a.den.is_one() && b.den.is_one() {
            self.guard(&[(&a.num, &b.num)])?;
            let num = a.num.mul(&b.num);
            if self.has_radicals {
                return self.normalize(num, Poly::one());
            }
            let rf = RatFun::from_poly(num);
            self.check(&rf)?;
            return Ok(rf);
        }
        let (an, bd) = match gcd_cofactors(&a.num, &b.den, self.budget) {
            None => (a.num.clone(), b.den.clone()),
            Some((_, x, y)) => (x, y),
        };
        let (bn, ad) = match gcd_cofactors(&b.num, &a.den, self.budget) {
            None => (b.num.clone(), a.den.clone()),
            Some((_, x, y)) => (x, y),
        };
        self.guard(&[(&an, &bn), (&ad, &bd)])?;
        self.normalize(an.mul(&bn), ad.mul(&bd))
    }

    fn recip(&mut self, a: &RatFun) -> Result<RatFun, CanonError> {
        if a.is_zero() {
            return Err(CanonError::DivisionByZero);
        }
        self.normalize(a.den.clone(), a.num.clone())
    }

    fn powi(&mut self, a: &RatFun, n: i64) -> Result<RatFun, CanonError> {
        if n == 0 {
            return Ok(RatFun::constant(BigRational::one()));
        }
        if n < 0 {
            let r = self.recip(a)?;
            return self.powi(&r, -n);
        }
        if let Some((m, c)) = a.num.single() {
            if a.den.is_one() {
                let c = pow_rational(c, n).unwrap();
                let rf = RatFun::from_poly(Poly::term(c, m.pow(Exponent::from_integer(n))));
                if self.has_radicals {
                    return self.normalize(rf.num, rf.den);
                }
                return Ok(rf);
            }
        }
        let mut result = RatFun::constant(BigRational::one());
        let mut base = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    fn root(&mut self, base: &RatFun, e: Exponent) -> Result<RatFun, CanonError> {
        if base.is_zero() {
            if e.is_positive() {
                return Ok(RatFun::constant(BigRational::zero()));
            }
            return Err(CanonError::DivisionByZero);
        }
        if base.den.is_one() {
            if let Some((m, c)) = base.num.single() {
                let mono = m.pow(e);
                let coeff = if c.is_one() {
                    RatFun::constant(BigRational::one())
                } else if let Some(r) = exact_root(c, *e.denom() as u32) {
                    RatFun::constant(pow_rational(&r, *e.numer()).unwrap())
                } else {
                    let render = Expr::constant(c.clone());
                    let id = self.atom(
                        AtomKey::Radical(render.clone()),
                        render,
                        Some(RatFun::constant(c.clone())),
                    );
                    let p = Poly::term(BigRational::one(), Mono::single(id, e));
                    self.normalize(p, Poly::one())?
                };
                let m = RatFun::from_poly(Poly::term(BigRational::one(), mono));
                return self.mul(&coeff, &m);
            }
        }
        let render = self.to_expr(base);
        let id = self.atom(AtomKey::Radical(render.clone()), render, Some(base.clone()));
        let p = Poly::term(BigRational::one(), Mono::single(id, e));
        self.normalize(p, Poly::one())
    }

    fn reduce_radicals(&mut self, rf: RatFun) -> Result<RatFun, CanonError> {
        let out_of_range = |p: &Poly, atoms: &[AtomInfo]| {
            p.0.keys().any(|m| {
                m.0.iter().any(|(a, e)| {
                    atoms[*a as usize].radical_base.is_some()
                        && (e.is_negative() || *e >= Exponent::one())
                })
            })
        };
        if !out_of_range(&rf.num, &self.atoms) && !out_of_range(&rf.den, &self.atoms) {
            return Ok(rf);
        }
        let num = self.expand_radicals(&rf.num)?;
        let den = self.expand_radicals(&rf.den)?;
        let inv = self.recip(&den)?;
        self.mul(&num, &inv)
    }

    fn expand_radicals(&mut self, p: &Poly) -> Result<RatFun, CanonError> {
        let mut acc = RatFun::constant(BigRational::zero());
        for (m, c) in &p.0 {
            let mut kept = Vec::new();
            let mut expand = Vec::new();
            for &(a, e) in &m.0 {
                if self.atoms[a as usize].radical_base.is_some() {
                    let whole = e.floor();
                    let frac = e - whole;
                    if !frac.is_zero() {
                        kept.push((a, frac));
                    }
                    if !whole.is_zero() {
                        expand.push((a, whole.to_integer()));
                    }
                } else {
                    kept.push((a, e));
                }
            }
            let mut term = RatFun::from_poly(Poly::term(c.clone(), Mono(kept)));
            for (a, k) in expand {
                let base = self.atoms[a as usize].radical_base.clone().unwrap();
                let f = self.powi(&base, k)?;
                term = self.mul(&term, &f)?;
            }
            acc = self.add(&acc, &term)?;
        }
        Ok(acc)
    }

    pub(crate) fn convert(&mut self, e: &Expr) -> Result<RatFun, CanonError> {
        if let Some((_, rf)) = self.memo.get(&e.ptr()) {
            return Ok(rf.clone());
        }
        let rf = match e.node() {
            Node::Const(q) => RatFun::constant(q.clone()),
            Node::Var(_) | Node::Param(_) | Node::Jet(_) => {
                let id = self.atom(AtomKey::Leaf(e.clone()), e.clone(), None);
                RatFun::from_poly(Poly::term(
                    BigRational::one(),
                    Mono::single(id, Exponent::one()),
                ))
            }
            Node::Sum(terms) => {
                let mut acc = RatFun::constant(BigRational::zero());
                for t in terms {
                    let r = self.convert(t)?;
                    acc = self.add(&acc, &r)?;
                }
                acc
            }
            Node::Product(factors) => {
                let mut acc = RatFun::constant(BigRational::one());
                for f in factors {
                    let r = self.convert(f)?;
                    acc = self.mul(&acc, &r)?;
                }
                acc
            }
            Node::Power(b, ex) => {
                let rb = self.convert(b)?;
                if ex.is_integer() {
                    self.powi(&rb, *ex.numer())?
                } else {
                    self.root(&rb, *ex)?
                }
            }
            Node::Func(kind, arg) => {
                let ra = self.convert(arg)?;
                self.func(*kind, &ra)?
            }
        };
        self.memo.insert(e.ptr(), (e.clone(), rf.clone()));
        Ok(rf)
    }

    fn func(&mut self, kind: FuncKind, arg: &RatFun) -> Result<RatFun, CanonError> {
        match kind {
            FuncKind::Ln if arg.as_constant().is_some_and(|c| c.is_one()) => {
                return Ok(RatFun::constant(BigRational::zero()));
            }
            FuncKind::Exp if arg.is_zero() => return Ok(RatFun::constant(BigRational::one())),
            _ => {}
        }
        let ae = self.to_expr(arg);
        if let Node::Func(inner, u) = ae.node() {
            if *inner != kind {
                // ln(exp(u)) = u and exp(ln(u)) = u
                let u = u.clone();
                return self.convert(&u);
            }
        }
        let render = Expr::from_node(Node::Func(kind, ae.clone()));
        let id = self.atom(AtomKey::Func(kind, ae), render, None);
        Ok(RatFun::from_poly(Poly::term(
            BigRational::one(),
            Mono::single(id, Exponent::one()),
        )))
    }

    fn term_key(&self, m: &Mono) -> (Exponent, Vec<(Expr, Exponent)>) {
        let mut key: Vec<(Expr, Exponent)> =
            m.0.iter()
                .map(|(a, e)| (self.atoms[*a as usize].render.clone(), *e))
                .collect();
        key.sort_by(|a, b| a.0.cmp(&b.0));
        let degree = m.0.iter().fold(Exponent::zero(), |acc, (_, e)| acc + e);
        (degree, key)
    }

    fn ordered_terms<'a>(&self, p: &'a Poly) -> Vec<(&'a Mono, &'a BigRational)> {
        let mut terms: Vec<_> = p.0.iter().map(|(m, c)| (self.term_key(m), m, c)).collect();
        terms.sort_by(|a, b| cmp_term_keys(&a.0, &b.0));
        terms.into_iter().map(|(_, m, c)| (m, c)).collect()
    }

    fn poly_to_expr(&self, p: &Poly, negate: bool) -> Expr {
        let terms = self.ordered_terms(p).into_iter().map(|(m, c)| {
            let mut atoms: Vec<(&Expr, Exponent)> =
                m.0.iter()
                    .map(|(a, e)| (&self.atoms[*a as usize].render, *e))
                    .collect();
            atoms.sort_by(|a, b| a.0.cmp(b.0));
            let c = if negate { -c } else { c.clone() };
            let mut factors = vec![Expr::constant(c)];
            factors.extend(atoms.into_iter().map(|(r, e)| Expr::pow(r.clone(), e)));
            Expr::product(factors)
        });
        Expr::sum(terms)
    }

    pub(crate) fn to_expr(&self, rf: &RatFun) -> Expr {
        if rf.den.is_one() {
            return self.poly_to_expr(&rf.num, false);
        }
        let lead_negative = self
            .ordered_terms(&rf.den)
            .first()
            .is_some_and(|(_, c)| c.is_negative());
        let num = self.poly_to_expr(&rf.num, lead_negative);
        let den = self.poly_to_expr(&rf.den, lead_negative);
        Expr::product([num, Expr::powi(den, -1)])
    }

    /// Numerator and denominator expressions of a canonical value.
    fn split(&self, rf: &RatFun) -> (Expr, Expr) {
        let lead_negative = !rf.den.is_one()
            && self
                .ordered_terms(&rf.den)
                .first()
                .is_some_and(|(_, c)| c.is_negative());
        (
            self.poly_to_expr(&rf.num, lead_negative),
            self.poly_to_expr(&rf.den, lead_negative),
        )
    }
}

/// Higher total degree first, then lexicographic on (atom, exponent) with
/// larger exponents first.
fn cmp_term_keys(
    a: &(Exponent, Vec<(Expr, Exponent)>),
    b: &(Exponent, Vec<(Expr, Exponent)>),
) -> Ordering {
    b.0.cmp(&a.0).then_with(|| {
        for (x, y) in a.1.iter().zip(&b.1) {
            let o = x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        b.1.len().cmp(&a.1.len())
    })
}

/// Canonical form within a term budget.
pub fn try_canonicalize(e: &Expr, budget: usize) -> Result<Expr, CanonError> {
    let mut c = Canon::new(budget);
    let rf = c.convert(e)?;
    Ok(c.to_expr(&rf))
}

/// Canonical form. Expressions that exceed the default term budget, or that
/// divide by an identically zero subexpression, are returned unchanged.
pub fn canonicalize(e: &Expr) -> Expr {
    try_canonicalize(e, DEFAULT_BUDGET).unwrap_or_else(|_| e.clone())
}

/// Whether the canonical form is the literal zero.
pub fn canonical_is_zero(e: &Expr, budget: usize) -> Result<bool, CanonError> {
    let mut c = Canon::new(budget);
    Ok(c.convert(e)?.is_zero())
}

/// Canonical numerator and denominator.
pub fn numer_denom(e: &Expr) -> Result<(Expr, Expr), CanonError> {
    let mut c = Canon::new(DEFAULT_BUDGET);
    let rf = c.convert(e)?;
    Ok(c.split(&rf))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("numerator is not affine in the requested symbol")]
    NotAffine,
    #[error("coefficient of the requested symbol vanishes")]
    ZeroCoefficient,
    #[error(transparent)]
    Canon(#[from] CanonError),
}

/// Solves `e = 0` for the leaf `symbol` when the canonical numerator of `e`
/// is affine in it.
pub fn solve_affine(e: &Expr, symbol: &Expr) -> Result<Expr, SolveError> {
    let mut c = Canon::new(DEFAULT_BUDGET);
    let rf = c.convert(e)?;
    let Some(&id) = c.index.get(&AtomKey::Leaf(symbol.clone())) else {
        return Err(SolveError::ZeroCoefficient);
    };
    // the symbol must not hide inside another atom
    for (i, info) in c.atoms.iter().enumerate() {
        if i as AtomId != id
            && info
                .render
                .symbols()
                .iter()
                .any(|s| symbol.symbols().contains(s))
            && rf.num.atoms().contains(&(i as AtomId))
        {
            return Err(SolveError::NotAffine);
        }
    }
    let mut linear = Poly::default();
    let mut rest = Poly::default();
    for (m, coeff) in &rf.num.0 {
        let k = m.exponent(id);
        if k.is_zero() {
            rest.0.insert(m.clone(), coeff.clone());
        } else if k.is_one() {
            let reduced = Mono(m.0.iter().filter(|(a, _)| *a != id).cloned().collect());
            linear.0.insert(reduced, coeff.clone());
        } else {
            return Err(SolveError::NotAffine);
        }
    }
    if linear.is_zero() {
        return Err(SolveError::ZeroCoefficient);
    }
    let a = RatFun::from_poly(linear);
    let b = RatFun::from_poly(rest.neg());
    let inv = c.recip(&a)?;
    let sol = c.mul(&b, &inv)?;
    Ok(c.to_expr(&sol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }
    fn p(n: &str) -> Expr {
        Expr::param(n)
    }

    #[test]
    fn cancels_common_factor() {
        let x = v("x");
        let e = &x / &x;
        assert_eq!(canonicalize(&e), Expr::one());
        let y = v("y");
        let e = (Expr::powi(x.clone(), 2) - Expr::powi(y.clone(), 2)) / (&x + &y);
        assert_eq!(canonicalize(&e), canonicalize(&(&x - &y)));
    }

    #[test]
    fn product_expansion_cancels() {
        // (a b + 2a/t - b/x - 2/(t x)) - (a - 1/x)(b + 2/t) = 0
        let (a, b, t, x) = (p("a"), p("b"), v("t"), v("x"));
        let lhs = &a * &b + Expr::int(2) * &a / &t - &b / &x - Expr::int(2) / (&t * &x);
        let rhs = (&a - Expr::one() / &x) * (&b + Expr::int(2) / &t);
        assert!(canonicalize(&(lhs - rhs)).is_zero());
    }

    #[test]
    fn sqrt_squared_is_base() {
        let t = v("t");
        let e = Expr::powi(Expr::sqrt(t.clone()), 2) - &t;
        assert!(canonicalize(&e).is_zero());
        let s = Expr::sqrt(&t + 1);
        let e = &s * &s - (&t + 1);
        assert!(canonicalize(&e).is_zero());
    }

    #[test]
    fn ln_exp_cancel() {
        let t = v("t");
        assert_eq!(canonicalize(&Expr::ln(Expr::exp(t.clone()))), t);
        let u = Expr::exp(&t * 2);
        let e = Expr::product([u.clone(), Expr::recip(&u)]);
        assert!(canonicalize(&e).is_one());
    }

    #[test]
    fn canonical_form_is_idempotent_on_fractions() {
        let (x, y) = (v("x"), v("y"));
        let e = (Expr::one() / (&x + 1) - Expr::one() / (&y - 2)) / (&x * &x + &y);
        let c1 = canonicalize(&e);
        let c2 = canonicalize(&c1);
        assert_eq!(c1, c2);
    }

    #[test]
    fn denominator_sign_is_normalized() {
        let x = v("x");
        let a = canonicalize(&(Expr::one() / (Expr::one() - &x)));
        let b = canonicalize(&(Expr::int(-1) / (&x - 1)));
        assert_eq!(a, b);
    }

    #[test]
    fn solves_affine_constraint() {
        let (a, b, g) = (v("a"), v("b"), v("g"));
        // h = a b - g, solve h = 0 for g
        let sol = solve_affine(&(&a * &b - &g), &g).unwrap();
        assert_eq!(sol, canonicalize(&(&a * &b)));
        assert_eq!(solve_affine(&(&g * &g), &g), Err(SolveError::NotAffine));
    }

    #[test]
    fn over_budget_reports_error() {
        let vars: Vec<Expr> = (0..8).map(|i| v(&format!("x{i}"))).collect();
        let e = Expr::powi(Expr::sum(vars), 6);
        assert_eq!(try_canonicalize(&e, 100), Err(CanonError::Budget));
    }
}
