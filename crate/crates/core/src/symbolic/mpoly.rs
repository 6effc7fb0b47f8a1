//! Sparse multivariate polynomials over the integers with gcd.
//!
//! Terms are kept sorted by descending lexicographic exponent vector, so the
//! first term is the leading term. The gcd is a recursive primitive PRS, with
//! a modular coprimality screen in front of it because almost every gcd the
//! canonicalizer asks for is trivial.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: Vec<(Exps, BigInt)>,
}

fn lex_desc(a: &Exps, b: &Exps) -> std::cmp::Ordering {
    b.cmp(a)
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(nvars);
        }
        MPoly {
            nvars,
            terms: vec![(vec![0; nvars], c)],
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, BigInt)>>(nvars: usize, terms: I) -> MPoly {
        let mut acc: HashMap<Exps, BigInt> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| lex_desc(&a.0, &b.0));
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exps, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(e, c)] if e.iter().all(|&k| k == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    fn vars_present(&self) -> Vec<bool> {
        let mut present = vec![false; self.nvars];
        for (e, _) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    present[i] = true;
                }
            }
        }
        present
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Exact division of every coefficient by `k`.
    fn div_int(&self, k: &BigInt) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / k)).collect(),
        }
    }

    fn merge(&self, other: &MPoly, negate_other: bool) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Greater
            } else if j == b.len() {
                std::cmp::Ordering::Less
            } else {
                lex_desc(&a[i].0, &b[j].0)
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate_other {
                        -&b[j].1
                    } else {
                        b[j].1.clone()
                    };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.merge(other, true)
    }

    pub fn mul_term(&self, exps: &[u32], coeff: &BigInt) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c * coeff))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: HashMap<Exps, BigInt> =
            HashMap::with_capacity(self.len().saturating_mul(other.len()).min(1 << 16));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| lex_desc(&a.0, &b.0));
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut result = MPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Gcd of the integer coefficients, positive; zero for the zero polynomial.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Sign-normalized copy: leading coefficient positive.
    pub fn normalized_sign(&self) -> MPoly {
        match self.leading_coeff() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            if self.terms.iter().all(|(_, a)| (a % &c).is_zero()) {
                return Some(self.div_int(&c));
            }
            return None;
        }
        let (be, bc) = &divisor.terms[0];
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((re, rc)) = rem.terms.first() {
            if re.iter().zip(be).any(|(r, b)| r < b) {
                return None;
            }
            let (qc, r) = rc.div_rem(bc);
            if !r.is_zero() {
                return None;
            }
            let qe: Exps = re.iter().zip(be).map(|(r, b)| r - b).collect();
            rem = rem.sub(&divisor.mul_term(&qe, &qc));
            quotient.push((qe, qc));
        }
        Some(MPoly {
            nvars: self.nvars,
            terms: quotient,
        })
    }

    /// Coefficients with respect to variable `v`, indexed by degree.
    fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let deg = self.degree(v) as usize;
        let mut buckets: Vec<Vec<(Exps, BigInt)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|terms| {
                // order is preserved because zeroing one coordinate of terms
                // sharing that coordinate keeps lex order
                MPoly {
                    nvars: self.nvars,
                    terms,
                }
            })
            .collect()
    }

    fn leading_in(&self, v: usize) -> MPoly {
        let deg = self.degree(v);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[v] == deg)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[v] = 0;
                (e2, c.clone())
            })
            .collect();
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }

    fn monomial(nvars: usize, v: usize, k: u32) -> Exps {
        let mut e = vec![0; nvars];
        e[v] = k;
        e
    }
}

/// Greatest common divisor, with positive leading coefficient.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_bounded(a, b, usize::MAX).expect("unbounded gcd")
}

/// [`gcd`] that gives up with `None` once an intermediate polynomial grows
/// past `limit` terms.
pub fn gcd_bounded(a: &MPoly, b: &MPoly, limit: usize) -> Option<MPoly> {
    let n = a.nvars;
    if a.is_zero() {
        return Some(b.normalized_sign());
    }
    if b.is_zero() {
        return Some(a.normalized_sign());
    }
    let ca = a.int_content();
    let cb = b.int_content();
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Some(MPoly::constant(n, c));
    }
    let a = a.div_int(&ca);
    let b = b.div_int(&cb);
    if a == b || a == b.neg() {
        return Some(a.normalized_sign().scale(&c));
    }
    let pa = a.vars_present();
    let pb = b.vars_present();
    let shared: Vec<usize> = (0..n).filter(|&i| pa[i] && pb[i]).collect();
    if shared.is_empty() || coprime_screen(&a, &b, &shared) {
        return Some(MPoly::constant(n, c));
    }
    let v = *shared
        .iter()
        .min_by_key(|&&i| a.degree(i).min(b.degree(i)))
        .unwrap();
    let (conta, ppa) = split_content(&a, v, limit)?;
    let (contb, ppb) = split_content(&b, v, limit)?;
    let gc = gcd_bounded(&conta, &contb, limit)?;
    let gp = prs_gcd(ppa, ppb, v, limit)?;
    Some(gc.mul(&gp).normalized_sign().scale(&c))
}

/// Content with respect to `v` and the matching primitive part.
fn split_content(p: &MPoly, v: usize, limit: usize) -> Option<(MPoly, MPoly)> {
    let coeffs = p.coeffs_in(v);
    let mut g = MPoly::zero(p.nvars);
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_bounded(&g, c, limit)?;
        if g.as_constant().is_some_and(|k| k.is_one()) {
            break;
        }
    }
    if g.is_constant() {
        let k = g.as_constant().unwrap();
        if k.is_one() {
            return Some((g, p.clone()));
        }
        return Some((g.clone(), p.div_int(&k)));
    }
    let pp = p.div_exact(&g).expect("content divides");
    Some((g, pp))
}

fn prem(a: &MPoly, b: &MPoly, v: usize, limit: usize) -> Option<MPoly> {
    let db = b.degree(v);
    let lb = b.leading_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree(v) >= db {
        if r.len().saturating_mul(lb.len()) > limit {
            return None;
        }
        let lr = r.leading_in(v);
        let shift = MPoly::monomial(r.nvars, v, r.degree(v) - db);
        let t = lr.mul(b).mul_term(&shift, &BigInt::one());
        r = r.mul(&lb).sub(&t);
    }
    Some(r)
}

fn prs_gcd(a: MPoly, b: MPoly, v: usize, limit: usize) -> Option<MPoly> {
    let (mut a, mut b) = if a.degree(v) >= b.degree(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.degree(v) == 0 {
            return Some(MPoly::constant(a.nvars, BigInt::one()));
        }
        let r = prem(&a, &b, v, limit)?;
        if r.is_zero() {
            return Some(b.normalized_sign());
        }
        if r.degree(v) == 0 {
            return Some(MPoly::constant(a.nvars, BigInt::one()));
        }
        let (_, pr) = split_content(&r, v, limit)?;
        a = b;
        b = pr;
    }
}

// ---------------------------------------------------------------------------
// Modular coprimality screen.

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(c: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let mut r = c % &p;
    if r.is_negative() {
        r += &p;
    }
    r.to_u64().unwrap()
}

/// Univariate image in `v` with the other variables set to `point`.
fn image(p: &MPoly, v: usize, point: &[u64], powers: &mut HashMap<(usize, u32), u64>) -> Vec<u64> {
    let mut out = vec![0u64; p.degree(v) as usize + 1];
    for (e, c) in &p.terms {
        let mut term = reduce(c);
        for (i, &k) in e.iter().enumerate() {
            if i == v || k == 0 || term == 0 {
                continue;
            }
            let pw = *powers
                .entry((i, k))
                .or_insert_with(|| powmod(point[i], k as u64));
            term = mulmod(term, pw);
        }
        let slot = &mut out[e[v] as usize];
        *slot = (*slot + term) % P;
    }
    out
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two univariate polynomials over F_p.
fn uni_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = powmod(*b.last().unwrap(), P - 2);
        while a.len() >= b.len() {
            let lead = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                let sub = mulmod(lead, bc);
                a[i + shift] = (a[i + shift] + P - sub) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True only when `a` and `b` are certainly coprime up to an integer constant.
///
/// For every shared variable the polynomials are mapped to F_p[v] at a random
/// point. When the leading coefficients survive, the degree of the image gcd
/// bounds the degree in `v` of the true gcd from above.
fn coprime_screen(a: &MPoly, b: &MPoly, shared: &[usize]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    for &v in shared {
        let mut decided = false;
        for _ in 0..3 {
            let point: Vec<u64> = (0..a.nvars).map(|_| rng.gen_range(2..P)).collect();
            let mut powers = HashMap::new();
            let ia = image(a, v, &point, &mut powers);
            let ib = image(b, v, &point, &mut powers);
            if ia.last() == Some(&0) || ib.last() == Some(&0) {
                continue;
            }
            if uni_gcd_degree(ia, ib) > 0 {
                return false;
            }
            decided = true;
            break;
        }
        if !decided {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> MPoly {
        MPoly::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
    }

    #[test]
    fn multiplication_and_exact_division_round_trip() {
        let a = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = poly(2, &[(&[1, 0], 1), (&[0, 1], -1), (&[0, 0], 3)]);
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert_eq!(ab.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        // (x + y)(x - 2y + 1) and (x + y)(y^2 + 3)
        let g = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let f1 = poly(2, &[(&[1, 0], 1), (&[0, 1], -2), (&[0, 0], 1)]);
        let f2 = poly(2, &[(&[0, 2], 1), (&[0, 0], 3)]);
        let got = gcd(&g.mul(&f1), &g.mul(&f2).scale(&BigInt::from(-4)));
        assert_eq!(got, g);
    }

    #[test]
    fn gcd_of_coprime_is_integer_content() {
        let a = poly(3, &[(&[1, 0, 0], 6), (&[0, 1, 0], 4)]);
        let b = poly(3, &[(&[0, 0, 1], 2), (&[0, 0, 0], 8)]);
        assert_eq!(gcd(&a, &b), MPoly::constant(3, BigInt::from(2)));
    }

    #[test]
    fn gcd_with_higher_degree_common_factor() {
        // (x^2 y + z)^2 (x - 1) and (x^2 y + z)(y - z)
        let g = poly(3, &[(&[2, 1, 0], 1), (&[0, 0, 1], 1)]);
        let a = g.pow(2).mul(&poly(3, &[(&[1, 0, 0], 1), (&[0, 0, 0], -1)]));
        let b = g.mul(&poly(3, &[(&[0, 1, 0], 1), (&[0, 0, 1], -1)]));
        assert_eq!(gcd(&a, &b), g);
    }

    #[test]
    fn content_with_non_unit_leading_coefficient() {
        // 2 y^2 + 3 x y shares only y with 3 y
        let a = poly(2, &[(&[0, 2], 2), (&[1, 1], 3)]);
        let b = poly(2, &[(&[0, 1], 3)]);
        assert_eq!(gcd(&a, &b), poly(2, &[(&[0, 1], 1)]));
        let (c, pp) = split_content(&a, 0, usize::MAX).unwrap();
        assert_eq!(c, poly(2, &[(&[0, 1], 1)]));
        assert_eq!(pp, poly(2, &[(&[0, 1], 2), (&[1, 0], 3)]));
    }
}
