//! Complex pairs of real expressions.

use std::ops::{Add, Mul, Neg, Sub};

use super::canon::canonicalize;
use super::expr::Expr;
use super::zero::{is_identically_zero, DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexExpr {
    pub re: Expr,
    pub im: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("divisor has identically zero modulus: {0}")]
pub struct ZeroDivisor(pub String);

impl ComplexExpr {
    pub fn new(re: Expr, im: Expr) -> ComplexExpr {
        ComplexExpr { re, im }
    }

    pub fn real(re: Expr) -> ComplexExpr {
        ComplexExpr::new(re, Expr::zero())
    }

    pub fn zero() -> ComplexExpr {
        ComplexExpr::real(Expr::zero())
    }

    pub fn one() -> ComplexExpr {
        ComplexExpr::real(Expr::one())
    }

    pub fn i() -> ComplexExpr {
        ComplexExpr::new(Expr::zero(), Expr::one())
    }

    pub fn conj(&self) -> ComplexExpr {
        ComplexExpr::new(self.re.clone(), -&self.im)
    }

    /// `re^2 + im^2`, uncanonicalized.
    pub fn norm_sq(&self) -> Expr {
        self.re.square() + self.im.square()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> ComplexExpr {
        ComplexExpr::new(f(&self.re), f(&self.im))
    }

    pub fn canonical(&self) -> ComplexExpr {
        self.map(canonicalize)
    }

    pub fn scale(&self, k: &Expr) -> ComplexExpr {
        self.map(|c| c * k)
    }

    /// Quotient without the admissibility check and without canonicalization.
    pub fn div_raw(&self, b: &ComplexExpr) -> ComplexExpr {
        let n = b.norm_sq();
        let re = (&self.re * &b.re + &self.im * &b.im) / &n;
        let im = (&self.im * &b.re - &self.re * &b.im) / &n;
        ComplexExpr::new(re, im)
    }

    /// Integer power by repeated squaring, uncanonicalized.
    pub fn powi_raw(&self, n: i64) -> ComplexExpr {
        if n < 0 {
            return ComplexExpr::one().div_raw(&self.powi_raw(-n));
        }
        let mut result = ComplexExpr::one();
        let mut base = self.clone();
        let mut k = n;
        let mut first = true;
        while k > 0 {
            if k & 1 == 1 {
                result = if first { base.clone() } else { &result * &base };
                first = false;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Add for &ComplexExpr {
    type Output = ComplexExpr;
    fn add(self, b: &ComplexExpr) -> ComplexExpr {
        ComplexExpr::new(&self.re + &b.re, &self.im + &b.im)
    }
}

impl Sub for &ComplexExpr {
    type Output = ComplexExpr;
    fn sub(self, b: &ComplexExpr) -> ComplexExpr {
        ComplexExpr::new(&self.re - &b.re, &self.im - &b.im)
    }
}

impl Mul for &ComplexExpr {
    type Output = ComplexExpr;
    fn mul(self, b: &ComplexExpr) -> ComplexExpr {
        ComplexExpr::new(
            &self.re * &b.re - &self.im * &b.im,
            &self.re * &b.im + &self.im * &b.re,
        )
    }
}

impl Neg for &ComplexExpr {
    type Output = ComplexExpr;
    fn neg(self) -> ComplexExpr {
        ComplexExpr::new(-&self.re, -&self.im)
    }
}

macro_rules! owned_ops {
    ($($t:ident $m:ident),*) => {$(
        impl $t for ComplexExpr {
            type Output = ComplexExpr;
            fn $m(self, b: ComplexExpr) -> ComplexExpr {
                (&self).$m(&b)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

pub fn cadd(a: &ComplexExpr, b: &ComplexExpr) -> ComplexExpr {
    (a + b).canonical()
}

pub fn csub(a: &ComplexExpr, b: &ComplexExpr) -> ComplexExpr {
    (a - b).canonical()
}

pub fn cmul(a: &ComplexExpr, b: &ComplexExpr) -> ComplexExpr {
    (a * b).canonical()
}

/// Checks that `b` has a modulus that is not identically zero.
pub fn admissible(b: &ComplexExpr) -> Result<(), ZeroDivisor> {
    match is_identically_zero(&b.norm_sq(), DEFAULT_SEED, DEFAULT_SAMPLES) {
        Ok(v) if v.holds() => Err(ZeroDivisor(format!("({}, {})", b.re, b.im))),
        _ => Ok(()),
    }
}

pub fn cdiv(a: &ComplexExpr, b: &ComplexExpr) -> Result<ComplexExpr, ZeroDivisor> {
    admissible(b)?;
    Ok(a.div_raw(b).canonical())
}

pub fn cpow_int(a: &ComplexExpr, n: i64) -> Result<ComplexExpr, ZeroDivisor> {
    if n < 0 {
        admissible(a)?;
    }
    Ok(a.powi_raw(n).canonical())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_power_split() {
        let (h1, h2) = (Expr::var("h1"), Expr::var("h2"));
        let h = ComplexExpr::new(h1.clone(), h2.clone());
        let p = cpow_int(&h, 4).unwrap();
        let re = Expr::powi(h1.clone(), 4) - Expr::int(6) * h1.square() * h2.square()
            + Expr::powi(h2.clone(), 4);
        let im = Expr::int(4) * Expr::powi(h1.clone(), 3) * &h2
            - Expr::int(4) * &h1 * Expr::powi(h2.clone(), 3);
        assert_eq!(p.re, canonicalize(&re));
        assert_eq!(p.im, canonicalize(&im));
    }

    #[test]
    fn real_times_real() {
        let (a, b) = (Expr::param("a"), Expr::param("b"));
        let p = cmul(&ComplexExpr::real(a.clone()), &ComplexExpr::real(b.clone()));
        assert_eq!(p, ComplexExpr::real(canonicalize(&(&a * &b))));
    }

    #[test]
    fn division_by_zero_modulus_is_rejected() {
        let x = Expr::var("x");
        let z = ComplexExpr::new(&x - &x, Expr::zero());
        assert!(cdiv(&ComplexExpr::one(), &z).is_err());
        let w = ComplexExpr::new(x.clone(), Expr::one());
        let q = cdiv(&cmul(&ComplexExpr::one(), &w), &w).unwrap();
        assert_eq!(q, ComplexExpr::one());
    }
}
