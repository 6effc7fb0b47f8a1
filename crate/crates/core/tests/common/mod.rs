//! Random models, transforms and expressions shared by the integration tests.
#![allow(dead_code)]

use hyperinv::model::{CRSystem, Frame, PointTransform, ScalarHyperbolic};
use hyperinv::symbolic::{ComplexExpr, Expr};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-3..=3)
}

fn nonzero(rng: &mut impl Rng) -> i64 {
    loop {
        let k = small(rng);
        if k != 0 {
            return k;
        }
    }
}

/// Polynomial of total degree at most 2 in `t, x` with small integer
/// coefficients.
pub fn poly2(rng: &mut impl Rng) -> Expr {
    let (t, x) = (Expr::var("t"), Expr::var("x"));
    let monos = [Expr::one(), t.clone(), x.clone(), &t * &t, &t * &x, &x * &x];
    Expr::sum(monos.into_iter().map(|m| m * small(rng)))
}

/// Random CR system with degree-2 coefficients; `alpha1` always depends on `t`
/// so that no printed entry is undefined by construction.
pub fn cr_system(rng: &mut impl Rng) -> CRSystem {
    let mut c: [Expr; 6] = std::array::from_fn(|_| poly2(rng));
    c[0] = &c[0] + Expr::var("t") * Expr::var("x") * nonzero(rng) + Expr::var("t") * nonzero(rng);
    CRSystem::new(Frame::new("t", "x", &[]), c)
}

pub fn real_scalar(rng: &mut impl Rng) -> ScalarHyperbolic {
    let s = cr_system(rng);
    let [a, _, b, _, g, _] = s.coefficients().map(Clone::clone);
    ScalarHyperbolic::real(Frame::new("t", "x", &[]), a, b, g)
}

pub fn complex_scalar(rng: &mut impl Rng) -> ScalarHyperbolic {
    cr_system(rng).complexify()
}

/// `c*v^k` with `k` in 1..=3, or `c*v + d`.
fn monomial_or_affine(rng: &mut impl Rng, v: &str) -> Expr {
    let c = Expr::from(nonzero(rng));
    if rng.gen_bool(0.5) {
        c * Expr::powi(Expr::var(v), rng.gen_range(1..=3))
    } else {
        c * Expr::var(v) + small(rng)
    }
}

/// Low-degree rational multiplier that is never identically zero.
pub fn sigma(rng: &mut impl Rng) -> ComplexExpr {
    let (t, x) = (Expr::var("t"), Expr::var("x"));
    let num = |rng: &mut ChaCha8Rng| &t * small(rng) + &x * small(rng) + nonzero(rng);
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let re = num(&mut r) / (&t * &t + 1);
    let im = if r.gen_bool(0.5) {
        Expr::zero()
    } else {
        num(&mut r) / (&x + 3)
    };
    ComplexExpr::new(re, im)
}

pub fn independent(rng: &mut impl Rng) -> PointTransform {
    PointTransform {
        phi: monomial_or_affine(rng, "t"),
        psi: monomial_or_affine(rng, "x"),
        ..PointTransform::identity(["t".into(), "x".into()])
    }
}

pub fn dependent(rng: &mut impl Rng) -> PointTransform {
    PointTransform::dependent(["t".into(), "x".into()], sigma(rng))
}

pub fn combined(rng: &mut impl Rng) -> PointTransform {
    let s = sigma(rng);
    PointTransform {
        sigma: Some(s),
        ..independent(rng)
    }
}

/// Random expression tree over `t, x, a, b` with bounded depth.
pub fn expression(rng: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Expr::var("t"),
            1 => Expr::var("x"),
            2 => Expr::param("a"),
            3 => Expr::param("b"),
            4 => Expr::rational(small(rng), rng.gen_range(1..=4)),
            _ => Expr::from(nonzero(rng)),
        };
    }
    let l = expression(rng, depth - 1);
    match rng.gen_range(0..8) {
        0 | 1 => l + expression(rng, depth - 1),
        2 => l - expression(rng, depth - 1),
        3 | 4 => l * expression(rng, depth - 1),
        5 => l / (expression(rng, depth - 1) * expression(rng, depth - 1) + Expr::var("t")),
        6 => Expr::powi(l, rng.gen_range(-2..=3)),
        _ => match rng.gen_range(0..3) {
            0 => Expr::exp(l),
            1 => Expr::ln(l),
            _ => Expr::sqrt(l),
        },
    }
}
