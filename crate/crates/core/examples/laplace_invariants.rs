//! Laplace invariants and semi-invariants of a scalar hyperbolic equation.

use hyperinv::invariants::{scalar_hk, Engine, Family, Method};
use hyperinv::model::{Frame, Model, ScalarHyperbolic};
use hyperinv::parser::parse_in;
use hyperinv::symbolic::canonicalize;

fn main() {
    let p = |s: &str| parse_in(s, &["t", "x"], &["a"]).unwrap();
    let eq = ScalarHyperbolic::real(Frame::new("t", "x", &["a"]), p("a*t"), p("x"), p("t*x"));
    let (h, k) = scalar_hk(&eq);
    println!("h = {}", canonicalize(&h));
    println!("k = {}", canonicalize(&k));

    let engine = Engine::default();
    let model = Model::Scalar(eq);
    for family in [Family::SemiDep, Family::SemiIndep] {
        print!(
            "{}",
            engine.compute(&model, Method::Scalar, family).unwrap()
        );
    }
    let joint = engine
        .compute(&model, Method::Scalar, Family::Joint)
        .unwrap();
    println!("J1 = {}", joint.get("J1").and_then(|e| e.expr()).unwrap());
}
