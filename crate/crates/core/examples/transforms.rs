//! Point transforms: change of independent variables and rescaling of the
//! unknown, and what they do to h and k.

use hyperinv::invariants::system_hk;
use hyperinv::model::{CRSystem, Frame, Model, PointTransform};
use hyperinv::parser::parse_in;
use hyperinv::symbolic::{canonicalize, ComplexExpr, ZeroTester};

fn main() {
    let p = |s: &str| parse_in(s, &["t", "x"], &[]).unwrap();
    let a = CRSystem::new(
        Frame::new("t", "x", &[]),
        ["t*x", "1", "x", "t", "t^2", "0"].map(p),
    );
    let model = Model::System(a.clone());
    let vars = ["t".to_string(), "x".to_string()];

    let scale = PointTransform::dependent(vars.clone(), ComplexExpr::new(p("1 + t^2"), p("x")));
    let Model::System(b) = model.apply(&scale).unwrap() else {
        unreachable!()
    };
    let tester = ZeroTester::default();
    for (i, (x, y)) in system_hk(&a).iter().zip(system_hk(&b).iter()).enumerate() {
        println!(
            "h/k[{i}] unchanged under u = sigma w: {}",
            tester.check(&(x - y)).unwrap().label()
        );
    }

    let stretch = PointTransform {
        phi: p("2*t"),
        psi: p("x^3"),
        ..PointTransform::identity(vars)
    };
    let Model::System(c) = model.apply(&stretch).unwrap() else {
        unreachable!()
    };
    println!(
        "alpha1 after t -> 2t, x -> x^3: {}",
        canonicalize(&c.alpha1)
    );
    println!("h1 after: {}", canonicalize(&system_hk(&c)[0]));
}
