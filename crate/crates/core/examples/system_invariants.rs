//! Invariant signatures of a CR system under both methods, and how the
//! complex entries relate to the real ones.

use hyperinv::fixtures;
use hyperinv::invariants::{method_comparison, Engine, Family, Method, Path};
use hyperinv::model::{CRSystem, Frame};
use hyperinv::symbolic::ZeroTester;

fn main() {
    let engine = Engine::default();
    let model = fixtures::model("ex5_coupled_source.model");
    for method in [Method::Complex, Method::Real] {
        for family in [Family::SemiDep, Family::SemiIndep, Family::Joint] {
            println!("-- {method} {family}");
            print!("{}", engine.compute(&model, method, family).unwrap());
        }
    }

    let both = Engine::new(ZeroTester::default(), Path::Both);
    let sig = both
        .compute(
            &fixtures::model("ex4_lambda.model"),
            Method::Complex,
            Family::Joint,
        )
        .unwrap();
    println!(
        "printed and split joint formulas disagree on {:?}",
        sig.discrepancy_ids()
    );

    let generic = CRSystem::generic(Frame::new("t", "x", &[]));
    for row in method_comparison(&engine, &generic).unwrap().iter().take(6) {
        println!("{row}");
    }
}
