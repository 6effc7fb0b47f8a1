//! Complex scalar equations, their real CR systems and the CR check.

use hyperinv::fixtures;
use hyperinv::model::Model;
use hyperinv::symbolic::ZeroTester;

fn main() {
    let Model::Scalar(eq) = fixtures::model("ex1_complex_source.model") else {
        unreachable!()
    };
    let system = eq.realify();
    println!("real system of the complex equation:");
    for (name, c) in ["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2"]
        .iter()
        .zip(system.coefficients())
    {
        println!("  {name} = {c}");
    }
    println!(
        "back to complex: alpha = {}",
        system.complexify().alpha.canonical().re
    );

    let tester = ZeroTester::default();
    let general = system.export();
    println!(
        "exported system is CR: {}",
        general.cr_check(&tester).is_ok()
    );
    let Model::General(g) = fixtures::model("general_noncr.model") else {
        unreachable!()
    };
    match g.cr_check(&tester) {
        Ok(_) => println!("unexpectedly CR"),
        Err(v) => println!("general_noncr: {v}"),
    }
}
