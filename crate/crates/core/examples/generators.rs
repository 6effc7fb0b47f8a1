//! Equivalence-group generators, their prolongations, and the annihilation
//! relations they satisfy.

use hyperinv::generators::{
    catalog, check_relation, entry_text, kills, parse, printed_relations, prolong,
};
use hyperinv::symbolic::ZeroTester;

fn main() {
    let tester = ZeroTester::new(42, 64);
    let v = catalog("scalar-dep").unwrap();
    let v1 = prolong(&v, 1).unwrap();
    println!("{} prolonged: {} components", v1.name, v1.components.len());

    let h = parse("alpha*beta + alpha_t - gamma");
    println!(
        "scalar-dep kills h: {}",
        kills(&v, &h, &tester).unwrap().label()
    );

    let indep = catalog("system-indep").unwrap();
    let i1 = parse(&entry_text("I1c").unwrap());
    println!(
        "system-indep on I1c: {}",
        kills(&indep, &i1, &tester).unwrap().label()
    );

    for rel in printed_relations().iter().take(5) {
        println!("{rel}: {}", check_relation(rel, &tester).unwrap().label());
    }
}
