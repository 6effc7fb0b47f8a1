//! Comparing two systems through their invariants and checking a candidate
//! map between them.

use hyperinv::equivalence::{compare, verify_mapping};
use hyperinv::fixtures;
use hyperinv::invariants::{Engine, Family, Method};

fn main() {
    let engine = Engine::default();
    let (unit, lambda) = (
        fixtures::model("ex4_unit.model"),
        fixtures::model("ex4_lambda.model"),
    );
    let map = fixtures::transform("ex4_map.transform");

    let report = compare(
        &engine,
        &unit,
        &lambda,
        Some(&map),
        Method::Complex,
        &Family::ALL,
    )
    .unwrap();
    print!("{report}");
    let check = verify_mapping(&engine, &unit, &lambda, &map).unwrap();
    println!("map carries one system onto the other: {}", check.holds());

    let other = fixtures::model("ex1_source.model");
    let report = compare(
        &engine,
        &other,
        &unit,
        None,
        Method::Complex,
        &[Family::SemiDep],
    )
    .unwrap();
    println!("{:?}", report.verdict);
}
