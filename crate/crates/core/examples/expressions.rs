//! Parsing, canonical forms, derivatives and zero testing.

use hyperinv::parser::parse_in;
use hyperinv::symbolic::{
    canonicalize, cdiv, cmul, differentiate, evaluate_exact, ComplexExpr, ExactPoint, Symbol,
    ZeroTester,
};
use num_rational::BigRational;

fn main() {
    let e = parse_in("(t^2 - x^2)/(t - x) + a*exp(t)", &["t", "x"], &["a"]).unwrap();
    println!("input      {e}");
    println!("canonical  {}", canonicalize(&e));
    println!("d/dt       {}", canonicalize(&differentiate(&e, "t")));

    let tester = ZeroTester::new(42, 64);
    let not_zero = parse_in("t^2 - x^2 - (t - x)^2", &["t", "x"], &[]).unwrap();
    println!("zero test  {}", tester.check(&not_zero).unwrap().label());
    let square = parse_in("(t + x)^2 - t^2 - 2*t*x - x^2", &["t", "x"], &[]).unwrap();
    println!("zero test  {}", tester.check(&square).unwrap().label());

    let r = parse_in("t/(x + 1)", &["t", "x"], &[]).unwrap();
    let point: ExactPoint = [("t", 3), ("x", 2)]
        .into_iter()
        .map(|(k, v)| (Symbol::name(k), BigRational::from_integer(v.into())))
        .collect();
    println!(
        "t/(x+1) at (3, 2) = {}",
        evaluate_exact(&r, &point).unwrap()
    );

    let z = ComplexExpr::new(
        parse_in("t", &["t"], &[]).unwrap(),
        parse_in("1", &[], &[]).unwrap(),
    );
    let w = cmul(&z, &z.conj());
    println!("|t + i|^2  {}", w.canonical().re);
    println!(
        "z / z      {:?}",
        cdiv(&z, &z).map(|q| q.canonical().re.to_string())
    );
}
