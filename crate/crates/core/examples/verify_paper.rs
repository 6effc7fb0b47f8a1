//! Recomputes one worked example and reports every check, including the
//! expected discrepancies.

use hyperinv::invariants::Engine;
use hyperinv::regression::run_example;

fn main() {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let reports = run_example(&Engine::default(), Some(n)).unwrap();
    for r in &reports {
        print!("{r}");
    }
    let failed = reports.iter().filter(|r| r.failed()).count();
    println!("{} cases, {failed} failed", reports.len());
}
