//! Ground checking versus arc consistency during compilation: same base,
//! fewer recursive calls.
//!
//!     cargo run -p qcsp --example propagation [problem.json]

use qcsp::{compile, CompileOptions, Problem, Propagation};

fn main() {
    let path =
        std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/pursuit.json").into());
    let text = std::fs::read_to_string(&path).expect("readable problem file");
    let problem = Problem::from_json(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
    println!("{}", problem.binder_string());

    let mut bases = Vec::new();
    for propagation in [Propagation::Ground, Propagation::Gac] {
        let (base, stats) = compile(&problem, CompileOptions { propagation, budget: None }).unwrap();
        println!(
            "{propagation:>6}: {} calls, {} failed fixpoints, {} nodes",
            stats.recursive_calls, stats.propagation_failures, stats.nodes
        );
        bases.push(base);
    }
    println!("identical bases: {}", bases[0] == bases[1]);
}
