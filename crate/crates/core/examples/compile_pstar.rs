//! Compiles ∃x∃y∀z∃t (x = y*z + t) and prints each guard set as tuples.
//!
//!     cargo run -p qcsp --example compile_pstar

use qcsp::{compile, fixtures, CompileOptions};

fn main() {
    let problem = fixtures::pstar();
    println!("{}", problem.binder_string());

    let (base, stats) = compile(&problem, CompileOptions::default()).expect("no budget set");
    let pair = base.as_pair().expect("P* has a winning strategy");
    for e in pair.existentials() {
        let name = &pair.binder()[e].name;
        println!("G_{name}:");
        for tuple in pair.interpret_guards(e).unwrap() {
            println!("  {tuple:?}");
        }
    }
    println!(
        "{} recursive calls, {} nodes stored ({} without sharing)",
        stats.recursive_calls, stats.nodes, stats.unshared_nodes
    );
    println!("{}", base.to_json_pretty());
}
