//! Compatibility and optimality of two bases for P*: a hand-written base
//! that guards too much, and the compiled one.
//!
//!     cargo run -p qcsp --example check_base

use qcsp::{check_compatibility, check_optimality, compile, fixtures, CompileOptions};

fn main() {
    let p = fixtures::pstar();
    let loose = fixtures::loose_base();
    let (compiled, _) = compile(&p, CompileOptions::default()).unwrap();
    for (name, base) in [("hand-written", &loose), ("compiled", &compiled)] {
        println!(
            "{name:>12}: compatible={} optimal={} nodes={}",
            check_compatibility(base, &p).unwrap(),
            check_optimality(base).unwrap(),
            base.node_count()
        );
    }
    // the loose base still lets the existential player walk into a loss
    let y = loose.guard_lookup(1, &[0]).unwrap();
    println!("hand-written base allows y in {y:?} after x=0");
}
