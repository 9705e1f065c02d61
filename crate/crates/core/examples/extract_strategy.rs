//! Reads one winning strategy off a compiled base, picking the smallest or
//! largest allowed value at each existential node.
//!
//!     cargo run -p qcsp --example extract_strategy

use qcsp::{compile, extract_strategy, fixtures, is_winning_strategy, CompileOptions, TieBreak};

fn main() {
    let problem = fixtures::pstar();
    let (base, _) = compile(&problem, CompileOptions::default()).unwrap();
    for tie in [TieBreak::Min, TieBreak::Max] {
        let s = extract_strategy(&base, tie).unwrap();
        println!("{tie}: {s}");
        println!("  winning: {}", is_winning_strategy(&problem, &s).unwrap());
    }
}
