//! Counts and lists winning strategies with the brute-force oracle.
//!
//!     cargo run -p qcsp --example count_strategies

use qcsp::oracle::count_winning_strategies;
use qcsp::{enumerate_winning_strategies, fixtures, EnumLimits};

fn main() {
    let forall2 = fixtures::forall_forall();
    println!("{}: {} winning strategies", forall2.binder_string(), count_winning_strategies(&forall2).unwrap());

    let pstar = fixtures::pstar();
    let all = enumerate_winning_strategies(&pstar, EnumLimits::default()).unwrap();
    println!("{}: {} winning strategies", pstar.binder_string(), all.len());
    for (i, s) in all.iter().enumerate() {
        println!("#{i}");
        for scenario in s.scenarios() {
            println!("  {scenario:?}");
        }
    }

    // budgets make the exponential blow-up fail loudly
    match enumerate_winning_strategies(&forall2, EnumLimits::budget(100)) {
        Ok(v) => println!("unexpectedly finished with {}", v.len()),
        Err(e) => println!("with a budget of 100: {e}"),
    }
}
