//! Turns strategies into certificate bases and checks them against the
//! problem. A certificate with one wrong leaf is rejected.
//!
//!     cargo run -p qcsp --example certificates

use qcsp::{certificate_of, enumerate_winning_strategies, fixtures, verify_certificate, EnumLimits, StrategyTree};

fn main() {
    let p = fixtures::pstar();
    let strategies = enumerate_winning_strategies(&p, EnumLimits::default()).unwrap();
    for s in &strategies {
        let cert = certificate_of(p.variables(), s).unwrap();
        println!("{s}\n  {} nodes, verified: {}", cert.node_count(), verify_certificate(&cert, &p).unwrap());
    }

    // change t on the first branch of the first strategy
    let mut broken = strategies[0].clone();
    let mut node = &mut broken;
    while let StrategyTree::Node { edges, .. } = node {
        if matches!(edges[0].1, StrategyTree::Leaf) {
            edges[0].0 = (edges[0].0 + 1) % 3;
            break;
        }
        node = &mut edges[0].1;
    }
    let cert = certificate_of(p.variables(), &broken).unwrap();
    println!("{broken}\n  verified: {}", verify_certificate(&cert, &p).unwrap());
}
