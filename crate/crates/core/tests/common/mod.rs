//! Seeded random problems shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use qcsp::{Problem, Quantifier, Table, Value, Variable};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// 1 to 4 variables with random quantifiers, domains of size 1 to 3 drawn
/// from `0..4`, and 1 to 3 random tables of arity 1 to 3.
pub fn random_problem(rng: &mut TestRng) -> Problem {
    let n = rng.gen_range(1..=4);
    let variables: Vec<Variable> = (0..n)
        .map(|i| {
            let size = rng.gen_range(1..=3);
            let mut pool: Vec<Value> = (0..4).collect();
            pool.shuffle(rng);
            let q = if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
            Variable::new(NAMES[i], q, pool[..size].iter().copied())
        })
        .collect();
    let tables = (0..rng.gen_range(1..=3)).map(|_| random_table(rng, &variables)).collect();
    Problem::new(variables, tables).expect("generated problems are valid")
}

fn random_table(rng: &mut TestRng, variables: &[Variable]) -> Table {
    let arity = rng.gen_range(1..=variables.len().min(3));
    let mut positions: Vec<usize> = (0..variables.len()).collect();
    positions.shuffle(rng);
    let mut scope = positions[..arity].to_vec();
    scope.sort_unstable();
    let density = rng.gen_range(0.3..0.95);
    let tuples: BTreeSet<Vec<Value>> = product(scope.iter().map(|&i| variables[i].domain.as_slice()))
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect();
    Table { scope, tuples }
}

pub fn product<'a>(domains: impl Iterator<Item = &'a [Value]>) -> Vec<Vec<Value>> {
    domains.fold(vec![vec![]], |acc, d| {
        acc.iter().flat_map(|t| d.iter().map(move |&v| [t.as_slice(), &[v]].concat())).collect()
    })
}

pub fn random_family(seed: u64, count: usize) -> Vec<Problem> {
    let mut rng = TestRng::seed_from_u64(seed);
    (0..count).map(|_| random_problem(&mut rng)).collect()
}

/// Every incomplete prefix reachable by playing only `allowed` values,
/// sorted. With `allowed_moves` these are the guard-consistent prefixes.
pub fn guard_consistent_prefixes(p: &Problem, mut allowed: impl FnMut(&[Value]) -> BTreeSet<Value>) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == p.len() {
            continue;
        }
        let next = allowed(&prefix);
        for v in next {
            let mut longer = prefix.clone();
            longer.push(v);
            stack.push(longer);
        }
        out.push(prefix);
    }
    out.sort();
    out
}
