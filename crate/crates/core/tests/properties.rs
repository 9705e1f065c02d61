mod common;

use std::collections::BTreeSet;

use common::{product, random_problem, SeedableRng, TestRng};
use proptest::prelude::*;
use qcsp::oracle::{count_winning_strategies, same_winning_strategies};
use qcsp::{
    check_compatibility, check_compatibility_by_enumeration, compile, decide_winning, enumerate_winning_strategies,
    extract_strategy, is_winning_strategy, BaseError, CompileOptions, EnumLimits, OracleError, Problem, QcspBase,
    Quantifier, TieBreak, Variable,
};

fn problem_from_seed(seed: u64) -> Problem {
    random_problem(&mut TestRng::seed_from_u64(seed))
}

fn requantified(p: &Problem, q: Quantifier) -> Problem {
    let vars = p.variables().iter().map(|v| Variable { quantifier: q, ..v.clone() }).collect();
    Problem::new(vars, p.constraints().to_vec()).unwrap()
}

fn scenarios(p: &Problem) -> Vec<Vec<i64>> {
    product(p.variables().iter().map(|v| v.domain.as_slice()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decision_agrees_with_enumeration(seed in any::<u64>()) {
        let p = problem_from_seed(seed);
        match enumerate_winning_strategies(&p, EnumLimits::budget(50_000)) {
            Ok(all) => {
                prop_assert_eq!(decide_winning(&p), !all.is_empty());
                prop_assert_eq!(count_winning_strategies(&p), Some(all.len() as u128));
                for s in &all {
                    prop_assert_eq!(is_winning_strategy(&p, s), Ok(true));
                }
            }
            Err(OracleError::BudgetExceeded(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn decision_ignores_constraint_order(seed in any::<u64>()) {
        let p = problem_from_seed(seed);
        let mut reversed = p.constraints().to_vec();
        reversed.reverse();
        let q = p.with_constraints(reversed).unwrap();
        prop_assert_eq!(decide_winning(&p), decide_winning(&q));
        prop_assert!(same_winning_strategies(&p, &q));
    }

    #[test]
    fn all_existential_is_a_csp(seed in any::<u64>()) {
        let p = requantified(&problem_from_seed(seed), Quantifier::Exists);
        let satisfiable = scenarios(&p).iter().any(|s| p.satisfied_by(s));
        prop_assert_eq!(decide_winning(&p), satisfiable);
    }

    #[test]
    fn all_universal_is_a_tautology_check(seed in any::<u64>()) {
        let p = requantified(&problem_from_seed(seed), Quantifier::Forall);
        let valid = scenarios(&p).iter().all(|s| p.satisfied_by(s));
        prop_assert_eq!(decide_winning(&p), valid);
        let (b, _) = compile(&p, CompileOptions::default()).unwrap();
        prop_assert_eq!(matches!(b, QcspBase::Top), valid);
    }

    #[test]
    fn structural_and_enumerated_compatibility_agree(seed in any::<u64>()) {
        let p = problem_from_seed(seed);
        let (b, _) = compile(&p, CompileOptions::default()).unwrap();
        match check_compatibility_by_enumeration(&b, &p, Some(50_000)) {
            Ok(by_enum) => {
                prop_assert!(by_enum);
                prop_assert_eq!(check_compatibility(&b, &p), Ok(true));
            }
            Err(BaseError::Oracle(OracleError::BudgetExceeded(_))) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn compilation_is_deterministic(seed in any::<u64>()) {
        let p = problem_from_seed(seed);
        let (a, _) = compile(&p, CompileOptions::default()).unwrap();
        let (b, _) = compile(&p.clone(), CompileOptions::default()).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(QcspBase::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn extracted_strategies_win(seed in any::<u64>(), max in any::<bool>()) {
        let p = problem_from_seed(seed);
        let (b, _) = compile(&p, CompileOptions::default()).unwrap();
        if b.as_pair().is_some() {
            let tie = if max { TieBreak::Max } else { TieBreak::Min };
            let s = extract_strategy(&b, tie).unwrap();
            prop_assert_eq!(is_winning_strategy(&p, &s), Ok(true));
        }
    }

    #[test]
    fn guard_walks_match_interpretation(seed in any::<u64>()) {
        let p = problem_from_seed(seed);
        let (b, _) = compile(&p, CompileOptions::default()).unwrap();
        if let Some(pair) = b.as_pair() {
            for e in pair.existentials() {
                let tuples = pair.interpret_guards(e).unwrap();
                let domains = pair.binder()[..e].iter().map(|v| v.domain.as_slice());
                for prefix in product(domains) {
                    let walked = pair.guard_lookup(e, &prefix).unwrap();
                    let listed: BTreeSet<i64> =
                        tuples.iter().filter(|t| t[1..] == prefix[..]).map(|t| t[0]).collect();
                    prop_assert_eq!(walked, listed);
                }
            }
        }
    }
}

#[test]
fn sharing_keeps_the_dag_smaller_than_its_trees() {
    let (b, stats) = compile(&qcsp::fixtures::pstar(), CompileOptions::default()).unwrap();
    let pair = b.as_pair().unwrap();
    assert!((pair.store().len() as u128) < pair.unshared_node_count());
    assert_eq!(stats.nodes, pair.store().len());
}
