//! Game-time queries answered from a compiled base by tree walks alone.
//!
//! None of these functions searches: on an optimal base the guards already
//! say which values keep a winning strategy alive. [`crate::oracle::oracle_calls`]
//! can be used to check that.
//!
//! Certificates are ordinary bases whose guards spell exactly one
//! strategy: one guarded value at every reachable existential decision
//! point, with universal variables branching over their whole domain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::base::{Guard, GuardSet, PairBase, QcspBase};
use crate::error::{BaseError, QueryError};
use crate::guard::NodeStore;
use crate::model::{Problem, Quantifier, Value, Variable};
use crate::oracle::{check_strategy_shape, StrategyTree};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    #[default]
    Min,
    Max,
}

impl TieBreak {
    pub fn pick(self, values: &BTreeSet<Value>) -> Option<Value> {
        match self {
            TieBreak::Min => values.first().copied(),
            TieBreak::Max => values.last().copied(),
        }
    }
}

impl FromStr for TieBreak {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(TieBreak::Min),
            "max" => Ok(TieBreak::Max),
            other => Err(format!("unknown tie-break `{other}` (expected min or max)")),
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TieBreak::Min => "min",
            TieBreak::Max => "max",
        })
    }
}

fn pair(b: &QcspBase) -> Result<&PairBase, QueryError> {
    b.as_pair().ok_or(QueryError::Base(BaseError::ConstantBase))
}

fn check_prefix(binder: &[Variable], prefix: &[Value]) -> Result<(), QueryError> {
    if prefix.len() > binder.len() {
        return Err(QueryError::PrefixTooLong { len: binder.len(), found: prefix.len() });
    }
    for (v, &value) in binder.iter().zip(prefix) {
        if !v.allows(value) {
            return Err(QueryError::ValueOutOfDomain { variable: v.name.clone(), value });
        }
    }
    Ok(())
}

/// Values the next player may choose after `prefix`.
///
/// For an existential variable these are the guarded values; on an optimal
/// base they are exactly the values that keep a winning strategy. A prefix
/// that has left every guard tree yields the empty set. For a universal
/// variable every domain value is allowed.
pub fn allowed_moves(b: &QcspBase, prefix: &[Value]) -> Result<BTreeSet<Value>, QueryError> {
    let pair = pair(b)?;
    let binder = pair.binder();
    check_prefix(binder, prefix)?;
    let k = prefix.len();
    if k == binder.len() {
        return Err(QueryError::GameOver);
    }
    match binder[k].quantifier {
        Quantifier::Exists => Ok(pair.guard_lookup(k, prefix)?),
        Quantifier::Forall => Ok(binder[k].domain.iter().copied().collect()),
    }
}

/// Would `alt`, played instead of the last move of `prefix` (an
/// existential move), still admit a winning strategy?
pub fn answer_next_move_choice(b: &QcspBase, prefix: &[Value], alt: Value) -> Result<bool, QueryError> {
    let pair = pair(b)?;
    let binder = pair.binder();
    check_prefix(binder, prefix)?;
    let (&played, before) = prefix.split_last().ok_or(QueryError::EmptyPrefix)?;
    let var = &binder[before.len()];
    if !var.is_existential() {
        return Err(QueryError::NotExistential(var.name.clone()));
    }
    if alt == played {
        return Err(QueryError::SameValue(alt));
    }
    if !var.allows(alt) {
        return Err(QueryError::ValueOutOfDomain { variable: var.name.clone(), value: alt });
    }
    Ok(allowed_moves(b, before)?.contains(&alt))
}

/// Builds a winning strategy of the base's interpretation by following the
/// guards: `tie_break` picks among the allowed values at existentials,
/// universals expand every value.
pub fn extract_strategy(b: &QcspBase, tie_break: TieBreak) -> Result<StrategyTree, QueryError> {
    let pair = match b {
        QcspBase::Bottom => return Err(QueryError::NotOptimal("the root: the base admits no strategy".into())),
        QcspBase::Top => return Err(QueryError::Base(BaseError::ConstantBase)),
        QcspBase::Pair(p) => p,
    };
    fn walk(pair: &PairBase, prefix: &mut Vec<Value>, tie_break: TieBreak) -> Result<StrategyTree, QueryError> {
        let k = prefix.len();
        let binder = pair.binder();
        if k == binder.len() {
            return Ok(StrategyTree::Leaf);
        }
        let values: Vec<Value> = match binder[k].quantifier {
            Quantifier::Exists => {
                let allowed = pair.guard_lookup(k, prefix)?;
                let v = tie_break.pick(&allowed).ok_or_else(|| QueryError::NotOptimal(binder[k].name.clone()))?;
                vec![v]
            }
            Quantifier::Forall => binder[k].domain.clone(),
        };
        let mut edges = Vec::with_capacity(values.len());
        for v in values {
            prefix.push(v);
            let child = walk(pair, prefix, tie_break);
            prefix.pop();
            edges.push((v, child?));
        }
        Ok(StrategyTree::Node { var: k, edges })
    }
    walk(pair, &mut Vec::with_capacity(pair.binder().len()), tie_break)
}

/// Encodes a strategy over `binder` as a certificate base.
pub fn certificate_of(binder: &[Variable], s: &StrategyTree) -> Result<QcspBase, QueryError> {
    let shape = Problem::new(binder.to_vec(), vec![]).map_err(BaseError::from)?;
    check_strategy_shape(&shape, s).map_err(BaseError::from)?;

    // existential position -> value -> prefixes where it is chosen
    let mut choices: BTreeMap<usize, BTreeMap<Value, Vec<Vec<Value>>>> = BTreeMap::new();
    fn collect(
        binder: &[Variable],
        t: &StrategyTree,
        prefix: &mut Vec<Value>,
        out: &mut BTreeMap<usize, BTreeMap<Value, Vec<Vec<Value>>>>,
    ) {
        let StrategyTree::Node { var, edges } = t else { return };
        for (v, child) in edges {
            if binder[*var].is_existential() {
                out.entry(*var).or_default().entry(*v).or_default().push(prefix.clone());
            }
            prefix.push(*v);
            collect(binder, child, prefix, out);
            prefix.pop();
        }
    }
    collect(binder, s, &mut Vec::new(), &mut choices);

    let mut store = NodeStore::new();
    let guard_sets = choices
        .into_values()
        .map(|by_value| {
            GuardSet::new(
                by_value
                    .into_iter()
                    .map(|(value, prefixes)| Guard { value, tree: store.trie(0, prefixes.iter().map(Vec::as_slice)) })
                    .collect(),
            )
        })
        .collect();
    Ok(QcspBase::Pair(PairBase::new(binder.to_vec(), guard_sets, &store)?))
}

/// One guarded value at every reachable existential decision point, and no
/// guard tuple outside the reachable points.
pub fn certificate_shape_ok(c: &PairBase) -> bool {
    let n = c.binder().len();
    let mut reachable = vec![0u128; n];
    fn walk(c: &PairBase, prefix: &mut Vec<Value>, reachable: &mut [u128]) -> bool {
        let k = prefix.len();
        let binder = c.binder();
        if k == binder.len() {
            return true;
        }
        let values: Vec<Value> = match binder[k].quantifier {
            Quantifier::Exists => {
                reachable[k] += 1;
                let allowed = c.guard_lookup(k, prefix).expect("existential position");
                if allowed.len() != 1 {
                    return false;
                }
                allowed.into_iter().collect()
            }
            Quantifier::Forall => binder[k].domain.clone(),
        };
        values.into_iter().all(|v| {
            prefix.push(v);
            let ok = walk(c, prefix, reachable);
            prefix.pop();
            ok
        })
    }
    if !walk(c, &mut Vec::with_capacity(n), &mut reachable) {
        return false;
    }
    c.existentials().zip(c.guard_sets()).all(|(e, set)| {
        let tuples: u128 = set.guards().iter().map(|g| c.store().branch_count(g.tree)).sum();
        tuples == reachable[e]
    })
}

/// Checks a certificate against `p`: its shape must be that of a single
/// strategy and every scenario it induces must satisfy `p`.
pub fn verify_certificate(c: &QcspBase, p: &Problem) -> Result<bool, QueryError> {
    let pair = match c {
        QcspBase::Bottom => return Ok(false),
        QcspBase::Top => {
            // no guards at all: only a problem without existentials can be
            // certified, by checking every scenario
            if p.variables().iter().any(Variable::is_existential) {
                return Ok(false);
            }
            return Ok(scenarios_satisfy(p, &mut Vec::new(), &|_, _| None));
        }
        QcspBase::Pair(pair) => pair,
    };
    if pair.binder() != p.variables() {
        return Err(QueryError::BinderMismatch);
    }
    if !certificate_shape_ok(pair) {
        return Ok(false);
    }
    let choose = |k: usize, prefix: &[Value]| pair.guard_lookup(k, prefix).ok().and_then(|s| s.first().copied());
    Ok(scenarios_satisfy(p, &mut Vec::with_capacity(p.len()), &choose))
}

fn scenarios_satisfy(p: &Problem, prefix: &mut Vec<Value>, choose: &dyn Fn(usize, &[Value]) -> Option<Value>) -> bool {
    let k = prefix.len();
    if k == p.len() {
        return p.satisfied_by(prefix);
    }
    let var = p.variable(k);
    let values = match var.quantifier {
        Quantifier::Exists => match choose(k, prefix) {
            Some(v) => vec![v],
            None => return false,
        },
        Quantifier::Forall => var.domain.clone(),
    };
    values.into_iter().all(|v| {
        prefix.push(v);
        let ok = scenarios_satisfy(p, prefix, choose);
        prefix.pop();
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pstar_base, pstar};
    use crate::oracle::{decide_from, enumerate_winning_strategies, is_winning_strategy, oracle_calls, EnumLimits};

    fn set(values: &[Value]) -> BTreeSet<Value> {
        values.iter().copied().collect()
    }

    #[test]
    fn allowed_moves_on_optimal_base() {
        let b = pstar_base();
        let before = oracle_calls();
        assert_eq!(allowed_moves(&b, &[2]).unwrap(), set(&[0, 1]));
        assert_eq!(allowed_moves(&b, &[2, 1, 2]).unwrap(), set(&[0]));
        assert_eq!(allowed_moves(&b, &[]).unwrap(), set(&[0, 1, 2]));
        assert_eq!(allowed_moves(&b, &[2, 1]).unwrap(), set(&[0, 1, 2]));
        assert_eq!(allowed_moves(&b, &[0, 1, 0]).unwrap(), set(&[]));
        assert_eq!(oracle_calls(), before);
        assert_eq!(allowed_moves(&b, &[2, 1, 2, 0]), Err(QueryError::GameOver));
        assert!(matches!(allowed_moves(&b, &[7]), Err(QueryError::ValueOutOfDomain { value: 7, .. })));
    }

    #[test]
    fn next_move_choice() {
        let b = pstar_base();
        assert_eq!(answer_next_move_choice(&b, &[2, 1], 0), Ok(true));
        assert_eq!(answer_next_move_choice(&b, &[2, 1], 2), Ok(false));
        assert_eq!(answer_next_move_choice(&b, &[2, 1], 1), Err(QueryError::SameValue(1)));
        assert_eq!(answer_next_move_choice(&b, &[2, 1, 0], 1), Err(QueryError::NotExistential("z".into())));
        // oracle on ∀z∃t (2 = 0*z + t)
        assert!(decide_from(&pstar(), &[2, 0]));
    }

    #[test]
    fn strategy_extraction() {
        let b = pstar_base();
        let p = pstar();
        let min = extract_strategy(&b, TieBreak::Min).unwrap();
        assert_eq!(is_winning_strategy(&p, &min), Ok(true));
        assert_eq!(min.scenarios(), vec![vec![0, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 2, 0]]);
        let max = extract_strategy(&b, TieBreak::Max).unwrap();
        assert_eq!(max.scenarios(), vec![vec![2, 1, 0, 2], vec![2, 1, 1, 1], vec![2, 1, 2, 0]]);
        assert_eq!(is_winning_strategy(&p, &max), Ok(true));
        assert!(matches!(extract_strategy(&QcspBase::Bottom, TieBreak::Min), Err(QueryError::NotOptimal(_))));
    }

    #[test]
    fn certificates_of_pstar_strategies() {
        let p = pstar();
        for s in enumerate_winning_strategies(&p, EnumLimits::default()).unwrap() {
            let c = certificate_of(p.variables(), &s).unwrap();
            assert!(certificate_shape_ok(c.as_pair().unwrap()));
            assert_eq!(verify_certificate(&c, &p), Ok(true));
        }
    }

    #[test]
    fn mutated_certificate_fails() {
        let p = pstar();
        let s = extract_strategy(&pstar_base(), TieBreak::Min).unwrap();
        let mut bad = s.clone();
        // t under z = 2 changed from 0 to 1
        fn mutate(t: &mut StrategyTree, path: &[usize], value: Value) {
            let StrategyTree::Node { edges, .. } = t else { panic!() };
            if path.is_empty() {
                edges[0].0 = value;
            } else {
                mutate(&mut edges[path[0]].1, &path[1..], value);
            }
        }
        mutate(&mut bad, &[0, 0, 2], 1);
        let c = certificate_of(p.variables(), &bad).unwrap();
        assert_eq!(verify_certificate(&c, &p), Ok(false));
    }

    #[test]
    fn optimal_base_is_not_a_certificate() {
        let p = pstar();
        // two choices for x at the root
        assert_eq!(verify_certificate(&pstar_base(), &p), Ok(false));
        assert!(!certificate_shape_ok(pstar_base().as_pair().unwrap()));
    }

    #[test]
    fn binder_mismatch() {
        let p = crate::fixtures::forall_forall();
        let s = extract_strategy(&pstar_base(), TieBreak::Min).unwrap();
        let c = certificate_of(&crate::fixtures::pstar_binder(), &s).unwrap();
        assert_eq!(verify_certificate(&c, &p), Err(QueryError::BinderMismatch));
    }
}
