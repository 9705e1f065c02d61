//! Brute-force ground truth: the recursive decision semantics, winning
//! strategy enumeration and strategy checking.
//!
//! Nothing here prunes with partial assignments; every decision bottoms out
//! in the evaluation of complete scenarios. These routines are exponential
//! and meant for desk-scale problems.

use std::cell::Cell;
use std::fmt;

use crate::error::OracleError;
use crate::model::{Problem, Quantifier, Value};

thread_local! {
    static ORACLE_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of decision-oracle invocations made on the current thread.
///
/// Lets callers assert that a code path never falls back to search.
pub fn oracle_calls() -> u64 {
    ORACLE_CALLS.with(Cell::get)
}

/// A strategy (or any tree of the same family): nodes at depth `k` are
/// labeled with binder position `k`; edges carry values; leaves sit at
/// depth `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyTree {
    Leaf,
    Node { var: usize, edges: Vec<(Value, StrategyTree)> },
}

impl StrategyTree {
    /// Visits every root-to-leaf value sequence.
    pub fn scenarios(&self) -> Vec<Vec<Value>> {
        fn go(t: &StrategyTree, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
            match t {
                StrategyTree::Leaf => out.push(path.clone()),
                StrategyTree::Node { edges, .. } => {
                    for (v, child) in edges {
                        path.push(*v);
                        go(child, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        match self {
            StrategyTree::Leaf => 1,
            StrategyTree::Node { edges, .. } => 1 + edges.iter().map(|(_, c)| c.node_count()).sum::<usize>(),
        }
    }

    /// The value chosen at the root, if the root has exactly one edge.
    pub fn choice(&self) -> Option<Value> {
        match self {
            StrategyTree::Node { edges, .. } if edges.len() == 1 => Some(edges[0].0),
            _ => None,
        }
    }
}

impl fmt::Display for StrategyTree {
    /// Bracketed form with binder positions, e.g. `v0[0:v1[1:□]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyTree::Leaf => f.write_str("□"),
            StrategyTree::Node { var, edges } => {
                write!(f, "v{var}[")?;
                for (i, (v, c)) in edges.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}:{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Does `p` admit a winning strategy?
pub fn decide_winning(p: &Problem) -> bool {
    decide_from(p, &[])
}

/// Does the suffix game after `prefix` admit a winning strategy? The
/// prefix fixes the first `prefix.len()` variables.
pub fn decide_from(p: &Problem, prefix: &[Value]) -> bool {
    ORACLE_CALLS.with(|c| c.set(c.get() + 1));
    let mut scenario = prefix.to_vec();
    win(p, &mut scenario)
}

fn win(p: &Problem, scenario: &mut Vec<Value>) -> bool {
    let k = scenario.len();
    if k == p.len() {
        return p.satisfied_by(scenario);
    }
    let var = p.variable(k);
    let mut branch = |value: Value| {
        scenario.push(value);
        let r = win(p, scenario);
        scenario.pop();
        r
    };
    match var.quantifier {
        Quantifier::Exists => var.domain.iter().any(|&v| branch(v)),
        Quantifier::Forall => var.domain.iter().all(|&v| branch(v)),
    }
}

/// Do `a` and `b` (same binder) have exactly the same set of winning
/// strategies?
///
/// Strategies below an existential node are a disjoint union over the
/// chosen value, and below a universal node a product over all values. So
/// the sets agree at an existential node iff they agree under every value,
/// and at a universal node iff both products are empty or every factor
/// agrees. At the leaves the two scenarios must evaluate alike.
pub fn same_winning_strategies(a: &Problem, b: &Problem) -> bool {
    assert_eq!(a.variables(), b.variables(), "strategy sets compared across different binders");
    fn same(a: &Problem, b: &Problem, scenario: &mut Vec<Value>) -> bool {
        let k = scenario.len();
        if k == a.len() {
            return a.satisfied_by(scenario) == b.satisfied_by(scenario);
        }
        let var = a.variable(k);
        if var.quantifier == Quantifier::Forall {
            let (wa, wb) = (win(a, scenario), win(b, scenario));
            if wa != wb {
                return false;
            }
            if !wa {
                return true;
            }
        }
        var.domain.iter().all(|&v| {
            scenario.push(v);
            let r = same(a, b, scenario);
            scenario.pop();
            r
        })
    }
    same(a, b, &mut Vec::with_capacity(a.len()))
}

/// Exact number of winning strategies, or `None` on `u128` overflow.
pub fn count_winning_strategies(p: &Problem) -> Option<u128> {
    fn count(p: &Problem, scenario: &mut Vec<Value>) -> Option<u128> {
        let k = scenario.len();
        if k == p.len() {
            return Some(u128::from(p.satisfied_by(scenario)));
        }
        let var = p.variable(k);
        let mut acc: u128 = match var.quantifier {
            Quantifier::Exists => 0,
            Quantifier::Forall => 1,
        };
        for &v in &var.domain {
            scenario.push(v);
            let c = count(p, scenario);
            scenario.pop();
            let c = c?;
            acc = match var.quantifier {
                Quantifier::Exists => acc.checked_add(c)?,
                Quantifier::Forall => acc.checked_mul(c)?,
            };
            if acc == 0 && var.quantifier == Quantifier::Forall {
                break;
            }
        }
        Some(acc)
    }
    count(p, &mut Vec::new())
}

/// Limits for [`enumerate_winning_strategies`].
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumLimits {
    /// Stop after this many strategies.
    pub limit: Option<usize>,
    /// Fail once more than this many (sub)strategies have been built.
    pub budget: Option<u64>,
}

impl EnumLimits {
    pub fn limit(n: usize) -> Self {
        EnumLimits { limit: Some(n), budget: None }
    }

    pub fn budget(n: u64) -> Self {
        EnumLimits { limit: None, budget: Some(n) }
    }
}

/// All winning strategies (or the first `limit`), ordered lexicographically
/// by existential choices in ascending value order.
pub fn enumerate_winning_strategies(p: &Problem, limits: EnumLimits) -> Result<Vec<StrategyTree>, OracleError> {
    let mut built = 0u64;
    let mut scenario = Vec::with_capacity(p.len());
    enumerate(p, &mut scenario, limits, &mut built)
}

fn enumerate(
    p: &Problem,
    scenario: &mut Vec<Value>,
    limits: EnumLimits,
    built: &mut u64,
) -> Result<Vec<StrategyTree>, OracleError> {
    let k = scenario.len();
    if k == p.len() {
        return Ok(if p.satisfied_by(scenario) { vec![StrategyTree::Leaf] } else { vec![] });
    }
    let cap = limits.limit.unwrap_or(usize::MAX);
    let var = p.variable(k);
    let mut subs = Vec::with_capacity(var.domain.len());
    for &v in &var.domain {
        scenario.push(v);
        let sub = enumerate(p, scenario, limits, built);
        scenario.pop();
        let sub = sub?;
        if var.quantifier == Quantifier::Forall && sub.is_empty() {
            return Ok(vec![]);
        }
        subs.push((v, sub));
    }

    let mut out = Vec::new();
    match var.quantifier {
        Quantifier::Exists => {
            'outer: for (v, sub) in subs {
                for s in sub {
                    if out.len() >= cap {
                        break 'outer;
                    }
                    charge(built, limits.budget)?;
                    out.push(StrategyTree::Node { var: k, edges: vec![(v, s)] });
                }
            }
        }
        Quantifier::Forall => {
            // odometer over the children, first value varying slowest
            let mut idx = vec![0usize; subs.len()];
            'product: loop {
                if out.len() >= cap {
                    break;
                }
                charge(built, limits.budget)?;
                let edges = subs.iter().zip(&idx).map(|((v, sub), &i)| (*v, sub[i].clone())).collect();
                out.push(StrategyTree::Node { var: k, edges });
                for j in (0..idx.len()).rev() {
                    idx[j] += 1;
                    if idx[j] < subs[j].1.len() {
                        continue 'product;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
    }
    Ok(out)
}

fn charge(built: &mut u64, budget: Option<u64>) -> Result<(), OracleError> {
    *built += 1;
    match budget {
        Some(b) if *built > b => Err(OracleError::BudgetExceeded(b)),
        _ => Ok(()),
    }
}

/// Checks that `s` has the shape of a strategy for `p`'s binder.
pub fn check_strategy_shape(p: &Problem, s: &StrategyTree) -> Result<(), OracleError> {
    fn go(p: &Problem, t: &StrategyTree, depth: usize) -> Result<(), OracleError> {
        let mismatch = |m: String| Err(OracleError::ShapeMismatch(m));
        match t {
            StrategyTree::Leaf if depth == p.len() => Ok(()),
            StrategyTree::Leaf => mismatch(format!("leaf at depth {depth}, expected {}", p.len())),
            StrategyTree::Node { .. } if depth >= p.len() => mismatch(format!("node below depth {}", p.len())),
            StrategyTree::Node { var, edges } => {
                if *var != depth {
                    return mismatch(format!("node at depth {depth} labeled with position {var}"));
                }
                let v = p.variable(depth);
                if let Some((bad, _)) = edges.iter().find(|(val, _)| !v.allows(*val)) {
                    return mismatch(format!("value {bad} outside the domain of `{}`", v.name));
                }
                let mut labels: Vec<Value> = edges.iter().map(|(val, _)| *val).collect();
                labels.sort_unstable();
                if labels.windows(2).any(|w| w[0] == w[1]) {
                    return mismatch(format!("repeated edge label under `{}`", v.name));
                }
                match v.quantifier {
                    Quantifier::Exists if edges.len() != 1 => {
                        return mismatch(format!("existential `{}` has {} children", v.name, edges.len()));
                    }
                    Quantifier::Forall if labels != v.domain => {
                        return mismatch(format!("universal `{}` does not branch over its whole domain", v.name));
                    }
                    _ => {}
                }
                edges.iter().try_for_each(|(_, c)| go(p, c, depth + 1))
            }
        }
    }
    go(p, s, 0)
}

/// True iff `s` is a strategy for `p` all of whose scenarios satisfy `p`.
pub fn is_winning_strategy(p: &Problem, s: &StrategyTree) -> Result<bool, OracleError> {
    check_strategy_shape(p, s)?;
    Ok(s.scenarios().iter().all(|sc| p.satisfied_by(sc)))
}
