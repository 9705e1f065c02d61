//! Compilation of a problem into an optimal, compatible base.
//!
//! The compiler follows the binder outermost-first. At every node it first
//! runs a propagation fixpoint and returns `Bottom` on failure, returns
//! `Top` once the binder is exhausted, and otherwise branches over the head
//! variable's domain in ascending order. A universal head fails as soon as
//! one child fails; an existential head keeps only the children that did
//! not fail. Surviving children are merged by [`Compiler::combine_exists`]
//! or [`Compiler::combine_forall`], both of which distribute the children's
//! guard trees under a new node labeled with the head variable
//! ([`Compiler::combine`]). Every node goes through one hash-consing store,
//! so identical subtrees coming from different branches are shared.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::base::{interpret_guard_set, Guard, GuardSet, PairBase, QcspBase, TupleSet};
use crate::error::{BaseError, CompileError};
use crate::guard::NodeStore;
use crate::model::{Problem, Quantifier, Value};

/// Strength of the fixpoint run at every search node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagation {
    /// Fail only on a constraint whose scope is fully assigned and violated.
    #[default]
    Ground,
    /// Additionally filter table constraints to generalized arc
    /// consistency over the unassigned variables.
    Gac,
}

impl FromStr for Propagation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ground" => Ok(Propagation::Ground),
            "gac" => Ok(Propagation::Gac),
            other => Err(format!("unknown propagation level `{other}` (expected ground or gac)")),
        }
    }
}

impl fmt::Display for Propagation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Propagation::Ground => "ground",
            Propagation::Gac => "gac",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompileOptions {
    pub propagation: Propagation,
    /// Maximum number of recursive calls.
    pub budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileStats {
    pub recursive_calls: u64,
    pub propagation_failures: u64,
    /// Distinct guard-tree nodes in the final base.
    pub nodes: usize,
    /// Guard-tree nodes the final base would need without sharing.
    pub unshared_nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixpoint {
    Ok,
    Failure,
}

/// A base under construction. `Pair` covers the binder suffix starting at
/// position `first`; its guard trees live in the compiler's store.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubBase {
    Top,
    Bottom,
    Pair { first: usize, guard_sets: Vec<GuardSet> },
}

impl SubBase {
    fn is_constant(&self) -> bool {
        matches!(self, SubBase::Top | SubBase::Bottom)
    }
}

/// `(value, base)` pairs in ascending value order.
pub type ValBaseList = Vec<(Value, SubBase)>;

pub struct Compiler<'p> {
    problem: &'p Problem,
    options: CompileOptions,
    store: NodeStore,
    stats: CompileStats,
}

impl<'p> Compiler<'p> {
    pub fn new(problem: &'p Problem, options: CompileOptions) -> Self {
        Compiler { problem, options, store: NodeStore::new(), stats: CompileStats::default() }
    }

    pub fn store(&self) -> &NodeStore {
        &self.store
    }

    pub fn stats(&self) -> CompileStats {
        self.stats
    }

    /// Checks the constraint store under the partial assignment of the
    /// first `assignment.len()` variables.
    pub fn reach_fixpoint(&self, assignment: &[Value]) -> Fixpoint {
        let ok = match self.options.propagation {
            Propagation::Ground => self.problem.consistent(assignment),
            Propagation::Gac => self.problem.consistent(assignment) && self.gac(assignment),
        };
        if ok {
            Fixpoint::Ok
        } else {
            Fixpoint::Failure
        }
    }

    /// Table filtering over live domains local to this call. Losing a
    /// value of a universal variable is a failure: the opponent would play
    /// it.
    fn gac(&self, assignment: &[Value]) -> bool {
        let p = self.problem;
        let k = assignment.len();
        let mut live: Vec<Vec<Value>> =
            (0..p.len()).map(|i| if i < k { vec![assignment[i]] } else { p.variable(i).domain.clone() }).collect();
        loop {
            let mut changed = false;
            for table in p.constraints() {
                let mut support = vec![BTreeSet::new(); table.scope.len()];
                let mut supported = false;
                for tuple in &table.tuples {
                    if table.scope.iter().zip(tuple).all(|(&i, v)| live[i].binary_search(v).is_ok()) {
                        supported = true;
                        for (j, &v) in tuple.iter().enumerate() {
                            support[j].insert(v);
                        }
                    }
                }
                if !supported {
                    return false;
                }
                for (j, &i) in table.scope.iter().enumerate() {
                    if i < k {
                        continue;
                    }
                    let before = live[i].len();
                    live[i].retain(|v| support[j].contains(v));
                    if live[i].len() != before {
                        if live[i].is_empty() || p.variable(i).quantifier == Quantifier::Forall {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Compiles the suffix game after `assignment`.
    pub fn rcqcsp(&mut self, assignment: &mut Vec<Value>) -> Result<SubBase, CompileError> {
        self.stats.recursive_calls += 1;
        if let Some(b) = self.options.budget {
            if self.stats.recursive_calls > b {
                return Err(CompileError::BudgetExceeded(b));
            }
        }
        if self.reach_fixpoint(assignment) == Fixpoint::Failure {
            self.stats.propagation_failures += 1;
            return Ok(SubBase::Bottom);
        }
        let k = assignment.len();
        if k == self.problem.len() {
            return Ok(SubBase::Top);
        }
        let var = self.problem.variable(k);
        let mut list = ValBaseList::new();
        for &val in &var.domain {
            assignment.push(val);
            let base = self.rcqcsp(assignment);
            assignment.pop();
            match base? {
                SubBase::Bottom if var.quantifier == Quantifier::Forall => return Ok(SubBase::Bottom),
                SubBase::Bottom => {}
                base => list.push((val, base)),
            }
        }
        if list.is_empty() {
            return Ok(SubBase::Bottom);
        }
        match var.quantifier {
            Quantifier::Exists => self.combine_exists(k, list),
            Quantifier::Forall => self.combine_forall(k, list),
        }
    }

    fn check_uniform(&self, x: usize, l: &ValBaseList) -> Result<bool, CompileError> {
        assert!(!l.is_empty(), "combination of an empty list");
        assert!(l.iter().all(|(_, b)| *b != SubBase::Bottom), "failed children are dropped before combination");
        let constants = l.iter().filter(|(_, b)| b.is_constant()).count();
        if constants != 0 && constants != l.len() {
            return Err(CompileError::MixedBinder(self.problem.variable(x).name.clone()));
        }
        Ok(constants == l.len())
    }

    /// Combination at an existential variable `x`: a guard `(val, □)` for
    /// every surviving value, followed by the distributed guards of the
    /// tail's existentials.
    pub fn combine_exists(&mut self, x: usize, l: ValBaseList) -> Result<SubBase, CompileError> {
        let all_top = self.check_uniform(x, &l)?;
        let leaf = self.store.leaf();
        let first_values = GuardSet::new(l.iter().map(|&(value, _)| Guard { value, tree: leaf }).collect());
        let mut guard_sets = vec![first_values];
        if !all_top {
            guard_sets.extend(self.combine(x, &l)?);
        }
        Ok(SubBase::Pair { first: x, guard_sets })
    }

    /// Combination at a universal variable `x`; `l` has one entry per
    /// domain value. Universals carry no guards of their own.
    pub fn combine_forall(&mut self, x: usize, l: ValBaseList) -> Result<SubBase, CompileError> {
        debug_assert_eq!(l.len(), self.problem.variable(x).domain.len());
        if self.check_uniform(x, &l)? {
            return Ok(SubBase::Top);
        }
        let guard_sets = self.combine(x, &l)?;
        Ok(SubBase::Pair { first: x, guard_sets })
    }

    /// For each existential `y` after `x`, the guard for value `w` is
    /// `(w, x-node{val -> T_val})` over the children `(val, base_val)` that
    /// guard `w` with tree `T_val`.
    pub fn combine(&mut self, x: usize, l: &ValBaseList) -> Result<Vec<GuardSet>, CompileError> {
        let tail_existentials =
            (x + 1..self.problem.len()).filter(|&i| self.problem.variable(i).is_existential()).count();
        let mixed = || CompileError::MixedBinder(self.problem.variable(x).name.clone());
        let mut children = Vec::with_capacity(l.len());
        for (val, base) in l {
            match base {
                SubBase::Pair { first, guard_sets } if *first == x + 1 && guard_sets.len() == tail_existentials => {
                    children.push((*val, guard_sets))
                }
                _ => return Err(mixed()),
            }
        }
        let mut out = Vec::with_capacity(tail_existentials);
        for slot in 0..tail_existentials {
            let mut by_value: BTreeMap<Value, Vec<(Value, _)>> = BTreeMap::new();
            for (val, sets) in &children {
                for g in sets[slot].guards() {
                    by_value.entry(g.value).or_default().push((*val, g.tree));
                }
            }
            let guards =
                by_value.into_iter().map(|(value, edges)| Guard { value, tree: self.store.branch(x, edges) }).collect();
            out.push(GuardSet::new(guards));
        }
        Ok(out)
    }

    /// Interpretation of the guard set of position `var` in a sub-base.
    pub fn guard_tuples(&self, b: &SubBase, var: usize) -> Option<TupleSet> {
        let SubBase::Pair { first, guard_sets } = b else { return None };
        if var < *first || !self.problem.variable(var).is_existential() {
            return None;
        }
        let slot = (*first..var).filter(|&i| self.problem.variable(i).is_existential()).count();
        Some(interpret_guard_set(&self.store, &guard_sets[slot]))
    }

    /// Freezes a base compiled from the empty assignment.
    pub fn finish(mut self, b: SubBase) -> Result<(QcspBase, CompileStats), BaseError> {
        let base = match b {
            SubBase::Top => QcspBase::Top,
            SubBase::Bottom => QcspBase::Bottom,
            SubBase::Pair { first: 0, guard_sets } => {
                QcspBase::Pair(PairBase::new(self.problem.variables().to_vec(), guard_sets, &self.store)?)
            }
            SubBase::Pair { first, .. } => {
                return Err(BaseError::MalformedBase(format!("sub-base starting at position {first} cannot be frozen")))
            }
        };
        if let QcspBase::Pair(pair) = &base {
            self.stats.nodes = pair.store().len();
            self.stats.unshared_nodes = u64::try_from(pair.unshared_node_count()).unwrap_or(u64::MAX);
        }
        Ok((base, self.stats))
    }
}

/// Compiles `p` from its full binder.
pub fn compile(p: &Problem, options: CompileOptions) -> Result<(QcspBase, CompileStats), CompileError> {
    let mut compiler = Compiler::new(p, options);
    let root = compiler.rcqcsp(&mut Vec::with_capacity(p.len()))?;
    Ok(compiler.finish(root).expect("compiled guard trees are well formed"))
}
