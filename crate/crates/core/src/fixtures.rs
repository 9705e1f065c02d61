//! Small reference problems and bases used by the examples, the tests and
//! the documentation.
//!
//! `pstar` is the four-variable game `∃x∃y∀z∃t (x = y*z + t)` over
//! `{0,1,2}`; the bases are hand-built from guard tuples.

use std::collections::BTreeMap;

use crate::base::{Guard, GuardSet, PairBase, QcspBase, TupleSet};
use crate::guard::NodeStore;
use crate::model::{validate_problem, ConstraintDoc, Problem, ProblemDoc, Value, Variable};

/// A validated problem with one expression constraint.
pub fn with_expr(variables: Vec<Variable>, expr: &str) -> Problem {
    validate_problem(ProblemDoc { variables, constraints: vec![ConstraintDoc::Expr { text: expr.into() }] })
        .expect("fixture problems are valid")
}

pub fn pstar_binder() -> Vec<Variable> {
    vec![
        Variable::exists("x", 0..3),
        Variable::exists("y", 0..3),
        Variable::forall("z", 0..3),
        Variable::exists("t", 0..3),
    ]
}

/// `∃x∃y∀z∃t (x = y*z + t)`, all domains `{0,1,2}`.
pub fn pstar() -> Problem {
    with_expr(pstar_binder(), "x = y*z + t")
}

/// `∀x∀y∃z∃t (x = y*z + t)`, all domains `{0,1,2}`.
pub fn forall_forall() -> Problem {
    with_expr(
        vec![
            Variable::forall("x", 0..3),
            Variable::forall("y", 0..3),
            Variable::exists("z", 0..3),
            Variable::exists("t", 0..3),
        ],
        "x = y*z + t",
    )
}

/// Builds a guard set from tuples `(value, prefix...)`, one trie per value.
pub fn guard_set_from_tuples(store: &mut NodeStore, tuples: &TupleSet) -> GuardSet {
    let mut by_value: BTreeMap<Value, Vec<&[Value]>> = BTreeMap::new();
    for t in tuples {
        by_value.entry(t[0]).or_default().push(&t[1..]);
    }
    GuardSet::new(by_value.into_iter().map(|(value, paths)| Guard { value, tree: store.trie(0, paths) }).collect())
}

/// Builds a base over `binder` from the interpretation of each existential
/// guard set, in binder order.
pub fn base_from_tuples(binder: Vec<Variable>, sets: &[TupleSet]) -> QcspBase {
    let mut store = NodeStore::new();
    let guard_sets = sets.iter().map(|t| guard_set_from_tuples(&mut store, t)).collect();
    QcspBase::Pair(PairBase::new(binder, guard_sets, &store).expect("fixture bases are well formed"))
}

fn tuples<const N: usize>(list: &[[Value; N]]) -> TupleSet {
    list.iter().map(|t| t.to_vec()).collect()
}

/// The 19 `(t, x, y, z)` tuples guarded for `t` by the compatible but
/// non-optimal base of [`loose_base`].
pub fn loose_gt_tuples() -> TupleSet {
    tuples(&[
        [0, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 0, 2],
        [0, 0, 1, 0],
        [0, 0, 2, 0],
        [0, 1, 1, 1],
        [0, 2, 1, 2],
        [0, 2, 2, 1],
        [1, 1, 0, 0],
        [1, 1, 0, 1],
        [1, 1, 0, 2],
        [1, 1, 1, 0],
        [1, 1, 2, 0],
        [1, 2, 1, 1],
        [2, 2, 0, 0],
        [2, 2, 0, 1],
        [2, 2, 0, 2],
        [2, 2, 1, 0],
        [2, 2, 2, 0],
    ])
}

/// A base compatible with [`pstar`] that is not optimal: every `x` and every
/// `(y, x)` is guarded.
pub fn loose_base() -> QcspBase {
    let gx = tuples(&[[0], [1], [2]]);
    let gy: TupleSet = (0..3).flat_map(|y| (0..3).map(move |x| vec![y, x])).collect();
    base_from_tuples(pstar_binder(), &[gx, gy, loose_gt_tuples()])
}

/// `Int(G_y)` of the optimal base for [`pstar`].
pub fn pstar_gy_tuples() -> TupleSet {
    tuples(&[[0, 0], [0, 1], [0, 2], [1, 2]])
}

/// `Int(G_t)` of the optimal base for [`pstar`]: the branches of the three
/// `t` guard trees.
pub fn pstar_gt_tuples() -> TupleSet {
    tuples(&[
        // t = 0: x=0,y=0 under every z; x=2,y=1,z=2
        [0, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 0, 2],
        [0, 2, 1, 2],
        // t = 1: x=1,y=0 under every z; x=2,y=1,z=1
        [1, 1, 0, 0],
        [1, 1, 0, 1],
        [1, 1, 0, 2],
        [1, 2, 1, 1],
        // t = 2: x=2,y=0 under every z; x=2,y=1,z=0
        [2, 2, 0, 0],
        [2, 2, 0, 1],
        [2, 2, 0, 2],
        [2, 2, 1, 0],
    ])
}

/// The optimal base compatible with [`pstar`].
pub fn pstar_base() -> QcspBase {
    base_from_tuples(pstar_binder(), &[tuples(&[[0], [1], [2]]), pstar_gy_tuples(), pstar_gt_tuples()])
}
