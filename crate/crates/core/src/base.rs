//! QCSP bases: the compilation target.
//!
//! A base is `Top`, `Bottom`, or a binder together with one guard set per
//! existential variable. A guard `(value, tree)` for the variable at binder
//! position `e` says that `value` may be played after any of the move
//! sequences spelled by the branches of `tree`; those branches cover
//! positions `0..e`, so every path has exactly `e` edges.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};

use crate::error::BaseError;
use crate::guard::{GuardNode, NodeId, NodeStore};
use crate::model::{Problem, Quantifier, Table, Value, Variable};
use crate::oracle::{self, EnumLimits};

/// A set of equal-arity tuples.
pub type TupleSet = BTreeSet<Vec<Value>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Guard {
    pub value: Value,
    pub tree: NodeId,
}

/// Guards of one existential variable, ascending by value, one per value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GuardSet {
    guards: Vec<Guard>,
}

impl GuardSet {
    /// Sorts by value. Does not check for duplicates; [`PairBase::new`]
    /// rejects them.
    pub fn new(mut guards: Vec<Guard>) -> Self {
        guards.sort_by_key(|g| g.value);
        GuardSet { guards }
    }

    pub fn guards(&self) -> &[Guard] {
        &self.guards
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        self.guards.iter().map(|g| g.value)
    }

    pub fn get(&self, value: Value) -> Option<&Guard> {
        self.guards.binary_search_by_key(&value, |g| g.value).ok().map(|i| &self.guards[i])
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }
}

/// `{(val, e_1, ..., e_k) | e_1..e_k a branch of tree}`.
pub fn interpret_tree(store: &NodeStore, value: Value, tree: NodeId) -> TupleSet {
    store
        .branches(tree)
        .into_iter()
        .map(|branch| {
            let mut t = Vec::with_capacity(branch.len() + 1);
            t.push(value);
            t.extend(branch);
            t
        })
        .collect()
}

/// Union of the tree interpretations of every guard.
pub fn interpret_guard_set(store: &NodeStore, set: &GuardSet) -> TupleSet {
    set.guards.iter().flat_map(|g| interpret_tree(store, g.value, g.tree)).collect()
}

/// The binder-carrying case of a base. Frozen after construction.
#[derive(Clone, Debug)]
pub struct PairBase {
    binder: Vec<Variable>,
    guard_sets: Vec<GuardSet>,
    store: Arc<NodeStore>,
}

#[derive(Clone, Debug)]
pub enum QcspBase {
    Top,
    Bottom,
    Pair(PairBase),
}

/// What a base means as a problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpretation {
    True,
    False,
    Problem(Problem),
}

impl PairBase {
    /// Checks every base invariant and compacts the store to the nodes
    /// reachable from the guards, numbered in a canonical order.
    pub fn new(binder: Vec<Variable>, guard_sets: Vec<GuardSet>, store: &NodeStore) -> Result<Self, BaseError> {
        let malformed = |m: String| Err(BaseError::MalformedBase(m));
        if binder.is_empty() {
            return malformed("a pair base needs a non-empty binder".into());
        }
        // reuse the problem checks for names and domains
        let binder =
            Problem::new(binder, vec![]).map_err(|e| BaseError::MalformedBase(e.to_string()))?.variables().to_vec();
        let existentials: Vec<usize> = (0..binder.len()).filter(|&i| binder[i].is_existential()).collect();
        if existentials.len() != guard_sets.len() {
            return malformed(format!(
                "{} guard sets for {} existential variables",
                guard_sets.len(),
                existentials.len()
            ));
        }
        for (&e, set) in existentials.iter().zip(&guard_sets) {
            let name = &binder[e].name;
            if set.is_empty() {
                return malformed(format!("empty guard set for `{name}`"));
            }
            if set.guards.windows(2).any(|w| w[0].value >= w[1].value) {
                return malformed(format!("guards of `{name}` are not strictly ascending"));
            }
            for g in &set.guards {
                if !binder[e].allows(g.value) {
                    return malformed(format!("guard value {} outside the domain of `{name}`", g.value));
                }
                if g.tree.index() >= store.len() {
                    return malformed(format!("guard of `{name}` references missing node {}", g.tree.index()));
                }
                store
                    .check_shape(g.tree, 0, e)
                    .map_err(|m| BaseError::MalformedBase(format!("guard ({}, _) of `{name}`: {m}", g.value)))?;
                check_edge_domains(store, &binder, g.tree)
                    .map_err(|m| BaseError::MalformedBase(format!("guard ({}, _) of `{name}`: {m}", g.value)))?;
            }
        }

        let roots: Vec<NodeId> = guard_sets.iter().flat_map(|s| s.guards.iter().map(|g| g.tree)).collect();
        let (compact, new_roots) = store.compact(&roots);
        let mut it = new_roots.into_iter();
        let guard_sets = guard_sets
            .into_iter()
            .map(|s| GuardSet {
                guards: s.guards.into_iter().map(|g| Guard { value: g.value, tree: it.next().unwrap() }).collect(),
            })
            .collect();
        Ok(PairBase { binder, guard_sets, store: Arc::new(compact) })
    }

    pub fn binder(&self) -> &[Variable] {
        &self.binder
    }

    pub fn store(&self) -> &NodeStore {
        &self.store
    }

    pub fn guard_sets(&self) -> &[GuardSet] {
        &self.guard_sets
    }

    /// The guard set of the variable at binder position `var`.
    pub fn guard_set(&self, var: usize) -> Option<&GuardSet> {
        if !self.binder.get(var)?.is_existential() {
            return None;
        }
        let slot = self.binder[..var].iter().filter(|v| v.is_existential()).count();
        Some(&self.guard_sets[slot])
    }

    pub fn existentials(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.binder.len()).filter(|&i| self.binder[i].is_existential())
    }

    pub fn interpret_guards(&self, var: usize) -> Result<TupleSet, BaseError> {
        let set = self.guard_set(var).ok_or(BaseError::NotExistential(var))?;
        Ok(interpret_guard_set(&self.store, set))
    }

    /// Values playable at existential position `var` after `prefix`, by
    /// walking each guard tree along `prefix[..var]`.
    pub fn guard_lookup(&self, var: usize, prefix: &[Value]) -> Result<BTreeSet<Value>, BaseError> {
        let set = self.guard_set(var).ok_or(BaseError::NotExistential(var))?;
        if prefix.len() < var {
            return Err(BaseError::ShortPrefix { needed: var, found: prefix.len() });
        }
        let path = &prefix[..var];
        Ok(set.guards.iter().filter(|g| self.store.walk(g.tree, path)).map(|g| g.value).collect())
    }

    /// Problem with the same binder and one table per existential `v_e`
    /// with scope `(v_e, v_1, ..., v_{e-1})`.
    pub fn interpret(&self) -> Problem {
        let tables = self
            .existentials()
            .zip(&self.guard_sets)
            .map(|(e, set)| Table {
                scope: std::iter::once(e).chain(0..e).collect(),
                tuples: interpret_guard_set(&self.store, set),
            })
            .collect();
        Problem::new(self.binder.clone(), tables).expect("guard values lie in their domains")
    }

    /// Total number of nodes over all guard trees if nothing were shared.
    pub fn unshared_node_count(&self) -> u128 {
        self.guard_sets.iter().flat_map(|s| &s.guards).map(|g| self.store.unshared_size(g.tree)).sum()
    }
}

fn check_edge_domains(store: &NodeStore, binder: &[Variable], id: NodeId) -> Result<(), String> {
    if let GuardNode::Branch { var, edges } = store.get(id) {
        for &(v, c) in edges {
            if !binder[*var].allows(v) {
                return Err(format!("edge value {v} outside the domain of `{}`", binder[*var].name));
            }
            check_edge_domains(store, binder, c)?;
        }
    }
    Ok(())
}

impl PartialEq for PairBase {
    fn eq(&self, other: &Self) -> bool {
        self.binder == other.binder
            && self.guard_sets == other.guard_sets
            && self.store.ids().count() == other.store.ids().count()
            && self.store.ids().all(|id| self.store.get(id) == other.store.get(id))
    }
}

impl Eq for PairBase {}

impl PartialEq for QcspBase {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (QcspBase::Top, QcspBase::Top) | (QcspBase::Bottom, QcspBase::Bottom) => true,
            (QcspBase::Pair(a), QcspBase::Pair(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for QcspBase {}

impl QcspBase {
    pub fn as_pair(&self) -> Option<&PairBase> {
        match self {
            QcspBase::Pair(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, QcspBase::Bottom)
    }

    pub fn interpret(&self) -> Interpretation {
        match self {
            QcspBase::Top => Interpretation::True,
            QcspBase::Bottom => Interpretation::False,
            QcspBase::Pair(p) => Interpretation::Problem(p.interpret()),
        }
    }

    pub fn guard_lookup(&self, var: usize, prefix: &[Value]) -> Result<BTreeSet<Value>, BaseError> {
        self.as_pair().ok_or(BaseError::ConstantBase)?.guard_lookup(var, prefix)
    }

    /// Number of distinct DAG nodes.
    pub fn node_count(&self) -> usize {
        self.as_pair().map_or(0, |p| p.store.len())
    }
}

pub fn interpret_base(b: &QcspBase) -> Interpretation {
    b.interpret()
}

/// The problem a base stands for when checked against `p`. `None` means the
/// base has a binder that differs from `p`'s.
fn as_problem_over(b: &QcspBase, p: &Problem) -> Result<Option<Problem>, BaseError> {
    Ok(match b {
        QcspBase::Top => Some(p.with_constraints(vec![])?),
        // one empty table: nothing wins
        QcspBase::Bottom => Some(p.with_constraints(vec![Table { scope: vec![], tuples: TupleSet::new() }])?),
        QcspBase::Pair(pair) if pair.binder() == p.variables() => Some(pair.interpret()),
        QcspBase::Pair(_) => None,
    })
}

/// True iff the interpretation of `b` has exactly the winning strategies of
/// `p`.
///
/// Decided exactly by comparing the two winning-strategy sets level by
/// level instead of materializing them; see
/// [`oracle::same_winning_strategies`]. Use
/// [`check_compatibility_by_enumeration`] for the literal set comparison.
pub fn check_compatibility(b: &QcspBase, p: &Problem) -> Result<bool, BaseError> {
    Ok(match as_problem_over(b, p)? {
        Some(q) => oracle::same_winning_strategies(&q, p),
        None => false,
    })
}

/// Compatibility by enumerating both strategy sets, failing with
/// `BudgetExceeded` once either side builds more than `budget` trees.
pub fn check_compatibility_by_enumeration(b: &QcspBase, p: &Problem, budget: Option<u64>) -> Result<bool, BaseError> {
    let Some(q) = as_problem_over(b, p)? else {
        return Ok(false);
    };
    let limits = EnumLimits { limit: None, budget };
    let ours: BTreeSet<_> = oracle::enumerate_winning_strategies(&q, limits)?.into_iter().collect();
    let theirs: BTreeSet<_> = oracle::enumerate_winning_strategies(p, limits)?.into_iter().collect();
    Ok(ours == theirs)
}

/// True iff, for every existential position, every guard-consistent prefix
/// and every value, the value is guarded exactly when the interpreted
/// problem still admits a winning strategy after playing it.
///
/// Prefixes range over all earlier variables; only their existential
/// components must be guard-consistent.
pub fn check_optimality(b: &QcspBase) -> Result<bool, BaseError> {
    let pair = b.as_pair().ok_or(BaseError::ConstantBase)?;
    let q = pair.interpret();
    let mut prefix = Vec::with_capacity(q.len());
    optimal_from(pair, &q, &mut prefix)
}

fn optimal_from(pair: &PairBase, q: &Problem, prefix: &mut Vec<Value>) -> Result<bool, BaseError> {
    let k = prefix.len();
    if k == q.len() {
        return Ok(true);
    }
    let var = &pair.binder[k];
    let next: Vec<Value> = match var.quantifier {
        Quantifier::Exists => {
            let guarded = pair.guard_lookup(k, prefix)?;
            for &v in &var.domain {
                prefix.push(v);
                let wins = oracle::decide_from(q, prefix);
                prefix.pop();
                if wins != guarded.contains(&v) {
                    return Ok(false);
                }
            }
            guarded.into_iter().collect()
        }
        Quantifier::Forall => var.domain.clone(),
    };
    for v in next {
        prefix.push(v);
        let ok = optimal_from(pair, q, prefix)?;
        prefix.pop();
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeDoc {
    Leaf { id: u32, leaf: bool },
    Branch { id: u32, var: String, edges: Map<String, Json> },
}

#[derive(Serialize, Deserialize)]
struct GuardDoc {
    value: Value,
    tree: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BaseDoc {
    Top,
    Bottom,
    Pair { binder: Vec<Variable>, nodes: Vec<NodeDoc>, guards: Map<String, Json> },
}

impl QcspBase {
    /// Deterministic JSON. Shared subtrees appear once, by node id; ids are
    /// topologically ordered (children first).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("base documents always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("base documents always serialize")
    }

    fn to_doc(&self) -> BaseDoc {
        let pair = match self {
            QcspBase::Top => return BaseDoc::Top,
            QcspBase::Bottom => return BaseDoc::Bottom,
            QcspBase::Pair(p) => p,
        };
        let nodes = pair
            .store
            .ids()
            .map(|id| {
                let n = id.index() as u32;
                match pair.store.get(id) {
                    GuardNode::Leaf => NodeDoc::Leaf { id: n, leaf: true },
                    GuardNode::Branch { var, edges } => NodeDoc::Branch {
                        id: n,
                        var: pair.binder[*var].name.clone(),
                        edges: edges.iter().map(|&(v, c)| (v.to_string(), Json::from(c.index() as u32))).collect(),
                    },
                }
            })
            .collect();
        let guards = pair
            .existentials()
            .zip(&pair.guard_sets)
            .map(|(e, set)| {
                let list: Vec<GuardDoc> =
                    set.guards.iter().map(|g| GuardDoc { value: g.value, tree: g.tree.index() as u32 }).collect();
                (pair.binder[e].name.clone(), serde_json::to_value(list).unwrap())
            })
            .collect();
        BaseDoc::Pair { binder: pair.binder.clone(), nodes, guards }
    }

    pub fn from_json(text: &str) -> Result<Self, BaseError> {
        let doc: BaseDoc = serde_json::from_str(text)
            .map_err(|e| BaseError::MalformedBase(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: BaseDoc) -> Result<Self, BaseError> {
        let malformed = |m: String| BaseError::MalformedBase(m);
        let (binder, nodes, guards) = match doc {
            BaseDoc::Top => return Ok(QcspBase::Top),
            BaseDoc::Bottom => return Ok(QcspBase::Bottom),
            BaseDoc::Pair { binder, nodes, guards } => (binder, nodes, guards),
        };
        let position = |name: &str| {
            binder.iter().position(|v| v.name == name).ok_or_else(|| malformed(format!("unknown variable `{name}`")))
        };

        // file ids -> store ids; children must precede parents
        let mut store = NodeStore::new();
        let mut ids: Vec<Option<NodeId>> = Vec::new();
        let lookup = |ids: &Vec<Option<NodeId>>, n: u64| {
            ids.get(n as usize).copied().flatten().ok_or_else(|| malformed(format!("reference to undefined node {n}")))
        };
        for node in nodes {
            let (file_id, id) = match node {
                NodeDoc::Leaf { id, leaf: true } => (id, store.leaf()),
                NodeDoc::Leaf { id, leaf: false } => return Err(malformed(format!("node {id} has leaf=false"))),
                NodeDoc::Branch { id, var, edges } => {
                    let var = position(&var)?;
                    if edges.is_empty() {
                        return Err(malformed(format!("node {id} has no children")));
                    }
                    let mut list = Vec::with_capacity(edges.len());
                    for (k, child) in edges {
                        let value: Value =
                            k.parse().map_err(|_| malformed(format!("edge label `{k}` is not an integer")))?;
                        let child = child
                            .as_u64()
                            .ok_or_else(|| malformed(format!("edge `{k}` of node {id} is not a node id")))?;
                        list.push((value, lookup(&ids, child)?));
                    }
                    list.sort_unstable_by_key(|&(v, _)| v);
                    if list.windows(2).any(|w| w[0].0 == w[1].0) {
                        return Err(malformed(format!("node {id} repeats an edge label")));
                    }
                    (id, store.branch(var, list))
                }
            };
            let slot = file_id as usize;
            if ids.len() <= slot {
                ids.resize(slot + 1, None);
            }
            if ids[slot].is_some() {
                return Err(malformed(format!("node id {file_id} defined twice")));
            }
            ids[slot] = Some(id);
        }

        let mut guard_sets = Vec::new();
        let mut seen = 0;
        for v in binder.iter().filter(|v| v.is_existential()) {
            let Some(list) = guards.get(&v.name) else {
                return Err(malformed(format!("no guards for existential `{}`", v.name)));
            };
            seen += 1;
            let list: Vec<GuardDoc> =
                serde_json::from_value(list.clone()).map_err(|e| malformed(format!("guards of `{}`: {e}", v.name)))?;
            let mut gs = Vec::with_capacity(list.len());
            for g in list {
                gs.push(Guard { value: g.value, tree: lookup(&ids, u64::from(g.tree))? });
            }
            guard_sets.push(GuardSet::new(gs));
        }
        if seen != guards.len() {
            return Err(malformed("guards listed for a variable that is not existential".into()));
        }
        Ok(QcspBase::Pair(PairBase::new(binder, guard_sets, &store)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{loose_base, loose_gt_tuples, pstar_base, pstar};

    #[test]
    fn leaf_interpretation() {
        let mut s = NodeStore::new();
        let l = s.leaf();
        assert_eq!(interpret_tree(&s, 0, l), TupleSet::from([vec![0]]));
        let one = s.branch(0, vec![(7, l)]);
        assert_eq!(interpret_tree(&s, 5, one), TupleSet::from([vec![5, 7]]));
    }

    #[test]
    fn loose_base_first_t_tree() {
        let b = loose_base();
        let pair = b.as_pair().unwrap();
        let gt = pair.guard_set(3).unwrap();
        let g0 = gt.get(0).unwrap();
        let expected: TupleSet = [
            [0, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 0, 2],
            [0, 0, 1, 0],
            [0, 0, 2, 0],
            [0, 1, 1, 1],
            [0, 2, 1, 2],
            [0, 2, 2, 1],
        ]
        .into_iter()
        .map(|t| t.to_vec())
        .collect();
        assert_eq!(interpret_tree(pair.store(), 0, g0.tree), expected);
        assert_eq!(pair.interpret_guards(3).unwrap(), loose_gt_tuples());
    }

    #[test]
    fn guard_set_of_boxes() {
        let b = loose_base();
        let pair = b.as_pair().unwrap();
        assert_eq!(pair.interpret_guards(0).unwrap(), TupleSet::from([vec![0], vec![1], vec![2]]));
        let mut s = NodeStore::new();
        let l = s.leaf();
        let single = GuardSet::new(vec![Guard { value: 1, tree: l }]);
        assert_eq!(interpret_guard_set(&s, &single), TupleSet::from([vec![1]]));
    }

    #[test]
    fn interpretation_of_loose_base() {
        let b = loose_base();
        let Interpretation::Problem(q) = b.interpret() else { panic!() };
        assert_eq!(q.binder_string(), "∃x∃y∀z∃t");
        let scopes: Vec<_> = q.constraints().iter().map(|t| t.scope.clone()).collect();
        assert_eq!(scopes, vec![vec![0], vec![1, 0], vec![3, 0, 1, 2]]);
        // Int(G_y) is the full square
        assert_eq!(q.constraints()[1].tuples.len(), 9);
        assert_eq!(QcspBase::Top.interpret(), Interpretation::True);
        assert_eq!(QcspBase::Bottom.interpret(), Interpretation::False);
    }

    #[test]
    fn lookups_on_optimal_base() {
        let b = pstar_base();
        assert_eq!(b.guard_lookup(1, &[2]).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(b.guard_lookup(1, &[0]).unwrap(), BTreeSet::from([0]));
        assert_eq!(b.guard_lookup(3, &[2, 1, 2]).unwrap(), BTreeSet::from([0]));
        assert_eq!(b.guard_lookup(3, &[1, 1, 0]).unwrap(), BTreeSet::new());
        assert_eq!(b.guard_lookup(2, &[0, 0]), Err(BaseError::NotExistential(2)));
        assert_eq!(QcspBase::Top.guard_lookup(0, &[]), Err(BaseError::ConstantBase));
    }

    #[test]
    fn compatibility_examples() {
        let p = pstar();
        assert_eq!(check_compatibility(&loose_base(), &p), Ok(true));
        assert_eq!(check_compatibility(&pstar_base(), &p), Ok(true));
        assert_eq!(check_compatibility_by_enumeration(&loose_base(), &p, None), Ok(true));

        let b = loose_base();
        let pair = b.as_pair().unwrap();
        let mut sets = pair.guard_sets().to_vec();
        sets[0] = GuardSet::new(sets[0].guards().iter().copied().filter(|g| g.value != 2).collect());
        let cut = QcspBase::Pair(PairBase::new(pair.binder().to_vec(), sets, pair.store()).unwrap());
        assert_eq!(check_compatibility(&cut, &p), Ok(false));
        assert_eq!(check_compatibility_by_enumeration(&cut, &p, None), Ok(false));

        let taut = Problem::new(vec![Variable::forall("a", [0, 1]), Variable::forall("b", [0, 1])], vec![]).unwrap();
        assert_eq!(check_compatibility(&QcspBase::Top, &taut), Ok(true));
        assert_eq!(check_compatibility_by_enumeration(&QcspBase::Top, &taut, None), Ok(true));
        assert_eq!(check_compatibility(&QcspBase::Bottom, &taut), Ok(false));
        assert_eq!(check_compatibility(&QcspBase::Top, &p), Ok(false));
    }

    #[test]
    fn optimality_examples() {
        assert_eq!(check_optimality(&pstar_base()), Ok(true));
        assert_eq!(check_optimality(&loose_base()), Ok(false));
        assert_eq!(check_optimality(&QcspBase::Bottom), Err(BaseError::ConstantBase));
    }

    #[test]
    fn optimality_with_single_existential() {
        // ∃a ∀b (a >= b): only a = 2 wins; guards exactly {2} are optimal
        let vars = vec![Variable::exists("a", 0..3), Variable::forall("b", 0..3)];
        let mut s = NodeStore::new();
        let l = s.leaf();
        let p = crate::fixtures::with_expr(vars.clone(), "a >= b");
        let winnable: Vec<Value> = (0..3).filter(|&a| oracle::decide_from(&p, &[a])).collect();
        assert_eq!(winnable, vec![2]);
        let exact = GuardSet::new(winnable.iter().map(|&value| Guard { value, tree: l }).collect());
        let b = QcspBase::Pair(PairBase::new(vars.clone(), vec![exact], &s).unwrap());
        assert_eq!(check_optimality(&b), Ok(true));
        let loose = GuardSet::new((0..3).map(|value| Guard { value, tree: l }).collect());
        let b = QcspBase::Pair(PairBase::new(vars, vec![loose], &s).unwrap());
        // all three guards, no constraint beyond them: every value wins
        assert_eq!(check_optimality(&b), Ok(true));
    }

    #[test]
    fn json_shapes() {
        assert_eq!(QcspBase::Top.to_json(), r#"{"kind":"top"}"#);
        assert_eq!(QcspBase::Bottom.to_json(), r#"{"kind":"bottom"}"#);
        for b in [loose_base(), pstar_base()] {
            let text = b.to_json();
            let back = QcspBase::from_json(&text).unwrap();
            assert_eq!(back, b);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn malformed_json_is_rejected() {
        let wrong_depth = r#"{"kind":"pair",
            "binder":[{"name":"x","quantifier":"exists","domain":[0,1]},{"name":"y","quantifier":"exists","domain":[0,1]}],
            "nodes":[{"id":0,"leaf":true}],
            "guards":{"x":[{"value":0,"tree":0}],"y":[{"value":1,"tree":0}]}}"#;
        assert!(matches!(QcspBase::from_json(wrong_depth), Err(BaseError::MalformedBase(_))));

        let forward_ref = r#"{"kind":"pair",
            "binder":[{"name":"x","quantifier":"exists","domain":[0,1]}],
            "nodes":[{"id":0,"var":"x","edges":{"0":1}},{"id":1,"leaf":true}],
            "guards":{"x":[{"value":0,"tree":1}]}}"#;
        assert!(matches!(QcspBase::from_json(forward_ref), Err(BaseError::MalformedBase(_))));

        let missing_guards = r#"{"kind":"pair",
            "binder":[{"name":"x","quantifier":"exists","domain":[0,1]}],
            "nodes":[{"id":0,"leaf":true}],"guards":{}}"#;
        assert!(matches!(QcspBase::from_json(missing_guards), Err(BaseError::MalformedBase(_))));

        assert!(matches!(QcspBase::from_json("{\"kind\":\"pear\"}"), Err(BaseError::MalformedBase(_))));
    }
}
