//! Guard trees stored as a hash-consed DAG.
//!
//! A [`NodeStore`] owns every node of a base. Structurally equal subtrees
//! are interned once, so two [`NodeId`]s of the same store are equal iff the
//! trees they denote are equal. Children are always created before their
//! parents, which makes node ids a topological order.

use std::collections::{BTreeMap, HashMap};

use crate::model::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `Leaf` is the box symbol; a `Branch` is labeled with a binder position
/// and has edges sorted by value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GuardNode {
    Leaf,
    Branch { var: usize, edges: Vec<(Value, NodeId)> },
}

#[derive(Clone, Debug, Default)]
pub struct NodeStore {
    nodes: Vec<GuardNode>,
    interned: HashMap<GuardNode, NodeId>,
}

impl NodeStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: NodeId) -> &GuardNode {
        &self.nodes[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    fn intern(&mut self, node: GuardNode) -> NodeId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node store overflow"));
        self.nodes.push(node.clone());
        self.interned.insert(node, id);
        id
    }

    pub fn leaf(&mut self) -> NodeId {
        self.intern(GuardNode::Leaf)
    }

    /// Interns a branch node. Edges are sorted by value.
    ///
    /// Panics on an empty edge list, a repeated value, or a child id that
    /// does not belong to this store.
    pub fn branch(&mut self, var: usize, mut edges: Vec<(Value, NodeId)>) -> NodeId {
        assert!(!edges.is_empty(), "guard tree nodes need at least one child");
        edges.sort_unstable_by_key(|&(v, _)| v);
        assert!(edges.windows(2).all(|w| w[0].0 != w[1].0), "repeated edge label under position {var}");
        assert!(edges.iter().all(|(_, c)| c.index() < self.nodes.len()), "dangling child id");
        self.intern(GuardNode::Branch { var, edges })
    }

    /// Builds the trie of a non-empty set of equal-length paths whose first
    /// component is a value of position `first_var`.
    pub fn trie<'a>(&mut self, first_var: usize, paths: impl IntoIterator<Item = &'a [Value]>) -> NodeId {
        let paths: Vec<&[Value]> = paths.into_iter().collect();
        assert!(!paths.is_empty(), "a guard tree needs at least one branch");
        self.trie_rec(first_var, &paths)
    }

    fn trie_rec(&mut self, var: usize, paths: &[&[Value]]) -> NodeId {
        if paths[0].is_empty() {
            assert!(paths.iter().all(|p| p.is_empty()), "paths of unequal length");
            return self.leaf();
        }
        let mut groups: BTreeMap<Value, Vec<&[Value]>> = BTreeMap::new();
        for p in paths {
            assert!(!p.is_empty(), "paths of unequal length");
            groups.entry(p[0]).or_default().push(&p[1..]);
        }
        let edges = groups.into_iter().map(|(v, rest)| (v, self.trie_rec(var + 1, &rest))).collect();
        self.branch(var, edges)
    }

    /// Every root-to-leaf sequence of edge labels, in ascending order.
    pub fn branches(&self, id: NodeId) -> Vec<Vec<Value>> {
        let mut out = Vec::new();
        self.branches_rec(id, &mut Vec::new(), &mut out);
        out
    }

    fn branches_rec(&self, id: NodeId, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
        match self.get(id) {
            GuardNode::Leaf => out.push(path.clone()),
            GuardNode::Branch { edges, .. } => {
                for &(v, c) in edges {
                    path.push(v);
                    self.branches_rec(c, path, out);
                    path.pop();
                }
            }
        }
    }

    /// Number of root-to-leaf branches, counted over the DAG without
    /// expanding it.
    pub fn branch_count(&self, id: NodeId) -> u128 {
        let mut memo = HashMap::new();
        self.branch_count_rec(id, &mut memo)
    }

    fn branch_count_rec(&self, id: NodeId, memo: &mut HashMap<NodeId, u128>) -> u128 {
        if let Some(&c) = memo.get(&id) {
            return c;
        }
        let c = match self.get(id) {
            GuardNode::Leaf => 1,
            GuardNode::Branch { edges, .. } => edges.iter().map(|&(_, c)| self.branch_count_rec(c, memo)).sum(),
        };
        memo.insert(id, c);
        c
    }

    /// Follows `path` from `id`; true iff it ends exactly on a leaf.
    pub fn walk(&self, id: NodeId, path: &[Value]) -> bool {
        let mut node = id;
        for v in path {
            match self.get(node) {
                GuardNode::Leaf => return false,
                GuardNode::Branch { edges, .. } => match edges.binary_search_by_key(v, |&(val, _)| val) {
                    Ok(i) => node = edges[i].1,
                    Err(_) => return false,
                },
            }
        }
        matches!(self.get(node), GuardNode::Leaf)
    }

    /// Size of the tree rooted at `id` if it were not shared.
    pub fn unshared_size(&self, id: NodeId) -> u128 {
        match self.get(id) {
            GuardNode::Leaf => 1,
            GuardNode::Branch { edges, .. } => 1 + edges.iter().map(|&(_, c)| self.unshared_size(c)).sum::<u128>(),
        }
    }

    /// Checks that every path from `id` has `depth` edges and that the node
    /// at path depth `k` is labeled `first_var + k`.
    pub fn check_shape(&self, id: NodeId, first_var: usize, depth: usize) -> Result<(), String> {
        match (self.get(id), depth) {
            (GuardNode::Leaf, 0) => Ok(()),
            (GuardNode::Leaf, d) => Err(format!("leaf reached {d} levels too early")),
            (GuardNode::Branch { .. }, 0) => Err("branch below the expected depth".into()),
            (GuardNode::Branch { var, edges }, d) => {
                if *var != first_var {
                    return Err(format!("node labeled with position {var}, expected {first_var}"));
                }
                edges.iter().try_for_each(|&(_, c)| self.check_shape(c, first_var + 1, d - 1))
            }
        }
    }

    /// Copies the nodes reachable from `roots` into a fresh store, visiting
    /// roots in order. Returns the new store and the translation of each
    /// root.
    pub fn compact(&self, roots: &[NodeId]) -> (NodeStore, Vec<NodeId>) {
        let mut out = NodeStore::new();
        let mut map = HashMap::new();
        let new_roots = roots.iter().map(|&r| self.copy_into(r, &mut out, &mut map)).collect();
        (out, new_roots)
    }

    fn copy_into(&self, id: NodeId, out: &mut NodeStore, map: &mut HashMap<NodeId, NodeId>) -> NodeId {
        if let Some(&n) = map.get(&id) {
            return n;
        }
        let n = match self.get(id) {
            GuardNode::Leaf => out.leaf(),
            GuardNode::Branch { var, edges } => {
                let edges = edges.iter().map(|&(v, c)| (v, self.copy_into(c, out, map))).collect();
                out.branch(*var, edges)
            }
        };
        map.insert(id, n);
        n
    }
}
