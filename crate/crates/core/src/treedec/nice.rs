use std::collections::BTreeMap;

use super::TreeDecomposition;
use crate::csp::{ConstraintGraph, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(Var),
    Forget(Var),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag.
    pub bag: Vec<Var>,
    pub children: Vec<usize>,
}

/// Rooted forest of typed nodes. Children always have smaller indices than
/// their parent, so iterating `nodes` in index order is a post-order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    /// One root per connected piece, each with a single-vertex bag.
    pub roots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NiceViolation {
    #[error("node {0}: leaf bag must hold exactly one vertex")]
    LeafBag(usize),
    #[error("node {0}: wrong number of children for its kind")]
    ChildCount(usize),
    #[error("node {0}: bag does not match its kind and child")]
    BagMismatch(usize),
    #[error("node {0}: child index is not smaller than the parent")]
    ChildOrder(usize),
    #[error("node {0} is reachable from more or fewer than one root")]
    Reachability(usize),
    #[error("underlying decomposition is invalid: {0}")]
    Decomposition(super::TdError),
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Roots in order, each followed by its subtree; children visited in
    /// stored order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for &r in &self.roots {
            let mut stack = vec![r];
            while let Some(a) = stack.pop() {
                out.push(a);
                for &c in self.nodes[a].children.iter().rev() {
                    stack.push(c);
                }
            }
        }
        out
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (a, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                p[c] = Some(a);
            }
        }
        p
    }

    /// Forgets the rooting and node types. Roots of different pieces are
    /// chained so the result is a single tree.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        if self.nodes.is_empty() {
            return TreeDecomposition::new(vec![Vec::new()], Vec::new());
        }
        let mut edges = Vec::new();
        for (a, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((c, a));
            }
        }
        for w in self.roots.windows(2) {
            edges.push((w[0], w[1]));
        }
        TreeDecomposition::new(self.nodes.iter().map(|n| n.bag.clone()).collect(), edges)
    }

    /// Checks node typing and bag relations, then validity of the underlying
    /// decomposition against `g`.
    pub fn validate(&self, g: &ConstraintGraph) -> Result<(), Vec<NiceViolation>> {
        let mut errors = Vec::new();
        let mut reached = vec![0usize; self.nodes.len()];
        for &r in &self.roots {
            if r < self.nodes.len() {
                reached[r] += 1;
            }
        }
        for (a, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= a {
                    errors.push(NiceViolation::ChildOrder(a));
                } else {
                    reached[c] += 1;
                }
            }
            let kids: Vec<&Vec<Var>> = node
                .children
                .iter()
                .filter(|&&c| c < a)
                .map(|&c| &self.nodes[c].bag)
                .collect();
            let ok_count = match node.kind {
                NodeKind::Leaf => node.children.is_empty(),
                NodeKind::Introduce(_) | NodeKind::Forget(_) => node.children.len() == 1,
                NodeKind::Join => node.children.len() == 2,
            };
            if !ok_count || kids.len() != node.children.len() {
                errors.push(NiceViolation::ChildCount(a));
                continue;
            }
            let ok_bag = match node.kind {
                NodeKind::Leaf => {
                    if node.bag.len() != 1 {
                        errors.push(NiceViolation::LeafBag(a));
                    }
                    true
                }
                NodeKind::Introduce(v) => {
                    kids[0].binary_search(&v).is_err() && with(kids[0], v) == node.bag
                }
                NodeKind::Forget(v) => {
                    kids[0].binary_search(&v).is_ok() && without(kids[0], v) == node.bag
                }
                NodeKind::Join => *kids[0] == node.bag && *kids[1] == node.bag,
            };
            if !ok_bag {
                errors.push(NiceViolation::BagMismatch(a));
            }
        }
        for (a, &count) in reached.iter().enumerate() {
            if count != 1 {
                errors.push(NiceViolation::Reachability(a));
            }
        }
        if errors.is_empty() {
            if let Err(es) = self.to_tree_decomposition().validate(g) {
                errors.extend(es.into_iter().map(NiceViolation::Decomposition));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

fn with(bag: &[Var], v: Var) -> Vec<Var> {
    let mut b = bag.to_vec();
    if let Err(pos) = b.binary_search(&v) {
        b.insert(pos, v);
    }
    b
}

fn without(bag: &[Var], v: Var) -> Vec<Var> {
    bag.iter().copied().filter(|&u| u != v).collect()
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Var>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    fn leaf_chain(&mut self, bag: &[Var]) -> usize {
        let mut cur = self.push(NodeKind::Leaf, vec![bag[0]], Vec::new());
        for &v in &bag[1..] {
            let b = with(&self.nodes[cur].bag, v);
            cur = self.push(NodeKind::Introduce(v), b, vec![cur]);
        }
        cur
    }

    /// Forgets what `target` lacks (ascending), then introduces what it adds.
    fn transition(&mut self, mut cur: usize, target: &[Var]) -> usize {
        let from = self.nodes[cur].bag.clone();
        for &v in &from {
            if target.binary_search(&v).is_err() {
                let b = without(&self.nodes[cur].bag, v);
                cur = self.push(NodeKind::Forget(v), b, vec![cur]);
            }
        }
        for &v in target {
            if from.binary_search(&v).is_err() {
                let b = with(&self.nodes[cur].bag, v);
                cur = self.push(NodeKind::Introduce(v), b, vec![cur]);
            }
        }
        cur
    }
}

/// Converts a valid tree decomposition into nice form.
///
/// Vertices that share a bag are grouped; each group's part of the tree is
/// rooted at its lowest-index node and converted separately, and every
/// resulting root is reduced by forgets to the bag holding its smallest
/// vertex. Empty bags are dropped.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let k = td.bags.len();
    // group vertices by bag co-occurrence
    let mut parent: BTreeMap<Var, Var> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<Var, Var>, v: Var) -> Var {
        let p = *parent.entry(v).or_insert(v);
        if p == v {
            return v;
        }
        let r = find(parent, p);
        parent.insert(v, r);
        r
    }
    for bag in &td.bags {
        for w in bag.windows(2) {
            let a = find(&mut parent, w[0]);
            let b = find(&mut parent, w[1]);
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
        if let Some(&v) = bag.first() {
            find(&mut parent, v);
        }
    }
    let group_of_node: Vec<Option<Var>> = td
        .bags
        .iter()
        .map(|b| b.first().map(|&v| find(&mut parent, v)))
        .collect();

    let adj = td.adjacency();
    let mut done = vec![false; k];
    let mut builder = Builder { nodes: Vec::new() };
    let mut roots = Vec::new();

    for start in 0..k {
        let Some(group) = group_of_node[start] else {
            continue;
        };
        if done[start] {
            continue;
        }
        // orient the group's subtree away from `start`
        let mut order = vec![start];
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        done[start] = true;
        let mut i = 0;
        while i < order.len() {
            let a = order[i];
            i += 1;
            let mut kids = Vec::new();
            for &b in &adj[a] {
                if !done[b] && group_of_node[b] == Some(group) {
                    done[b] = true;
                    kids.push(b);
                    order.push(b);
                }
            }
            children.insert(a, kids);
        }
        let mut built: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in order.iter().rev() {
            let bag = &td.bags[a];
            let kids = &children[&a];
            let out = if kids.is_empty() {
                builder.leaf_chain(bag)
            } else {
                let mut acc: Option<usize> = None;
                for c in kids {
                    let chain = builder.transition(built[c], bag);
                    acc = Some(match acc {
                        None => chain,
                        Some(prev) => builder.push(NodeKind::Join, bag.clone(), vec![prev, chain]),
                    });
                }
                acc.expect("at least one child")
            };
            built.insert(a, out);
        }
        let top = built[&start];
        let keep = [td.bags[start][0]];
        let root = builder.transition(top, &keep);
        roots.push(root);
    }

    NiceTreeDecomposition {
        nodes: builder.nodes,
        roots,
    }
}
