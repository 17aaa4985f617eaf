//! Tree decompositions of constraint graphs: a min-fill heuristic, a
//! validator for externally supplied decompositions, and conversion to nice
//! form.

mod nice;
pub mod text;

pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NiceViolation, NodeKind};

use std::collections::BTreeSet;

use crate::csp::{ConstraintGraph, Var};

/// Unrooted tree decomposition. Nodes are indexed `0..bags.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted, duplicate-free bags.
    pub bags: Vec<Vec<Var>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdError {
    #[error("bag of node {node} contains vertex {var}, which is not in the graph")]
    UnknownVertex { node: usize, var: Var },
    #[error("vertex {0} appears in no bag")]
    VertexUncovered(Var),
    #[error("edge {0}-{1} is contained in no bag")]
    EdgeUncovered(Var, Var),
    #[error("the nodes containing vertex {0} do not form a connected subtree")]
    DisconnectedOccurrence(Var),
    #[error("decomposition graph is not a tree: {0}")]
    NotATree(&'static str),
}

impl TreeDecomposition {
    /// Normalizes bags (sorted, deduplicated) and edge orientation.
    pub fn new(bags: Vec<Vec<Var>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let edges = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// `max |bag| - 1`, and 0 for a decomposition of the empty graph.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < self.bags.len() && b < self.bags.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    fn is_tree(&self) -> Result<(), TdError> {
        let k = self.bags.len();
        if k == 0 {
            return Err(TdError::NotATree("no nodes"));
        }
        if self.edges.iter().any(|&(a, b)| a >= k || b >= k) {
            return Err(TdError::NotATree("edge references a missing node"));
        }
        if self.edges.iter().any(|&(a, b)| a == b) {
            return Err(TdError::NotATree("self-loop"));
        }
        if self.edges.len() != k - 1 {
            return Err(TdError::NotATree("edge count is not nodes - 1"));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(TdError::NotATree("disconnected"))
        }
    }

    /// Checks the decomposition against `g`, returning every violation found.
    /// Occurrence connectivity is only checked once the node graph is a tree.
    pub fn validate(&self, g: &ConstraintGraph) -> Result<(), Vec<TdError>> {
        let mut errors = Vec::new();
        let tree = self.is_tree();
        if let Err(e) = &tree {
            errors.push(e.clone());
        }
        for (node, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v == 0 || v > g.n() {
                    errors.push(TdError::UnknownVertex { node, var: v });
                }
            }
        }
        let mut covered = vec![false; g.n() + 1];
        for bag in &self.bags {
            for &v in bag {
                if v <= g.n() {
                    covered[v] = true;
                }
            }
        }
        for v in 1..=g.n() {
            if !covered[v] {
                errors.push(TdError::VertexUncovered(v));
            }
        }
        for &(u, v) in g.edges() {
            let ok = self
                .bags
                .iter()
                .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
            if !ok {
                errors.push(TdError::EdgeUncovered(u, v));
            }
        }
        if tree.is_ok() {
            let adj = self.adjacency();
            for v in 1..=g.n() {
                let holders: Vec<usize> = (0..self.bags.len())
                    .filter(|&t| self.bags[t].binary_search(&v).is_ok())
                    .collect();
                let Some(&start) = holders.first() else {
                    continue;
                };
                let mut seen = BTreeSet::from([start]);
                let mut stack = vec![start];
                while let Some(a) = stack.pop() {
                    for &b in &adj[a] {
                        if self.bags[b].binary_search(&v).is_ok() && seen.insert(b) {
                            stack.push(b);
                        }
                    }
                }
                if seen.len() != holders.len() {
                    errors.push(TdError::DisconnectedOccurrence(v));
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// Tree decomposition from a min-fill elimination ordering.
///
/// The vertex with the fewest fill edges is eliminated next, ties going to
/// the smallest vertex. Each elimination creates the bag `{v} ∪ N(v)`; the
/// bag is attached to the bag of the earliest-eliminated remaining neighbor.
/// Elimination trees of different components are chained together, and bags
/// contained in an adjacent bag are contracted away.
pub fn heuristic_tree_decomposition(g: &ConstraintGraph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut adj: Vec<BTreeSet<Var>> = g
        .adjacency()
        .into_iter()
        .map(|a| a.into_iter().collect())
        .collect();
    let mut eliminated = vec![false; n + 1];
    let mut position = vec![usize::MAX; n + 1];
    let mut bags: Vec<Vec<Var>> = Vec::with_capacity(n);
    let mut order: Vec<Var> = Vec::with_capacity(n);

    for step in 0..n {
        let mut best: Option<(usize, Var)> = None;
        for v in 1..=n {
            if eliminated[v] {
                continue;
            }
            let nb: Vec<Var> = adj[v - 1].iter().copied().collect();
            let mut fill = 0usize;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a - 1].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if best.is_none_or(|(f, _)| fill < f) {
                best = Some((fill, v));
            }
        }
        let (_, v) = best.expect("a vertex remains");
        let nb: Vec<Var> = adj[v - 1].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a - 1].insert(b);
                adj[b - 1].insert(a);
            }
        }
        for &a in &nb {
            adj[a - 1].remove(&v);
        }
        adj[v - 1].clear();
        eliminated[v] = true;
        position[v] = step;
        let mut bag = nb;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        order.push(v);
    }

    // parent of bag i: bag of the earliest-eliminated other vertex in it
    let mut tree_adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        let parent = bag.iter().filter(|&&u| u != v).map(|&u| position[u]).min();
        match parent {
            Some(p) => {
                tree_adj[i].insert(p);
                tree_adj[p].insert(i);
            }
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree_adj[w[0]].insert(w[1]);
        tree_adj[w[1]].insert(w[0]);
    }

    // contract bags that are subsets of a neighbor
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let target = tree_adj[a]
                .iter()
                .copied()
                .find(|&b| bags[a].iter().all(|v| bags[b].binary_search(v).is_ok()));
            if let Some(b) = target {
                let others: Vec<usize> = tree_adj[a].iter().copied().filter(|&c| c != b).collect();
                for c in others {
                    tree_adj[c].remove(&a);
                    tree_adj[c].insert(b);
                    tree_adj[b].insert(c);
                }
                tree_adj[b].remove(&a);
                tree_adj[a].clear();
                alive[a] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut new_index = vec![usize::MAX; n];
    let mut out_bags = Vec::new();
    for a in 0..n {
        if alive[a] {
            new_index[a] = out_bags.len();
            out_bags.push(bags[a].clone());
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for &b in &tree_adj[a] {
            if a < b {
                edges.push((new_index[a], new_index[b]));
            }
        }
    }
    edges.sort_unstable();
    TreeDecomposition::new(out_bags, edges)
}
