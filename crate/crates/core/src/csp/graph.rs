use std::collections::BTreeSet;

use super::Var;

/// Simple undirected graph on vertices `1..=n`. Edges are stored as `(u, v)`
/// with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    n: usize,
    edges: BTreeSet<(Var, Var)>,
}

impl ConstraintGraph {
    /// Builds a graph, normalizing edge orientation and dropping self-loops.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Var, Var)>) -> Self {
        let edges = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect::<BTreeSet<_>>();
        debug_assert!(edges.iter().all(|&(u, v)| u >= 1 && v <= n));
        ConstraintGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(Var, Var)> {
        &self.edges
    }

    pub fn has_edge(&self, u: Var, v: Var) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbor lists, indexed by `v - 1`.
    pub fn adjacency(&self) -> Vec<Vec<Var>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Var>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 1..=self.n {
            if seen[s - 1] {
                continue;
            }
            seen[s - 1] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &adj[u - 1] {
                    if !seen[w - 1] {
                        seen[w - 1] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}
