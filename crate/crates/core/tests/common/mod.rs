#![allow(dead_code)]

use csp_extform::csp::{Assignment, ConstraintGraph, CspInstance, Payoff};
use csp_extform::random::{case_rng, random_instance, InstanceParams};
use csp_extform::treedec::TreeDecomposition;

pub fn instance(seed: u64) -> CspInstance {
    random_instance(&mut case_rng(seed, 0), &InstanceParams::default())
}

pub fn small_instance(seed: u64) -> CspInstance {
    let p = InstanceParams {
        max_vars: 3,
        max_domain: 2,
        max_hard: 2,
        max_soft: 2,
        max_denominator: 7,
    };
    random_instance(&mut case_rng(seed, 1), &p)
}

/// Drops payoff-table soft constraints.
pub fn relation_only(inst: &CspInstance) -> CspInstance {
    let mut q = inst.clone();
    q.soft.retain(|s| matches!(s.payoff, Payoff::Relation(_)));
    q
}

pub fn all_assignments(inst: &CspInstance) -> Vec<Assignment> {
    let mut out = vec![Vec::new()];
    for d in &inst.domains {
        out = out
            .into_iter()
            .flat_map(|z: Vec<i64>| {
                d.iter().map(move |&a| {
                    let mut z = z.clone();
                    z.push(a);
                    z
                })
            })
            .collect();
    }
    out.into_iter().map(Assignment).collect()
}

pub fn feasible_assignments(inst: &CspInstance) -> Vec<Assignment> {
    all_assignments(inst)
        .into_iter()
        .filter(|z| inst.is_feasible(z).unwrap())
        .collect()
}

/// Decomposition read off an elimination order: each vertex's bag is itself
/// plus its later neighbours in the filled graph, attached to the earliest
/// of those neighbours.
pub fn td_from_order(g: &ConstraintGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default()];
    adj.extend(g.adjacency().into_iter().map(|a| a.into_iter().collect()));
    let mut pos = vec![0; n + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::new();
    let mut later = Vec::new();
    for &v in order {
        let nb: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        let mut bag = nb.clone();
        bag.push(v);
        bags.push(bag);
        later.push(nb.iter().copied().min_by_key(|&u| pos[u]));
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, p) in later.iter().enumerate() {
        match p {
            Some(u) => edges.push((i, pos[*u])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges)
}

/// Treewidth by trying every elimination order.
pub fn exact_treewidth(g: &ConstraintGraph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (1..=n).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |o| {
        best = best.min(td_from_order(g, o).width())
    });
    best
}

fn permute(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}
