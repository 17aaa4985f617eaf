//! Reference solvers that do not touch the LP machinery: exhaustive
//! enumeration and dynamic programming over a nice tree decomposition.

use std::collections::HashMap;

use crate::csp::{Assignment, ConstraintRef, CspInstance, Value};
use crate::extform::{enumerate_configurations, Configuration};
use crate::ratlp::{Rational, Sense};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStatus {
    Feasible {
        optimum: Rational,
        witness: Assignment,
    },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Number of feasible assignments; only brute force counts them.
    pub feasible_count: Option<u128>,
}

impl OracleResult {
    pub fn optimum(&self) -> Option<&Rational> {
        match &self.status {
            OracleStatus::Feasible { optimum, .. } => Some(optimum),
            OracleStatus::Infeasible => None,
        }
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match &self.status {
            OracleStatus::Feasible { witness, .. } => Some(witness),
            OracleStatus::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{space} assignments exceed the enumeration cap of {cap}")]
    CapExceeded { space: u128, cap: u128 },
    #[error("scope of constraint {0} is contained in no bag")]
    ScopeNotCovered(ConstraintRef),
}

pub fn brute_force(instance: &CspInstance) -> Result<OracleResult, OracleError> {
    brute_force_with_cap(instance, DEFAULT_BRUTE_FORCE_CAP)
}

/// Enumerates every assignment in lexicographic order. Ties keep the first
/// optimum found, so the witness is the lexicographically smallest optimal
/// assignment.
pub fn brute_force_with_cap(
    instance: &CspInstance,
    cap: u128,
) -> Result<OracleResult, OracleError> {
    let space = instance.assignment_space();
    if space > cap {
        return Err(OracleError::CapExceeded { space, cap });
    }
    let n = instance.n;
    if space == 0 {
        return Ok(OracleResult {
            status: OracleStatus::Infeasible,
            feasible_count: Some(0),
        });
    }
    let mut idx = vec![0usize; n];
    let mut count: u128 = 0;
    let mut best: Option<(Rational, Vec<Value>)> = None;
    loop {
        let z = Assignment((0..n).map(|i| instance.domains[i][idx[i]]).collect());
        if instance
            .hard
            .iter()
            .all(|h| h.allows(&z.restrict(&h.scope)))
        {
            count += 1;
            let value = instance.score_unchecked(&z);
            let better = match &best {
                None => true,
                Some((b, _)) => match instance.sense {
                    Sense::Max => value > *b,
                    Sense::Min => value < *b,
                },
            };
            if better {
                best = Some((value, z.0));
            }
        }
        // odometer, last variable fastest
        let mut i = n;
        loop {
            if i == 0 {
                let status = match best {
                    Some((optimum, w)) => OracleStatus::Feasible {
                        optimum,
                        witness: Assignment(w),
                    },
                    None => OracleStatus::Infeasible,
                };
                return Ok(OracleResult {
                    status,
                    feasible_count: Some(count),
                });
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < instance.domains[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Dynamic program over the bags of `ntd`, using the same configuration sets
/// as the extended formulation.
///
/// Both senses are solved by maximizing the weighted payoff; a minimum
/// shortfall is the total weight minus that maximum. The witness is the
/// lexicographically smallest optimal assignment: variables are pinned one
/// at a time to the smallest value that keeps the optimum, and the final
/// fully pinned run is read back through the back-pointers.
pub fn treewidth_dp(
    instance: &CspInstance,
    ntd: &NiceTreeDecomposition,
) -> Result<OracleResult, OracleError> {
    let Some((best, _)) = run_dp(instance, ntd)? else {
        return Ok(OracleResult {
            status: OracleStatus::Infeasible,
            feasible_count: None,
        });
    };
    let mut pinned = instance.clone();
    for v in 1..=instance.n {
        let dom = instance.domain(v).to_vec();
        for (i, &a) in dom.iter().enumerate() {
            let mut trial = pinned.clone();
            trial.domains[v - 1] = vec![a];
            let keep =
                i + 1 == dom.len() || run_dp(&trial, ntd)?.is_some_and(|(val, _)| val == best);
            if keep {
                pinned = trial;
                break;
            }
        }
    }
    let (val, witness) = run_dp(&pinned, ntd)?.expect("pinned instance stays feasible");
    debug_assert_eq!(val, best);
    let optimum = match instance.sense {
        Sense::Max => best,
        Sense::Min => &instance.total_weight() - &best,
    };
    Ok(OracleResult {
        status: OracleStatus::Feasible { optimum, witness },
        feasible_count: None,
    })
}

/// Best weighted payoff and a witness, or `None` if infeasible.
fn run_dp(
    instance: &CspInstance,
    ntd: &NiceTreeDecomposition,
) -> Result<Option<(Rational, Assignment)>, OracleError> {
    let order = ntd.preorder();
    // configurations per distinct bag
    let mut bag_id: HashMap<&[usize], usize> = HashMap::new();
    let mut configs: Vec<Vec<Configuration>> = Vec::new();
    let mut lookup: Vec<HashMap<Configuration, usize>> = Vec::new();
    let mut node_bag = vec![0usize; ntd.len()];
    for &a in &order {
        let bag = ntd.nodes[a].bag.as_slice();
        let id = *bag_id.entry(bag).or_insert_with(|| {
            let ks = enumerate_configurations(instance, bag);
            lookup.push(
                ks.iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, k)| (k, i))
                    .collect(),
            );
            configs.push(ks);
            configs.len() - 1
        });
        node_bag[a] = id;
    }

    // each soft constraint scores at the first node (pre-order) covering it
    let mut local: Vec<Option<Vec<Rational>>> = vec![None; ntd.len()];
    for s in &instance.soft {
        let a = *order
            .iter()
            .find(|&&a| {
                let bag = &ntd.nodes[a].bag;
                s.scope.iter().all(|v| bag.binary_search(v).is_ok())
            })
            .ok_or(OracleError::ScopeNotCovered(ConstraintRef::Soft(s.id)))?;
        let ks = &configs[node_bag[a]];
        let scores = local[a].get_or_insert_with(|| vec![Rational::zero(); ks.len()]);
        for (i, k) in ks.iter().enumerate() {
            let t = k.tuple(&s.scope).expect("scope inside bag");
            let p = s.payoff(&t);
            if !p.is_zero() {
                scores[i] += &s.weight * &p;
            }
        }
    }
    for (i, h) in instance.hard.iter().enumerate() {
        let covered = ntd
            .nodes
            .iter()
            .any(|n| h.scope.iter().all(|v| n.bag.binary_search(v).is_ok()));
        if !covered {
            return Err(OracleError::ScopeNotCovered(ConstraintRef::Hard(i)));
        }
    }

    // value per configuration; back-pointer into the (first) child's table
    let mut value: Vec<Vec<Option<Rational>>> = vec![Vec::new(); ntd.len()];
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); ntd.len()];
    for a in 0..ntd.len() {
        let node = &ntd.nodes[a];
        let ks = &configs[node_bag[a]];
        let mut vals: Vec<Option<Rational>> = vec![None; ks.len()];
        let mut bp = vec![usize::MAX; ks.len()];
        match node.kind {
            NodeKind::Leaf => {
                for v in vals.iter_mut() {
                    *v = Some(Rational::zero());
                }
            }
            NodeKind::Introduce(_) => {
                let b = node.children[0];
                let child_bag = &ntd.nodes[b].bag;
                let child_lookup = &lookup[node_bag[b]];
                for (i, k) in ks.iter().enumerate() {
                    let ci = child_lookup[&k.restrict(child_bag)];
                    vals[i] = value[b][ci].clone();
                    bp[i] = ci;
                }
            }
            NodeKind::Forget(_) => {
                let b = node.children[0];
                let parent_lookup = &lookup[node_bag[a]];
                for (ci, k) in configs[node_bag[b]].iter().enumerate() {
                    let Some(cv) = &value[b][ci] else { continue };
                    let i = parent_lookup[&k.restrict(&node.bag)];
                    if vals[i].as_ref().is_none_or(|cur| cv > cur) {
                        vals[i] = Some(cv.clone());
                        bp[i] = ci;
                    }
                }
            }
            NodeKind::Join => {
                let (l, r) = (node.children[0], node.children[1]);
                for i in 0..ks.len() {
                    if let (Some(x), Some(y)) = (&value[l][i], &value[r][i]) {
                        vals[i] = Some(x + y);
                        bp[i] = i;
                    }
                }
            }
        }
        if let Some(scores) = &local[a] {
            for (v, s) in vals.iter_mut().zip(scores) {
                if let Some(v) = v {
                    *v += s;
                }
            }
        }
        value[a] = vals;
        back[a] = bp;
    }

    let mut total = Rational::zero();
    let mut z: Vec<Option<Value>> = vec![None; instance.n];
    for &r in &ntd.roots {
        let mut best: Option<(usize, &Rational)> = None;
        for (i, v) in value[r].iter().enumerate() {
            if let Some(v) = v {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
        let Some((i, v)) = best else {
            return Ok(None);
        };
        total += v;
        // walk down the back-pointers
        let mut stack = vec![(r, i)];
        while let Some((a, i)) = stack.pop() {
            for &(var, val) in configs[node_bag[a]][i].pairs() {
                z[var - 1] = Some(val);
            }
            let node = &ntd.nodes[a];
            match node.kind {
                NodeKind::Leaf => {}
                NodeKind::Introduce(_) | NodeKind::Forget(_) => {
                    stack.push((node.children[0], back[a][i]));
                }
                NodeKind::Join => {
                    stack.push((node.children[0], i));
                    stack.push((node.children[1], i));
                }
            }
        }
    }
    if instance.n > 0 && ntd.is_empty() {
        return Ok(None);
    }
    let z: Option<Vec<Value>> = z.into_iter().collect();
    Ok(z.map(|z| (total, Assignment(z))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedec::{heuristic_tree_decomposition, make_nice, TreeDecomposition};

    fn is_k3() -> CspInstance {
        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for (u, v) in [(1, 2), (1, 3), (2, 3)] {
            q.add_hard(vec![u, v], [vec![0, 0], vec![0, 1], vec![1, 0]]);
        }
        for v in 1..=3 {
            q.add_soft_relation(vec![v], Rational::one(), [vec![1]]);
        }
        q
    }

    fn nice_of(q: &CspInstance) -> NiceTreeDecomposition {
        make_nice(&heuristic_tree_decomposition(&q.constraint_graph()))
    }

    #[test]
    fn brute_force_is_k3() {
        let r = brute_force(&is_k3()).unwrap();
        assert_eq!(r.optimum(), Some(&Rational::one()));
        assert_eq!(r.feasible_count, Some(4));
        assert_eq!(r.witness(), Some(&Assignment(vec![0, 0, 1])));
    }

    #[test]
    fn brute_force_k4_three_colors_infeasible() {
        let mut q = CspInstance::uniform(4, &[1, 2, 3], Sense::Max);
        for u in 1..=4 {
            for v in u + 1..=4 {
                let pairs: Vec<Vec<Value>> = (1..=3)
                    .flat_map(|i| (1..=3).filter(move |&j| j != i).map(move |j| vec![i, j]))
                    .collect();
                q.add_hard(vec![u, v], pairs);
            }
        }
        let r = brute_force(&q).unwrap();
        assert_eq!(r.status, OracleStatus::Infeasible);
        assert_eq!(r.feasible_count, Some(0));
        assert_eq!(
            treewidth_dp(&q, &nice_of(&q)).unwrap().status,
            OracleStatus::Infeasible
        );
    }

    #[test]
    fn unconstrained_instance() {
        let q = CspInstance::uniform(3, &[0, 1, 2], Sense::Max);
        let r = brute_force(&q).unwrap();
        assert_eq!(r.optimum(), Some(&Rational::zero()));
        assert_eq!(r.feasible_count, Some(27));
        let d = treewidth_dp(&q, &nice_of(&q)).unwrap();
        assert_eq!(d.optimum(), Some(&Rational::zero()));
        assert_eq!(d.witness(), Some(&Assignment(vec![0, 0, 0])));
    }

    #[test]
    fn cap_is_enforced() {
        let q = CspInstance::uniform(11, &[0, 1, 2, 3, 4], Sense::Max);
        assert_eq!(
            brute_force(&q),
            Err(OracleError::CapExceeded {
                space: 48_828_125,
                cap: DEFAULT_BRUTE_FORCE_CAP
            })
        );
        assert!(matches!(
            brute_force_with_cap(&q, 1000),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn dp_examples() {
        let q = is_k3();
        let r = treewidth_dp(&q, &nice_of(&q)).unwrap();
        assert_eq!(r.optimum(), Some(&Rational::one()));
        assert_eq!(r.witness(), Some(&Assignment(vec![0, 0, 1])));

        let mut cut = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for (u, v) in [(1, 2), (2, 3)] {
            cut.add_soft_relation(vec![u, v], Rational::one(), [vec![0, 1], vec![1, 0]]);
        }
        let r = treewidth_dp(&cut, &nice_of(&cut)).unwrap();
        assert_eq!(r.optimum(), Some(&Rational::from_integer(2)));
        assert_eq!(r.witness(), Some(&Assignment(vec![0, 1, 0])));

        let mut one = CspInstance::uniform(1, &[0, 1], Sense::Max);
        one.add_soft_relation(vec![1], Rational::new(5, 2), [vec![1]]);
        let r = treewidth_dp(&one, &nice_of(&one)).unwrap();
        assert_eq!(r.optimum(), Some(&Rational::new(5, 2)));
    }

    #[test]
    fn dp_minimization_and_alternative_decomposition() {
        let q = is_k3().with_sense(Sense::Min);
        let bf = brute_force(&q).unwrap();
        assert_eq!(bf.optimum(), Some(&Rational::from_integer(2)));
        let one_bag = make_nice(&TreeDecomposition::new(vec![vec![1, 2, 3]], vec![]));
        let dp = treewidth_dp(&q, &one_bag).unwrap();
        assert_eq!(
            dp,
            OracleResult {
                feasible_count: None,
                ..bf
            }
        );
    }
}
