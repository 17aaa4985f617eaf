//! Writing a rational point of the extended formulation as an average of
//! integral points, built bottom-up over the nice tree decomposition.
//!
//! With `M` the common denominator, the point is represented as `M` partial
//! integral vectors. A partial vector selects at most one configuration per
//! bag; the count of vectors selecting a configuration equals `M` times its
//! value. Leaves create the vectors, introduce nodes split each group among
//! the extensions of its configuration, forget nodes record the restriction,
//! and join nodes pair the vectors of both children configuration by
//! configuration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{LpModel, ModelKind, VarKind};
use crate::ratlp::{check_feasible, lcm_of_denominators, Rational, Violation};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

/// Largest common denominator accepted.
const MAX_MULTIPLIER: u64 = 1 << 20;

const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub multiplier: u64,
    /// Distinct integral points with their multiplicities; multiplicities sum
    /// to `multiplier`.
    pub points: Vec<(Vec<Rational>, u64)>,
}

impl Decomposition {
    /// `Σ multiplicity · point / multiplier`.
    pub fn average(&self) -> Vec<Rational> {
        let len = self.points.first().map_or(0, |(p, _)| p.len());
        let mut acc = vec![Rational::zero(); len];
        for (p, mult) in &self.points {
            let m = Rational::from_integer(*mult as i64);
            for (a, x) in acc.iter_mut().zip(p) {
                if !x.is_zero() {
                    *a += &m * x;
                }
            }
        }
        let scale = Rational::from_integer(self.multiplier as i64);
        acc.into_iter().map(|a| a / &scale).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("expected an extended model")]
    WrongModel,
    #[error("point violates the model: {0}")]
    InfeasibleInput(Violation),
    #[error("common denominator {0} is too large")]
    TooLarge(BigInt),
    #[error("decomposition failed: {0}")]
    Internal(String),
}

type Partial = Vec<u32>;

fn internal(msg: impl Into<String>) -> DecomposeError {
    DecomposeError::Internal(msg.into())
}

pub fn decompose_fractional(
    model: &LpModel,
    ntd: &NiceTreeDecomposition,
    f: &[Rational],
) -> Result<Decomposition, DecomposeError> {
    if model.kind != ModelKind::Extended {
        return Err(DecomposeError::WrongModel);
    }
    check_feasible(&model.lp, f).map_err(DecomposeError::InfeasibleInput)?;
    let lcm = lcm_of_denominators(f);
    let m = lcm
        .to_u64()
        .filter(|&m| m <= MAX_MULTIPLIER)
        .ok_or_else(|| DecomposeError::TooLarge(lcm.clone()))?;
    let big_m = Rational::from_integer(m as i64);
    let count: Vec<u64> = f
        .iter()
        .map(|x| (x * &big_m).to_i64().expect("integral by choice of M") as u64)
        .collect();
    let nbags = model.bags.len();
    let bag_of = |a: usize| {
        model
            .bag_index(&ntd.nodes[a].bag)
            .ok_or_else(|| internal(format!("bag of node {a} has no variables")))
    };

    let mut lists: Vec<Option<Vec<Partial>>> = vec![None; ntd.len()];
    for a in 0..ntd.len() {
        let node = &ntd.nodes[a];
        let bi = bag_of(a)?;
        let list = match node.kind {
            NodeKind::Leaf => {
                let mut out = Vec::with_capacity(m as usize);
                for &j in &model.bags[bi].1 {
                    for _ in 0..count[j] {
                        let mut p = vec![UNSET; nbags];
                        p[bi] = j as u32;
                        out.push(p);
                    }
                }
                out
            }
            NodeKind::Introduce(_) => {
                let child = node.children[0];
                let ci = bag_of(child)?;
                let input = lists[child].take().expect("child processed");
                introduce(model, &count, input, ci, bi)?
            }
            NodeKind::Forget(_) => {
                let child = node.children[0];
                let ci = bag_of(child)?;
                let mut input = lists[child].take().expect("child processed");
                let small = &model.bags[bi].0;
                for p in input.iter_mut() {
                    let k = model.config(p[ci] as usize).restrict(small);
                    let j = model
                        .var_index(&VarKind::F(k))
                        .ok_or_else(|| internal("restriction has no variable"))?
                        as u32;
                    if p[bi] == UNSET {
                        p[bi] = j;
                    } else if p[bi] != j {
                        return Err(internal("forget node disagrees with an earlier choice"));
                    }
                }
                input
            }
            NodeKind::Join => {
                let left = lists[node.children[0]].take().expect("child processed");
                let right = lists[node.children[1]].take().expect("child processed");
                join(left, right, bi)?
            }
        };
        if list.len() as u64 != m {
            return Err(internal(format!(
                "node {a} holds {} vectors, expected {m}",
                list.len()
            )));
        }
        lists[a] = Some(list);
    }

    let mut combined: Vec<Partial> = vec![vec![UNSET; nbags]; m as usize];
    for &r in &ntd.roots {
        let list = lists[r].take().expect("root processed");
        for (acc, p) in combined.iter_mut().zip(list) {
            merge_into(acc, &p)?;
        }
    }

    let mut grouped: BTreeMap<Partial, u64> = BTreeMap::new();
    for p in combined {
        if p.contains(&UNSET) {
            return Err(internal("some bag is not reached from any root"));
        }
        *grouped.entry(p).or_insert(0) += 1;
    }
    let points = grouped
        .into_iter()
        .map(|(p, mult)| {
            let mut x = vec![Rational::zero(); model.num_vars()];
            for j in p {
                x[j as usize] = Rational::one();
            }
            (x, mult)
        })
        .collect::<Vec<_>>();
    for (x, _) in &points {
        check_feasible(&model.lp, x)
            .map_err(|v| internal(format!("output point infeasible: {v}")))?;
    }
    Ok(Decomposition {
        multiplier: m,
        points,
    })
}

fn introduce(
    model: &LpModel,
    count: &[u64],
    input: Vec<Partial>,
    ci: usize,
    bi: usize,
) -> Result<Vec<Partial>, DecomposeError> {
    let small = &model.bags[ci].0;
    let mut extensions: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &j in &model.bags[bi].1 {
        let k = model.config(j).restrict(small);
        let jk = model
            .var_index(&VarKind::F(k))
            .ok_or_else(|| internal("restriction has no variable"))?;
        extensions.entry(jk as u32).or_default().push(j);
    }
    let mut groups: BTreeMap<u32, Vec<Partial>> = BTreeMap::new();
    for p in input {
        groups.entry(p[ci]).or_default().push(p);
    }
    let mut out = Vec::new();
    for (jk, group) in groups {
        let exts = extensions.get(&jk).map(Vec::as_slice).unwrap_or(&[]);
        let mut quota: Vec<u64> = exts.iter().map(|&j| count[j]).collect();
        let mut pending = Vec::new();
        for p in group {
            if p[bi] == UNSET {
                pending.push(p);
                continue;
            }
            let pos = exts
                .iter()
                .position(|&j| j as u32 == p[bi])
                .ok_or_else(|| internal("introduce node disagrees with an earlier choice"))?;
            quota[pos] = quota[pos]
                .checked_sub(1)
                .ok_or_else(|| internal("introduce quota exceeded"))?;
            out.push(p);
        }
        let mut slot = 0;
        for mut p in pending {
            while slot < exts.len() && quota[slot] == 0 {
                slot += 1;
            }
            if slot == exts.len() {
                return Err(internal("introduce group larger than its extensions"));
            }
            quota[slot] -= 1;
            p[bi] = exts[slot] as u32;
            out.push(p);
        }
        if quota.iter().any(|&q| q != 0) {
            return Err(internal("introduce group smaller than its extensions"));
        }
    }
    Ok(out)
}

fn join(
    mut left: Vec<Partial>,
    mut right: Vec<Partial>,
    bi: usize,
) -> Result<Vec<Partial>, DecomposeError> {
    if left.len() != right.len() {
        return Err(internal("join children hold different numbers of vectors"));
    }
    let key = |p: &Partial| (p[bi], p.clone());
    left.sort_by_key(key);
    right.sort_by_key(key);
    let mut out = Vec::with_capacity(left.len());
    for (mut a, b) in left.into_iter().zip(right) {
        if a[bi] != b[bi] {
            return Err(internal("join children disagree on a configuration count"));
        }
        merge_into(&mut a, &b)?;
        out.push(a);
    }
    Ok(out)
}

fn merge_into(acc: &mut Partial, p: &Partial) -> Result<(), DecomposeError> {
    for (a, &b) in acc.iter_mut().zip(p) {
        if b == UNSET {
            continue;
        }
        if *a == UNSET {
            *a = b;
        } else if *a != b {
            return Err(internal("merged vectors disagree on a bag"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Assignment;
    use crate::extform::tests::is_k3;
    use crate::extform::{build_extended_lp, encode_assignment};
    use crate::treedec::{make_nice, TreeDecomposition};

    fn setup() -> (crate::csp::CspInstance, LpModel, NiceTreeDecomposition) {
        let q = is_k3();
        let ntd = make_nice(&TreeDecomposition::new(vec![vec![1, 2, 3]], vec![]));
        let ext = build_extended_lp(&q, &ntd).unwrap();
        (q, ext, ntd)
    }

    fn combo(points: &[Vec<Rational>], weights: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); points[0].len()];
        for (p, w) in points.iter().zip(weights) {
            for (o, x) in out.iter_mut().zip(p) {
                *o += w * x;
            }
        }
        out
    }

    #[test]
    fn integral_point_is_its_own_decomposition() {
        let (q, ext, ntd) = setup();
        let f = encode_assignment(&ext, &q, &Assignment(vec![0, 1, 0])).unwrap();
        let d = decompose_fractional(&ext, &ntd, &f).unwrap();
        assert_eq!(d.multiplier, 1);
        assert_eq!(d.points, vec![(f, 1)]);
    }

    #[test]
    fn half_half_combination() {
        let (q, ext, ntd) = setup();
        let a = encode_assignment(&ext, &q, &Assignment(vec![1, 0, 0])).unwrap();
        let b = encode_assignment(&ext, &q, &Assignment(vec![0, 1, 0])).unwrap();
        let half = Rational::new(1, 2);
        let f = combo(&[a.clone(), b.clone()], &[half.clone(), half]);
        let d = decompose_fractional(&ext, &ntd, &f).unwrap();
        assert_eq!(d.multiplier, 2);
        let mut pts: Vec<_> = d.points.clone();
        pts.sort();
        let mut expect = vec![(a, 1), (b, 1)];
        expect.sort();
        assert_eq!(pts, expect);
        assert_eq!(d.average(), f);
    }

    #[test]
    fn uniform_over_four_configurations() {
        let (q, ext, ntd) = setup();
        let zs = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let pts: Vec<_> = zs
            .iter()
            .map(|z| encode_assignment(&ext, &q, &Assignment(z.to_vec())).unwrap())
            .collect();
        let f = combo(&pts, &vec![Rational::new(1, 4); 4]);
        let d = decompose_fractional(&ext, &ntd, &f).unwrap();
        assert_eq!(d.multiplier, 4);
        assert_eq!(d.points.len(), 4);
        assert!(d.points.iter().all(|(_, m)| *m == 1));
        assert_eq!(d.average(), f);
    }

    #[test]
    fn rejects_infeasible_point() {
        let (_, ext, ntd) = setup();
        let f = vec![Rational::zero(); ext.num_vars()];
        assert!(matches!(
            decompose_fractional(&ext, &ntd, &f),
            Err(DecomposeError::InfeasibleInput(_))
        ));
    }
}
