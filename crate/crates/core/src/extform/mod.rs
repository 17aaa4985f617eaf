//! Configurations, the local relaxation over constraint scopes, the extended
//! formulation over the bags of a nice tree decomposition, projections
//! between them, and decomposition of fractional points into integral ones.

mod build;
mod decompose;
pub mod lpformat;
mod project;

pub use build::{
    build_base_lp, build_extended_lp, build_extended_lp_with, formulation_stats,
    DecompositionSummary, ExtformError, FormulationStats, LpModel, ModelKind, Provenance, VarKind,
    DEFAULT_MAX_CONFIGS,
};
pub use decompose::{decompose_fractional, DecomposeError, Decomposition};
pub use project::{
    encode_assignment, oct_deletion_set, proj1, proj2, proj_e, proj_id, proj_oct, proj_v, ProjError,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::csp::{CspInstance, Value, Var};

/// Partial assignment: sorted `(variable, value)` pairs. Variables outside
/// the support are unassigned. The empty configuration is the one with empty
/// support.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<(Var, Value)>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable {0} is already assigned in the configuration")]
pub struct AlreadyAssigned(pub Var);

impl Configuration {
    pub fn empty() -> Self {
        Configuration(Vec::new())
    }

    /// Sorts the pairs; panics on a repeated variable.
    pub fn from_pairs(mut pairs: Vec<(Var, Value)>) -> Self {
        pairs.sort_unstable();
        assert!(
            pairs.windows(2).all(|w| w[0].0 != w[1].0),
            "variable repeated in configuration"
        );
        Configuration(pairs)
    }

    pub fn pairs(&self) -> &[(Var, Value)] {
        &self.0
    }

    pub fn support(&self) -> Vec<Var> {
        self.0.iter().map(|&(v, _)| v).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Var) -> Option<Value> {
        self.0
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.0[i].1)
    }

    /// Values on the sorted `scope`; `None` if some scope variable is unassigned.
    pub fn tuple(&self, scope: &[Var]) -> Option<Vec<Value>> {
        scope.iter().map(|&v| self.get(v)).collect()
    }

    /// Keeps only the pairs whose variable lies in `vars` (any order).
    pub fn restrict(&self, vars: &[Var]) -> Configuration {
        Configuration(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .copied()
                .collect(),
        )
    }

    /// `K[v <- a]`. Domain membership of `a` is the caller's concern.
    pub fn assign(&self, v: Var, a: Value) -> Result<Configuration, AlreadyAssigned> {
        match self.0.binary_search_by_key(&v, |&(u, _)| u) {
            Ok(_) => Err(AlreadyAssigned(v)),
            Err(pos) => {
                let mut pairs = self.0.clone();
                pairs.insert(pos, (v, a));
                Ok(Configuration(pairs))
            }
        }
    }

    /// Token usable inside LP identifiers: `1_0.2_n3`, or `L` when empty.
    pub fn token(&self) -> String {
        if self.0.is_empty() {
            return "L".to_string();
        }
        self.0
            .iter()
            .map(|&(v, a)| {
                if a < 0 {
                    format!("{v}_n{}", a.unsigned_abs())
                } else {
                    format!("{v}_{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}={a}")?;
        }
        f.write_str("}")
    }
}

/// All configurations with support `w`, in lexicographic order of values:
/// the in-domain tuples satisfying every hard constraint whose scope lies
/// inside `w`. For `w = ∅` this is the single empty configuration.
pub fn enumerate_configurations(instance: &CspInstance, w: &[Var]) -> Vec<Configuration> {
    enumerate_limited(instance, w, usize::MAX).expect("no limit")
}

/// As [`enumerate_configurations`], giving up with `None` once more than
/// `limit` configurations have been found.
pub(crate) fn enumerate_limited(
    instance: &CspInstance,
    w: &[Var],
    limit: usize,
) -> Option<Vec<Configuration>> {
    let mut w = w.to_vec();
    w.sort_unstable();
    w.dedup();
    let pos: BTreeMap<Var, usize> = w.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // hard constraints inside w, checked once their last variable is set
    let mut checks: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); w.len()];
    for (h, c) in instance.hard.iter().enumerate() {
        let idx: Option<Vec<usize>> = c.scope.iter().map(|v| pos.get(v).copied()).collect();
        if let Some(idx) = idx {
            match idx.iter().max() {
                Some(&last) => checks[last].push((h, idx)),
                None => {
                    if !c.allows(&[]) {
                        return Some(Vec::new());
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; w.len()];
    let mut values: Vec<Value> = vec![0; w.len()];
    let mut depth = 0usize;
    if w.is_empty() {
        return Some(vec![Configuration::empty()]);
    }
    loop {
        let dom = instance.domain(w[depth]);
        if choice[depth] >= dom.len() {
            if depth == 0 {
                break;
            }
            choice[depth] = 0;
            depth -= 1;
            choice[depth] += 1;
            continue;
        }
        values[depth] = dom[choice[depth]];
        let ok = checks[depth].iter().all(|(h, idx)| {
            let t: Vec<Value> = idx.iter().map(|&i| values[i]).collect();
            instance.hard[*h].allows(&t)
        });
        if !ok {
            choice[depth] += 1;
        } else if depth + 1 == w.len() {
            if out.len() == limit {
                return None;
            }
            out.push(Configuration(
                w.iter().copied().zip(values.iter().copied()).collect(),
            ));
            choice[depth] += 1;
        } else {
            depth += 1;
        }
    }
    Some(out)
}
