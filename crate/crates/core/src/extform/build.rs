use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{enumerate_configurations, enumerate_limited, Configuration};
use crate::csp::{ConstraintRef, CspInstance, Value, Var};
use crate::ratlp::{Constraint, LinearProgram, Rational, Relation, Sense};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

pub const DEFAULT_MAX_CONFIGS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Indicator that variable `var` takes `value`.
    Y { var: Var, value: Value },
    /// Indicator that the scope of `constraint` is assigned as `config`.
    G {
        constraint: ConstraintRef,
        config: Configuration,
    },
    /// Indicator that a bag is assigned as the configuration.
    F(Configuration),
}

impl VarKind {
    /// Identifier for LP files.
    pub fn name(&self) -> String {
        match self {
            VarKind::Y { var, value } if *value < 0 => format!("y_{var}_n{}", value.unsigned_abs()),
            VarKind::Y { var, value } => format!("y_{var}_{value}"),
            VarKind::G { constraint, config } => format!("g_{constraint}_{}", config.token()),
            VarKind::F(k) => format!("f_{}", k.token()),
        }
    }
}

/// Family a model row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Values of one variable sum to one.
    SumToOne,
    /// Scope indicators agree with the value indicators.
    Consistency,
    /// Configurations of one bag sum to one.
    BagSum,
    /// Introduce-node coupling.
    Introduce,
    /// Forget-node coupling.
    Forget,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::SumToOne => "one",
            Provenance::Consistency => "cons",
            Provenance::BagSum => "bag",
            Provenance::Introduce => "intro",
            Provenance::Forget => "forget",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Base,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DecompositionSummary {
    pub nodes: usize,
    pub width: usize,
}

#[derive(Debug, Clone)]
pub struct LpModel {
    pub kind: ModelKind,
    pub lp: LinearProgram,
    pub vars: Vec<VarKind>,
    pub rows: Vec<Provenance>,
    index: HashMap<VarKind, usize>,
    /// Extended models: each distinct bag with the indices of its variables.
    pub bags: Vec<(Vec<Var>, Vec<usize>)>,
    bag_index: HashMap<Vec<Var>, usize>,
    /// Extended models: designated bag (index into `bags`) of each variable,
    /// at position `v - 1`.
    pub vertex_bag: Vec<usize>,
    /// Extended models: designated bag of each constraint scope.
    pub constraint_bag: BTreeMap<ConstraintRef, usize>,
    pub max_domain: usize,
    pub decomposition: Option<DecompositionSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtformError {
    #[error("scope of constraint {0} is contained in no bag")]
    ScopeNotCovered(ConstraintRef),
    #[error("variable {0} is contained in no bag")]
    VertexNotCovered(Var),
    #[error("more than {limit} configuration variables; aborting generation")]
    TooManyConfigurations { limit: usize },
}

impl LpModel {
    fn new(kind: ModelKind, sense: Sense, max_domain: usize) -> Self {
        LpModel {
            kind,
            lp: LinearProgram::new(sense),
            vars: Vec::new(),
            rows: Vec::new(),
            index: HashMap::new(),
            bags: Vec::new(),
            bag_index: HashMap::new(),
            vertex_bag: Vec::new(),
            constraint_bag: BTreeMap::new(),
            max_domain,
            decomposition: None,
        }
    }

    fn add_var(&mut self, kind: VarKind) -> usize {
        let j = self.lp.add_var(Rational::zero(), Some(Rational::one()));
        self.index.insert(kind.clone(), j);
        self.vars.push(kind);
        j
    }

    fn add_row(&mut self, mut coeffs: Vec<(usize, Rational)>, rhs: Rational, p: Provenance) {
        coeffs.sort_by_key(|(j, _)| *j);
        self.lp
            .add_constraint(Constraint::new(coeffs, Relation::Eq, rhs));
        self.rows.push(p);
    }

    pub fn var_index(&self, kind: &VarKind) -> Option<usize> {
        self.index.get(kind).copied()
    }

    pub fn bag_index(&self, bag: &[Var]) -> Option<usize> {
        self.bag_index.get(bag).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Indices of the configuration variables.
    pub fn f_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&j| matches!(self.vars[j], VarKind::F(_)))
            .collect()
    }

    /// The configuration of an f-variable.
    pub fn config(&self, j: usize) -> &Configuration {
        match &self.vars[j] {
            VarKind::F(k) | VarKind::G { config: k, .. } => k,
            VarKind::Y { .. } => panic!("variable {j} is not a configuration variable"),
        }
    }
}

/// Contribution of a soft constraint's tuple to the objective, in the
/// instance's sense, with the constraint's best payoff precomputed.
fn coefficient(sense: Sense, weight: &Rational, best: &Rational, payoff: Rational) -> Rational {
    match sense {
        Sense::Max => weight * &payoff,
        Sense::Min => weight * &(best - &payoff),
    }
}

/// The local relaxation: value indicators per variable and scope indicators
/// per constraint, tied together by consistency rows.
pub fn build_base_lp(instance: &CspInstance) -> LpModel {
    let mut m = LpModel::new(ModelKind::Base, instance.sense, instance.max_domain_size());
    for v in 1..=instance.n {
        for &value in instance.domain(v) {
            m.add_var(VarKind::Y { var: v, value });
        }
    }
    let mut scope_vars: Vec<(ConstraintRef, Vec<usize>)> = Vec::new();
    for c in instance.constraint_refs() {
        let scope = instance.scope_of(c).to_vec();
        let mut js = Vec::new();
        for config in enumerate_configurations(instance, &scope) {
            js.push(m.add_var(VarKind::G {
                constraint: c,
                config,
            }));
        }
        scope_vars.push((c, js));
    }

    for v in 1..=instance.n {
        let coeffs = instance
            .domain(v)
            .iter()
            .map(|&value| (m.index[&VarKind::Y { var: v, value }], Rational::one()))
            .collect();
        m.add_row(coeffs, Rational::one(), Provenance::SumToOne);
    }
    for (c, js) in &scope_vars {
        for &v in instance.scope_of(*c) {
            for &value in instance.domain(v) {
                let mut coeffs: Vec<(usize, Rational)> = js
                    .iter()
                    .filter(|&&j| m.config(j).get(v) == Some(value))
                    .map(|&j| (j, Rational::one()))
                    .collect();
                coeffs.push((m.index[&VarKind::Y { var: v, value }], -Rational::one()));
                m.add_row(coeffs, Rational::zero(), Provenance::Consistency);
            }
        }
    }

    for ((c, js), s) in scope_vars[instance.hard.len()..].iter().zip(&instance.soft) {
        debug_assert_eq!(*c, ConstraintRef::Soft(s.id));
        let best = s.max_payoff(instance);
        for &j in js {
            let tuple = m.config(j).tuple(&s.scope).expect("scope assigned");
            let coef = coefficient(instance.sense, &s.weight, &best, s.payoff(&tuple));
            m.lp.objective[j] += coef;
        }
    }
    m
}

pub fn build_extended_lp(
    instance: &CspInstance,
    ntd: &NiceTreeDecomposition,
) -> Result<LpModel, ExtformError> {
    build_extended_lp_with(instance, ntd, DEFAULT_MAX_CONFIGS)
}

/// The extended formulation over the bags of `ntd`. One variable per
/// configuration of each distinct bag, so nodes with equal bags share
/// variables. Fails once more than `max_configs` variables would be created.
pub fn build_extended_lp_with(
    instance: &CspInstance,
    ntd: &NiceTreeDecomposition,
    max_configs: usize,
) -> Result<LpModel, ExtformError> {
    let mut m = LpModel::new(
        ModelKind::Extended,
        instance.sense,
        instance.max_domain_size(),
    );
    m.decomposition = Some(DecompositionSummary {
        nodes: ntd.len(),
        width: ntd.width(),
    });
    let order = ntd.preorder();

    for &a in &order {
        let bag = &ntd.nodes[a].bag;
        if m.bag_index.contains_key(bag) {
            continue;
        }
        let remaining = max_configs.saturating_sub(m.vars.len());
        let configs = enumerate_limited(instance, bag, remaining)
            .ok_or(ExtformError::TooManyConfigurations { limit: max_configs })?;
        let js: Vec<usize> = configs
            .into_iter()
            .map(|k| m.add_var(VarKind::F(k)))
            .collect();
        m.bag_index.insert(bag.clone(), m.bags.len());
        m.bags.push((bag.clone(), js));
    }

    for v in 1..=instance.n {
        let b = order
            .iter()
            .find(|&&a| ntd.nodes[a].bag.binary_search(&v).is_ok())
            .ok_or(ExtformError::VertexNotCovered(v))?;
        m.vertex_bag.push(m.bag_index[&ntd.nodes[*b].bag]);
    }
    for c in instance.constraint_refs() {
        let scope = instance.scope_of(c);
        let b = order
            .iter()
            .find(|&&a| {
                let bag = &ntd.nodes[a].bag;
                scope.iter().all(|v| bag.binary_search(v).is_ok())
            })
            .ok_or(ExtformError::ScopeNotCovered(c))?;
        m.constraint_bag.insert(c, m.bag_index[&ntd.nodes[*b].bag]);
    }

    for i in 0..m.bags.len() {
        let coeffs = m.bags[i].1.iter().map(|&j| (j, Rational::one())).collect();
        m.add_row(coeffs, Rational::one(), Provenance::BagSum);
    }

    // couplings, one family per distinct (parent bag, child bag) pair
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in 0..ntd.len() {
        let node = &ntd.nodes[a];
        let (small, large, p) = match node.kind {
            NodeKind::Introduce(_) => {
                let child = &ntd.nodes[node.children[0]].bag;
                (child, &node.bag, Provenance::Introduce)
            }
            NodeKind::Forget(_) => {
                let child = &ntd.nodes[node.children[0]].bag;
                (&node.bag, child, Provenance::Forget)
            }
            NodeKind::Leaf | NodeKind::Join => continue,
        };
        let si = m.bag_index[small];
        let li = m.bag_index[large];
        if !seen.insert((si, li)) {
            continue;
        }
        let mut groups: HashMap<Configuration, Vec<usize>> = HashMap::new();
        for &j in &m.bags[li].1 {
            groups
                .entry(m.config(j).restrict(small))
                .or_default()
                .push(j);
        }
        for jk in m.bags[si].1.clone() {
            let mut coeffs: Vec<(usize, Rational)> = groups
                .get(m.config(jk))
                .map(|g| g.iter().map(|&j| (j, Rational::one())).collect())
                .unwrap_or_default();
            coeffs.push((jk, -Rational::one()));
            m.add_row(coeffs, Rational::zero(), p);
        }
    }

    for s in &instance.soft {
        let bi = m.constraint_bag[&ConstraintRef::Soft(s.id)];
        let best = s.max_payoff(instance);
        for j in m.bags[bi].1.clone() {
            let tuple = m.config(j).tuple(&s.scope).expect("scope inside bag");
            let coef = coefficient(instance.sense, &s.weight, &best, s.payoff(&tuple));
            m.lp.objective[j] += coef;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FormulationStats {
    pub variables: usize,
    pub constraints: usize,
    pub nonzeros: usize,
    pub f_variables: usize,
    pub nodes: Option<usize>,
    pub width: Option<usize>,
    pub max_domain: usize,
    /// `nodes · D^(width+1)`; absent for the base model.
    pub variable_bound: Option<u128>,
    /// `nodes · (D^(width+1) + 1)`; absent for the base model.
    pub constraint_bound: Option<u128>,
    pub within_bounds: Option<bool>,
}

pub fn formulation_stats(model: &LpModel) -> FormulationStats {
    let f_variables = model.f_vars().len();
    let (var_bound, con_bound) = match model.decomposition {
        Some(d) => {
            let per_bag = (model.max_domain as u128).saturating_pow(d.width as u32 + 1);
            let nodes = d.nodes as u128;
            (
                Some(nodes.saturating_mul(per_bag)),
                Some(nodes.saturating_mul(per_bag.saturating_add(1))),
            )
        }
        None => (None, None),
    };
    let within_bounds = var_bound
        .zip(con_bound)
        .map(|(vb, cb)| f_variables as u128 <= vb && model.lp.constraints.len() as u128 <= cb);
    FormulationStats {
        variables: model.num_vars(),
        constraints: model.lp.constraints.len(),
        nonzeros: model.lp.nonzeros(),
        f_variables,
        nodes: model.decomposition.map(|d| d.nodes),
        width: model.decomposition.map(|d| d.width),
        max_domain: model.max_domain,
        variable_bound: var_bound,
        constraint_bound: con_bound,
        within_bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extform::tests::is_k3;
    use crate::ratlp::{solve, Status};
    use crate::treedec::{make_nice, TreeDecomposition};

    fn one_bag(vars: Vec<Var>) -> NiceTreeDecomposition {
        make_nice(&TreeDecomposition::new(vec![vars], vec![]))
    }

    #[test]
    fn base_lp_counts_for_is_k3() {
        let m = build_base_lp(&is_k3());
        let count = |f: &dyn Fn(&VarKind) -> bool| m.vars.iter().filter(|k| f(k)).count();
        assert_eq!(count(&|k| matches!(k, VarKind::Y { .. })), 6);
        assert_eq!(count(&|k| matches!(k, VarKind::G { .. })), 3 * 3 + 3 * 2);
        let rows = |p| m.rows.iter().filter(|&&r| r == p).count();
        assert_eq!(rows(Provenance::SumToOne), 3);
        assert_eq!(rows(Provenance::Consistency), 3 * 2 * 2 + 3 * 2);
    }

    #[test]
    fn base_lp_has_the_half_integral_optimum() {
        let m = build_base_lp(&is_k3());
        let sol = solve(&m.lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective, Rational::new(3, 2));
    }

    #[test]
    fn base_lp_single_fixed_variable() {
        let q = CspInstance::new(vec![vec![5]], Sense::Max);
        let m = build_base_lp(&q);
        assert_eq!(m.vars, vec![VarKind::Y { var: 1, value: 5 }]);
        assert_eq!(m.lp.constraints.len(), 1);
        assert_eq!(m.lp.constraints[0].rhs, Rational::one());
    }

    #[test]
    fn extended_lp_is_k3_one_bag() {
        let q = is_k3();
        let ntd = one_bag(vec![1, 2, 3]);
        let m = build_extended_lp(&q, &ntd).unwrap();
        let core = m.bag_index(&[1, 2, 3]).unwrap();
        assert_eq!(m.bags[core].1.len(), 4);
        let sol = solve(&m.lp).unwrap();
        assert_eq!(sol.objective, Rational::one());
        let stats = formulation_stats(&m);
        assert_eq!(stats.within_bounds, Some(true));
        // bags {1}, {1,2}, {1,2,3} on the way up, {1,3} on the way down
        assert_eq!(stats.f_variables, 2 + 3 + 4 + 3);
    }

    #[test]
    fn extended_lp_single_variable() {
        let q = CspInstance::uniform(1, &[0, 1], Sense::Max);
        let m = build_extended_lp(&q, &one_bag(vec![1])).unwrap();
        assert_eq!(m.vars.len(), 2);
        assert_eq!(m.lp.constraints.len(), 1);
        assert_eq!(m.rows, vec![Provenance::BagSum]);
        let stats = formulation_stats(&m);
        assert_eq!((stats.f_variables, stats.constraints), (2, 1));
    }

    #[test]
    fn extended_lp_path_maxcut_within_bound() {
        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for (u, v) in [(1, 2), (2, 3)] {
            q.add_soft_relation(vec![u, v], Rational::one(), [vec![0, 1], vec![1, 0]]);
        }
        let td = TreeDecomposition::new(vec![vec![1, 2], vec![2, 3]], vec![(0, 1)]);
        let ntd = make_nice(&td);
        let m = build_extended_lp(&q, &ntd).unwrap();
        let stats = formulation_stats(&m);
        assert_eq!(stats.within_bounds, Some(true));
        assert_eq!(stats.max_domain, 2);
        assert_eq!(stats.width, Some(1));
        assert_eq!(solve(&m.lp).unwrap().objective, Rational::from_integer(2));
    }

    #[test]
    fn extended_lp_errors() {
        let q = is_k3();
        let td = TreeDecomposition::new(vec![vec![1, 2], vec![2, 3]], vec![(0, 1)]);
        let err = build_extended_lp(&q, &make_nice(&td)).unwrap_err();
        assert_eq!(err, ExtformError::ScopeNotCovered(ConstraintRef::Hard(1)));
        let err = build_extended_lp_with(&q, &one_bag(vec![1, 2, 3]), 5).unwrap_err();
        assert_eq!(err, ExtformError::TooManyConfigurations { limit: 5 });
    }

    #[test]
    fn minimization_uses_shortfall() {
        let q = is_k3().with_sense(Sense::Min);
        let m = build_extended_lp(&q, &one_bag(vec![1, 2, 3])).unwrap();
        assert_eq!(solve(&m.lp).unwrap().objective, Rational::from_integer(2));
        let m = build_base_lp(&q);
        assert_eq!(solve(&m.lp).unwrap().objective, Rational::new(3, 2));
    }

    #[test]
    fn variable_names() {
        assert_eq!(VarKind::Y { var: 2, value: -1 }.name(), "y_2_n1");
        let k = Configuration::from_pairs(vec![(1, 0), (3, 2)]);
        assert_eq!(VarKind::F(k.clone()).name(), "f_1_0.3_2");
        let g = VarKind::G {
            constraint: ConstraintRef::Soft(4),
            config: k,
        };
        assert_eq!(g.name(), "g_s4_1_0.3_2");
    }
}
