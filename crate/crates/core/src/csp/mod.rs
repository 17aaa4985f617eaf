//! Weighted CSP instances: variables with finite integer domains, hard
//! relations that every assignment must satisfy, and weighted soft
//! constraints (relations or general payoff tables) that are scored.

mod graph;
pub mod json;

pub use graph::ConstraintGraph;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ratlp::{Rational, Sense};

/// Variables are numbered `1..=n`.
pub type Var = usize;
pub type Value = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintRef {
    /// Index into [`CspInstance::hard`].
    Hard(usize),
    /// Soft constraint id.
    Soft(u64),
}

impl fmt::Display for ConstraintRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintRef::Hard(i) => write!(f, "h{i}"),
            ConstraintRef::Soft(id) => write!(f, "s{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardConstraint {
    pub scope: Vec<Var>,
    pub allowed: BTreeSet<Vec<Value>>,
}

impl HardConstraint {
    pub fn new(scope: Vec<Var>, allowed: impl IntoIterator<Item = Vec<Value>>) -> Self {
        HardConstraint {
            scope,
            allowed: allowed.into_iter().collect(),
        }
    }

    pub fn allows(&self, tuple: &[Value]) -> bool {
        self.allowed.contains(tuple)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payoff {
    /// Characteristic function of a relation: 1 on allowed tuples, 0 elsewhere.
    Relation(BTreeSet<Vec<Value>>),
    /// Explicit payoff per tuple; tuples not listed pay 0.
    Table(BTreeMap<Vec<Value>, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftConstraint {
    pub id: u64,
    pub scope: Vec<Var>,
    pub weight: Rational,
    pub payoff: Payoff,
}

impl SoftConstraint {
    pub fn is_relation(&self) -> bool {
        matches!(self.payoff, Payoff::Relation(_))
    }

    pub fn payoff(&self, tuple: &[Value]) -> Rational {
        match &self.payoff {
            Payoff::Relation(rel) => {
                if rel.contains(tuple) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Payoff::Table(t) => t.get(tuple).cloned().unwrap_or_default(),
        }
    }

    /// Whether `tuple` lies in the relation (the support of the payoff map).
    pub fn satisfied_by(&self, tuple: &[Value]) -> bool {
        match &self.payoff {
            Payoff::Relation(rel) => rel.contains(tuple),
            Payoff::Table(t) => t.get(tuple).is_some_and(|v| !v.is_zero()),
        }
    }

    /// Largest attainable payoff over the product of the scope's domains.
    /// Relations always count 1, so that the minimization objective counts
    /// unsatisfied constraints.
    pub fn max_payoff(&self, instance: &CspInstance) -> Rational {
        match &self.payoff {
            Payoff::Relation(_) => Rational::one(),
            Payoff::Table(t) => {
                let product: u128 = self
                    .scope
                    .iter()
                    .map(|&v| instance.domain(v).len() as u128)
                    .product();
                let mut best = t.values().max().cloned();
                if (t.len() as u128) < product {
                    best = Some(best.map_or(Rational::zero(), |b| b.max(Rational::zero())));
                }
                best.unwrap_or_default()
            }
        }
    }

    /// Objective contribution of `tuple` in the given sense: weighted payoff
    /// for maximization, weighted shortfall from the best payoff for
    /// minimization.
    pub fn score(&self, instance: &CspInstance, tuple: &[Value]) -> Rational {
        let p = self.payoff(tuple);
        match instance.sense {
            Sense::Max => &self.weight * &p,
            Sense::Min => &self.weight * &(&self.max_payoff(instance) - &p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    pub n: usize,
    /// `domains[v - 1]` is the sorted, duplicate-free domain of variable `v`.
    pub domains: Vec<Vec<Value>>,
    pub hard: Vec<HardConstraint>,
    pub soft: Vec<SoftConstraint>,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("expected {expected} domains, found {found}")]
    DomainCount { expected: usize, found: usize },
    #[error("domain of variable {0} is empty")]
    EmptyDomain(Var),
    #[error("domain of variable {0} is not sorted")]
    UnsortedDomain(Var),
    #[error("domain of variable {var} lists {value} more than once")]
    DuplicateDomainValue { var: Var, value: Value },
    #[error("constraint {0} has an empty scope")]
    EmptyScope(ConstraintRef),
    #[error("constraint {constraint} mentions variable {var}, outside 1..=n")]
    VariableOutOfRange { constraint: ConstraintRef, var: Var },
    #[error("scope of constraint {0} is not strictly increasing")]
    UnsortedScope(ConstraintRef),
    #[error("constraint {constraint}: tuple {tuple:?} has the wrong arity")]
    ArityMismatch {
        constraint: ConstraintRef,
        tuple: Vec<Value>,
    },
    #[error("constraint {constraint}: tuple {tuple:?} lies outside the scope's domains")]
    TupleOutOfDomain {
        constraint: ConstraintRef,
        tuple: Vec<Value>,
    },
    #[error("more than one hard constraint on scope {0:?}")]
    DuplicateHardScope(Vec<Var>),
    #[error("soft constraint {0} has a negative weight")]
    NegativeWeight(u64),
    #[error("soft constraint id {0} is used more than once")]
    DuplicateSoftId(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CspError {
    #[error("assignment has {got} values, instance has {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("value {value} is not in the domain of variable {var}")]
    DomainViolation { var: Var, value: Value },
    #[error("assignment violates hard constraint {0}")]
    Infeasible(ConstraintRef),
}

/// A complete assignment `z`, with `z[v - 1]` the value of variable `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn value(&self, v: Var) -> Value {
        self.0[v - 1]
    }

    /// `z|_U` for a sorted scope `U`.
    pub fn restrict(&self, scope: &[Var]) -> Vec<Value> {
        scope.iter().map(|&v| self.value(v)).collect()
    }
}

/// An assignment together with the satisfaction indicator of every soft
/// constraint (in the order of [`CspInstance::soft`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedAssignment {
    pub z: Assignment,
    pub h: Vec<bool>,
}

impl CspInstance {
    pub fn new(domains: Vec<Vec<Value>>, sense: Sense) -> Self {
        CspInstance {
            n: domains.len(),
            domains,
            hard: Vec::new(),
            soft: Vec::new(),
            sense,
        }
    }

    /// Variables `1..=n` all with the same domain.
    pub fn uniform(n: usize, domain: &[Value], sense: Sense) -> Self {
        CspInstance::new(vec![domain.to_vec(); n], sense)
    }

    pub fn domain(&self, v: Var) -> &[Value] {
        &self.domains[v - 1]
    }

    pub fn max_domain_size(&self) -> usize {
        self.domains.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add_hard(
        &mut self,
        scope: Vec<Var>,
        allowed: impl IntoIterator<Item = Vec<Value>>,
    ) -> ConstraintRef {
        self.hard.push(HardConstraint::new(scope, allowed));
        ConstraintRef::Hard(self.hard.len() - 1)
    }

    fn next_soft_id(&self) -> u64 {
        self.soft.iter().map(|s| s.id + 1).max().unwrap_or(0)
    }

    pub fn add_soft_relation(
        &mut self,
        scope: Vec<Var>,
        weight: Rational,
        allowed: impl IntoIterator<Item = Vec<Value>>,
    ) -> ConstraintRef {
        let id = self.next_soft_id();
        self.soft.push(SoftConstraint {
            id,
            scope,
            weight,
            payoff: Payoff::Relation(allowed.into_iter().collect()),
        });
        ConstraintRef::Soft(id)
    }

    pub fn add_soft_payoff(
        &mut self,
        scope: Vec<Var>,
        weight: Rational,
        table: impl IntoIterator<Item = (Vec<Value>, Rational)>,
    ) -> ConstraintRef {
        let id = self.next_soft_id();
        self.soft.push(SoftConstraint {
            id,
            scope,
            weight,
            payoff: Payoff::Table(table.into_iter().collect()),
        });
        ConstraintRef::Soft(id)
    }

    pub fn soft_by_id(&self, id: u64) -> Option<&SoftConstraint> {
        self.soft.iter().find(|s| s.id == id)
    }

    pub fn scope_of(&self, c: ConstraintRef) -> &[Var] {
        match c {
            ConstraintRef::Hard(i) => &self.hard[i].scope,
            ConstraintRef::Soft(id) => &self.soft_by_id(id).expect("unknown soft id").scope,
        }
    }

    /// Every constraint reference: hard ones in order, then soft ones.
    pub fn constraint_refs(&self) -> impl Iterator<Item = ConstraintRef> + '_ {
        (0..self.hard.len())
            .map(ConstraintRef::Hard)
            .chain(self.soft.iter().map(|s| ConstraintRef::Soft(s.id)))
    }

    /// Intersects the allowed sets of hard constraints sharing a scope, so
    /// that at most one hard constraint remains per scope. The first
    /// occurrence keeps its position.
    pub fn merge_duplicate_hard(&mut self) {
        let mut merged: Vec<HardConstraint> = Vec::with_capacity(self.hard.len());
        let mut index: BTreeMap<Vec<Var>, usize> = BTreeMap::new();
        for h in self.hard.drain(..) {
            match index.get(&h.scope) {
                Some(&k) => {
                    let kept = &mut merged[k];
                    kept.allowed = kept.allowed.intersection(&h.allowed).cloned().collect();
                }
                None => {
                    index.insert(h.scope.clone(), merged.len());
                    merged.push(h);
                }
            }
        }
        self.hard = merged;
    }

    /// Returns every invariant violation, or `Ok` if the instance is well formed.
    pub fn validate(&self) -> Result<(), Vec<ValidationError>> {
        let mut errors = Vec::new();
        if self.domains.len() != self.n {
            errors.push(ValidationError::DomainCount {
                expected: self.n,
                found: self.domains.len(),
            });
            return Err(errors);
        }
        for (i, d) in self.domains.iter().enumerate() {
            let v = i + 1;
            if d.is_empty() {
                errors.push(ValidationError::EmptyDomain(v));
            }
            for w in d.windows(2) {
                if w[0] == w[1] {
                    errors.push(ValidationError::DuplicateDomainValue {
                        var: v,
                        value: w[0],
                    });
                } else if w[0] > w[1] {
                    errors.push(ValidationError::UnsortedDomain(v));
                    break;
                }
            }
        }

        let check_scope = |c: ConstraintRef, scope: &[Var], errors: &mut Vec<_>| -> bool {
            if scope.is_empty() {
                errors.push(ValidationError::EmptyScope(c));
                return false;
            }
            let mut ok = true;
            for &v in scope {
                if v == 0 || v > self.n {
                    errors.push(ValidationError::VariableOutOfRange {
                        constraint: c,
                        var: v,
                    });
                    ok = false;
                }
            }
            if scope.windows(2).any(|w| w[0] >= w[1]) {
                errors.push(ValidationError::UnsortedScope(c));
                ok = false;
            }
            ok
        };
        let check_tuple = |c: ConstraintRef, scope: &[Var], t: &[Value], errors: &mut Vec<_>| {
            if t.len() != scope.len() {
                errors.push(ValidationError::ArityMismatch {
                    constraint: c,
                    tuple: t.to_vec(),
                });
            } else if scope
                .iter()
                .zip(t)
                .any(|(&v, x)| self.domain(v).binary_search(x).is_err())
            {
                errors.push(ValidationError::TupleOutOfDomain {
                    constraint: c,
                    tuple: t.to_vec(),
                });
            }
        };

        let mut seen_scopes = BTreeSet::new();
        for (i, h) in self.hard.iter().enumerate() {
            let c = ConstraintRef::Hard(i);
            if !check_scope(c, &h.scope, &mut errors) {
                continue;
            }
            if !seen_scopes.insert(h.scope.clone()) {
                errors.push(ValidationError::DuplicateHardScope(h.scope.clone()));
            }
            for t in &h.allowed {
                check_tuple(c, &h.scope, t, &mut errors);
            }
        }
        let mut seen_ids = BTreeSet::new();
        for s in &self.soft {
            let c = ConstraintRef::Soft(s.id);
            if !seen_ids.insert(s.id) {
                errors.push(ValidationError::DuplicateSoftId(s.id));
            }
            if s.weight.is_negative() {
                errors.push(ValidationError::NegativeWeight(s.id));
            }
            if !check_scope(c, &s.scope, &mut errors) {
                continue;
            }
            match &s.payoff {
                Payoff::Relation(rel) => {
                    for t in rel {
                        check_tuple(c, &s.scope, t, &mut errors);
                    }
                }
                Payoff::Table(t) => {
                    for k in t.keys() {
                        check_tuple(c, &s.scope, k, &mut errors);
                    }
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn constraint_graph(&self) -> ConstraintGraph {
        let scopes = self
            .hard
            .iter()
            .map(|h| &h.scope)
            .chain(self.soft.iter().map(|s| &s.scope));
        let mut edges = BTreeSet::new();
        for scope in scopes {
            for (i, &u) in scope.iter().enumerate() {
                for &v in &scope[i + 1..] {
                    if u != v {
                        edges.insert((u.min(v), u.max(v)));
                    }
                }
            }
        }
        ConstraintGraph::new(self.n, edges)
    }

    fn check_domains(&self, z: &Assignment) -> Result<(), CspError> {
        if z.0.len() != self.n {
            return Err(CspError::WrongLength {
                expected: self.n,
                got: z.0.len(),
            });
        }
        for (i, &x) in z.0.iter().enumerate() {
            if self.domains[i].binary_search(&x).is_err() {
                return Err(CspError::DomainViolation {
                    var: i + 1,
                    value: x,
                });
            }
        }
        Ok(())
    }

    /// The first hard constraint violated by `z`, if any.
    pub fn first_violation(&self, z: &Assignment) -> Result<Option<ConstraintRef>, CspError> {
        self.check_domains(z)?;
        Ok(self
            .hard
            .iter()
            .position(|h| !h.allows(&z.restrict(&h.scope)))
            .map(ConstraintRef::Hard))
    }

    pub fn is_feasible(&self, z: &Assignment) -> Result<bool, CspError> {
        Ok(self.first_violation(z)?.is_none())
    }

    fn require_feasible(&self, z: &Assignment) -> Result<(), CspError> {
        match self.first_violation(z)? {
            Some(c) => Err(CspError::Infeasible(c)),
            None => Ok(()),
        }
    }

    /// `ex(z)`: the assignment plus the indicator of each satisfied soft constraint.
    pub fn extend(&self, z: &Assignment) -> Result<ExtendedAssignment, CspError> {
        self.require_feasible(z)?;
        let h = self
            .soft
            .iter()
            .map(|s| s.satisfied_by(&z.restrict(&s.scope)))
            .collect();
        Ok(ExtendedAssignment { z: z.clone(), h })
    }

    /// Total weighted payoff (maximization) or total weighted shortfall
    /// (minimization) of a feasible assignment.
    pub fn objective_value(&self, z: &Assignment) -> Result<Rational, CspError> {
        self.require_feasible(z)?;
        Ok(self.score_unchecked(z))
    }

    pub(crate) fn score_unchecked(&self, z: &Assignment) -> Rational {
        self.soft
            .iter()
            .map(|s| s.score(self, &z.restrict(&s.scope)))
            .sum()
    }

    /// `Σ w · max_payoff` over soft constraints: the constant linking the two
    /// senses, `max-objective + min-objective = total_weight` for any `z`.
    pub fn total_weight(&self) -> Rational {
        self.soft
            .iter()
            .map(|s| &s.weight * &s.max_payoff(self))
            .sum()
    }

    /// Same instance with the opposite objective sense.
    pub fn with_sense(&self, sense: Sense) -> Self {
        CspInstance {
            sense,
            ..self.clone()
        }
    }

    /// Number of points in the product of all domains, saturating.
    pub fn assignment_space(&self) -> u128 {
        self.domains
            .iter()
            .map(|d| d.len() as u128)
            .try_fold(1u128, |acc, k| acc.checked_mul(k))
            .unwrap_or(u128::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    /// Independent set on K3: hard edges forbid (1,1), unit soft C_v = {1}.
    fn is_k3() -> CspInstance {
        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for (u, v) in [(1, 2), (1, 3), (2, 3)] {
            q.add_hard(vec![u, v], [vec![0, 0], vec![0, 1], vec![1, 0]]);
        }
        for v in 1..=3 {
            q.add_soft_relation(vec![v], int(1), [vec![1]]);
        }
        q
    }

    fn maxcut_k3() -> CspInstance {
        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for (u, v) in [(1, 2), (1, 3), (2, 3)] {
            q.add_soft_relation(vec![u, v], int(1), [vec![0, 1], vec![1, 0]]);
        }
        q
    }

    #[test]
    fn validate_examples() {
        assert_eq!(is_k3().validate(), Ok(()));

        let mut q = is_k3();
        q.domains[1].clear();
        let errs = q.validate().unwrap_err();
        assert!(errs.contains(&ValidationError::EmptyDomain(2)), "{errs:?}");

        let mut q = is_k3();
        q.hard[0].scope = vec![2, 1];
        let errs = q.validate().unwrap_err();
        assert!(errs.contains(&ValidationError::UnsortedScope(ConstraintRef::Hard(0))));
    }

    #[test]
    fn validate_reports_every_problem() {
        let mut q = CspInstance::uniform(2, &[0, 1], Sense::Max);
        q.domains[0] = vec![1, 0];
        q.add_hard(vec![1, 2], [vec![0, 5]]);
        q.add_hard(vec![1, 2], [vec![0, 0]]);
        q.add_hard(vec![3], [vec![0]]);
        q.add_soft_relation(vec![2], int(-1), [vec![0, 0]]);
        q.add_soft_relation(vec![], int(1), [vec![]]);
        let errs = q.validate().unwrap_err();
        assert!(errs.contains(&ValidationError::UnsortedDomain(1)));
        assert!(errs.contains(&ValidationError::TupleOutOfDomain {
            constraint: ConstraintRef::Hard(0),
            tuple: vec![0, 5]
        }));
        assert!(errs.contains(&ValidationError::DuplicateHardScope(vec![1, 2])));
        assert!(errs.contains(&ValidationError::VariableOutOfRange {
            constraint: ConstraintRef::Hard(2),
            var: 3
        }));
        assert!(errs.contains(&ValidationError::NegativeWeight(0)));
        assert!(errs.contains(&ValidationError::ArityMismatch {
            constraint: ConstraintRef::Soft(0),
            tuple: vec![0, 0]
        }));
        assert!(errs.contains(&ValidationError::EmptyScope(ConstraintRef::Soft(1))));
    }

    #[test]
    fn merging_intersects_allowed_sets() {
        let mut q = CspInstance::uniform(2, &[0, 1], Sense::Max);
        q.add_hard(vec![1, 2], [vec![0, 0], vec![0, 1], vec![1, 1]]);
        q.add_hard(vec![2], [vec![1]]);
        q.add_hard(vec![1, 2], [vec![0, 1], vec![1, 0], vec![1, 1]]);
        q.merge_duplicate_hard();
        assert_eq!(q.hard.len(), 2);
        assert_eq!(
            q.hard[0].allowed,
            [vec![0, 1], vec![1, 1]].into_iter().collect()
        );
        assert_eq!(q.validate(), Ok(()));
    }

    #[test]
    fn constraint_graph_examples() {
        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        q.add_hard(vec![1, 2, 3], [vec![0, 0, 0]]);
        let g = q.constraint_graph();
        assert_eq!(
            g.edges().iter().cloned().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(is_k3().constraint_graph().edges().len(), 3);

        let mut q = CspInstance::uniform(3, &[0, 1], Sense::Max);
        for v in 1..=3 {
            q.add_soft_relation(vec![v], int(1), [vec![1]]);
        }
        assert!(q.constraint_graph().edges().is_empty());
    }

    #[test]
    fn constraint_graph_ignores_constraint_order() {
        let q = is_k3();
        let mut r = q.clone();
        r.hard.reverse();
        r.soft.reverse();
        assert_eq!(q.constraint_graph(), r.constraint_graph());
    }

    #[test]
    fn feasibility_examples() {
        let q = is_k3();
        assert_eq!(q.is_feasible(&Assignment(vec![0, 0, 0])), Ok(true));
        assert_eq!(q.is_feasible(&Assignment(vec![1, 1, 0])), Ok(false));
        assert_eq!(
            q.is_feasible(&Assignment(vec![2, 0, 0])),
            Err(CspError::DomainViolation { var: 1, value: 2 })
        );
        assert_eq!(
            maxcut_k3().is_feasible(&Assignment(vec![1, 0, 1])),
            Ok(true)
        );
    }

    #[test]
    fn extend_examples() {
        let q = is_k3();
        let ex = q.extend(&Assignment(vec![1, 0, 0])).unwrap();
        assert_eq!(ex.h, vec![true, false, false]);
        let ex = q.extend(&Assignment(vec![0, 0, 0])).unwrap();
        assert_eq!(ex.h, vec![false, false, false]);
        let ex = maxcut_k3().extend(&Assignment(vec![0, 1, 1])).unwrap();
        assert_eq!(ex.h, vec![true, true, false]);
        assert_eq!(
            q.extend(&Assignment(vec![1, 1, 0])),
            Err(CspError::Infeasible(ConstraintRef::Hard(0)))
        );
    }

    #[test]
    fn objective_examples() {
        assert_eq!(
            maxcut_k3().objective_value(&Assignment(vec![0, 1, 1])),
            Ok(int(2))
        );
        let vc = is_k3().with_sense(Sense::Min);
        // VC encoding: value 0 means "in the cover"; z = (0,0,1) covers with {1,2}
        assert_eq!(vc.objective_value(&Assignment(vec![0, 0, 1])), Ok(int(2)));
        let empty = CspInstance::uniform(2, &[0, 1], Sense::Max);
        assert_eq!(empty.objective_value(&Assignment(vec![1, 0])), Ok(int(0)));
    }

    #[test]
    fn payoff_tables_and_min_shortfall() {
        let mut q = CspInstance::uniform(1, &[0, 1, 2], Sense::Min);
        q.add_soft_payoff(
            vec![1],
            Rational::new(1, 2),
            [(vec![0], int(3)), (vec![1], int(-1))],
        );
        // value 2 is missing from the table and pays 0; best payoff is 3
        assert_eq!(q.soft[0].max_payoff(&q), int(3));
        assert_eq!(q.objective_value(&Assignment(vec![1])), Ok(int(2)));
        assert_eq!(q.objective_value(&Assignment(vec![0])), Ok(int(0)));
        let max = q.with_sense(Sense::Max);
        assert_eq!(max.objective_value(&Assignment(vec![2])), Ok(int(0)));
        assert_eq!(max.total_weight(), Rational::new(3, 2));
        let ex = q.extend(&Assignment(vec![2])).unwrap();
        assert_eq!(ex.h, vec![false]);

        // all tuples listed and all negative: the maximum is the best listed value
        let mut q = CspInstance::uniform(1, &[0, 1], Sense::Min);
        q.add_soft_payoff(vec![1], int(1), [(vec![0], int(-2)), (vec![1], int(-5))]);
        assert_eq!(q.soft[0].max_payoff(&q), int(-2));
    }

    #[test]
    fn senses_sum_to_total_weight() {
        let q = maxcut_k3();
        let min = q.with_sense(Sense::Min);
        for bits in 0..8 {
            let z = Assignment((0..3).map(|i| (bits >> i) & 1).collect());
            let a = q.objective_value(&z).unwrap();
            let b = min.objective_value(&z).unwrap();
            assert_eq!(&a + &b, q.total_weight());
        }
    }
}
