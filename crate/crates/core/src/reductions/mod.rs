//! Graph problems encoded as weighted CSP instances, with maps from
//! assignments back to each problem's own solution objects.

mod graph;

pub use graph::{parse_graph, write_graph, GraphError, GraphInput, PatternGraph};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::csp::{CspInstance, ExtendedAssignment, Value, Var};
use crate::extform::{build_extended_lp_with, ExtformError, DEFAULT_MAX_CONFIGS};
use crate::ratlp::{solve, Rational, Sense, SolveError, Status};
use crate::treedec::{heuristic_tree_decomposition, make_nice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Coloring,
    ListHColoring,
    UniqueGames,
    MultiwayCut,
    MaxCut,
    EdgeBipartization,
    VertexCover,
    IndependentSet,
    Oct,
}

impl Problem {
    pub const ALL: [Problem; 9] = [
        Problem::Coloring,
        Problem::ListHColoring,
        Problem::UniqueGames,
        Problem::MultiwayCut,
        Problem::MaxCut,
        Problem::EdgeBipartization,
        Problem::VertexCover,
        Problem::IndependentSet,
        Problem::Oct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Coloring => "coloring",
            Problem::ListHColoring => "list-h-coloring",
            Problem::UniqueGames => "unique-games",
            Problem::MultiwayCut => "multiway-cut",
            Problem::MaxCut => "maxcut",
            Problem::EdgeBipartization => "edge-bipartization",
            Problem::VertexCover => "vertex-cover",
            Problem::IndependentSet => "independent-set",
            Problem::Oct => "oct",
        }
    }

    pub fn from_name(s: &str) -> Option<Problem> {
        Problem::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Which map turns an assignment into the problem's solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recovery {
    /// The assignment itself is a coloring / homomorphism / labeling.
    Values,
    /// Vertices grouped by value, one part per terminal.
    Partition,
    /// Vertices at value 1 form one side of the cut.
    CutSide,
    /// Vertices at value 0 form the cover.
    ZeroSet,
    /// Vertices at value 1 form the set.
    OneSet,
    /// Vertices at value 2 are deleted.
    ValueTwo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Solution {
    Values(Vec<Value>),
    Partition(Vec<Vec<Var>>),
    CutSide(Vec<Var>),
    VertexSet(Vec<Var>),
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub problem: Problem,
    pub instance: CspInstance,
    pub recovery: Recovery,
    pub claimed_size: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the number of colors must be at least 1")]
    NoColors,
    #[error("unique games need a label count of at least 1")]
    NoLabels,
    #[error("multiway cut needs at least two terminals")]
    TooFewTerminals,
    #[error("list-H-coloring needs a pattern graph")]
    MissingPattern,
    #[error(transparent)]
    Extform(#[from] ExtformError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn range(t: usize) -> Vec<Value> {
    (1..=t as Value).collect()
}

fn binary(g: &GraphInput) -> CspInstance {
    CspInstance::uniform(g.n, &[0, 1], Sense::Max)
}

pub fn reduce_coloring(g: &GraphInput, q: usize) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    if q == 0 {
        return Err(ReductionError::NoColors);
    }
    let colors = range(q);
    let mut inst = CspInstance::uniform(g.n, &colors, Sense::Max);
    let diff: Vec<Vec<Value>> = colors
        .iter()
        .flat_map(|&i| {
            colors
                .iter()
                .filter(move |&&j| j != i)
                .map(move |&j| vec![i, j])
        })
        .collect();
    for &(u, v) in &g.edges {
        inst.add_hard(vec![u, v], diff.clone());
    }
    Ok(ReductionOutput {
        problem: Problem::Coloring,
        instance: inst,
        recovery: Recovery::Values,
        claimed_size: "q^tw * n".into(),
    })
}

/// Smallest `q` for which the coloring instance is feasible, trying
/// `q = 1, 2, ...` up to the heuristic width plus one and deciding each by
/// solving the extended formulation exactly.
pub fn chromatic_number(g: &GraphInput) -> Result<usize, ReductionError> {
    g.validate()?;
    if g.n == 0 {
        return Ok(0);
    }
    let inst0 = reduce_coloring(g, 1)?.instance;
    let ntd = make_nice(&heuristic_tree_decomposition(&inst0.constraint_graph()));
    let upper = ntd.width() + 1;
    for q in 1..=upper {
        let inst = reduce_coloring(g, q)?.instance;
        let model = build_extended_lp_with(&inst, &ntd, DEFAULT_MAX_CONFIGS)?;
        if solve(&model.lp)?.status == Status::Optimal {
            return Ok(q);
        }
    }
    // a graph of width w is w-degenerate, hence (w+1)-colorable
    unreachable!("no coloring with {upper} colors")
}

/// Lists default to all pattern vertices.
pub fn reduce_list_h_coloring(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    let h = g.pattern.as_ref().ok_or(ReductionError::MissingPattern)?;
    let all = range(h.k);
    let domains: Vec<Vec<Value>> = (1..=g.n)
        .map(|v| g.lists.get(&v).cloned().unwrap_or_else(|| all.clone()))
        .collect();
    let mut inst = CspInstance::new(domains, Sense::Max);
    for &(u, v) in &g.edges {
        let mut allowed = Vec::new();
        for &a in inst.domain(u) {
            for &b in inst.domain(v) {
                if h.has_edge(a as usize, b as usize) {
                    allowed.push(vec![a, b]);
                }
            }
        }
        inst.add_hard(vec![u, v], allowed);
    }
    Ok(ReductionOutput {
        problem: Problem::ListHColoring,
        instance: inst,
        recovery: Recovery::Values,
        claimed_size: "|V_H|^tw * n".into(),
    })
}

/// Labels are `1..=t`; edges without a permutation use the identity.
pub fn reduce_unique_games(g: &GraphInput, t: usize) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    if t == 0 {
        return Err(ReductionError::NoLabels);
    }
    if g.label_count().is_some_and(|k| k != t) {
        return Err(GraphError::MixedLabelCounts.into());
    }
    let labels = range(t);
    let mut inst = CspInstance::uniform(g.n, &labels, Sense::Max);
    for &(u, v) in &g.edges {
        let allowed: Vec<Vec<Value>> = match g.perms.get(&(u, v)) {
            Some(p) => labels.iter().map(|&i| vec![i, p[i as usize - 1]]).collect(),
            None => labels.iter().map(|&i| vec![i, i]).collect(),
        };
        inst.add_soft_relation(vec![u, v], Rational::one(), allowed);
    }
    Ok(ReductionOutput {
        problem: Problem::UniqueGames,
        instance: inst,
        recovery: Recovery::Values,
        claimed_size: "t^tw * n".into(),
    })
}

/// Terminal `s_i` is pinned to value `i` by a unary hard constraint.
pub fn reduce_multiway_cut(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    let t = g.terminals.len();
    if t < 2 {
        return Err(ReductionError::TooFewTerminals);
    }
    let parts = range(t);
    let mut inst = CspInstance::uniform(g.n, &parts, Sense::Min);
    for (i, &s) in g.terminals.iter().enumerate() {
        inst.add_hard(vec![s], [vec![i as Value + 1]]);
    }
    let equal: Vec<Vec<Value>> = parts.iter().map(|&i| vec![i, i]).collect();
    for &(u, v) in &g.edges {
        inst.add_soft_relation(vec![u, v], Rational::one(), equal.clone());
    }
    Ok(ReductionOutput {
        problem: Problem::MultiwayCut,
        instance: inst,
        recovery: Recovery::Partition,
        claimed_size: "t^tw * n".into(),
    })
}

fn cut_instance(g: &GraphInput, sense: Sense) -> CspInstance {
    let mut inst = binary(g).with_sense(sense);
    for &(u, v) in &g.edges {
        inst.add_soft_relation(vec![u, v], Rational::one(), [vec![0, 1], vec![1, 0]]);
    }
    inst
}

pub fn reduce_max_cut(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    Ok(ReductionOutput {
        problem: Problem::MaxCut,
        instance: cut_instance(g, Sense::Max),
        recovery: Recovery::CutSide,
        claimed_size: "2^tw * n".into(),
    })
}

pub fn reduce_edge_bipartization(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    Ok(ReductionOutput {
        problem: Problem::EdgeBipartization,
        instance: cut_instance(g, Sense::Min),
        recovery: Recovery::CutSide,
        claimed_size: "2^tw * n".into(),
    })
}

fn cover_instance(g: &GraphInput, sense: Sense) -> CspInstance {
    let mut inst = binary(g).with_sense(sense);
    for &(u, v) in &g.edges {
        inst.add_hard(vec![u, v], [vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
    for v in 1..=g.n {
        inst.add_soft_relation(vec![v], Rational::one(), [vec![1]]);
    }
    inst
}

/// Value 0 marks a cover vertex; the objective counts them.
pub fn reduce_vertex_cover(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    Ok(ReductionOutput {
        problem: Problem::VertexCover,
        instance: cover_instance(g, Sense::Min),
        recovery: Recovery::ZeroSet,
        claimed_size: "2^tw * n".into(),
    })
}

/// Value 1 marks a set vertex; the objective counts them.
pub fn reduce_independent_set(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    Ok(ReductionOutput {
        problem: Problem::IndependentSet,
        instance: cover_instance(g, Sense::Max),
        recovery: Recovery::OneSet,
        claimed_size: "2^tw * n".into(),
    })
}

/// Values 0 and 1 are the two sides, 2 marks deletion.
pub fn reduce_oct(g: &GraphInput) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    let mut inst = CspInstance::uniform(g.n, &[0, 1, 2], Sense::Min);
    let allowed: Vec<Vec<Value>> = (0..3)
        .flat_map(|a| (0..3).map(move |b| vec![a, b]))
        .filter(|p| !(p[0] == p[1] && p[0] < 2))
        .collect();
    for &(u, v) in &g.edges {
        inst.add_hard(vec![u, v], allowed.clone());
    }
    for v in 1..=g.n {
        inst.add_soft_relation(vec![v], Rational::one(), [vec![0], vec![1]]);
    }
    Ok(ReductionOutput {
        problem: Problem::Oct,
        instance: inst,
        recovery: Recovery::ValueTwo,
        claimed_size: "3^tw * n".into(),
    })
}

/// Dispatch by problem. `param` is the color count for coloring and the
/// label count for unique games (inferred from the permutations if absent).
pub fn reduce(
    problem: Problem,
    g: &GraphInput,
    param: Option<usize>,
) -> Result<ReductionOutput, ReductionError> {
    match problem {
        Problem::Coloring => reduce_coloring(g, param.ok_or(ReductionError::NoColors)?),
        Problem::ListHColoring => reduce_list_h_coloring(g),
        Problem::UniqueGames => {
            let t = param.or(g.label_count()).ok_or(ReductionError::NoLabels)?;
            reduce_unique_games(g, t)
        }
        Problem::MultiwayCut => reduce_multiway_cut(g),
        Problem::MaxCut => reduce_max_cut(g),
        Problem::EdgeBipartization => reduce_edge_bipartization(g),
        Problem::VertexCover => reduce_vertex_cover(g),
        Problem::IndependentSet => reduce_independent_set(g),
        Problem::Oct => reduce_oct(g),
    }
}

impl ReductionOutput {
    pub fn recover(&self, ea: &ExtendedAssignment) -> Solution {
        let z = &ea.z.0;
        let with = |x: Value| -> Vec<Var> { (1..=z.len()).filter(|&v| z[v - 1] == x).collect() };
        match self.recovery {
            Recovery::Values => Solution::Values(z.clone()),
            Recovery::Partition => {
                let t = self.instance.max_domain_size();
                Solution::Partition((1..=t as Value).map(with).collect())
            }
            Recovery::CutSide => Solution::CutSide(with(1)),
            Recovery::ZeroSet => Solution::VertexSet(with(0)),
            Recovery::OneSet => Solution::VertexSet(with(1)),
            Recovery::ValueTwo => Solution::VertexSet(with(2)),
        }
    }

    /// Checks that `sol` is a valid solution of the source problem on `g`
    /// and returns its natural objective value (number of colors used, cut
    /// edges, set size, satisfied edges, ...).
    pub fn check_solution(&self, g: &GraphInput, sol: &Solution) -> Result<usize, String> {
        match (self.problem, sol) {
            (Problem::Coloring, Solution::Values(z)) => {
                for &(u, v) in &g.edges {
                    if z[u - 1] == z[v - 1] {
                        return Err(format!("edge {u}-{v} is monochromatic"));
                    }
                }
                Ok(z.iter().collect::<BTreeSet<_>>().len())
            }
            (Problem::ListHColoring, Solution::Values(z)) => {
                let h = g.pattern.as_ref().ok_or("no pattern graph")?;
                for v in 1..=g.n {
                    if let Some(l) = g.lists.get(&v) {
                        if !l.contains(&z[v - 1]) {
                            return Err(format!("vertex {v} is mapped outside its list"));
                        }
                    }
                }
                for &(u, v) in &g.edges {
                    if !h.has_edge(z[u - 1] as usize, z[v - 1] as usize) {
                        return Err(format!("edge {u}-{v} is not mapped to a pattern edge"));
                    }
                }
                Ok(0)
            }
            (Problem::UniqueGames, Solution::Values(z)) => Ok(g
                .edges
                .iter()
                .filter(|&&(u, v)| {
                    let a = z[u - 1];
                    let image = g.perms.get(&(u, v)).map_or(a, |p| p[a as usize - 1]);
                    image == z[v - 1]
                })
                .count()),
            (Problem::MultiwayCut, Solution::Partition(parts)) => {
                let mut seen = vec![0usize; g.n + 1];
                for p in parts {
                    for &v in p {
                        seen[v] += 1;
                    }
                }
                if seen[1..].iter().any(|&c| c != 1) {
                    return Err("parts do not partition the vertices".into());
                }
                for (i, &s) in g.terminals.iter().enumerate() {
                    if !parts[i].contains(&s) {
                        return Err(format!("terminal {s} is not in its part"));
                    }
                }
                let part_of = |v: Var| parts.iter().position(|p| p.contains(&v));
                Ok(g.edges
                    .iter()
                    .filter(|&&(u, v)| part_of(u) != part_of(v))
                    .count())
            }
            (Problem::MaxCut | Problem::EdgeBipartization, Solution::CutSide(side)) => {
                let cut = g
                    .edges
                    .iter()
                    .filter(|&&(u, v)| side.contains(&u) != side.contains(&v))
                    .count();
                Ok(if self.problem == Problem::MaxCut {
                    cut
                } else {
                    g.edges.len() - cut
                })
            }
            (Problem::VertexCover, Solution::VertexSet(s)) => {
                for &(u, v) in &g.edges {
                    if !s.contains(&u) && !s.contains(&v) {
                        return Err(format!("edge {u}-{v} is uncovered"));
                    }
                }
                Ok(s.len())
            }
            (Problem::IndependentSet, Solution::VertexSet(s)) => {
                for &(u, v) in &g.edges {
                    if s.contains(&u) && s.contains(&v) {
                        return Err(format!("edge {u}-{v} lies inside the set"));
                    }
                }
                Ok(s.len())
            }
            (Problem::Oct, Solution::VertexSet(deleted)) => {
                if is_bipartite_without(g, deleted) {
                    Ok(deleted.len())
                } else {
                    Err("residual graph is not bipartite".into())
                }
            }
            (p, s) => Err(format!("solution {s:?} does not fit problem {}", p.name())),
        }
    }
}

/// Two-colors `g - deleted` by breadth-first search.
pub fn is_bipartite_without(g: &GraphInput, deleted: &[Var]) -> bool {
    let gone: BTreeSet<Var> = deleted.iter().copied().collect();
    let mut adj = vec![Vec::new(); g.n + 1];
    for &(u, v) in &g.edges {
        if !gone.contains(&u) && !gone.contains(&v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut side: Vec<Option<bool>> = vec![None; g.n + 1];
    for s in 1..=g.n {
        if side[s].is_some() || gone.contains(&s) {
            continue;
        }
        side[s] = Some(false);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("visited");
            for &w in &adj[u] {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}
