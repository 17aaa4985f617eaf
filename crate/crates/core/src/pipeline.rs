//! Instance to witness: validate, decompose, build, solve, project.

use serde::Serialize;

use crate::csp::{Assignment, CspInstance, ExtendedAssignment, ValidationError};
use crate::extform::{
    build_base_lp, build_extended_lp_with, formulation_stats, proj1, proj2, ExtformError,
    FormulationStats, LpModel, ModelKind, ProjError, DEFAULT_MAX_CONFIGS,
};
use crate::ratlp::{
    is_integral, solve_with, LpSolution, Rational, SolveError, SolveOptions, Status,
};
use crate::treedec::{
    heuristic_tree_decomposition, make_nice, NiceTreeDecomposition, TdError, TreeDecomposition,
};

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub model: ModelKind,
    pub td: Option<TreeDecomposition>,
    pub max_configs: usize,
    pub dump_tableau: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            model: ModelKind::Extended,
            td: None,
            max_configs: DEFAULT_MAX_CONFIGS,
            dump_tableau: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid instance: {0:?}")]
    Invalid(Vec<ValidationError>),
    #[error("invalid tree decomposition: {0:?}")]
    Decomposition(Vec<TdError>),
    #[error(transparent)]
    Extform(#[from] ExtformError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Projection(#[from] ProjError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub max_domain: usize,
    pub hard: usize,
    pub soft: usize,
}

impl InstanceSummary {
    pub fn of(inst: &CspInstance) -> Self {
        InstanceSummary {
            n: inst.n,
            max_domain: inst.max_domain_size(),
            hard: inst.hard.len(),
            soft: inst.soft.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub summary: InstanceSummary,
    pub ntd: Option<NiceTreeDecomposition>,
    /// `None` when the instance was rejected before any model was built
    /// (a variable with an empty domain).
    pub model: Option<LpModel>,
    pub stats: Option<FormulationStats>,
    pub solution: Option<LpSolution>,
    pub status: Status,
    pub optimum: Option<Rational>,
    /// Whether the returned vertex is 0/1 on every variable of the model.
    /// `None` unless the LP was solved to optimality.
    pub integral: Option<bool>,
    pub witness: Option<Assignment>,
    pub extended: Option<ExtendedAssignment>,
}

fn only_empty_domains(errs: &[ValidationError]) -> bool {
    errs.iter()
        .all(|e| matches!(e, ValidationError::EmptyDomain(_)))
}

pub fn decompose(
    instance: &CspInstance,
    td: Option<&TreeDecomposition>,
) -> Result<NiceTreeDecomposition, PipelineError> {
    let graph = instance.constraint_graph();
    let td = match td {
        Some(td) => {
            td.validate(&graph).map_err(PipelineError::Decomposition)?;
            td.clone()
        }
        None => heuristic_tree_decomposition(&graph),
    };
    Ok(make_nice(&td))
}

pub fn solve_instance(
    instance: &CspInstance,
    opts: &PipelineOptions,
) -> Result<PipelineOutput, PipelineError> {
    let summary = InstanceSummary::of(instance);
    if let Err(errs) = instance.validate() {
        if !only_empty_domains(&errs) {
            return Err(PipelineError::Invalid(errs));
        }
        return Ok(PipelineOutput {
            summary,
            ntd: None,
            model: None,
            stats: None,
            solution: None,
            status: Status::Infeasible,
            optimum: None,
            integral: None,
            witness: None,
            extended: None,
        });
    }
    let base = build_base_lp(instance);
    let (model, ntd) = match opts.model {
        ModelKind::Base => (base.clone(), None),
        ModelKind::Extended => {
            let ntd = decompose(instance, opts.td.as_ref())?;
            (
                build_extended_lp_with(instance, &ntd, opts.max_configs)?,
                Some(ntd),
            )
        }
    };
    let stats = formulation_stats(&model);
    let solution = solve_with(
        &model.lp,
        &SolveOptions {
            dump_tableau: opts.dump_tableau,
            ..SolveOptions::default()
        },
    )?;
    let mut out = PipelineOutput {
        summary,
        ntd,
        model: None,
        stats: Some(stats),
        solution: None,
        status: solution.status,
        optimum: None,
        integral: None,
        witness: None,
        extended: None,
    };
    if solution.status == Status::Optimal {
        let integral = is_integral(&solution, 0..model.num_vars());
        out.optimum = Some(solution.objective.clone());
        out.integral = Some(integral);
        if integral {
            let point = match model.kind {
                ModelKind::Base => solution.values.clone(),
                ModelKind::Extended => proj2(&model, &base, &solution.values)?,
            };
            let ea = proj1(instance, &base, &point)?;
            out.witness = Some(ea.z.clone());
            out.extended = Some(ea);
        }
    }
    out.model = Some(model);
    out.solution = Some(solution);
    Ok(out)
}
