//! Three-way agreement between the extended LP, the decomposition DP and
//! brute force, plus the 0/1 check on the LP vertex.

use serde::Serialize;

use crate::csp::{CspInstance, ValidationError};
use crate::extform::{build_extended_lp_with, LpModel, Provenance, DEFAULT_MAX_CONFIGS};
use crate::oracles::{brute_force, treewidth_dp};
use crate::pipeline::decompose;
use crate::random::{case_rng, random_instance, InstanceParams};
use crate::ratlp::{is_integral, solve, Rational, Status};

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Negative control: every bag-sum row gets right-hand side 1/2, which
    /// makes the all-halves point feasible and the vertex fractional.
    pub corrupt_bag_sums: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub n: usize,
    pub width: Option<usize>,
    pub f_variables: Option<usize>,
    pub lp: Option<Rational>,
    pub dp: Option<Rational>,
    pub brute_force: Option<Rational>,
    pub lp_status: Option<Status>,
    pub agree: bool,
    /// `None` when the LP has no optimal vertex to inspect.
    pub integral: Option<bool>,
    pub error: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.agree && self.integral != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: Option<u64>,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CaseReport>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn corrupt(model: &mut LpModel) {
    for (row, prov) in model.lp.constraints.iter_mut().zip(&model.rows) {
        if *prov == Provenance::BagSum {
            row.rhs = Rational::new(1, 2);
        }
    }
}

pub fn verify_instance(label: &str, inst: &CspInstance, opts: &VerifyOptions) -> CaseReport {
    let mut report = CaseReport {
        label: label.to_string(),
        n: inst.n,
        width: None,
        f_variables: None,
        lp: None,
        dp: None,
        brute_force: None,
        lp_status: None,
        agree: false,
        integral: None,
        error: None,
    };
    if let Err(e) = run(inst, opts, &mut report) {
        report.error = Some(e);
    }
    report
}

fn run(inst: &CspInstance, opts: &VerifyOptions, report: &mut CaseReport) -> Result<(), String> {
    if let Err(errs) = inst.validate() {
        if errs
            .iter()
            .all(|e| matches!(e, ValidationError::EmptyDomain(_)))
        {
            report.agree = true;
            return Ok(());
        }
        return Err(format!("invalid instance: {errs:?}"));
    }
    let bf = brute_force(inst).map_err(|e| e.to_string())?;
    report.brute_force = bf.optimum().cloned();
    let ntd = decompose(inst, None).map_err(|e| e.to_string())?;
    report.width = Some(ntd.width());
    let dp = treewidth_dp(inst, &ntd).map_err(|e| e.to_string())?;
    report.dp = dp.optimum().cloned();

    let mut model =
        build_extended_lp_with(inst, &ntd, DEFAULT_MAX_CONFIGS).map_err(|e| e.to_string())?;
    if opts.corrupt_bag_sums {
        corrupt(&mut model);
    }
    report.f_variables = Some(model.f_vars().len());
    let sol = solve(&model.lp).map_err(|e| e.to_string())?;
    report.lp_status = Some(sol.status);
    if sol.status == Status::Optimal {
        report.lp = Some(sol.objective.clone());
        report.integral = Some(is_integral(&sol, model.f_vars()));
    }
    report.agree = report.lp == report.dp && report.dp == report.brute_force;
    Ok(())
}

pub fn verify_cases(seed: u64, k: usize, opts: &VerifyOptions) -> Vec<CaseReport> {
    let params = InstanceParams::default();
    (0..k)
        .map(|i| {
            let inst = random_instance(&mut case_rng(seed, i as u64), &params);
            verify_instance(&format!("seed {seed} case {i}"), &inst, opts)
        })
        .collect()
}

/// Checks `k` random instances drawn from `seed`.
pub fn verify_suite(seed: u64, k: usize, opts: &VerifyOptions) -> VerifyReport {
    summarize(Some(seed), verify_cases(seed, k, opts))
}

pub fn summarize(seed: Option<u64>, cases: Vec<CaseReport>) -> VerifyReport {
    let total = cases.len();
    let failures: Vec<CaseReport> = cases.into_iter().filter(|c| !c.passed()).collect();
    VerifyReport {
        seed,
        cases: total,
        passed: total - failures.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{reduce_independent_set, GraphInput};

    #[test]
    fn triangle_passes_and_corruption_is_caught() {
        let inst = reduce_independent_set(&GraphInput::complete(3))
            .unwrap()
            .instance;
        let good = verify_instance("k3", &inst, &VerifyOptions::default());
        assert!(good.passed(), "{good:?}");
        assert_eq!(good.lp, Some(Rational::one()));
        let bad = verify_instance(
            "k3",
            &inst,
            &VerifyOptions {
                corrupt_bag_sums: true,
            },
        );
        assert_eq!(bad.integral, Some(false));
        assert!(!bad.passed());
    }

    #[test]
    fn zero_cases_is_a_pass() {
        let r = verify_suite(1, 0, &VerifyOptions::default());
        assert!(r.ok());
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn small_suite_passes() {
        let r = verify_suite(3, 10, &VerifyOptions::default());
        assert!(r.ok(), "{:?}", r.failures);
    }
}
