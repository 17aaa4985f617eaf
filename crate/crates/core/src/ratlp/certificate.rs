//! Post-hoc checks that look only at the model and the reported numbers,
//! never at the tableau that produced them.

use super::{LinearProgram, LpSolution, Rational, Relation, Sense, Status};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("variable {var} = {value} violates its bounds")]
    Bound { var: usize, value: Rational },
    #[error("constraint {constraint}: lhs {lhs} {relation} {rhs} does not hold")]
    Row {
        constraint: usize,
        lhs: Rational,
        relation: &'static str,
        rhs: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("solution is not optimal (status {0:?})")]
    NotOptimal(Status),
    #[error("primal infeasible: {0}")]
    Primal(Violation),
    #[error("expected {expected} dual values, got {got}")]
    DualLength { expected: usize, got: usize },
    #[error("dual multiplier of constraint {0} has the wrong sign")]
    DualSign(usize),
    #[error("reduced cost of unbounded variable {0} is positive")]
    ReducedCost(usize),
    #[error("duality gap: primal {primal}, dual {dual}")]
    Gap { primal: Rational, dual: Rational },
}

/// Exact substitution of `values` into every row and bound.
pub fn check_feasible(lp: &LinearProgram, values: &[Rational]) -> Result<(), Violation> {
    if values.len() != lp.num_vars() {
        return Err(Violation::Length {
            expected: lp.num_vars(),
            got: values.len(),
        });
    }
    for (j, x) in values.iter().enumerate() {
        let above = lp.upper[j].as_ref().is_some_and(|u| x > u);
        if x.is_negative() || above {
            return Err(Violation::Bound {
                var: j,
                value: x.clone(),
            });
        }
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs = c.lhs(values);
        if !c.relation.holds(&lhs, &c.rhs) {
            return Err(Violation::Row {
                constraint: i,
                lhs,
                relation: c.relation.symbol(),
                rhs: c.rhs.clone(),
            });
        }
    }
    Ok(())
}

/// Verifies a primal/dual optimality certificate.
///
/// With `c' = c` for maximization and `c' = -c` for minimization, the
/// multipliers `π` must satisfy `π_i >= 0` on `<=` rows and `π_i <= 0` on
/// `>=` rows. Writing `r = c' - Aᵀπ`, weak duality gives
/// `c'x <= bᵀπ + Σ_j u_j·max(0, r_j)` for every feasible `x` (with `r_j <= 0`
/// required when `x_j` has no upper bound). Equality at the reported point
/// proves it optimal.
pub fn verify_optimality(lp: &LinearProgram, sol: &LpSolution) -> Result<(), CertificateError> {
    if sol.status != Status::Optimal {
        return Err(CertificateError::NotOptimal(sol.status));
    }
    check_feasible(lp, &sol.values).map_err(CertificateError::Primal)?;
    if sol.duals.len() != lp.constraints.len() {
        return Err(CertificateError::DualLength {
            expected: lp.constraints.len(),
            got: sol.duals.len(),
        });
    }
    let flip = |c: &Rational| match lp.sense {
        Sense::Max => c.clone(),
        Sense::Min => -c,
    };
    let mut reduced: Vec<Rational> = lp.objective.iter().map(flip).collect();
    let mut dual_value = Rational::zero();
    for (i, (c, pi)) in lp.constraints.iter().zip(&sol.duals).enumerate() {
        let sign_ok = match c.relation {
            Relation::Eq => true,
            Relation::Le => !pi.is_negative(),
            Relation::Ge => !pi.is_positive(),
        };
        if !sign_ok {
            return Err(CertificateError::DualSign(i));
        }
        if pi.is_zero() {
            continue;
        }
        for (j, a) in &c.coeffs {
            reduced[*j] = &reduced[*j] - &(a * pi);
        }
        dual_value += &(&c.rhs * pi);
    }
    for (j, r) in reduced.iter().enumerate() {
        if !r.is_positive() {
            continue;
        }
        match &lp.upper[j] {
            Some(u) => dual_value += &(u * r),
            None => return Err(CertificateError::ReducedCost(j)),
        }
    }
    let primal = flip(&lp.objective_value(&sol.values));
    if primal != dual_value {
        return Err(CertificateError::Gap {
            primal,
            dual: dual_value,
        });
    }
    Ok(())
}
