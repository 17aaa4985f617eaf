//! Exact linear programming over rationals.
//!
//! [`solve`] runs a two-phase tableau simplex with Bland's pivoting rule and
//! returns a basic feasible solution, so the values it reports are the
//! coordinates of a vertex of the feasible polytope. Every arithmetic
//! operation is exact; there are no tolerances anywhere in this module.

mod certificate;
mod rational;
mod simplex;

pub use certificate::{check_feasible, verify_optimality, CertificateError, Violation};
pub use rational::{lcm_of_denominators, ParseRationalError, Rational};
pub use simplex::{solve, solve_with, SolveOptions, DEFAULT_PIVOT_LIMIT};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[serde(alias = "max", alias = "maximize")]
    Max,
    #[serde(alias = "min", alias = "minimize")]
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// A single row `Σ coeffs · x  (relation)  rhs`. Coefficients are sparse and
/// keyed by variable index; an index may appear at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &values[*j]).sum()
    }
}

/// `optimize objective · x  s.t.  constraints,  0 <= x_j <= upper_j`.
///
/// Every variable has lower bound zero; `upper[j] == None` means unbounded
/// above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: Vec::new(),
            upper: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, cost: Rational, upper: Option<Rational>) -> usize {
        self.objective.push(cost);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    pub fn add_constraint(&mut self, c: Constraint) -> usize {
        self.constraints.push(c);
        self.constraints.len() - 1
    }

    pub fn nonzeros(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| c.coeffs.iter().filter(|(_, a)| !a.is_zero()).count())
            .sum()
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// One value per model variable. All zero unless `status == Optimal`.
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Basic columns of the final tableau. Indices below `num_vars` are model
    /// variables; larger indices are slack, surplus, bound or artificial columns.
    pub basis: Vec<usize>,
    /// Dual multipliers, one per model constraint, for the maximization form
    /// of the model (objective negated when minimizing; see
    /// [`verify_optimality`]).
    pub duals: Vec<Rational>,
    pub pivots: usize,
    pub tableau_dump: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(
        "constraint {constraint} references variable {var} but the model has {num_vars} variables"
    )]
    UnknownVariable {
        constraint: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("variable {0} has a negative upper bound")]
    NegativeUpperBound(usize),
    #[error("pivot limit of {0} reached; aborting")]
    PivotLimit(usize),
}

/// True iff every listed variable is exactly 0 or 1.
pub fn is_integral(sol: &LpSolution, vars: impl IntoIterator<Item = usize>) -> bool {
    vars.into_iter()
        .all(|j| sol.values[j].is_zero() || sol.values[j].is_one())
}
