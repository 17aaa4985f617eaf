use std::fmt::Write as _;

use super::{LinearProgram, LpSolution, Rational, Relation, Sense, SolveError, Status};

pub const DEFAULT_PIVOT_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub pivot_limit: usize,
    pub dump_tableau: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pivot_limit: DEFAULT_PIVOT_LIMIT,
            dump_tableau: false,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, SolveError> {
    solve_with(lp, &SolveOptions::default())
}

/// Sparse row: sorted by column, no explicit zeros.
type Row = Vec<(usize, Rational)>;

fn row_get(row: &Row, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|k| &row[k].1)
}

/// `row - factor * other`, both sorted.
fn row_axpy(row: &Row, factor: &Rational, other: &Row) -> Row {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut k) = (0, 0);
    while i < row.len() || k < other.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let ck = other.get(k).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < ck {
            out.push(row[i].clone());
            i += 1;
        } else if ck < ci {
            out.push((ck, -(factor * &other[k].1)));
            k += 1;
        } else {
            let v = &row[i].1 - &(factor * &other[k].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

struct Tableau {
    rows: Vec<Row>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs for the current phase (maximization form).
    reduced: Vec<Rational>,
    value: Rational,
    /// Columns that may never enter the basis in the current phase.
    blocked: Vec<bool>,
    pivots: usize,
    pivot_limit: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn column_entry(&self, row: usize, col: usize) -> Option<&Rational> {
        row_get(&self.rows[row], col)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let a = self.column_entry(r, q).cloned().expect("pivot on zero");
        let inv = a.recip();
        let prow: Row = self.rows[r].iter().map(|(c, v)| (*c, v * &inv)).collect();
        let prhs = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            if let Some(f) = self.column_entry(i, q).cloned() {
                self.rows[i] = row_axpy(&self.rows[i], &f, &prow);
                self.rhs[i] = &self.rhs[i] - &(&f * &prhs);
            }
        }
        let dq = self.reduced[q].clone();
        if !dq.is_zero() {
            for (c, v) in &prow {
                self.reduced[*c] = &self.reduced[*c] - &(&dq * v);
            }
            self.value = &self.value + &(&dq * &prhs);
        }
        self.rows[r] = prow;
        self.rhs[r] = prhs;
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column enters; among rows tied in
    /// the ratio test the one whose basic column has the lowest index leaves.
    fn run(&mut self) -> Result<Outcome, SolveError> {
        loop {
            if self.pivots >= self.pivot_limit {
                return Err(SolveError::PivotLimit(self.pivot_limit));
            }
            let entering = (0..self.reduced.len())
                .find(|&j| !self.blocked[j] && self.reduced[j].is_positive());
            let Some(q) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let Some(a) = self.column_entry(i, q) else {
                    continue;
                };
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Ok(Outcome::Unbounded),
                Some((r, _)) => self.pivot(r, q),
            }
        }
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.value = Rational::zero();
        for i in 0..self.rows.len() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (c, v) in &self.rows[i] {
                self.reduced[*c] = &self.reduced[*c] - &(cb * v);
            }
            self.value = &self.value + &(cb * &self.rhs[i]);
        }
    }

    fn dump(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "objective value {}", self.value);
        let _ = write!(out, "reduced:");
        for (j, d) in self.reduced.iter().enumerate() {
            if !d.is_zero() {
                let _ = write!(out, " {}={}", names(j), d);
            }
        }
        let _ = writeln!(out);
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "r{i} [{}] rhs={} :", names(self.basis[i]), self.rhs[i]);
            for (c, v) in row {
                let _ = write!(out, " {}*{}", v, names(*c));
            }
            let _ = writeln!(out);
        }
        out
    }
}

/// Row of the standard form before the tableau is built.
struct StdRow {
    coeffs: Vec<(usize, Rational)>,
    rhs: Rational,
    /// Column of the initial basic variable (slack or artificial), which is a
    /// unit vector in this row.
    init_col: usize,
    /// The original row was multiplied by -1 to make the rhs nonnegative.
    negated: bool,
}

/// Upper bounds implied by an equality or `<=` row whose coefficients are all
/// nonnegative. Such bounds need no explicit row.
fn implied_upper_bounds(lp: &LinearProgram) -> Vec<Option<Rational>> {
    let mut implied: Vec<Option<Rational>> = vec![None; lp.num_vars()];
    for c in &lp.constraints {
        if c.relation == Relation::Ge || c.rhs.is_negative() {
            continue;
        }
        if c.coeffs.iter().any(|(_, a)| a.is_negative()) {
            continue;
        }
        for (j, a) in &c.coeffs {
            if a.is_zero() {
                continue;
            }
            let bound = &c.rhs / a;
            implied[*j] = Some(match implied[*j].take() {
                Some(b) => b.min(bound),
                None => bound,
            });
        }
    }
    implied
}

pub fn solve_with(lp: &LinearProgram, opts: &SolveOptions) -> Result<LpSolution, SolveError> {
    let n = lp.num_vars();
    for (ci, c) in lp.constraints.iter().enumerate() {
        if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
            return Err(SolveError::UnknownVariable {
                constraint: ci,
                var: *j,
                num_vars: n,
            });
        }
    }
    if let Some(j) = lp
        .upper
        .iter()
        .position(|u| u.as_ref().is_some_and(|u| u.is_negative()))
    {
        return Err(SolveError::NegativeUpperBound(j));
    }

    // Explicit rows for bounds that the model does not already imply.
    let implied = implied_upper_bounds(lp);
    let bound_rows: Vec<(usize, Rational)> = lp
        .upper
        .iter()
        .enumerate()
        .filter_map(|(j, u)| {
            let u = u.as_ref()?;
            match &implied[j] {
                Some(b) if b <= u => None,
                _ => Some((j, u.clone())),
            }
        })
        .collect();

    let m_model = lp.constraints.len();
    let m = m_model + bound_rows.len();

    // Column layout: [structural | slack/surplus | artificial].
    let mut slack_count = 0usize;
    let mut pending: Vec<(Vec<(usize, Rational)>, Relation, Rational)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut coeffs: Vec<(usize, Rational)> = c
            .coeffs
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .cloned()
            .collect();
        coeffs.sort_by_key(|(j, _)| *j);
        pending.push((coeffs, c.relation, c.rhs.clone()));
    }
    for (j, u) in &bound_rows {
        pending.push((vec![(*j, Rational::one())], Relation::Le, u.clone()));
    }
    let slack_of: Vec<Option<usize>> = pending
        .iter()
        .map(|(_, rel, _)| {
            if *rel == Relation::Eq {
                None
            } else {
                slack_count += 1;
                Some(n + slack_count - 1)
            }
        })
        .collect();
    let first_art = n + slack_count;
    let mut art_count = 0usize;
    let mut std_rows = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    for (i, (mut coeffs, rel, mut rhs)) in pending.into_iter().enumerate() {
        if let Some(s) = slack_of[i] {
            let sign = if rel == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
            coeffs.push((s, sign));
        }
        let negated = rhs.is_negative();
        if negated {
            rhs = -rhs;
            for (_, a) in coeffs.iter_mut() {
                *a = -&*a;
            }
        }
        let slack_is_unit = slack_of[i]
            .map(|s| coeffs.iter().any(|(c, a)| *c == s && a.is_one()))
            .unwrap_or(false);
        let init_col = if slack_is_unit {
            slack_of[i].unwrap()
        } else {
            let a = first_art + art_count;
            art_count += 1;
            coeffs.push((a, Rational::one()));
            artificial_rows.push(i);
            a
        };
        std_rows.push(StdRow {
            coeffs,
            rhs,
            init_col,
            negated,
        });
    }
    let total_cols = first_art + art_count;

    let mut tab = Tableau {
        rows: std_rows.iter().map(|r| r.coeffs.clone()).collect(),
        rhs: std_rows.iter().map(|r| r.rhs.clone()).collect(),
        basis: std_rows.iter().map(|r| r.init_col).collect(),
        reduced: Vec::new(),
        value: Rational::zero(),
        blocked: vec![false; total_cols],
        pivots: 0,
        pivot_limit: opts.pivot_limit,
    };

    let names = |j: usize| -> String {
        if j < n {
            format!("x{j}")
        } else if j < first_art {
            format!("s{}", j - n)
        } else {
            format!("a{}", j - first_art)
        }
    };

    let infeasible = |tab: &Tableau| LpSolution {
        status: Status::Infeasible,
        values: vec![Rational::zero(); n],
        objective: Rational::zero(),
        basis: tab.basis.clone(),
        duals: vec![Rational::zero(); m_model],
        pivots: tab.pivots,
        tableau_dump: opts.dump_tableau.then(|| tab.dump(&names)),
    };

    // Phase 1: maximize -Σ artificials.
    if art_count > 0 {
        let mut costs = vec![Rational::zero(); total_cols];
        for c in costs.iter_mut().skip(first_art) {
            *c = -Rational::one();
        }
        tab.set_costs(&costs);
        tab.run()?;
        if tab.value.is_negative() {
            return Ok(infeasible(&tab));
        }
        // Drive remaining (zero-valued) artificials out of the basis. A row
        // with no structural or slack entry is redundant; its artificial stays
        // basic at zero and can never move.
        for r in 0..tab.rows.len() {
            if tab.basis[r] < first_art {
                continue;
            }
            let col = tab.rows[r]
                .iter()
                .find(|(c, _)| *c < first_art)
                .map(|(c, _)| *c);
            if let Some(q) = col {
                tab.pivot(r, q);
            }
        }
        for b in tab.blocked.iter_mut().skip(first_art) {
            *b = true;
        }
    }

    // Phase 2.
    let mut costs = vec![Rational::zero(); total_cols];
    for (j, c) in lp.objective.iter().enumerate() {
        costs[j] = match lp.sense {
            Sense::Max => c.clone(),
            Sense::Min => -c,
        };
    }
    tab.set_costs(&costs);
    let outcome = tab.run()?;

    let mut values = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            values[b] = tab.rhs[i].clone();
        }
    }
    let objective = lp.objective_value(&values);

    // Duals from the reduced costs of each row's initial unit column:
    // d_col = cost_col - π_i with cost_col = 0 in phase 2.
    let duals: Vec<Rational> = std_rows
        .iter()
        .take(m_model)
        .map(|row| {
            let pi = -&tab.reduced[row.init_col];
            if row.negated {
                -pi
            } else {
                pi
            }
        })
        .collect();

    let status = match outcome {
        Outcome::Optimal => Status::Optimal,
        Outcome::Unbounded => Status::Unbounded,
    };
    Ok(LpSolution {
        status,
        values,
        objective,
        basis: tab.basis.clone(),
        duals,
        pivots: tab.pivots,
        tableau_dump: opts.dump_tableau.then(|| tab.dump(&names)),
    })
}
