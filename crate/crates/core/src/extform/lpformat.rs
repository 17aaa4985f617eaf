//! CPLEX LP text output.
//!
//! Coefficients are written as decimals when that is exact. A row (or the
//! objective) containing a coefficient without a finite decimal expansion is
//! multiplied through by the common denominator of its coefficients and a
//! comment records the factor, so the file always describes the model
//! exactly.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use super::{formulation_stats, LpModel, ModelKind};
use crate::ratlp::{lcm_of_denominators, Rational, Relation, Sense};

const TERMS_PER_LINE: usize = 8;

/// Coefficients as written, plus the factor applied (1 if none).
fn scaled(
    coeffs: &[&Rational],
    rhs: Option<&Rational>,
) -> (Vec<Rational>, Option<Rational>, BigInt) {
    let all_exact = coeffs
        .iter()
        .chain(rhs.iter())
        .all(|c| c.is_finite_decimal());
    if all_exact {
        return (
            coeffs.iter().map(|&c| c.clone()).collect(),
            rhs.cloned(),
            BigInt::one(),
        );
    }
    let factor = lcm_of_denominators(coeffs.iter().copied().chain(rhs));
    let f = Rational::from_big(factor.clone(), BigInt::one());
    (
        coeffs.iter().map(|&c| c * &f).collect(),
        rhs.map(|r| r * &f),
        factor,
    )
}

fn decimal(x: &Rational) -> String {
    x.to_decimal_string().expect("scaled to a finite decimal")
}

fn write_terms(out: &mut String, terms: &[(Rational, String)]) {
    for (i, (c, name)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        if mag.is_one() {
            write!(out, " {sign} {name}").unwrap();
        } else {
            write!(out, " {sign} {} {name}", decimal(&mag)).unwrap();
        }
    }
}

pub fn write_lp(model: &LpModel) -> String {
    let stats = formulation_stats(model);
    let names: Vec<String> = model.vars.iter().map(|k| k.name()).collect();
    let mut out = String::new();
    let mut notes: Vec<String> = Vec::new();

    let title = match model.kind {
        ModelKind::Base => "local relaxation over constraint scopes",
        ModelKind::Extended => "extended formulation over decomposition bags",
    };

    let obj_idx: Vec<usize> = (0..model.num_vars())
        .filter(|&j| !model.lp.objective[j].is_zero())
        .collect();
    let obj_coeffs: Vec<&Rational> = obj_idx.iter().map(|&j| &model.lp.objective[j]).collect();
    let (obj_vals, _, obj_factor) = scaled(&obj_coeffs, None);
    if !obj_factor.is_one() {
        notes.push(format!("objective scaled by {obj_factor}"));
    }

    let mut body = String::new();
    for (i, row) in model.lp.constraints.iter().enumerate() {
        let rname = format!("{}{}", model.rows[i].tag(), i);
        let coeffs: Vec<&Rational> = row.coeffs.iter().map(|(_, c)| c).collect();
        let (vals, rhs, factor) = scaled(&coeffs, Some(&row.rhs));
        if !factor.is_one() {
            notes.push(format!("row {rname} scaled by {factor}"));
            writeln!(body, "\\ {rname} scaled by {factor}").unwrap();
        }
        let mut terms: Vec<(Rational, String)> = row
            .coeffs
            .iter()
            .zip(vals)
            .filter(|(_, v)| !v.is_zero())
            .map(|((j, _), v)| (v, names[*j].clone()))
            .collect();
        if terms.is_empty() {
            match names.first() {
                Some(n) => terms.push((Rational::zero(), n.clone())),
                None => {
                    writeln!(body, "\\ {rname} has no variables").unwrap();
                    continue;
                }
            }
        }
        write!(body, " {rname}:").unwrap();
        if terms.len() == 1 && terms[0].0.is_zero() {
            write!(body, " 0 {}", terms[0].1).unwrap();
        } else {
            write_terms(&mut body, &terms);
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        writeln!(body, " {rel} {}", decimal(&rhs.expect("rhs"))).unwrap();
    }

    writeln!(out, "\\ {title}").unwrap();
    if notes.is_empty() {
        writeln!(
            out,
            "\\ exact: every coefficient is written as an exact decimal"
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "\\ exact: {} line(s) scaled to integer coefficients, see the comments below",
            notes.len()
        )
        .unwrap();
        for n in &notes {
            writeln!(out, "\\   {n}").unwrap();
        }
    }
    write!(
        out,
        "\\ stats: variables={} constraints={} nonzeros={} f_variables={}",
        stats.variables, stats.constraints, stats.nonzeros, stats.f_variables
    )
    .unwrap();
    if let (Some(nodes), Some(width)) = (stats.nodes, stats.width) {
        write!(
            out,
            " nodes={nodes} width={width} max_domain={}",
            stats.max_domain
        )
        .unwrap();
    }
    if let Some(ok) = stats.within_bounds {
        write!(out, " within_bounds={ok}").unwrap();
    }
    out.push('\n');

    out.push_str(match model.lp.sense {
        Sense::Max => "Maximize\n",
        Sense::Min => "Minimize\n",
    });
    out.push_str(" obj:");
    let obj_terms: Vec<(Rational, String)> = obj_idx
        .iter()
        .zip(obj_vals)
        .map(|(&j, c)| (c, names[j].clone()))
        .collect();
    if obj_terms.is_empty() {
        if let Some(n) = names.first() {
            write!(out, " 0 {n}").unwrap();
        }
    } else {
        write_terms(&mut out, &obj_terms);
    }
    out.push('\n');
    out.push_str("Subject To\n");
    out.push_str(&body);
    out.push_str("Bounds\n");
    for (j, name) in names.iter().enumerate() {
        match &model.lp.upper[j] {
            Some(u) => {
                let u = u.to_decimal_string().unwrap_or_else(|| u.to_string());
                writeln!(out, " 0 <= {name} <= {u}").unwrap();
            }
            None => writeln!(out, " {name} >= 0").unwrap(),
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::CspInstance;
    use crate::extform::tests::is_k3;
    use crate::extform::{build_base_lp, build_extended_lp};
    use crate::treedec::{make_nice, TreeDecomposition};

    #[test]
    fn base_and_extended_differ_in_variable_kinds() {
        let q = is_k3();
        let base = write_lp(&build_base_lp(&q));
        let ntd = make_nice(&TreeDecomposition::new(vec![vec![1, 2, 3]], vec![]));
        let ext = write_lp(&build_extended_lp(&q, &ntd).unwrap());
        assert!(base.contains("y_1_0") && base.contains("g_h0_1_0.2_0"));
        assert!(!base.contains(" f_1"));
        assert!(ext.contains("f_1_0.2_0.3_0") && !ext.contains("y_1_0"));
        assert!(ext.starts_with("\\ extended"));
        assert!(ext.contains("Maximize\n obj:"));
        assert!(ext.ends_with("End\n"));
        assert!(ext.contains("within_bounds=true"));
    }

    #[test]
    fn empty_objective_and_determinism() {
        let q = CspInstance::uniform(2, &[0, 1], Sense::Min);
        let m = build_base_lp(&q);
        let text = write_lp(&m);
        assert!(text.contains("Minimize\n obj: 0 y_1_0\n"));
        assert_eq!(text, write_lp(&build_base_lp(&q)));
    }

    #[test]
    fn non_decimal_weights_are_scaled() {
        let mut q = CspInstance::uniform(1, &[0, 1], Sense::Max);
        q.add_soft_relation(vec![1], Rational::new(1, 3), [vec![1]]);
        q.add_soft_relation(vec![1], Rational::new(1, 2), [vec![0]]);
        let text = write_lp(&build_base_lp(&q));
        assert!(text.contains("objective scaled by 6"), "{text}");
        assert!(text.contains("+ 2 g_s0_1_1"));
        assert!(text.contains("+ 3 g_s1_1_0"));
    }

    #[test]
    fn decimal_weights_are_written_directly() {
        let mut q = CspInstance::uniform(1, &[0, 1], Sense::Max);
        q.add_soft_relation(vec![1], Rational::new(5, 2), [vec![1]]);
        let text = write_lp(&build_base_lp(&q));
        assert!(text.contains("+ 2.5 g_s0_1_1"));
        assert!(text.contains("exact: every coefficient"));
    }
}
