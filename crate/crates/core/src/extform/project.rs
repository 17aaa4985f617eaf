use super::{Configuration, LpModel, ModelKind, VarKind};
use crate::csp::{Assignment, ConstraintRef, CspError, CspInstance, ExtendedAssignment, Var};
use crate::ratlp::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjError {
    #[error("expected a {expected:?} model")]
    WrongModel { expected: ModelKind },
    #[error("point has {got} coordinates, model has {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("constraint {0} of the target model has no designated bag")]
    MissingConstraint(ConstraintRef),
    #[error("point is not integral")]
    NonIntegralInput,
    #[error("integral point does not encode an assignment: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Csp(#[from] CspError),
}

fn check_len(model: &LpModel, point: &[Rational]) -> Result<(), ProjError> {
    if point.len() != model.num_vars() {
        return Err(ProjError::WrongLength {
            expected: model.num_vars(),
            got: point.len(),
        });
    }
    Ok(())
}

fn expect_kind(model: &LpModel, kind: ModelKind) -> Result<(), ProjError> {
    if model.kind != kind {
        return Err(ProjError::WrongModel { expected: kind });
    }
    Ok(())
}

/// Maps a point of the extended model to the unique point of the base model
/// it determines. Value indicators are read off the designated bag of each
/// variable, scope indicators off the designated bag of each constraint.
pub fn proj2(ext: &LpModel, base: &LpModel, f: &[Rational]) -> Result<Vec<Rational>, ProjError> {
    expect_kind(ext, ModelKind::Extended)?;
    expect_kind(base, ModelKind::Base)?;
    check_len(ext, f)?;
    let mut out = Vec::with_capacity(base.num_vars());
    for kind in &base.vars {
        let value = match kind {
            VarKind::Y { var, value } => {
                let b = ext.vertex_bag[var - 1];
                ext.bags[b]
                    .1
                    .iter()
                    .filter(|&&j| ext.config(j).get(*var) == Some(*value))
                    .map(|&j| &f[j])
                    .sum()
            }
            VarKind::G { constraint, config } => {
                let b = *ext
                    .constraint_bag
                    .get(constraint)
                    .ok_or(ProjError::MissingConstraint(*constraint))?;
                let scope = config.support();
                ext.bags[b]
                    .1
                    .iter()
                    .filter(|&&j| ext.config(j).restrict(&scope) == *config)
                    .map(|&j| &f[j])
                    .sum()
            }
            VarKind::F(_) => unreachable!("base models have no configuration variables"),
        };
        out.push(value);
    }
    Ok(out)
}

/// Reads the extended assignment off an integral point of the base model:
/// `z_v` is the value whose indicator is 1, `h` marks soft constraints whose
/// selected scope configuration lies in the relation.
pub fn proj1(
    instance: &CspInstance,
    base: &LpModel,
    point: &[Rational],
) -> Result<ExtendedAssignment, ProjError> {
    expect_kind(base, ModelKind::Base)?;
    check_len(base, point)?;
    if point.iter().any(|x| !(x.is_zero() || x.is_one())) {
        return Err(ProjError::NonIntegralInput);
    }
    let mut z: Vec<Option<i64>> = vec![None; instance.n];
    let mut chosen: std::collections::BTreeMap<ConstraintRef, &Configuration> = Default::default();
    for (kind, x) in base.vars.iter().zip(point) {
        if !x.is_one() {
            continue;
        }
        match kind {
            VarKind::Y { var, value } => {
                if z[var - 1].replace(*value).is_some() {
                    return Err(ProjError::Inconsistent(format!(
                        "variable {var} has two values"
                    )));
                }
            }
            VarKind::G { constraint, config } => {
                if chosen.insert(*constraint, config).is_some() {
                    return Err(ProjError::Inconsistent(format!(
                        "constraint {constraint} has two selected configurations"
                    )));
                }
            }
            VarKind::F(_) => unreachable!("base models have no configuration variables"),
        }
    }
    let z: Vec<i64> = z
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| ProjError::Inconsistent(format!("variable {} unset", i + 1))))
        .collect::<Result<_, _>>()?;
    let z = Assignment(z);
    let mut h = Vec::with_capacity(instance.soft.len());
    for s in &instance.soft {
        let c = ConstraintRef::Soft(s.id);
        let k = chosen
            .get(&c)
            .ok_or_else(|| ProjError::Inconsistent(format!("constraint {c} has no selection")))?;
        let tuple = k.tuple(&s.scope).expect("scope assigned");
        if tuple != z.restrict(&s.scope) {
            return Err(ProjError::Inconsistent(format!(
                "constraint {c} disagrees with the value indicators"
            )));
        }
        h.push(s.satisfied_by(&tuple));
    }
    Ok(ExtendedAssignment { z, h })
}

pub fn proj_v(ea: &ExtendedAssignment) -> Assignment {
    ea.z.clone()
}

pub fn proj_e(ea: &ExtendedAssignment) -> Vec<bool> {
    ea.h.clone()
}

pub fn proj_id(ea: &ExtendedAssignment) -> ExtendedAssignment {
    ea.clone()
}

/// `(y_1^2, ..., y_n^2)`: the indicators of value 2, which mark deleted
/// vertices in the odd cycle transversal encoding.
pub fn proj_oct(base: &LpModel, point: &[Rational]) -> Result<Vec<Rational>, ProjError> {
    expect_kind(base, ModelKind::Base)?;
    check_len(base, point)?;
    let n = base
        .vars
        .iter()
        .filter_map(|k| match k {
            VarKind::Y { var, .. } => Some(*var),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut out = vec![Rational::zero(); n];
    for (kind, x) in base.vars.iter().zip(point) {
        if let VarKind::Y { var, value: 2 } = kind {
            out[var - 1] = x.clone();
        }
    }
    Ok(out)
}

/// Vertices whose value-2 indicator is 1.
pub fn oct_deletion_set(base: &LpModel, point: &[Rational]) -> Result<Vec<Var>, ProjError> {
    let ind = proj_oct(base, point)?;
    if ind.iter().any(|x| !(x.is_zero() || x.is_one())) {
        return Err(ProjError::NonIntegralInput);
    }
    Ok((1..=ind.len()).filter(|&v| ind[v - 1].is_one()).collect())
}

/// The integral point of the extended model selecting `z` restricted to
/// every bag.
pub fn encode_assignment(
    ext: &LpModel,
    instance: &CspInstance,
    z: &Assignment,
) -> Result<Vec<Rational>, ProjError> {
    expect_kind(ext, ModelKind::Extended)?;
    if let Some(c) = instance.first_violation(z)? {
        return Err(CspError::Infeasible(c).into());
    }
    let mut f = vec![Rational::zero(); ext.num_vars()];
    for (bag, _) in &ext.bags {
        let k = Configuration::from_pairs(bag.iter().map(|&v| (v, z.value(v))).collect());
        let j = ext
            .var_index(&VarKind::F(k))
            .ok_or_else(|| ProjError::Inconsistent(format!("no variable for bag {bag:?}")))?;
        f[j] = Rational::one();
    }
    Ok(f)
}
