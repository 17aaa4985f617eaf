//! JSON encoding of instances.
//!
//! ```json
//! {"n": 2, "domains": [[0,1],[0,1]], "sense": "max",
//!  "hard": [{"scope": [1,2], "allowed": [[0,0],[0,1],[1,0]]}],
//!  "soft": [{"scope": [1], "weight": "1", "allowed": [[1]]},
//!           {"scope": [2], "weight": "3/2", "payoff": [{"tuple": [1], "value": "2"}]}]}
//! ```
//!
//! Rationals are strings (`"p/q"` or `"p"`); plain JSON integers are also
//! accepted on input. Soft constraints may carry an explicit `"id"`,
//! otherwise they are numbered by position.

use serde::{Deserialize, Serialize};

use super::{CspInstance, HardConstraint, Payoff, SoftConstraint, Value, Var};
use crate::ratlp::{Rational, Sense};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    n: usize,
    domains: Vec<Vec<Value>>,
    #[serde(default = "default_sense")]
    sense: Sense,
    #[serde(default)]
    hard: Vec<HardJson>,
    #[serde(default)]
    soft: Vec<SoftJson>,
}

fn default_sense() -> Sense {
    Sense::Max
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HardJson {
    scope: Vec<Var>,
    allowed: Vec<Vec<Value>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SoftJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<u64>,
    scope: Vec<Var>,
    weight: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    allowed: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payoff: Option<Vec<PayoffEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PayoffEntry {
    tuple: Vec<Value>,
    value: Rational,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed instance JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("soft constraint #{0} must have exactly one of \"allowed\" or \"payoff\"")]
    SoftForm(usize),
    #[error("soft constraint #{index}: tuple {tuple:?} listed twice in the payoff table")]
    DuplicatePayoff { index: usize, tuple: Vec<Value> },
}

/// Parses an instance and merges duplicate hard scopes. Domains are taken as
/// given; [`CspInstance::validate`] reports any that are not canonical.
pub fn from_json(text: &str) -> Result<CspInstance, JsonError> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    let mut inst = CspInstance {
        n: raw.n,
        domains: raw.domains,
        hard: raw
            .hard
            .into_iter()
            .map(|h| HardConstraint::new(h.scope, h.allowed))
            .collect(),
        soft: Vec::new(),
        sense: raw.sense,
    };
    for (index, s) in raw.soft.into_iter().enumerate() {
        let payoff = match (s.allowed, s.payoff) {
            (Some(a), None) => Payoff::Relation(a.into_iter().collect()),
            (None, Some(p)) => {
                let mut table = std::collections::BTreeMap::new();
                for e in p {
                    if table.insert(e.tuple.clone(), e.value).is_some() {
                        return Err(JsonError::DuplicatePayoff {
                            index,
                            tuple: e.tuple,
                        });
                    }
                }
                Payoff::Table(table)
            }
            _ => return Err(JsonError::SoftForm(index)),
        };
        inst.soft.push(SoftConstraint {
            id: s.id.unwrap_or(index as u64),
            scope: s.scope,
            weight: s.weight,
            payoff,
        });
    }
    inst.merge_duplicate_hard();
    Ok(inst)
}

pub fn to_json(inst: &CspInstance) -> String {
    let raw = InstanceJson {
        n: inst.n,
        domains: inst.domains.clone(),
        sense: inst.sense,
        hard: inst
            .hard
            .iter()
            .map(|h| HardJson {
                scope: h.scope.clone(),
                allowed: h.allowed.iter().cloned().collect(),
            })
            .collect(),
        soft: inst
            .soft
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (allowed, payoff) = match &s.payoff {
                    Payoff::Relation(rel) => (Some(rel.iter().cloned().collect()), None),
                    Payoff::Table(t) => (
                        None,
                        Some(
                            t.iter()
                                .map(|(k, v)| PayoffEntry {
                                    tuple: k.clone(),
                                    value: v.clone(),
                                })
                                .collect(),
                        ),
                    ),
                };
                SoftJson {
                    id: (s.id != i as u64).then_some(s.id),
                    scope: s.scope.clone(),
                    weight: s.weight.clone(),
                    allowed,
                    payoff,
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::ValidationError;

    #[test]
    fn parses_both_soft_forms() {
        let text = r#"{"n": 2, "domains": [[0,1],[0,1]], "sense": "min",
            "hard": [{"scope": [1,2], "allowed": [[0,0],[0,1],[1,0]]}],
            "soft": [{"scope": [1], "weight": "1", "allowed": [[1]]},
                     {"scope": [2], "weight": 2, "payoff": [{"tuple": [1], "value": "3/2"}]}]}"#;
        let q = from_json(text).unwrap();
        assert_eq!(q.sense, Sense::Min);
        assert_eq!(q.hard.len(), 1);
        assert!(q.soft[0].is_relation());
        assert_eq!(q.soft[1].payoff(&[1]), Rational::new(3, 2));
        assert_eq!(q.soft[1].weight, Rational::from_integer(2));
        assert_eq!(q.validate(), Ok(()));
        let again = from_json(&to_json(&q)).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn duplicate_hard_scopes_merge_on_ingest() {
        let text = r#"{"n": 2, "domains": [[0,1],[0,1]],
            "hard": [{"scope": [1,2], "allowed": [[0,0],[1,1]]},
                     {"scope": [1,2], "allowed": [[1,1],[0,1]]}]}"#;
        let q = from_json(text).unwrap();
        assert_eq!(q.hard.len(), 1);
        assert_eq!(q.hard[0].allowed.len(), 1);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(from_json("{"), Err(JsonError::Syntax(_))));
        let both = r#"{"n": 1, "domains": [[0]], "soft": [{"scope": [1], "weight": "1"}]}"#;
        assert!(matches!(from_json(both), Err(JsonError::SoftForm(0))));
        let bad_weight = r#"{"n": 1, "domains": [[0]], "soft": [{"scope": [1], "weight": "1/0", "allowed": []}]}"#;
        assert!(matches!(from_json(bad_weight), Err(JsonError::Syntax(_))));
    }

    #[test]
    fn empty_domain_survives_parsing_for_validation() {
        let text = r#"{"n": 2, "domains": [[0], []]}"#;
        let q = from_json(text).unwrap();
        assert_eq!(q.validate(), Err(vec![ValidationError::EmptyDomain(2)]));
    }

    #[test]
    fn explicit_soft_ids_roundtrip() {
        let text = r#"{"n": 1, "domains": [[0,1]],
            "soft": [{"id": 7, "scope": [1], "weight": "1", "allowed": [[1]]}]}"#;
        let q = from_json(text).unwrap();
        assert_eq!(q.soft[0].id, 7);
        assert!(to_json(&q).contains("\"id\": 7"));
    }
}
