//! Seeded generators for the randomized test suites.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::csp::{CspInstance, Value, Var};
use crate::ratlp::{Rational, Sense};
use crate::reductions::GraphInput;

pub const SEED_ENV: &str = "EXTFORM_SEED";
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Suite seed from `EXTFORM_SEED`, or [`DEFAULT_SEED`] when unset or unparsable.
pub fn suite_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent stream for case `index` of the suite seeded by `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone)]
pub struct InstanceParams {
    pub max_vars: usize,
    pub max_domain: usize,
    pub max_hard: usize,
    pub max_soft: usize,
    pub max_denominator: i64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_vars: 8,
            max_domain: 3,
            max_hard: 4,
            max_soft: 5,
            max_denominator: 7,
        }
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

fn random_scope<R: Rng>(rng: &mut R, n: usize) -> Vec<Var> {
    let arity = if n >= 3 && rng.gen_bool(0.35) {
        3
    } else {
        2.min(n)
    };
    let mut scope: Vec<Var> = sample(rng, n, arity).into_iter().map(|i| i + 1).collect();
    scope.sort_unstable();
    scope
}

fn tuples(inst: &CspInstance, scope: &[Var]) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for &v in scope {
        out = out
            .into_iter()
            .flat_map(|t| {
                inst.domain(v).iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Random instance with binary and ternary scopes. Domains are prefixes of
/// `0, 1, 2`; hard relations keep each tuple with probability 0.7, so some
/// instances are infeasible.
pub fn random_instance<R: Rng>(rng: &mut R, p: &InstanceParams) -> CspInstance {
    let n = rng.gen_range(1..=p.max_vars);
    let domains: Vec<Vec<Value>> = (0..n)
        .map(|_| (0..rng.gen_range(1..=p.max_domain) as Value).collect())
        .collect();
    let sense = if rng.gen_bool(0.5) {
        Sense::Max
    } else {
        Sense::Min
    };
    let mut inst = CspInstance::new(domains, sense);
    for _ in 0..rng.gen_range(0..=p.max_hard) {
        let scope = random_scope(rng, n);
        let allowed: Vec<Vec<Value>> = tuples(&inst, &scope)
            .into_iter()
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        inst.add_hard(scope, allowed);
    }
    inst.merge_duplicate_hard();
    for _ in 0..rng.gen_range(1..=p.max_soft) {
        let scope = random_scope(rng, n);
        let weight = Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=p.max_denominator));
        if rng.gen_bool(0.5) {
            let allowed: Vec<Vec<Value>> = tuples(&inst, &scope)
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            inst.add_soft_relation(scope, weight, allowed);
        } else {
            let mut table: Vec<(Vec<Value>, Rational)> = Vec::new();
            for t in tuples(&inst, &scope) {
                if rng.gen_bool(0.6) {
                    table.push((t, random_rational(rng, 6, p.max_denominator)));
                }
            }
            inst.add_soft_payoff(scope, weight, table);
        }
    }
    inst
}

/// G(n, p) with `n` drawn from `1..=max_n` and `p` from `[0.2, 0.7)`.
pub fn random_graph<R: Rng>(rng: &mut R, max_n: usize) -> GraphInput {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.2..0.7);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    GraphInput::new(n, edges)
}
