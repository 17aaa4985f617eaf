mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use csp_extform::csp::ExtendedAssignment;
use csp_extform::extform::{
    build_base_lp, build_extended_lp, decompose_fractional, encode_assignment, proj1, proj2,
};
use csp_extform::oracles::brute_force;
use csp_extform::pipeline::decompose;
use csp_extform::random::case_rng;
use csp_extform::ratlp::{check_feasible, is_integral, solve, Rational, Sense, Status};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_points_biject_with_extended_assignments(seed in any::<u64>()) {
        let q = common::small_instance(seed);
        prop_assume!(q.validate().is_ok());
        let ntd = decompose(&q, None).unwrap();
        let ext = build_extended_lp(&q, &ntd).unwrap();
        prop_assume!(ext.num_vars() <= 12);
        let base = build_base_lp(&q);
        let mut image: Vec<ExtendedAssignment> = Vec::new();
        for mask in 0u32..1 << ext.num_vars() {
            let f: Vec<Rational> = (0..ext.num_vars())
                .map(|j| Rational::from_integer(i64::from(mask >> j & 1)))
                .collect();
            if check_feasible(&ext.lp, &f).is_err() {
                continue;
            }
            let point = proj2(&ext, &base, &f).unwrap();
            image.push(proj1(&q, &base, &point).unwrap());
        }
        let expected: BTreeSet<ExtendedAssignment> = common::feasible_assignments(&q)
            .iter()
            .map(|z| q.extend(z).unwrap())
            .collect();
        let distinct: BTreeSet<ExtendedAssignment> = image.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), image.len(), "two points map to one assignment");
        prop_assert_eq!(distinct, expected);
    }

    #[test]
    fn projection_and_decomposition_of_mixtures(seed in any::<u64>()) {
        let q = common::instance(seed);
        prop_assume!(q.validate().is_ok());
        let feasible = common::feasible_assignments(&q);
        prop_assume!(!feasible.is_empty());
        let ntd = decompose(&q, None).unwrap();
        let ext = build_extended_lp(&q, &ntd).unwrap();
        let base = build_base_lp(&q);
        let mut rng = case_rng(seed, 5);
        let m = rng.gen_range(1..=4.min(feasible.len()));
        let weights: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=7)).collect();
        let total = Rational::from_integer(weights.iter().sum());
        let mut f = vec![Rational::zero(); ext.num_vars()];
        for (z, w) in feasible.choose_multiple(&mut rng, m).zip(&weights) {
            let lambda = Rational::from_integer(*w) / &total;
            for (a, x) in f.iter_mut().zip(encode_assignment(&ext, &q, z).unwrap()) {
                *a += &lambda * &x;
            }
        }
        prop_assert_eq!(check_feasible(&ext.lp, &f), Ok(()));
        let point = proj2(&ext, &base, &f).unwrap();
        prop_assert_eq!(check_feasible(&base.lp, &point), Ok(()));
        let d = decompose_fractional(&ext, &ntd, &f).unwrap();
        prop_assert_eq!(d.average(), f);
        for (p, _) in &d.points {
            prop_assert!(p.iter().all(|x| x.is_zero() || x.is_one()));
            prop_assert_eq!(check_feasible(&ext.lp, p), Ok(()));
        }
    }

    #[test]
    fn relaxation_ordering_and_vertex_integrality(seed in any::<u64>()) {
        let q = common::instance(seed).with_sense(Sense::Max);
        prop_assume!(q.validate().is_ok());
        let ntd = decompose(&q, None).unwrap();
        let ext = build_extended_lp(&q, &ntd).unwrap();
        let es = solve(&ext.lp).unwrap();
        let bs = solve(&build_base_lp(&q).lp).unwrap();
        let bf = brute_force(&q).unwrap();
        match bf.optimum() {
            None => prop_assert_eq!(es.status, Status::Infeasible),
            Some(opt) => {
                prop_assert_eq!(es.status, Status::Optimal);
                prop_assert!(is_integral(&es, ext.f_vars()));
                prop_assert_eq!(&es.objective, opt);
                if bs.status == Status::Optimal {
                    prop_assert!(bs.objective >= es.objective);
                }
            }
        }
    }
}
