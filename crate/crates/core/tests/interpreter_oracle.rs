//! Random clause-level theories checked against a direct evaluator of the
//! clause semantics, over every example of a 6-feature binary domain.

mod common;

use common::interp::{all_examples, check, random_theory};
use proptest::prelude::*;
use tgci::interpreter::{redescribe, InterpreterOptions};
use tgci::Theory;

#[test]
fn matches_clause_oracle_on_full_domain() {
    for seed in 0..120 {
        check(seed, false);
    }
}

#[test]
fn matches_clause_oracle_with_negation() {
    for seed in 1000..1120 {
        check(seed, true);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_lie_in_range(seed in any::<u64>(), negation in any::<bool>()) {
        let (_, text) = random_theory(seed, negation);
        let theory = Theory::parse(&text).unwrap();
        let data = all_examples();
        let (_, partial) = redescribe(&data, std::slice::from_ref(&theory), &Default::default()).unwrap();
        let (_, boolean) = redescribe(&data, std::slice::from_ref(&theory), &InterpreterOptions::boolean()).unwrap();
        for (p, b) in partial.iter().zip(&boolean) {
            prop_assert!(p.values.iter().all(|v| (-1.0..=1.0).contains(v)));
            prop_assert!(b.values.iter().all(|v| *v == 0.0 || *v == 1.0));
        }
    }

    #[test]
    fn boolean_truth_is_partial_score_one(seed in any::<u64>()) {
        let (_, text) = random_theory(seed, false);
        let theory = Theory::parse(&text).unwrap();
        let data = all_examples();
        let (_, partial) = redescribe(&data, std::slice::from_ref(&theory), &Default::default()).unwrap();
        let (_, boolean) = redescribe(&data, std::slice::from_ref(&theory), &InterpreterOptions::boolean()).unwrap();
        for (p, b) in partial.iter().zip(&boolean) {
            for (pv, bv) in p.values.iter().zip(&b.values) {
                prop_assert_eq!(*pv == 1.0, *bv == 1.0);
            }
        }
    }
}
