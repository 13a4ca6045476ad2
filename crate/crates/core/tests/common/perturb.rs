//! Random NOT-free theories over a small nucleotide-valued schema.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgci::dataset::{Example, Feature, Schema};
use tgci::perturbation::expected_values;
use tgci::{perturb, Dataset, Error, PerturbKind, ProximitySpec, Theory};

pub const VALUES: [&str; 4] = ["a", "c", "g", "t"];

pub fn schema(n: usize) -> Schema {
    let features = (0..n)
        .map(|i| Feature::new(format!("f{i}"), VALUES))
        .collect();
    Schema::new(features, vec!["+".into(), "-".into()], Some("+")).unwrap()
}

/// Groups of rules; a rule is a list of `(feature, value)` tests.
pub type Rules = Vec<Vec<Vec<(usize, usize)>>>;

/// A NOT-free theory `top :- g1, g2.` where each group is an OR of rules,
/// each rule a conjunction of tests. Returns the clause text and the rules.
pub fn random_theory(rng: &mut ChaCha8Rng, n_features: usize) -> (String, Rules) {
    let mut lines = Vec::new();
    let mut groups = Vec::new();
    let n_groups = rng.random_range(1..=2);
    for g in 0..n_groups {
        let mut rules = Vec::new();
        for _ in 0..rng.random_range(2..=3) {
            let mut feats: Vec<usize> = (0..n_features).collect();
            let k = rng.random_range(2..=4);
            let mut rule = Vec::new();
            for _ in 0..k {
                let f = feats.swap_remove(rng.random_range(0..feats.len()));
                rule.push((f, rng.random_range(0..4)));
            }
            let body: Vec<String> = rule
                .iter()
                .map(|(f, v)| format!("f{f}={}", VALUES[*v]))
                .collect();
            lines.push(format!("g{g} :- {}.", body.join(", ")));
            rules.push(rule);
        }
        groups.push(rules);
    }
    let heads: Vec<String> = (0..n_groups).map(|g| format!("g{g}")).collect();
    if n_groups == 1 {
        lines.insert(0, "top :- g0, true.".into());
    } else {
        lines.insert(0, format!("top :- {}.", heads.join(", ")));
    }
    (lines.join("\n"), groups)
}

pub fn random_example(rng: &mut ChaCha8Rng, n: usize, class: usize) -> Example {
    Example {
        id: "x".into(),
        class,
        values: (0..n).map(|_| rng.random_range(0..4)).collect(),
    }
}

pub fn rule_score(rule: &[(usize, usize)], ex: &Example) -> f64 {
    rule.iter()
        .map(|&(f, v)| if ex.values[f] == v { 1.0 } else { -1.0 })
        .sum::<f64>()
        / rule.len() as f64
}

pub fn matches(ex: &Example, expected: &[Option<usize>]) -> usize {
    expected
        .iter()
        .zip(&ex.values)
        .filter(|(e, v)| **e == Some(**v))
        .count()
}

/// Perturbs `cases` random conflict-free positive examples and checks that
/// the intended-disjunct match count moves in the direction of the change.
pub fn check_monotone(cases: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = schema(8);
    let mut checked = 0;
    let mut case = 0u64;
    while checked < cases {
        case += 1;
        let (text, _) = random_theory(&mut rng, 8);
        let theory = Theory::parse(&text).unwrap();
        let pos = random_example(&mut rng, 8, 0);
        let neg = random_example(&mut rng, 8, 1);
        let expected = match expected_values(&theory, &s, &pos) {
            Ok(e) => e,
            Err(Error::ConflictingExpectation { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let data = Dataset::new(s.clone(), vec![pos.clone(), neg.clone()]).unwrap();
        let kind = if rng.random_bool(0.5) {
            PerturbKind::FewerMatches
        } else {
            PerturbKind::FewerMismatches
        };
        let spec = ProximitySpec {
            kind,
            rate: rng.random_range(0.0..=1.0),
            seed: case,
            replicate: rng.random_range(0..4),
        };
        let out = perturb(&data, &theory, &spec).unwrap();
        let after = &out.examples()[0];
        assert_eq!(out.examples()[1], neg);
        for (f, e) in expected.iter().enumerate() {
            if e.is_none() {
                assert_eq!(after.values[f], pos.values[f]);
            }
        }
        let (b, a) = (matches(&pos, &expected), matches(after, &expected));
        match kind {
            PerturbKind::FewerMatches => assert!(a <= b),
            PerturbKind::FewerMismatches => assert!(a >= b),
        }
        checked += 1;
    }
}
