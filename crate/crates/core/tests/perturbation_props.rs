mod common;

use common::perturb::{check_monotone, random_example, random_theory, rule_score, schema};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tgci::dataset::Example;
use tgci::interpreter::{InterpreterOptions, Redescriber};
use tgci::perturbation::{intended_disjunct, Level, PROXIMITY_CAVEAT};
use tgci::{
    perturb, proximity_sweep, Dataset, Error, Method, PerturbKind, ProximitySpec, SweepPlan,
    Theory, C45,
};

#[test]
fn match_counts_move_monotonically() {
    check_monotone(10_000, 7);
}

#[test]
fn intended_disjunct_is_brute_force_argmax() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = schema(6);
    for _ in 0..500 {
        let (text, groups) = random_theory(&mut rng, 6);
        let theory = Theory::parse(&text).unwrap();
        let ex = random_example(&mut rng, 6, 0);
        let root = &theory.concepts()[0].root;
        for (g, rules) in groups.iter().enumerate() {
            let node = root.find(&format!("g{g}")).unwrap();
            let scores: Vec<f64> = rules.iter().map(|r| rule_score(r, &ex)).collect();
            let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let want = scores.iter().position(|&s| s == best).unwrap();
            assert_eq!(intended_disjunct(node, &s, &ex).unwrap(), want, "{text}");
        }
    }
}

#[test]
fn full_repair_satisfies_the_theory() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = schema(8);
    let mut done = 0;
    while done < 300 {
        let (text, _) = random_theory(&mut rng, 8);
        let theory = Theory::parse(&text).unwrap();
        let examples: Vec<Example> = (0..6).map(|i| random_example(&mut rng, 8, i % 2)).collect();
        let data = Dataset::new(s.clone(), examples).unwrap();
        let spec = ProximitySpec {
            kind: PerturbKind::FewerMismatches,
            rate: 1.0,
            seed: done,
            replicate: 0,
        };
        let out = match perturb(&data, &theory, &spec) {
            Ok(d) => d,
            Err(Error::ConflictingExpectation { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let r = Redescriber::new(
            &s,
            std::slice::from_ref(&theory),
            &InterpreterOptions::boolean(),
        )
        .unwrap();
        for ex in out.examples().iter().filter(|e| e.class == 0) {
            assert_eq!(r.interpret(ex).0[0], 1.0, "{text}");
        }
        done += 1;
    }
}

#[test]
fn match_counts_follow_analytic_expectation() {
    let s = schema(2);
    let theory = Theory::parse("g :- f0=a, f1=a.").unwrap();
    let all_match = Example {
        id: "m".into(),
        class: 0,
        values: vec![0, 0],
    };
    let none_match = Example {
        id: "n".into(),
        class: 0,
        values: vec![2, 3],
    };
    let data = Dataset::new(s, vec![all_match, none_match]).unwrap();
    let runs = 10_000;
    let (mut fewer, mut more) = (0.0, 0.0);
    for seed in 0..runs {
        let m = |kind| {
            perturb(
                &data,
                &theory,
                &ProximitySpec {
                    kind,
                    rate: 0.3,
                    seed,
                    replicate: 0,
                },
            )
            .unwrap()
        };
        let a = m(PerturbKind::FewerMatches);
        fewer += a.examples()[0].values.iter().filter(|&&v| v == 0).count() as f64;
        let b = m(PerturbKind::FewerMismatches);
        more += b.examples()[1].values.iter().filter(|&&v| v == 0).count() as f64;
    }
    let n = runs as f64;
    // a matching value survives with 0.7 + 0.3 / 4 = 0.775
    let (p, q) = (0.775, 0.3);
    let se_fewer = (2.0 * p * (1.0 - p) / n).sqrt();
    let se_more = (2.0 * q * (1.0 - q) / n).sqrt();
    assert!(
        (fewer / n - 2.0 * p).abs() < 3.0 * se_fewer,
        "{}",
        fewer / n
    );
    assert!((more / n - 2.0 * q).abs() < 3.0 * se_more, "{}", more / n);
}

fn sweep_data(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = schema(6);
    let examples = (0..24)
        .map(|i| {
            let mut e = random_example(&mut rng, 6, i % 2);
            if e.class == 0 {
                e.values[0] = 0;
                e.values[1] = 0;
            }
            e.id = format!("e{i}");
            e
        })
        .collect();
    Dataset::new(s, examples).unwrap()
}

#[test]
fn sweep_without_specs_has_only_the_original_row() {
    let data = sweep_data(1);
    let theory = Theory::parse("g :- f0=a, f1=a, f2=c.").unwrap();
    let plan = SweepPlan {
        levels: vec![],
        replicates: 2,
        seed: 0,
        methods: vec![Method::Tgci],
    };
    let table =
        proximity_sweep(&C45::default(), &data, &theory, &Default::default(), &plan).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].proximity, 0.0);
    assert_eq!(table.caveat, PROXIMITY_CAVEAT);
}

#[test]
fn sweep_layout_and_degenerate_theory() {
    let data = sweep_data(2);
    let theory = Theory::parse("g :- r1.\ng :- r2.\nr1 :- true.\nr2 :- true.").unwrap();
    let plan = SweepPlan {
        levels: [0.3, 0.9]
            .iter()
            .flat_map(|&r| {
                [
                    Level::new(PerturbKind::FewerMatches, r),
                    Level::new(PerturbKind::FewerMismatches, r),
                ]
            })
            .collect(),
        replicates: 3,
        seed: 5,
        methods: vec![Method::Plain, Method::Tgci],
    };
    let options = InterpreterOptions {
        include_original_features: true,
        ..Default::default()
    };
    let table = proximity_sweep(&C45::default(), &data, &theory, &options, &plan).unwrap();
    let xs: Vec<f64> = table.rows.iter().map(|r| r.proximity).collect();
    assert_eq!(
        xs,
        [-90.0, -90.0, -30.0, -30.0, 0.0, 0.0, 30.0, 30.0, 90.0, 90.0]
    );
    for pair in table.rows.chunks(2) {
        assert!((pair[0].mean - pair[1].mean).abs() < 1e-12);
    }
}
