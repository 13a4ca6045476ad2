//! Learning curves for the three methods on theory-shaped synthetic data.
//!
//! `cargo run --release --example synthetic_curve -- [match_prob] [seed]`

use tgci::evaluation::{compare_methods, curve_csv};
use tgci::synthetic::{theory_shaped, SyntheticSpec};
use tgci::{CurvePlan, Method, Schema, Theory, C45, PROMOTER_THEORY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let match_prob = args.next().map_or(Ok(0.7), |s| s.parse())?;
    let seed = args.next().map_or(Ok(0), |s| s.parse())?;
    let theory = Theory::parse(PROMOTER_THEORY)?;
    let spec = SyntheticSpec {
        match_prob,
        seed,
        ..Default::default()
    };
    let data = theory_shaped(&theory, &Schema::promoter(), &spec)?;
    let plan = CurvePlan {
        sizes: (8..=80).step_by(8).collect(),
        test_size: 26,
        partitions: 20,
        base_seed: seed,
    };
    let cmp = compare_methods(
        &C45::default(),
        &data,
        &[theory],
        &Default::default(),
        &[Method::Tgci, Method::Plain, Method::Boolean],
        &plan,
    )?;
    print!("{}", curve_csv(&cmp.curves));
    Ok(())
}
