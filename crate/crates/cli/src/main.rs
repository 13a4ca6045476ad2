use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tgci_cli::RunConfig;

/// Declares a group of string-valued flags, each named after its config key.
macro_rules! flag_group {
    ($name:ident { $($field:ident = $key:literal : $help:literal,)* }) => {
        #[derive(Debug, Default, Args)]
        struct $name {
            $(
                #[arg(long = $key, value_name = "VALUE", help = $help)]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn pairs(&self) -> Vec<(&'static str, Option<&str>)> {
                vec![$(($key, self.$field.as_deref()),)*]
            }
        }
    };
}

flag_group!(InputFlags {
    theory = "theory": "Theory files, comma separated, or builtin:promoter [default: builtin:promoter]",
    fragment = "fragment": "Use only these nodes or heads of the theory, comma separated",
    data = "data": "Data file: class,name,sequence records, or a header CSV with the class last",
    format = "format": "auto, sequence or tabular; auto reads .csv as tabular [default: auto]",
    positions = "positions": "Position range of sequence data, FIRST:LAST, zero skipped [default: -50:7]",
    positive = "positive": "Label of the positive class [default: + when present]",
});

flag_group!(RunFlags {
    out = "out": "Output directory [default: out]",
    seed = "seed": "Base seed for partitions, perturbation and the learner [default: 0]",
    jobs = "jobs": "Worker threads, 0 for all cores [default: TGCI_JOBS or all cores]",
});

flag_group!(ModelFlags {
    interp = "interp": "Interpreter of the tgci method, partial or boolean [default: partial]",
    not_emits_feature = "not-emits-feature": "Let NOT nodes produce their own feature [default: false]",
    include_original = "include-original": "Keep the original features next to the constructed ones [default: false]",
    top_feature = "top-feature": "Emit a feature for each concept root [default: true]",
    min_leaf = "min-leaf": "Minimum examples in at least two branches of a split [default: 2]",
    confidence = "confidence": "Pruning confidence factor in (0, 1] [default: 0.25]",
    gain_ratio = "gain-ratio": "Choose splits by gain ratio rather than gain [default: true]",
    prune = "prune": "Prune the grown tree [default: true]",
    method = "method": "plain, tgci or boolean, comma separated; the first is compared to the rest [default: tgci]",
});

flag_group!(CurveFlags {
    sizes = "sizes": "Training sizes, START:END:STEP or a list [default: 8:80:8]",
    test = "test": "Test set size [default: 26]",
    partitions = "partitions": "Random partitions per size [default: 50]",
});

flag_group!(EvalFlags {
    train_size = "train-size": "Training examples [default: all not held out for testing]",
    test = "test": "Test set size [default: 26]",
});

flag_group!(PerturbFlags {
    kind = "kind": "fewer-matches or fewer-mismatches [default: fewer-matches]",
    rate = "rate": "Fraction of applicable features to change [default: 0.3]",
    replicate = "replicate": "Replicate index, selects an independent draw [default: 0]",
});

flag_group!(SweepFlags {
    matches_rates = "matches-rates": "Rates of the fewer-matches levels [default: 0.1,0.3,0.6,0.9]",
    mismatches_rates = "mismatches-rates": "Rates of the fewer-mismatches levels [default: 0.3,0.6,0.9]",
    replicates = "replicates": "Perturbed copies per level [default: 10]",
});

#[derive(Debug, Args)]
struct Base {
    /// Settings file of `key = value` lines; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(flatten)]
    input: InputFlags,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Debug, Parser)]
#[command(
    name = "tgci",
    version,
    about = "Theory-guided constructive induction with decision trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse theories and summarize them
    Parse {
        #[command(flatten)]
        base: Base,
        /// Print the parsed node trees as JSON
        #[arg(long)]
        json: bool,
    },
    /// Check every theory condition against the data schema
    Validate {
        #[command(flatten)]
        base: Base,
    },
    /// Print the clauses of one node as a standalone theory
    Fragment {
        /// Clause head or node path
        name: String,
        #[command(flatten)]
        base: Base,
    },
    /// Write the constructed features of every example
    Redescribe {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Train a tree on all examples with the first method
    Train {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Score each method on one seeded train/test split
    Eval {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
        #[command(flatten)]
        split: EvalFlags,
    },
    /// Learning curves with confidence intervals and paired tests
    Curve {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
        #[command(flatten)]
        curve: CurveFlags,
    },
    /// Leave-one-out accuracy of each method
    Loo {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Write a copy of the data moved toward or away from the theory
    Perturb {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        perturb: PerturbFlags,
    },
    /// Leave-one-out accuracy across perturbation levels
    Sweep {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        model: ModelFlags,
        #[command(flatten)]
        sweep: SweepFlags,
    },
    /// Write seeded synthetic sequence data whose positives follow the theory loosely
    Synth {
        #[command(flatten)]
        base: Base,
        /// Positive examples
        #[arg(long, default_value_t = 53)]
        positives: usize,
        /// Negative examples
        #[arg(long, default_value_t = 53)]
        negatives: usize,
        /// Chance that each condition of a chosen rule is planted
        #[arg(long, default_value_t = 0.75)]
        match_prob: f64,
    },
    /// Accuracy of classifying with the theory alone
    TheoryScore {
        #[command(flatten)]
        base: Base,
    },
}

fn resolve(base: &Base, groups: &[Vec<(&'static str, Option<&str>)>]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &base.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        cfg.apply_flat(&text)
            .with_context(|| format!("config {}", path.display()))?;
    } else if let Ok(jobs) = std::env::var("TGCI_JOBS") {
        cfg.set("jobs", &jobs).context("TGCI_JOBS")?;
    }
    let all = [base.input.pairs(), base.run.pairs()];
    for (key, value) in all.iter().chain(groups).flatten() {
        if let Some(v) = value {
            cfg.set(key, v).with_context(|| format!("--{key}"))?;
        }
    }
    if let Some(jobs) = cfg.jobs.filter(|&j| j > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<String> {
    use tgci_cli as c;
    match cli.command {
        Command::Parse { base, json } => c::parse(&resolve(&base, &[])?, json),
        Command::Validate { base } => c::validate(&resolve(&base, &[])?),
        Command::Fragment { name, base } => c::fragment(&resolve(&base, &[])?, &name),
        Command::Redescribe { base, model } => c::redescribe(&resolve(&base, &[model.pairs()])?),
        Command::Train { base, model } => c::train(&resolve(&base, &[model.pairs()])?),
        Command::Eval { base, model, split } => {
            c::eval(&resolve(&base, &[model.pairs(), split.pairs()])?)
        }
        Command::Curve { base, model, curve } => {
            c::curve(&resolve(&base, &[model.pairs(), curve.pairs()])?)
        }
        Command::Loo { base, model } => c::loo(&resolve(&base, &[model.pairs()])?),
        Command::Perturb { base, perturb } => c::perturb_cmd(&resolve(&base, &[perturb.pairs()])?),
        Command::Sweep { base, model, sweep } => {
            c::sweep(&resolve(&base, &[model.pairs(), sweep.pairs()])?)
        }
        Command::Synth {
            base,
            positives,
            negatives,
            match_prob,
        } => c::synth(
            &resolve(&base, &[])?,
            &tgci::synthetic::SyntheticSpec {
                positives,
                negatives,
                match_prob,
                seed: 0,
            },
        ),
        Command::TheoryScore { base } => c::theory_score(&resolve(&base, &[])?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
