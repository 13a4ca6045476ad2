//! Command implementations behind the `tgci` binary. Every command takes a
//! resolved [`RunConfig`] and returns the text to print; artifact commands
//! also write files under `out`.

pub mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use tgci::dataset::{self, load_sequence_format, load_tabular};
use tgci::evaluation::{compare_methods, curve_csv, curve_gnuplot, prepare, runs_csv, Comparison};
use tgci::perturbation::{sweep_csv, sweep_gnuplot, SweepTable};
use tgci::{
    leave_one_out, perturb, proximity_sweep, theory_only_classify, Classifier, CurvePlan, Dataset,
    Learner, Method, PositionsSpec, ProximitySpec, Schema, SweepPlan, Theory, C45, PROMOTER_THEORY,
};

pub use config::{DataFormat, RunConfig, BUILTIN_PROMOTER};

/// Writes through a temporary sibling and a rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move {} into place", path.display()))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn load_theories(cfg: &RunConfig) -> Result<Vec<Theory>> {
    if cfg.theory.is_empty() {
        bail!("no theory given");
    }
    let mut theories = Vec::new();
    for source in &cfg.theory {
        let theory = if source == BUILTIN_PROMOTER {
            Theory::parse(PROMOTER_THEORY).context("built-in promoter theory")?
        } else {
            let text = fs::read_to_string(source)
                .with_context(|| format!("cannot read theory {source}"))?;
            Theory::parse(&text).with_context(|| format!("theory {source}"))?
        };
        theories.push(theory);
    }
    if cfg.fragment.is_empty() {
        return Ok(theories);
    }
    cfg.fragment
        .iter()
        .map(|name| fragment_of(&theories, name))
        .collect()
}

fn fragment_of(theories: &[Theory], name: &str) -> Result<Theory> {
    theories
        .iter()
        .find_map(|t| t.fragment(name).ok())
        .ok_or_else(|| anyhow!("no node or head named `{name}` in the given theories"))
}

pub fn resolved_format(cfg: &RunConfig, path: &Path) -> DataFormat {
    match cfg.format {
        DataFormat::Auto
            if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv")) =>
        {
            DataFormat::Tabular
        }
        DataFormat::Auto => DataFormat::Sequence,
        f => f,
    }
}

fn data_path(cfg: &RunConfig) -> Result<&PathBuf> {
    cfg.data
        .as_ref()
        .ok_or_else(|| anyhow!("no data file given; pass --data FILE or set `data` in the config"))
}

pub fn load_data(cfg: &RunConfig) -> Result<Dataset> {
    let path = data_path(cfg)?;
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read data {}", path.display()))?;
    let data = match resolved_format(cfg, path) {
        DataFormat::Tabular => load_tabular(&text),
        _ => load_sequence_format(&text, &PositionsSpec::parse_range(&cfg.positions)?),
    }
    .with_context(|| format!("data {}", path.display()))?;
    match &cfg.positive {
        Some(label) => Ok(data.with_positive_class(label)?),
        None => Ok(data),
    }
}

/// Schema of the data when given, otherwise the sequence schema implied by
/// `positions` with classes `+` and `-`.
fn schema_for(cfg: &RunConfig) -> Result<Schema> {
    if cfg.data.is_some() {
        return Ok(load_data(cfg)?.schema().clone());
    }
    Ok(PositionsSpec::parse_range(&cfg.positions)?
        .schema(vec!["+".into(), "-".into()], Some("+"))?)
}

fn prepare_out(cfg: &RunConfig, command: &str) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    write_atomic(&cfg.out.join("config.txt"), &cfg.to_flat(command))
}

fn learner(cfg: &RunConfig) -> Result<C45> {
    let params = cfg.learner();
    params.validate()?;
    Ok(C45::new(params))
}

fn wrote(report: &mut String, cfg: &RunConfig, files: &[&str]) {
    let _ = writeln!(
        report,
        "wrote {} to {}",
        files.join(", "),
        cfg.out.display()
    );
}

pub fn parse(cfg: &RunConfig, json: bool) -> Result<String> {
    let theories = load_theories(cfg)?;
    if json {
        return to_json(&theories);
    }
    let mut out = String::new();
    for (source, t) in cfg.theory.iter().zip(&theories) {
        let heads: Vec<&str> = t.concepts().iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(
            out,
            "{source}: {} concept(s) [{}], {} internal nodes",
            heads.len(),
            heads.join(", "),
            t.internal_node_count()
        );
    }
    Ok(out)
}

pub fn validate(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let schema = schema_for(cfg)?;
    let mut out = String::new();
    let mut problems = 0;
    for (source, t) in cfg.theory.iter().zip(&theories) {
        let report = t.validate(&schema);
        problems += report.findings.len();
        for f in &report.findings {
            let _ = writeln!(out, "{source}: {f}");
        }
    }
    if problems > 0 {
        bail!("{out}{problems} condition(s) do not match the data schema");
    }
    let _ = writeln!(
        out,
        "ok: every condition matches the schema ({} features)",
        schema.features().len()
    );
    Ok(out)
}

pub fn fragment(cfg: &RunConfig, name: &str) -> Result<String> {
    let theories = load_theories(cfg)?;
    Ok(fragment_of(&theories, name)?.to_dsl())
}

pub fn redescribe(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let data = load_data(cfg)?;
    let (schema, rows) = tgci::redescribe(&data, &theories, &cfg.interpreter())?;
    prepare_out(cfg, "redescribe")?;
    write_atomic(
        &cfg.out.join("redescribed.csv"),
        &tgci::interpreter::redescribed_csv(&schema, &rows, data.schema().classes()),
    )?;
    write_atomic(&cfg.out.join("features.json"), &to_json(&schema)?)?;
    let mut report = format!("{} examples, {} features\n", rows.len(), schema.len());
    wrote(
        &mut report,
        cfg,
        &["redescribed.csv", "features.json", "config.txt"],
    );
    Ok(report)
}

pub fn train(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let data = load_data(cfg)?;
    let method = cfg.method[0];
    let set = prepare(method, &data, &theories, &cfg.interpreter())?;
    let tree = learner(cfg)?.train(&set)?;
    prepare_out(cfg, "train")?;
    let text = tree.render();
    write_atomic(&cfg.out.join("tree.txt"), &text)?;
    write_atomic(&cfg.out.join("tree.json"), &tree.to_json())?;
    let mut report = format!(
        "{method}: {} leaves, depth {}, trained on {} examples\n{text}",
        tree.root.leaves(),
        tree.root.depth(),
        set.len()
    );
    wrote(&mut report, cfg, &["tree.txt", "tree.json", "config.txt"]);
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct EvalRow {
    pub method: Method,
    pub seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    pub accuracy: f64,
}

/// One train/test split under `seed`, scored for every method.
pub fn eval(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let data = load_data(cfg)?;
    let n = data.len();
    if cfg.test == 0 || cfg.test >= n {
        bail!(
            "test size must lie between 1 and {} for {n} examples",
            n - 1
        );
    }
    let train_size = cfg.train_size.unwrap_or(n - cfg.test);
    let (train_idx, test_idx) = dataset::partition_indices(n, train_size, cfg.test, cfg.seed)?;
    let c45 = learner(cfg)?;
    let mut rows = Vec::new();
    for &method in &cfg.method {
        let set = prepare(method, &data, &theories, &cfg.interpreter())?;
        let model = c45.train(&set.subset(&train_idx))?;
        let test = set.subset(&test_idx);
        let correct = test
            .rows()
            .iter()
            .zip(test.labels())
            .map(|(r, &y)| Ok(model.predict(r)? == y))
            .collect::<tgci::Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&c| c)
            .count();
        rows.push(EvalRow {
            method,
            seed: cfg.seed,
            train_size,
            test_size: cfg.test,
            accuracy: correct as f64 / test.len() as f64,
        });
    }
    prepare_out(cfg, "eval")?;
    let mut csv = String::from("method,seed,train_size,test_size,accuracy\n");
    let mut report = String::new();
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.method, r.seed, r.train_size, r.test_size, r.accuracy
        );
        let _ = writeln!(
            report,
            "{:<8} accuracy {:.4} ({} train, {} test)",
            r.method, r.accuracy, r.train_size, r.test_size
        );
    }
    write_atomic(&cfg.out.join("eval.csv"), &csv)?;
    write_atomic(&cfg.out.join("eval.json"), &to_json(&rows)?)?;
    wrote(&mut report, cfg, &["eval.csv", "eval.json", "config.txt"]);
    Ok(report)
}

pub fn curve_plan(cfg: &RunConfig) -> CurvePlan {
    CurvePlan {
        sizes: cfg.sizes.clone(),
        test_size: cfg.test,
        partitions: cfg.partitions,
        base_seed: cfg.seed,
    }
}

#[derive(Serialize)]
struct CurveReport<'a> {
    plan: &'a CurvePlan,
    examples: usize,
    #[serde(flatten)]
    comparison: &'a Comparison,
}

pub fn curve(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let data = load_data(cfg)?;
    let plan = curve_plan(cfg);
    plan.validate(data.len())?;
    let cmp = compare_methods(
        &learner(cfg)?,
        &data,
        &theories,
        &cfg.interpreter(),
        &cfg.method,
        &plan,
    )?;
    prepare_out(cfg, "curve")?;
    write_atomic(&cfg.out.join("curve.csv"), &curve_csv(&cmp.curves))?;
    write_atomic(&cfg.out.join("runs.csv"), &runs_csv(&cmp.curves))?;
    write_atomic(&cfg.out.join("curve.dat"), &curve_gnuplot(&cmp.curves))?;
    let doc = CurveReport {
        plan: &plan,
        examples: data.len(),
        comparison: &cmp,
    };
    write_atomic(&cfg.out.join("report.json"), &to_json(&doc)?)?;

    let mut report = String::from("method    size   mean    95% CI\n");
    for c in &cmp.curves {
        for p in &c.points {
            let _ = writeln!(
                report,
                "{:<9} {:>4}   {:.4}  [{:.4}, {:.4}]",
                c.method, p.train_size, p.mean, p.ci_low, p.ci_high
            );
        }
        let _ = writeln!(report, "{:<9} {:.2}s", c.method, c.elapsed_secs);
    }
    for t in &cmp.tests {
        let _ = writeln!(
            report,
            "{} vs {} at {}: mean difference {:+.4}, one-sided p {:.4}{}",
            t.method,
            t.baseline,
            t.train_size,
            t.test.mean_difference,
            t.test.p_value,
            if t.test.zero_variance {
                " (identical differences)"
            } else {
                ""
            }
        );
    }
    wrote(
        &mut report,
        cfg,
        &[
            "curve.csv",
            "runs.csv",
            "curve.dat",
            "report.json",
            "config.txt",
        ],
    );
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct LooRow {
    pub method: Method,
    pub examples: usize,
    pub accuracy: f64,
    pub correct: Vec<bool>,
}

pub fn loo(cfg: &RunConfig) -> Result<String> {
    let theories = load_theories(cfg)?;
    let data = load_data(cfg)?;
    let c45 = learner(cfg)?;
    let mut rows = Vec::new();
    for &method in &cfg.method {
        let set = prepare(method, &data, &theories, &cfg.interpreter())?;
        let r = leave_one_out(&c45, &set)?;
        rows.push(LooRow {
            method,
            examples: set.len(),
            accuracy: r.accuracy,
            correct: r.correct,
        });
    }
    prepare_out(cfg, "loo")?;
    let mut csv = String::from("method,examples,accuracy\n");
    let mut report = String::new();
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.method, r.examples, r.accuracy);
        let _ = writeln!(
            report,
            "{:<8} leave-one-out accuracy {:.4} over {} examples",
            r.method, r.accuracy, r.examples
        );
    }
    write_atomic(&cfg.out.join("loo.csv"), &csv)?;
    write_atomic(&cfg.out.join("loo.json"), &to_json(&rows)?)?;
    wrote(&mut report, cfg, &["loo.csv", "loo.json", "config.txt"]);
    Ok(report)
}

fn single_theory(cfg: &RunConfig, what: &str) -> Result<Theory> {
    let mut theories = load_theories(cfg)?;
    if theories.len() != 1 {
        bail!("{what} works on exactly one theory, got {}", theories.len());
    }
    Ok(theories.remove(0))
}

pub fn perturb_cmd(cfg: &RunConfig) -> Result<String> {
    let theory = single_theory(cfg, "perturb")?;
    let data = load_data(cfg)?;
    let spec = ProximitySpec {
        kind: cfg.kind,
        rate: cfg.rate,
        seed: cfg.seed,
        replicate: cfg.replicate,
    };
    let perturbed = perturb(&data, &theory, &spec)?;
    let changed: usize = data
        .examples()
        .iter()
        .zip(perturbed.examples())
        .map(|(a, b)| {
            a.values
                .iter()
                .zip(&b.values)
                .filter(|(x, y)| x != y)
                .count()
        })
        .sum();
    let (name, text) = match resolved_format(cfg, data_path(cfg)?) {
        DataFormat::Tabular => ("perturbed.csv", dataset::write_tabular(&perturbed)),
        _ => (
            "perturbed.data",
            dataset::write_sequence_format(&perturbed)?,
        ),
    };
    prepare_out(cfg, "perturb")?;
    write_atomic(&cfg.out.join(name), &text)?;
    let mut report = format!(
        "{} at rate {} (proximity {:+}): {changed} feature values changed\n",
        spec.kind,
        spec.rate,
        spec.kind.proximity(spec.rate)
    );
    wrote(&mut report, cfg, &[name, "config.txt"]);
    Ok(report)
}

pub fn sweep(cfg: &RunConfig) -> Result<String> {
    let theory = single_theory(cfg, "sweep")?;
    let data = load_data(cfg)?;
    let plan = SweepPlan {
        levels: cfg.levels(),
        replicates: cfg.replicates,
        seed: cfg.seed,
        methods: cfg.method.clone(),
    };
    let table: SweepTable =
        proximity_sweep(&learner(cfg)?, &data, &theory, &cfg.interpreter(), &plan)?;
    prepare_out(cfg, "sweep")?;
    write_atomic(&cfg.out.join("sweep.csv"), &sweep_csv(&table))?;
    write_atomic(&cfg.out.join("sweep.dat"), &sweep_gnuplot(&table))?;
    write_atomic(&cfg.out.join("sweep.json"), &to_json(&table)?)?;
    let mut report = String::from("proximity  method    mean    95% CI\n");
    for r in &table.rows {
        let _ = writeln!(
            report,
            "{:>+9.0}  {:<8} {:.4}  [{:.4}, {:.4}]",
            r.proximity, r.method, r.mean, r.ci_low, r.ci_high
        );
    }
    let _ = writeln!(report, "note: {}", table.caveat);
    wrote(
        &mut report,
        cfg,
        &["sweep.csv", "sweep.dat", "sweep.json", "config.txt"],
    );
    Ok(report)
}

pub fn theory_score(cfg: &RunConfig) -> Result<String> {
    let theory = single_theory(cfg, "theory-score")?;
    let data = load_data(cfg)?;
    let s = theory_only_classify(&theory, &data)?;
    Ok(format!(
        "concept {}\naccuracy {:.4}\nexact matches {} of {}\n",
        s.concept,
        s.accuracy,
        s.exact_matches,
        data.len()
    ))
}

/// Sequence-format data drawn from the theory's shape; `spec.seed` is
/// replaced by the configured seed.
pub fn synth(cfg: &RunConfig, spec: &tgci::synthetic::SyntheticSpec) -> Result<String> {
    let theory = single_theory(cfg, "synth")?;
    let schema = PositionsSpec::parse_range(&cfg.positions)?
        .schema(vec!["+".into(), "-".into()], Some("+"))?;
    let spec = tgci::synthetic::SyntheticSpec {
        seed: cfg.seed,
        ..spec.clone()
    };
    let data = tgci::synthetic::theory_shaped(&theory, &schema, &spec)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    write_atomic(
        &cfg.out.join("synthetic.data"),
        &dataset::write_sequence_format(&data)?,
    )?;
    let mut report = format!(
        "{} positive and {} negative examples\n",
        spec.positives, spec.negatives
    );
    wrote(&mut report, cfg, &["synthetic.data"]);
    Ok(report)
}
