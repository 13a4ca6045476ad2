//! Classified nominal attribute-value examples.
//!
//! Two text formats are read and written:
//!
//! * **Sequence format**, compatible with the UCI promoter and splice-junction
//!   files. One record per line, `class,name,sequence`, fields separated by
//!   commas and surrounded by optional whitespace:
//!
//!   ```text
//!   +,S10,    tactagcaatacgcttgcgttcggtggttaagtatgtataatgcgcgggcttgtcgt
//!   ```
//!
//!   Each sequence character becomes one feature named after its position
//!   (`p-50` ... `p-1`, `p+1` ... `p+7` by default; there is no zero
//!   position). Nucleotides are read case-insensitively and stored lowercase.
//!
//! * **Tabular format**: a header row of feature names followed by the class
//!   column, then one comma-separated row of nominal values per example. Allowed
//!   values are the observed ones in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feature {
    pub name: String,
    pub values: Vec<String>,
}

impl Feature {
    pub fn new(
        name: impl Into<String>,
        values: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Feature {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Schema {
    features: Vec<Feature>,
    classes: Vec<String>,
    positive_class: Option<usize>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        self.features == other.features
            && self.classes == other.classes
            && self.positive_class == other.positive_class
    }
}

impl Schema {
    /// Feature names must be unique, every feature needs at least two values
    /// and there must be at least two classes.
    pub fn new(
        features: Vec<Feature>,
        classes: Vec<String>,
        positive_class: Option<&str>,
    ) -> Result<Schema> {
        let mut index = HashMap::new();
        for (i, f) in features.iter().enumerate() {
            if f.name.is_empty() {
                return Err(Error::Schema(format!(
                    "feature {} has an empty name",
                    i + 1
                )));
            }
            if index.insert(f.name.clone(), i).is_some() {
                return Err(Error::Schema(format!(
                    "duplicate feature name `{}`",
                    f.name
                )));
            }
            if f.values.len() < 2 {
                return Err(Error::Schema(format!(
                    "feature `{}` needs at least two values, has {:?}",
                    f.name, f.values
                )));
            }
            for (j, v) in f.values.iter().enumerate() {
                if v.is_empty() || f.values[..j].contains(v) {
                    return Err(Error::Schema(format!(
                        "feature `{}` has a bad value list {:?}",
                        f.name, f.values
                    )));
                }
            }
        }
        if classes.len() < 2 {
            return Err(Error::Schema(format!(
                "need at least two classes, have {classes:?}"
            )));
        }
        for (j, c) in classes.iter().enumerate() {
            if classes[..j].contains(c) {
                return Err(Error::Schema(format!("duplicate class `{c}`")));
            }
        }
        let positive_class = match positive_class {
            None => None,
            Some(p) => Some(classes.iter().position(|c| c == p).ok_or_else(|| {
                Error::Schema(format!("positive class `{p}` is not one of {classes:?}"))
            })?),
        };
        Ok(Schema {
            features,
            classes,
            positive_class,
            index,
        })
    }

    /// The 57-position promoter schema with classes `+` (positive) and `-`.
    pub fn promoter() -> Schema {
        PositionsSpec::default()
            .schema(vec!["+".into(), "-".into()], Some("+"))
            .expect("static schema is valid")
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn positive_class(&self) -> Option<usize> {
        self.positive_class
    }

    pub fn with_positive_class(mut self, label: &str) -> Result<Schema> {
        self.positive_class = Some(self.class_index(label).ok_or_else(|| {
            Error::Schema(format!(
                "positive class `{label}` is not one of {:?}",
                self.classes
            ))
        })?);
        Ok(self)
    }
}

/// One classified example. `class` indexes [`Schema::classes`]; `values[i]`
/// indexes the allowed values of feature `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example {
    pub id: String,
    pub class: usize,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    schema: Schema,
    examples: Vec<Example>,
}

impl Dataset {
    pub fn new(schema: Schema, examples: Vec<Example>) -> Result<Dataset> {
        for ex in &examples {
            if ex.values.len() != schema.features.len() {
                return Err(Error::Schema(format!(
                    "example `{}` has {} values for {} features",
                    ex.id,
                    ex.values.len(),
                    schema.features.len()
                )));
            }
            if ex.class >= schema.classes.len() {
                return Err(Error::Schema(format!(
                    "example `{}` has class index {}",
                    ex.id, ex.class
                )));
            }
            for (f, &v) in schema.features.iter().zip(&ex.values) {
                if v >= f.values.len() {
                    return Err(Error::Schema(format!(
                        "example `{}` has value index {v} for feature `{}`",
                        ex.id, f.name
                    )));
                }
            }
        }
        Ok(Dataset { schema, examples })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn class_label(&self, ex: &Example) -> &str {
        &self.schema.classes[ex.class]
    }

    pub fn value(&self, ex: &Example, feature: usize) -> &str {
        &self.schema.features[feature].values[ex.values[feature]]
    }

    pub fn with_positive_class(self, label: &str) -> Result<Dataset> {
        Ok(Dataset {
            schema: self.schema.with_positive_class(label)?,
            examples: self.examples,
        })
    }

    /// The examples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
        }
    }

    pub fn map_examples(&self, f: impl FnMut(&Example) -> Example) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            examples: self.examples.iter().map(f).collect(),
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.classes.len()];
        for ex in &self.examples {
            counts[ex.class] += 1;
        }
        counts
    }
}

/// Position labels for sequence-format data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionsSpec {
    pub first: i32,
    pub last: i32,
    pub skip_zero: bool,
    /// Allowed characters, lowercase, in schema value order.
    pub alphabet: Vec<char>,
}

impl Default for PositionsSpec {
    /// `p-50` through `p+7` without a zero position, nucleotides `a g c t`.
    fn default() -> Self {
        PositionsSpec {
            first: -50,
            last: 7,
            skip_zero: true,
            alphabet: vec!['a', 'g', 'c', 't'],
        }
    }
}

impl PositionsSpec {
    /// Parses `FIRST:LAST` (e.g. `-50:7`); zero is skipped.
    pub fn parse_range(text: &str) -> Result<PositionsSpec> {
        let bad = || Error::Schema(format!("position range `{text}` is not FIRST:LAST"));
        let (a, b) = text.split_once(':').ok_or_else(bad)?;
        let first = a.trim().parse().map_err(|_| bad())?;
        let last = b.trim().parse().map_err(|_| bad())?;
        if first > last {
            return Err(bad());
        }
        Ok(PositionsSpec {
            first,
            last,
            ..Default::default()
        })
    }

    pub fn labels(&self) -> Vec<String> {
        (self.first..=self.last)
            .filter(|&p| !(self.skip_zero && p == 0))
            .map(|p| {
                if p < 0 {
                    format!("p{p}")
                } else {
                    format!("p+{p}")
                }
            })
            .collect()
    }

    pub fn schema(&self, classes: Vec<String>, positive_class: Option<&str>) -> Result<Schema> {
        let values: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        let features = self
            .labels()
            .into_iter()
            .map(|name| Feature::new(name, values.clone()))
            .collect();
        Schema::new(features, classes, positive_class)
    }
}

/// Reads `class,name,sequence` records. Classes are taken from the records in
/// order of first appearance; `+` becomes the positive class when present.
pub fn load_sequence_format(text: &str, positions: &PositionsSpec) -> Result<Dataset> {
    let width = positions.labels().len();
    let mut records = Vec::new();
    let mut classes: Vec<String> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [class, name, seq] = fields[..] else {
            return Err(Error::Record {
                line: line_no,
                message: format!(
                    "expected `class,name,sequence`, found {} fields",
                    fields.len()
                ),
            });
        };
        if class.is_empty() || name.is_empty() {
            return Err(Error::Record {
                line: line_no,
                message: "empty class or name".into(),
            });
        }
        let seq: Vec<char> = seq.chars().filter(|c| !c.is_whitespace()).collect();
        if seq.len() != width {
            return Err(Error::Record {
                line: line_no,
                message: format!("sequence has {} characters, expected {width}", seq.len()),
            });
        }
        let mut values = Vec::with_capacity(width);
        for (i, c) in seq.iter().enumerate() {
            let lc = c.to_ascii_lowercase();
            let v = positions
                .alphabet
                .iter()
                .position(|&a| a == lc)
                .ok_or_else(|| Error::Record {
                    line: line_no,
                    message: format!("illegal character `{c}` at sequence offset {}", i + 1),
                })?;
            values.push(v);
        }
        let class_idx = match classes.iter().position(|c| c == class) {
            Some(i) => i,
            None => {
                classes.push(class.to_string());
                classes.len() - 1
            }
        };
        records.push(Example {
            id: name.to_string(),
            class: class_idx,
            values,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let positive = classes.iter().any(|c| c == "+").then_some("+");
    let schema = positions.schema(classes, positive)?;
    Dataset::new(schema, records)
}

/// Reads a header-CSV file whose last column is the class.
pub fn load_tabular(text: &str) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyDataset)?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.len() < 2 {
        return Err(Error::Record {
            line: 1,
            message: "header needs at least one feature column and a class column".into(),
        });
    }
    let n_features = names.len() - 1;
    let mut values: Vec<Vec<String>> = vec![Vec::new(); n_features];
    let mut classes: Vec<String> = Vec::new();
    let mut examples = Vec::new();
    for (line_no, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != names.len() {
            return Err(Error::Record {
                line: line_no,
                message: format!(
                    "ragged row: {} columns, header has {}",
                    cells.len(),
                    names.len()
                ),
            });
        }
        if let Some(pos) = cells.iter().position(|c| c.is_empty()) {
            return Err(Error::Record {
                line: line_no,
                message: format!("missing value in column `{}`", names[pos]),
            });
        }
        let mut row = Vec::with_capacity(n_features);
        for (f, cell) in cells[..n_features].iter().enumerate() {
            row.push(intern(&mut values[f], cell));
        }
        let class = intern(&mut classes, cells[n_features]);
        examples.push(Example {
            id: format!("row{}", examples.len() + 1),
            class,
            values: row,
        });
    }
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let features = names[..n_features]
        .iter()
        .zip(values)
        .map(|(n, v)| Feature::new(*n, v))
        .collect();
    let positive = (classes.len() == 2 && classes.iter().any(|c| c == "+")).then_some("+");
    Dataset::new(Schema::new(features, classes, positive)?, examples)
}

fn intern(pool: &mut Vec<String>, s: &str) -> usize {
    match pool.iter().position(|v| v == s) {
        Some(i) => i,
        None => {
            pool.push(s.to_string());
            pool.len() - 1
        }
    }
}

/// Writes sequence format. Every feature value must be a single character.
pub fn write_sequence_format(data: &Dataset) -> Result<String> {
    let mut out = String::new();
    for ex in data.examples() {
        let mut seq = String::with_capacity(ex.values.len());
        for f in 0..ex.values.len() {
            let v = data.value(ex, f);
            if v.chars().count() != 1 {
                return Err(Error::Schema(format!(
                    "value `{v}` cannot be written as one sequence character"
                )));
            }
            seq.push_str(v);
        }
        let _ = writeln!(out, "{},{},{}", data.class_label(ex), ex.id, seq);
    }
    Ok(out)
}

pub fn write_tabular(data: &Dataset) -> String {
    let mut out = String::new();
    let names: Vec<&str> = data
        .schema()
        .features()
        .iter()
        .map(|f| f.name.as_str())
        .collect();
    let _ = writeln!(out, "{},class", names.join(","));
    for ex in data.examples() {
        for f in 0..ex.values.len() {
            out.push_str(data.value(ex, f));
            out.push(',');
        }
        out.push_str(data.class_label(ex));
        out.push('\n');
    }
    out
}

/// Index-level partition of `n` examples under `seed`.
///
/// One seeded shuffle of `0..n` is drawn; the training set is its first
/// `train_size` entries and the test set its last `test_size` entries. For a
/// fixed seed, smaller training sets are prefixes of larger ones and the test
/// set does not depend on `train_size`.
pub fn partition_indices(
    n: usize,
    train_size: usize,
    test_size: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let requested = train_size + test_size;
    if requested > n {
        return Err(Error::SizeExceedsDataset {
            requested,
            available: n,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rng::shuffle(&mut rng::stream(seed, rng::PARTITION_STREAM), &mut perm);
    let test = perm[n - test_size..].to_vec();
    perm.truncate(train_size);
    Ok((perm, test))
}

pub fn partition(
    data: &Dataset,
    train_size: usize,
    test_size: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let (train, test) = partition_indices(data.len(), train_size, test_size, seed)?;
    Ok((data.subset(&train), data.subset(&test)))
}
