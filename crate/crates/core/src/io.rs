//! Model and record files, plus the numeric output format.
//!
//! A model file is UTF-8 JSON with fields:
//!
//! ```json
//! {
//!   "lambda_labels": ["l1", "l2"],
//!   "dist":   [[0.0, 1.0], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
//!   "a_plus": [[1.0, 1.0], [0.0, 1.0]],
//!   "b_plus": [[0.0, 1.0], [1.0, 1.0]]
//! }
//! ```
//!
//! `lambda_labels` is optional and cosmetic. `dist` has four rows in the
//! canonical context order (0,0), (0,1), (1,0), (1,1); `a_plus` and `b_plus`
//! have one row per own setting. Every entry is a probability, written
//! either as a number or as a fraction string "p/q".
//!
//! A record file carries a simulated experiment: `seed`, `trials`, `counts`
//! (4 × 4), the generator identifier, and the plug-in estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ContextDistribution, LocalModel, LocalResponses};
use crate::montecarlo::{Estimate, ExperimentRecord, RNG_STREAM_ID};

/// Fixed-point rendering with 12 decimal digits, used for every numeric
/// value the tools print.
pub fn decimal12(x: f64) -> String {
    format!("{x:.12}")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawProb {
    Number(f64),
    Text(String),
}

fn parse_prob(raw: &RawProb, field: &str, row: usize, column: usize) -> Result<f64> {
    let at = || format!("{field} row {} column {}", row + 1, column + 1);
    match raw {
        RawProb::Number(v) => Ok(*v),
        RawProb::Text(s) => {
            let parse_part = |part: &str| -> Result<f64> {
                part.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{}: cannot parse {part:?}", at())))
            };
            if let Some((num, den)) = s.split_once('/') {
                let d = parse_part(den)?;
                if d == 0.0 {
                    return Err(Error::Parse(format!("{}: zero denominator in {s:?}", at())));
                }
                Ok(parse_part(num)? / d)
            } else {
                parse_part(s)
            }
        }
    }
}

fn parse_table(
    raw: &[Vec<RawProb>],
    field: &str,
    expected_rows: usize,
) -> Result<Vec<Vec<f64>>> {
    if raw.len() != expected_rows {
        return Err(Error::Parse(format!(
            "{field} must have {expected_rows} rows, got {}",
            raw.len()
        )));
    }
    raw.iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, v)| parse_prob(v, field, r, c))
                .collect()
        })
        .collect()
}

#[derive(Debug, Deserialize)]
struct RawModelFile {
    #[serde(default)]
    lambda_labels: Option<Vec<String>>,
    dist: Vec<Vec<RawProb>>,
    a_plus: Vec<Vec<RawProb>>,
    b_plus: Vec<Vec<RawProb>>,
}

/// A parsed model file: the model plus its optional display labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: LocalModel,
    pub lambda_labels: Option<Vec<String>>,
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let raw: RawModelFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
    let dist = ContextDistribution::from_rows(parse_table(&raw.dist, "dist", 4)?)?;
    let a = parse_table(&raw.a_plus, "a_plus", 2)?;
    let b = parse_table(&raw.b_plus, "b_plus", 2)?;
    let to_pair = |mut rows: Vec<Vec<f64>>| -> [Vec<f64>; 2] {
        let second = rows.pop().expect("length checked");
        let first = rows.pop().expect("length checked");
        [first, second]
    };
    let responses = LocalResponses::new(to_pair(a), to_pair(b))?;
    let model = LocalModel::new(dist, responses)?;
    if let Some(labels) = &raw.lambda_labels {
        if labels.len() != model.n() {
            return Err(Error::Parse(format!(
                "lambda_labels has {} entries but the model has {} hidden values",
                labels.len(),
                model.n()
            )));
        }
    }
    Ok(ModelFile {
        model,
        lambda_labels: raw.lambda_labels,
    })
}

#[derive(Serialize)]
struct ModelFileOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_labels: Option<&'a [String]>,
    dist: &'a [Vec<f64>; 4],
    a_plus: &'a [Vec<f64>; 2],
    b_plus: &'a [Vec<f64>; 2],
}

pub fn model_file_to_json(model: &LocalModel, lambda_labels: Option<&[String]>) -> String {
    let out = ModelFileOut {
        lambda_labels,
        dist: model.dist().rows(),
        a_plus: model.responses().a_rows(),
        b_plus: model.responses().b_rows(),
    };
    serde_json::to_string_pretty(&out).expect("plain tables always serialize")
}

/// Default display labels for n hidden values: "l1", "l2", ...
pub fn default_lambda_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("l{k}")).collect()
}

#[derive(Serialize, Deserialize)]
struct RecordFile {
    seed: u64,
    trials: [u64; 4],
    counts: [[u64; 4]; 4],
    rng: String,
    #[serde(default)]
    estimates: Option<Estimate>,
}

pub fn record_to_json(record: &ExperimentRecord, estimates: Option<&Estimate>) -> String {
    let out = RecordFile {
        seed: record.seed,
        trials: record.trials,
        counts: record.counts,
        rng: RNG_STREAM_ID.to_string(),
        estimates: estimates.cloned(),
    };
    serde_json::to_string_pretty(&out).expect("plain tables always serialize")
}

pub fn parse_record_file(text: &str) -> Result<ExperimentRecord> {
    let raw: RecordFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("record file: {e}")))?;
    let record = ExperimentRecord {
        seed: raw.seed,
        trials: raw.trials,
        counts: raw.counts,
    };
    record.validate()?;
    Ok(record)
}
