//! CSV renderings of sweep results. Rows are sorted by condition key, then
//! checkpoint, then repetition. Floats use the shortest representation that
//! parses back to the same value.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::experiment::{ConditionKey, SuccessCurve, SweepResults};

pub const RESULTS_HEADER: [&str; 6] = [
    "algorithm",
    "f",
    "strategy",
    "checkpoint",
    "repetition",
    "success_rate",
];
pub const AGGREGATE_HEADER: [&str; 6] = ["algorithm", "f", "strategy", "checkpoint", "mean", "std"];

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn key_fields(key: &ConditionKey) -> [String; 3] {
    [
        key.algorithm.to_string(),
        key.f.to_string(),
        key.strategy.to_string(),
    ]
}

/// One row per (condition, checkpoint, repetition).
pub fn render_results(results: &SweepResults) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(RESULTS_HEADER)?;
    for (key, result) in results {
        let [a, f, s] = key_fields(key);
        for point in &result.curve.points {
            for (rep, rate) in point.rates.iter().enumerate() {
                w.write_record([
                    &a,
                    &f,
                    &s,
                    &point.training.to_string(),
                    &rep.to_string(),
                    &rate.to_string(),
                ])?;
            }
        }
    }
    finish(w)
}

/// One row per (condition, checkpoint) with mean and sample std.
pub fn render_aggregate(results: &SweepResults) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(AGGREGATE_HEADER)?;
    for (key, result) in results {
        let [a, f, s] = key_fields(key);
        for point in &result.curve.points {
            w.write_record([
                &a,
                &f,
                &s,
                &point.training.to_string(),
                &point.mean.to_string(),
                &point.std.to_string(),
            ])?;
        }
    }
    finish(w)
}

/// Per-interaction log of every repetition that kept a trace.
pub fn render_trace(results: &SweepResults) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record([
        "algorithm",
        "f",
        "strategy",
        "repetition",
        "phase",
        "checkpoint",
        "index",
        "speaker",
        "context",
        "topic",
        "word",
        "pointing",
        "hearer",
        "success",
    ])?;
    for (key, result) in results {
        let [a, f, s] = key_fields(key);
        for (rep, report) in result.reports.iter().enumerate() {
            for entry in report.trace.iter().flatten() {
                let o = &entry.outcome;
                let context = o
                    .context
                    .iter()
                    .map(|id| id.to_string())
                    .collect::<Vec<_>>()
                    .join(";");
                w.write_record([
                    a.clone(),
                    f.clone(),
                    s.clone(),
                    rep.to_string(),
                    o.phase.to_string(),
                    entry.checkpoint.map(|c| c.to_string()).unwrap_or_default(),
                    entry.index.to_string(),
                    o.speaker.to_string(),
                    context,
                    o.topic.to_string(),
                    o.word.map(|w| w.to_string()).unwrap_or_default(),
                    o.pointing.to_string(),
                    o.hearer_choice.map(|h| h.to_string()).unwrap_or_default(),
                    o.success.map(|b| b.to_string()).unwrap_or_default(),
                ])?;
            }
        }
    }
    finish(w)
}

/// Tutor lexicons, one block per repetition. Every condition of a sweep
/// shares the lexicon of a given repetition, so the first condition's are
/// written.
pub fn render_lexicons(results: &SweepResults, dims: usize) -> Result<Vec<u8>> {
    let mut w = writer();
    let mut header = vec!["repetition".to_string(), "word".to_string()];
    header.extend((0..dims).map(|d| format!("x{d}")));
    w.write_record(&header)?;
    if let Some(first) = results.values().next() {
        for (rep, report) in first.reports.iter().enumerate() {
            for (word, proto) in report.lexicon.entries() {
                let mut row = vec![rep.to_string(), word.to_string()];
                row.extend(proto.iter().map(|x| x.to_string()));
                w.write_record(&row)?;
            }
        }
    }
    finish(w)
}

/// End-of-run learner state: per-word sample counts and/or prototypes.
pub fn render_learner_states(results: &SweepResults, dims: usize) -> Result<Vec<u8>> {
    let mut w = writer();
    let mut header: Vec<String> = [
        "algorithm",
        "f",
        "strategy",
        "repetition",
        "word",
        "samples",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..dims).map(|d| format!("x{d}")));
    w.write_record(&header)?;
    for (key, result) in results {
        let [a, f, s] = key_fields(key);
        for (rep, report) in result.reports.iter().enumerate() {
            use crate::learners::Learner as _;
            for entry in report.learner.summary() {
                let mut row = vec![
                    a.clone(),
                    f.clone(),
                    s.clone(),
                    rep.to_string(),
                    entry.word.to_string(),
                    entry.samples.map(|n| n.to_string()).unwrap_or_default(),
                ];
                match &entry.prototype {
                    Some(p) => row.extend(p.iter().map(|x| x.to_string())),
                    None => row.extend(std::iter::repeat_n(String::new(), dims)),
                }
                w.write_record(&row)?;
            }
        }
    }
    finish(w)
}

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes)
}

fn parse_field<T: std::str::FromStr>(
    record: &csv::StringRecord,
    i: usize,
    name: &str,
) -> Result<T> {
    record
        .get(i)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::invalid(format!("bad `{name}` field in row {record:?}")))
}

fn parse_key(record: &csv::StringRecord) -> Result<ConditionKey> {
    Ok(ConditionKey::new(
        parse_field(record, 0, "algorithm")?,
        parse_field(record, 1, "f")?,
        parse_field(record, 2, "strategy")?,
    ))
}

/// Rebuilds success curves from a results CSV.
pub fn read_results(bytes: &[u8]) -> Result<BTreeMap<ConditionKey, SuccessCurve>> {
    // key -> checkpoint -> repetition -> rate
    let mut table: BTreeMap<ConditionKey, BTreeMap<usize, BTreeMap<usize, f64>>> = BTreeMap::new();
    let mut rdr = reader(bytes);
    for record in rdr.records() {
        let record = record?;
        let key = parse_key(&record)?;
        let checkpoint: usize = parse_field(&record, 3, "checkpoint")?;
        let rep: usize = parse_field(&record, 4, "repetition")?;
        let rate: f64 = parse_field(&record, 5, "success_rate")?;
        table
            .entry(key)
            .or_default()
            .entry(checkpoint)
            .or_default()
            .insert(rep, rate);
    }
    table
        .into_iter()
        .map(|(key, by_checkpoint)| {
            let checkpoints: Vec<usize> = by_checkpoint.keys().copied().collect();
            let reps = by_checkpoint.values().map(BTreeMap::len).max().unwrap_or(0);
            let per_rep = (0..reps)
                .map(|r| {
                    by_checkpoint
                        .values()
                        .map(|m| {
                            m.get(&r).copied().ok_or_else(|| {
                                Error::invalid(format!("{key}: repetition {r} missing"))
                            })
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((key, SuccessCurve::from_rates(&checkpoints, &per_rep)))
        })
        .collect()
}

/// Row of an aggregate CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub key: ConditionKey,
    pub checkpoint: usize,
    pub mean: f64,
    pub std: f64,
}

pub fn read_aggregate(bytes: &[u8]) -> Result<Vec<AggregateRow>> {
    let mut rdr = reader(bytes);
    rdr.records()
        .map(|record| {
            let record = record?;
            Ok(AggregateRow {
                key: parse_key(&record)?,
                checkpoint: parse_field(&record, 3, "checkpoint")?,
                mean: parse_field(&record, 4, "mean")?,
                std: parse_field(&record, 5, "std")?,
            })
        })
        .collect()
}
