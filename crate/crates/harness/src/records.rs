//! Result rows, their CSV encoding and per-setting summaries.

use std::collections::HashMap;
use std::io::Write;

use blindcent::theory::median;

use crate::config::SampleSize;
use crate::error::Result;

/// Column order of the per-trial results file.
pub const RESULT_HEADER: [&str; 16] = [
    "model",
    "n",
    "k",
    "p",
    "filter",
    "m",
    "graph_id",
    "trial_id",
    "chosen_index",
    "optimal_index",
    "correct",
    "cos_true",
    "score",
    "delta",
    "min_u",
    "seed",
];

pub const SUMMARY_HEADER: [&str; 20] = [
    "model",
    "n",
    "k",
    "p",
    "filter",
    "m",
    "trials",
    "correct",
    "errors",
    "rate",
    "wilson_low",
    "wilson_high",
    "median_cos",
    "median_delta",
    "median_min_u",
    "deviation_bound",
    "alignment_bound",
    "sample_requirement",
    "eta",
    "seed",
];

/// What a trial measured, or the error that stopped it.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Completed(TrialMeasurement),
    Failed(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMeasurement {
    pub chosen_index: usize,
    pub optimal_index: usize,
    /// `|⟨û, u⟩|`.
    pub cos_true: f64,
    /// Cone score of the chosen eigenvector.
    pub score: f64,
    /// Deviation bound with unit constant; 0 for the population covariance.
    pub deviation_bound: f64,
}

impl TrialMeasurement {
    pub fn correct(&self) -> bool {
        self.chosen_index == self.optimal_index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub model: String,
    pub n: usize,
    /// Lattice degree; `None` outside Watts-Strogatz.
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub filter: String,
    pub m: SampleSize,
    pub graph_id: usize,
    pub trial_id: usize,
    /// Eigengap of `C_y` at the centrality index.
    pub delta: f64,
    pub min_u: f64,
    /// Master seed the row was derived from.
    pub seed: u64,
    pub outcome: TrialOutcome,
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl TrialRecord {
    pub fn correct(&self) -> bool {
        matches!(&self.outcome, TrialOutcome::Completed(t) if t.correct())
    }

    pub fn measurement(&self) -> Option<&TrialMeasurement> {
        match &self.outcome {
            TrialOutcome::Completed(t) => Some(t),
            TrialOutcome::Failed(_) => None,
        }
    }

    pub fn fields(&self) -> Vec<String> {
        let mut row = vec![
            self.model.clone(),
            self.n.to_string(),
            opt(self.k),
            opt(self.p),
            self.filter.clone(),
            self.m.to_string(),
            self.graph_id.to_string(),
            self.trial_id.to_string(),
        ];
        match &self.outcome {
            TrialOutcome::Completed(t) => row.extend([
                t.chosen_index.to_string(),
                t.optimal_index.to_string(),
                t.correct().to_string(),
                t.cos_true.to_string(),
                t.score.to_string(),
            ]),
            TrialOutcome::Failed(tag) => row.extend([
                String::new(),
                String::new(),
                format!("error:{tag}"),
                String::new(),
                String::new(),
            ]),
        }
        row.extend([
            self.delta.to_string(),
            self.min_u.to_string(),
            self.seed.to_string(),
        ]);
        row
    }
}

pub fn write_results<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub model: String,
    pub n: usize,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub filter: String,
    pub m: SampleSize,
    pub trials: usize,
    pub correct: usize,
    pub errors: usize,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub median_cos: f64,
    pub median_delta: f64,
    pub median_min_u: f64,
    /// Median over trials of the deviation bound with unit constant.
    pub deviation_bound: f64,
    /// Median over trials of the capped alignment bound with unit constant.
    pub alignment_bound: f64,
    /// Median over trials of `max_i 1/(δ² u_i²)`.
    pub sample_requirement: f64,
    pub eta: f64,
    pub seed: u64,
}

impl SummaryRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.model.clone(),
            self.n.to_string(),
            opt(self.k),
            opt(self.p),
            self.filter.clone(),
            self.m.to_string(),
            self.trials.to_string(),
            self.correct.to_string(),
            self.errors.to_string(),
            self.rate.to_string(),
            self.wilson_low.to_string(),
            self.wilson_high.to_string(),
            self.median_cos.to_string(),
            self.median_delta.to_string(),
            self.median_min_u.to_string(),
            self.deviation_bound.to_string(),
            self.alignment_bound.to_string(),
            self.sample_requirement.to_string(),
            self.eta.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// model, n, k, p bits, filter, m
type GroupKey = (
    String,
    usize,
    Option<usize>,
    Option<u64>,
    String,
    SampleSize,
);

/// Group trial records by (setting, m), in order of first appearance.
///
/// Failed trials stay in the denominator and count as misses.
pub fn summarize(records: &[TrialRecord], eta: f64) -> Vec<SummaryRow> {
    let mut groups: Vec<Vec<&TrialRecord>> = Vec::new();
    let mut slots: HashMap<GroupKey, usize> = HashMap::new();
    for r in records {
        let key = (
            r.model.clone(),
            r.n,
            r.k,
            r.p.map(f64::to_bits),
            r.filter.clone(),
            r.m,
        );
        let slot = *slots.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(r);
    }
    groups.iter().map(|g| summarize_group(g, eta)).collect()
}

fn summarize_group(rows: &[&TrialRecord], eta: f64) -> SummaryRow {
    let first = rows[0];
    let trials = rows.len();
    let correct = rows.iter().filter(|r| r.correct()).count();
    let errors = rows.iter().filter(|r| r.measurement().is_none()).count();
    let (wilson_low, wilson_high) = wilson_interval(correct, trials);

    let done: Vec<&TrialMeasurement> = rows.iter().filter_map(|r| r.measurement()).collect();
    let cos: Vec<f64> = done.iter().map(|t| t.cos_true).collect();
    let devs: Vec<f64> = done.iter().map(|t| t.deviation_bound).collect();
    let aligns: Vec<f64> = rows
        .iter()
        .filter_map(|r| {
            let t = r.measurement()?;
            Some(if r.delta > 0.0 {
                (2.0 * t.deviation_bound / r.delta).min(1.0)
            } else {
                1.0
            })
        })
        .collect();
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let min_us: Vec<f64> = rows.iter().map(|r| r.min_u).collect();
    let reqs: Vec<f64> = rows
        .iter()
        .map(|r| {
            let d = r.delta * r.min_u;
            if d > 0.0 {
                1.0 / (d * d)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let med = |v: &[f64]| if v.is_empty() { f64::NAN } else { median(v) };
    SummaryRow {
        model: first.model.clone(),
        n: first.n,
        k: first.k,
        p: first.p,
        filter: first.filter.clone(),
        m: first.m,
        trials,
        correct,
        errors,
        rate: correct as f64 / trials as f64,
        wilson_low,
        wilson_high,
        median_cos: med(&cos),
        median_delta: med(&deltas),
        median_min_u: med(&min_us),
        deviation_bound: med(&devs),
        alignment_bound: med(&aligns),
        sample_requirement: med(&reqs),
        eta,
        seed: first.seed,
    }
}
