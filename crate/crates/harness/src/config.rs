//! Experiment configuration.
//!
//! Values are resolved in three layers: built-in defaults per model, then a
//! flat `key = value` config file, then command-line overrides. Recognized
//! keys:
//!
//! ```text
//! # comments start with '#'
//! n = 100
//! k = 4                      # Watts-Strogatz only
//! p = auto                   # single p; `auto` means ln(n)/n
//! p_list = 0, 0.001, 0.01    # several p values
//! filters = sqrt, squared    # filter grammar, comma separated
//! m_grid = 100, 200, inf     # `inf` runs on the population covariance
//! trials = 200
//! graphs = 1
//! seed = 1
//! workers = 4
//! eta = 0.05
//! ```

use std::fmt;
use std::str::FromStr;

use blindcent::FilterSpec;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    ErdosRenyi,
    WattsStrogatz,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::ErdosRenyi => "er",
            ModelKind::WattsStrogatz => "ws",
        }
    }
}

impl FromStr for ModelKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "er" => Ok(ModelKind::ErdosRenyi),
            "ws" => Ok(ModelKind::WattsStrogatz),
            other => Err(HarnessError::Usage(format!(
                "unknown model `{other}` (expected er|ws)"
            ))),
        }
    }
}

/// A rewiring/edge probability, possibly the connectivity threshold `ln(n)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Auto,
    Fixed(f64),
}

impl PValue {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            PValue::Auto => (n as f64).ln() / n as f64,
            PValue::Fixed(p) => p,
        }
    }
}

impl FromStr for PValue {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(PValue::Auto);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| HarnessError::Usage(format!("bad probability `{s}`")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(HarnessError::Usage(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Ok(PValue::Fixed(p))
    }
}

/// Number of signals per trial; `Population` uses the exact covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SampleSize {
    Finite(usize),
    Population,
}

impl SampleSize {
    pub fn key(self) -> u64 {
        match self {
            SampleSize::Finite(m) => m as u64,
            SampleSize::Population => u64::MAX,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            SampleSize::Finite(m) => Some(m),
            SampleSize::Population => None,
        }
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(m) => write!(f, "{m}"),
            SampleSize::Population => write!(f, "inf"),
        }
    }
}

impl FromStr for SampleSize {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(SampleSize::Population);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(SampleSize::Finite(m)),
            _ => Err(HarnessError::Usage(format!("bad sample size `{s}`"))),
        }
    }
}

pub fn parse_list<T: FromStr<Err = HarnessError>>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse())
        .collect()
}

pub fn parse_filters(s: &str) -> Result<Vec<FilterSpec>> {
    // `poly:` specs contain commas themselves; split on ';' when present.
    let sep = if s.contains(';') { ';' } else { ',' };
    let parts: Vec<&str> = if s.trim_start().starts_with("poly:") && sep == ',' {
        vec![s]
    } else {
        s.split(sep).collect()
    };
    parts
        .into_iter()
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<FilterSpec>().map_err(HarnessError::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub n: usize,
    /// Lattice degree, Watts-Strogatz only.
    pub k: usize,
    pub p_list: Vec<PValue>,
    pub filters: Vec<FilterSpec>,
    pub m_grid: Vec<SampleSize>,
    /// Trials per (graph, m).
    pub trials: usize,
    /// Graph draws per p.
    pub graphs: usize,
    pub master_seed: u64,
    pub workers: Option<usize>,
    pub eta: f64,
}

impl ExperimentConfig {
    /// Settings of the two reference experiments.
    pub fn defaults(model: ModelKind) -> Self {
        match model {
            ModelKind::ErdosRenyi => ExperimentConfig {
                model,
                n: 100,
                k: 0,
                p_list: vec![PValue::Auto],
                filters: FilterSpec::experiment_filters().to_vec(),
                m_grid: (1..=10).map(|i| SampleSize::Finite(100 * i)).collect(),
                trials: 200,
                graphs: 1,
                master_seed: 1,
                workers: None,
                eta: 0.05,
            },
            ModelKind::WattsStrogatz => ExperimentConfig {
                model,
                n: 500,
                k: 4,
                p_list: [0.0, 0.001, 0.01, 0.1, 1.0].map(PValue::Fixed).to_vec(),
                filters: vec![FilterSpec::sqrt()],
                m_grid: [250, 500, 1000, 2000, 4000]
                    .map(SampleSize::Finite)
                    .to_vec(),
                trials: 1,
                graphs: 100,
                master_seed: 1,
                workers: None,
                eta: 0.05,
            },
        }
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let usage = |what: &str| HarnessError::Usage(format!("bad value `{value}` for `{what}`"));
        match key {
            "model" => self.model = value.parse()?,
            "n" => self.n = value.parse().map_err(|_| usage(key))?,
            "k" => self.k = value.parse().map_err(|_| usage(key))?,
            "p" => self.p_list = vec![value.parse()?],
            "p_list" | "p-list" => self.p_list = parse_list(value)?,
            "filter" | "filters" => self.filters = parse_filters(value)?,
            "m_grid" | "m-grid" => self.m_grid = parse_list(value)?,
            "trials" => self.trials = value.parse().map_err(|_| usage(key))?,
            "graphs" => self.graphs = value.parse().map_err(|_| usage(key))?,
            "seed" | "master_seed" => self.master_seed = value.parse().map_err(|_| usage(key))?,
            "workers" => self.workers = Some(value.parse().map_err(|_| usage(key))?),
            "eta" => self.eta = value.parse().map_err(|_| usage(key))?,
            other => return Err(HarnessError::Usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Apply a config file's contents on top of the current values.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn resolved_p(&self) -> Vec<f64> {
        self.p_list.iter().map(|p| p.resolve(self.n)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Usage(msg));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.trials == 0 || self.graphs == 0 {
            return fail("trials and graphs must be at least 1".into());
        }
        if self.m_grid.is_empty() {
            return fail("m_grid must not be empty".into());
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return fail("m_grid must be strictly ascending".into());
        }
        if self.p_list.is_empty() || self.filters.is_empty() {
            return fail("need at least one p and one filter".into());
        }
        if self.resolved_p().iter().any(|p| !(0.0..=1.0).contains(p)) {
            return fail("p outside [0, 1]".into());
        }
        if self.model == ModelKind::WattsStrogatz
            && (!self.k.is_multiple_of(2) || self.k >= self.n || self.k == 0)
        {
            return fail(format!(
                "k = {} must be even, positive and below n = {}",
                self.k, self.n
            ));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return fail(format!("eta = {} must lie in (0, 1)", self.eta));
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        Ok(())
    }
}
