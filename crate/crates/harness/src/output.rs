//! Writing result files to disk.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::experiment::{
    EigengapRow, ExperimentOutput, GraphRow, ProfileRow, EIGENGAP_HEADER, GRAPH_HEADER,
    PROFILE_HEADER,
};
use crate::plot::{plot_csv, PlotKind};
use crate::records::{summarize, write_results, write_summary};

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner()
        .map_err(|e| HarnessError::io("<buffer>", e.into_error()))
}

pub fn graphs_csv(rows: &[GraphRow]) -> Result<Vec<u8>> {
    csv_bytes(&GRAPH_HEADER, rows.iter().map(GraphRow::fields))
}

pub fn eigengap_csv(rows: &[EigengapRow]) -> Result<Vec<u8>> {
    csv_bytes(&EIGENGAP_HEADER, rows.iter().map(EigengapRow::fields))
}

pub fn profile_csv(rows: &[ProfileRow]) -> Result<Vec<u8>> {
    csv_bytes(&PROFILE_HEADER, rows.iter().map(ProfileRow::fields))
}

/// Paths written by [`write_experiment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentFiles {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub graphs: PathBuf,
    pub plot: PathBuf,
}

impl ExperimentFiles {
    pub fn in_dir(dir: &Path) -> Self {
        ExperimentFiles {
            results: dir.join("results.csv"),
            summary: dir.join("summary.csv"),
            graphs: dir.join("graphs.csv"),
            plot: dir.join("rates.svg"),
        }
    }
}

pub fn write_experiment(
    dir: &Path,
    cfg: &ExperimentConfig,
    out: &ExperimentOutput,
) -> Result<ExperimentFiles> {
    create_dir(dir)?;
    let files = ExperimentFiles::in_dir(dir);

    let mut results = Vec::new();
    write_results(&mut results, &out.records)?;
    write_file(&files.results, &results)?;

    let summary_rows = summarize(&out.records, cfg.eta);
    let mut summary = Vec::new();
    write_summary(&mut summary, &summary_rows)?;
    write_file(&files.summary, &summary)?;

    write_file(&files.graphs, &graphs_csv(&out.graphs)?)?;

    let text = String::from_utf8(summary).expect("csv output is utf-8");
    plot_csv(&text, PlotKind::Rates, &files.plot)?;
    Ok(files)
}

/// Write `profile.csv` and `profile.svg` into `dir`.
pub fn write_profile(dir: &Path, rows: &[ProfileRow]) -> Result<(PathBuf, PathBuf)> {
    create_dir(dir)?;
    let csv_path = dir.join("profile.csv");
    let svg_path = dir.join("profile.svg");
    let bytes = profile_csv(rows)?;
    write_file(&csv_path, &bytes)?;
    plot_csv(
        std::str::from_utf8(&bytes).expect("utf-8"),
        PlotKind::Profile,
        &svg_path,
    )?;
    Ok((csv_path, svg_path))
}

/// Write to a file, or to stdout when `path` is `-`.
pub fn write_to(path: &Path, bytes: &[u8]) -> Result<()> {
    if path == Path::new("-") {
        let stdout = std::io::stdout();
        let mut w = BufWriter::new(stdout.lock());
        w.write_all(bytes)
            .and_then(|_| w.flush())
            .map_err(|e| HarnessError::io("<stdout>", e))
    } else {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            create_dir(parent)?;
        }
        write_file(path, bytes)
    }
}
