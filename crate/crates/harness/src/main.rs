use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blindcent::graph::{adjacency, eigenvector_centrality};
use blindcent::{FilterSpec, Graph};
use blindcent_harness::config::{parse_list, ExperimentConfig, ModelKind, PValue, SampleSize};
use blindcent_harness::experiment::{draw_graph, run_file_trial, GraphModel, PreparedGraph};
use blindcent_harness::output::{
    eigengap_csv, read_file, write_experiment, write_profile, write_to,
};
use blindcent_harness::plot::{plot_csv, PlotKind};
use blindcent_harness::records::write_results;
use blindcent_harness::{
    eigengap_table, localization_profile, run_experiment, HarnessError, Result,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "blindcent",
    version,
    about = "Blind eigenvector-centrality selection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a connected random graph and write its edge list.
    Gen {
        #[arg(long)]
        model: ModelKind,
        #[arg(long)]
        n: usize,
        /// Edge or rewiring probability; `auto` is ln(n)/n.
        #[arg(long, default_value = "auto")]
        p: PValue,
        /// Lattice degree (Watts-Strogatz).
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eigenvector centrality of an edge-list graph.
    Centrality {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// One selection trial on an edge-list graph; prints a result row.
    Trial {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        filter: FilterSpec,
        /// Number of signals, or `inf` for the exact covariance.
        #[arg(long)]
        m: SampleSize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        export_signals: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Selection-rate sweep over a random graph model.
    Experiment(ExperimentArgs),
    /// Mean and variance of the eigengap over Watts-Strogatz draws.
    EigengapTable {
        #[arg(long, default_value = "0,0.001,0.01,0.1,1")]
        p_list: String,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value = "sqrt")]
        filter: FilterSpec,
    },
    /// Per-node centrality around the ring for one draw per p.
    Profile {
        #[arg(long, default_value = "0,0.001,0.01,0.1,1")]
        p_list: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Render a results or profile CSV as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    model: ModelKind,
    /// Flat `key = value` file; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    p_list: Option<String>,
    /// Comma separated; use `;` between entries when a `poly:` filter is listed.
    #[arg(long, alias = "filter")]
    filters: Option<String>,
    #[arg(long)]
    m_grid: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    graphs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    eta: Option<f64>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::defaults(self.model);
        if let Some(path) = &self.config {
            cfg.apply_file(&read_file(path)?)?;
            if cfg.model != self.model {
                return Err(HarnessError::Usage(format!(
                    "config file sets model `{}` but `{}` was requested",
                    cfg.model.tag(),
                    self.model.tag()
                )));
            }
        }
        let overrides: [(&str, Option<String>); 11] = [
            ("n", self.n.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("p", self.p.clone()),
            ("p_list", self.p_list.clone()),
            ("filters", self.filters.clone()),
            ("m_grid", self.m_grid.clone()),
            ("trials", self.trials.map(|v| v.to_string())),
            ("graphs", self.graphs.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
            ("eta", self.eta.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(read_file(path)?.parse::<Graph>()?)
}

fn probabilities(list: &str, n: usize) -> Result<Vec<f64>> {
    Ok(parse_list::<PValue>(list)?
        .into_iter()
        .map(|p| p.resolve(n))
        .collect())
}

/// One signal centres to zero, so the selection runs on an arbitrary basis.
fn warn_single_sample(m: SampleSize) {
    if m == SampleSize::Finite(1) {
        eprintln!(
            "warning: m = 1 gives a zero sample covariance; the selected eigenvector is arbitrary"
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            model,
            n,
            p,
            k,
            seed,
            out,
        } => {
            let p = p.resolve(n);
            let model = match model {
                ModelKind::ErdosRenyi => GraphModel::erdos_renyi(n, p),
                ModelKind::WattsStrogatz => GraphModel::watts_strogatz(n, k, p),
            };
            let draw = draw_graph(model, seed, 0)?;
            write_to(&out, draw.graph.to_edge_list().as_bytes())
        }
        Command::Centrality { graph, out } => {
            let g = read_graph(&graph)?;
            let u = eigenvector_centrality(&adjacency(&g))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["node", "centrality"])?;
            for (i, x) in u.values().iter().enumerate() {
                w.write_record([i.to_string(), x.to_string()])?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| HarnessError::io("<buffer>", e.into_error()))?;
            write_to(&out, &bytes)
        }
        Command::Trial {
            graph,
            filter,
            m,
            seed,
            export_signals,
            eta,
            out,
        } => {
            if export_signals.is_some() && m == SampleSize::Population {
                return Err(HarnessError::Usage(
                    "--export-signals needs a finite --m".into(),
                ));
            }
            warn_single_sample(m);
            let g = PreparedGraph::from_graph(read_graph(&graph)?)?;
            let (record, signals) =
                run_file_trial(&g, &filter, m, seed, eta, export_signals.is_some())?;
            if let (Some(path), Some(ens)) = (&export_signals, signals) {
                write_to(path, ens.to_csv().as_bytes())?;
            }
            let mut bytes = Vec::new();
            write_results(&mut bytes, &[record])?;
            write_to(&out, &bytes)
        }
        Command::Experiment(args) => {
            let cfg = args.resolve()?;
            cfg.m_grid.iter().copied().for_each(warn_single_sample);
            let output = run_experiment(&cfg)?;
            let files = write_experiment(&args.out_dir, &cfg, &output)?;
            eprintln!(
                "{} trials -> {}, {}",
                output.records.len(),
                files.results.display(),
                files.summary.display()
            );
            Ok(())
        }
        Command::EigengapTable {
            p_list,
            reps,
            seed,
            out,
            n,
            k,
            filter,
        } => {
            let rows = eigengap_table(n, k, &probabilities(&p_list, n)?, reps, &filter, seed)?;
            write_to(&out, &eigengap_csv(&rows)?)
        }
        Command::Profile {
            p_list,
            seed,
            out_dir,
            n,
            k,
        } => {
            let rows = localization_profile(n, k, &probabilities(&p_list, n)?, seed)?;
            write_profile(&out_dir, &rows).map(|_| ())
        }
        Command::Plot { input, kind, out } => plot_csv(&read_file(&input)?, kind, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
