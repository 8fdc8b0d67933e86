use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ss3::evaluation::Metric;
use ss3::Hyperparameters;

#[derive(Debug, Parser)]
#[command(name = "ss3", version, about = "Train, evaluate and inspect SS3 text classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model from a corpus directory (one subdirectory per category).
    Train {
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        hyperparameters: HyperparameterArgs,
    },
    /// Score a trained model on a labeled test corpus.
    Evaluate {
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate every (s, l, p) combination on a test corpus without retraining.
    GridSearch {
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Comma-separated smoothness values, e.g. 0.2,0.32,0.44
        #[arg(long, value_name = "LIST", value_parser = parse_list)]
        s: Values,
        #[arg(long, value_name = "LIST", value_parser = parse_list)]
        l: Values,
        #[arg(long, value_name = "LIST", value_parser = parse_list)]
        p: Values,
        #[arg(long, default_value = "macro-f1")]
        metric: Metric,
        /// Store the best combination back into the model file.
        #[arg(long)]
        update_model: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stratified k-fold cross-validation on a corpus.
    Kfold {
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        #[arg(long, short)]
        k: usize,
        #[arg(long, default_value_t = ss3::evaluation::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        hyperparameters: HyperparameterArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Serve the Live Test tool for a model and a test corpus.
    LiveTest {
        #[arg(long, value_name = "DIR")]
        data: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, default_value_t = ss3_server::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory holding the built web UI.
        #[arg(long = "static", value_name = "DIR", env = "SS3_WEBAPP_DIR")]
        static_dir: Option<PathBuf>,
        /// Also write created and edited documents to this corpus directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Write the evaluation history as a single portable HTML file.
    Plot {
        #[arg(long, value_name = "FILE", env = "SS3_HISTORY", default_value = DEFAULT_HISTORY)]
        history: PathBuf,
        #[arg(long, value_name = "FILE", default_value = "ss3_evaluation_plot.html")]
        out: PathBuf,
        /// Prebuilt JavaScript plot bundle to inline.
        #[arg(long, value_name = "FILE", env = "SS3_PLOT_BUNDLE")]
        bundle: Option<PathBuf>,
    },
}

pub const DEFAULT_HISTORY: &str = "ss3_history.ndjson";

#[derive(Debug, Clone, Copy, Args)]
pub struct HyperparameterArgs {
    #[arg(long, default_value_t = Hyperparameters::DEFAULT_S)]
    pub s: f64,
    #[arg(long, default_value_t = Hyperparameters::DEFAULT_L)]
    pub l: f64,
    #[arg(long, default_value_t = Hyperparameters::DEFAULT_P)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Evaluation history file the results are appended to.
    #[arg(long, value_name = "FILE", env = "SS3_HISTORY", default_value = DEFAULT_HISTORY)]
    pub history: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub type Values = Vec<f64>;

fn parse_list(raw: &str) -> Result<Values, String> {
    let values: Result<Vec<f64>, _> = raw
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err("expected at least one value".to_owned());
    }
    Ok(values)
}
