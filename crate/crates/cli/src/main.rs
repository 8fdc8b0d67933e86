mod args;

use std::io::Write;
use std::net::SocketAddr;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde_json::json;
use ss3::evaluation::{self, EvaluationRecord, GridSearch, KFold, Metric};
use ss3::{load_from_files, load_model, save_model, Hyperparameters, LabeledCorpus, Model};
use ss3_server::{LiveTest, ServerConfig};

use args::{Cli, Command, Format, HyperparameterArgs, OutputArgs};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Train {
            data,
            model,
            hyperparameters,
        } => train(&data, &model, hyperparameters),
        Command::Evaluate { data, model, output } => evaluate(&data, &model, &output),
        Command::GridSearch {
            data,
            model,
            s,
            l,
            p,
            metric,
            update_model,
            output,
        } => grid_search(&data, &model, (s, l, p), metric, update_model, &output),
        Command::Kfold {
            data,
            k,
            seed,
            hyperparameters,
            output,
        } => kfold(&data, k, seed, hyperparameters, &output),
        Command::LiveTest {
            data,
            model,
            port,
            host,
            static_dir,
            export,
        } => live_test(
            &data,
            &model,
            SocketAddr::new(host, port),
            ServerConfig {
                static_dir,
                export_dir: export,
            },
        ),
        Command::Plot { history, out, bundle } => plot(&history, &out, bundle.as_deref()),
    }
}

fn hyperparameters(args: HyperparameterArgs) -> Result<Hyperparameters> {
    Ok(Hyperparameters::new(args.s, args.l, args.p)?)
}

fn corpus(dir: &Path) -> Result<LabeledCorpus> {
    load_from_files(dir).with_context(|| format!("cannot load corpus from {}", dir.display()))
}

fn test_corpus(dir: &Path) -> Result<LabeledCorpus> {
    let corpus = corpus(dir)?;
    if corpus.is_empty() {
        bail!("no documents found under {}", dir.display());
    }
    Ok(corpus)
}

fn model_file(path: &Path) -> Result<Model> {
    load_model(path).with_context(|| format!("cannot load model from {}", path.display()))
}

fn train(data: &Path, model_path: &Path, args: HyperparameterArgs) -> Result<()> {
    let corpus = corpus(data)?;
    let mut model = Model::new(hyperparameters(args)?)?;
    model.fit(corpus.pairs());
    save_model(&model, model_path)?;

    println!(
        "trained on {} documents: {} categories, {} distinct words ({})",
        corpus.len(),
        model.num_categories(),
        model.vocabulary_size(),
        model.hyperparameters()
    );
    for c in model.categories() {
        let docs = corpus.y.iter().filter(|l| *l == c.name()).count();
        println!(
            "  {:<20} {:>6} docs {:>8} tokens {:>7} words",
            c.name(),
            docs,
            c.total_tokens(),
            c.vocabulary_size()
        );
    }
    println!("model saved to {}", model_path.display());
    Ok(())
}

fn print_record(record: &EvaluationRecord) {
    let m = &record.metrics;
    println!("hyperparameters: {}", record.hyperparameters);
    println!("accuracy:        {:.4}", m.accuracy);
    println!("macro-precision: {:.4}", m.macro_precision);
    println!("macro-recall:    {:.4}", m.macro_recall);
    println!("macro-f1:        {:.4}", m.macro_f1);
    println!();
    let c = &record.confusion;
    let width = c.labels.iter().map(String::len).max().unwrap_or(4).max(6);
    print!("{:>width$} |", "true\\pred");
    for label in &c.labels {
        print!(" {label:>width$}");
    }
    println!();
    for (label, row) in c.labels.iter().zip(&c.counts) {
        print!("{label:>width$} |");
        for n in row {
            print!(" {n:>width$}");
        }
        println!();
    }
}

fn append_history(records: &[EvaluationRecord], output: &OutputArgs) -> Result<()> {
    evaluation::history_append_all(records, &output.history)
        .with_context(|| format!("cannot append to history {}", output.history.display()))
}

fn evaluate(data: &Path, model_path: &Path, output: &OutputArgs) -> Result<()> {
    let model = model_file(model_path)?;
    let corpus = test_corpus(data)?;
    let record = evaluation::evaluate(&model, &corpus.x, &corpus.y)?;
    append_history(std::slice::from_ref(&record), output)?;
    match output.format {
        Format::Json => println!("{}", evaluation::record_to_line(&record)),
        Format::Text => {
            print_record(&record);
            println!("\nrecord appended to {}", output.history.display());
        }
    }
    Ok(())
}

fn grid_search(
    data: &Path,
    model_path: &Path,
    (s, l, p): (Vec<f64>, Vec<f64>, Vec<f64>),
    metric: Metric,
    update_model: bool,
    output: &OutputArgs,
) -> Result<()> {
    let mut model = model_file(model_path)?;
    let corpus = test_corpus(data)?;
    let outcome = GridSearch::new(s, l, p)?.metric(metric).run(&model, &corpus.x, &corpus.y)?;
    append_history(&outcome.records, output)?;

    if update_model {
        model.set_hyperparameters(outcome.best)?;
        save_model(&model, model_path)?;
    }
    let best = outcome.best;
    match output.format {
        Format::Json => println!(
            "{}",
            json!({
                "evaluations": outcome.records.len(),
                "metric": metric,
                "best": best,
                "best_score": outcome.best_score,
            })
        ),
        Format::Text => {
            println!("{} evaluations", outcome.records.len());
            println!(
                "best: s={} l={} p={} ({metric} = {:.4})",
                best.s, best.l, best.p, outcome.best_score
            );
            println!("records appended to {}", output.history.display());
            if update_model {
                println!("model hyperparameters updated in {}", model_path.display());
            }
        }
    }
    Ok(())
}

fn kfold(data: &Path, k: usize, seed: u64, args: HyperparameterArgs, output: &OutputArgs) -> Result<()> {
    let corpus = test_corpus(data)?;
    let outcome = KFold::new(k, hyperparameters(args)?).seed(seed).run(&corpus.x, &corpus.y)?;
    let records = outcome.records();
    append_history(&records, output)?;
    match output.format {
        Format::Json => {
            for r in &records {
                println!("{}", evaluation::record_to_line(r));
            }
        }
        Format::Text => {
            for r in &outcome.folds {
                println!(
                    "fold {}: accuracy {:.4} macro-f1 {:.4}",
                    r.fold.unwrap_or_default() + 1,
                    r.metrics.accuracy,
                    r.metrics.macro_f1
                );
            }
            println!("\nmean over {k} folds:");
            print_record(&outcome.aggregate);
        }
    }
    Ok(())
}

fn live_test(data: &Path, model_path: &Path, addr: SocketAddr, config: ServerConfig) -> Result<()> {
    let model = model_file(model_path)?;
    let corpus = corpus(data)?;
    let state = LiveTest::new(model, corpus, config)?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = ss3_server::bind(addr)
            .await
            .with_context(|| format!("cannot listen on {addr}"))?;
        let local = listener.local_addr()?;
        println!("Live Test listening on http://{local}");
        std::io::stdout().flush()?;
        ss3_server::serve(listener, state).await?;
        Ok(())
    })
}

fn plot(history: &Path, out: &Path, bundle: Option<&Path>) -> Result<()> {
    let records = evaluation::history_load(history)?;
    let bundle = bundle
        .map(|b| std::fs::read_to_string(b).with_context(|| format!("cannot read plot bundle {}", b.display())))
        .transpose()?;
    evaluation::emit_plot(&records, out, bundle.as_deref())?;
    println!("{} evaluations written to {}", records.len(), out.display());
    Ok(())
}
