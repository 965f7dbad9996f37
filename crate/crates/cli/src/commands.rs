//! Command implementations. Each returns `Ok(())` only when every requested
//! output has been fully written.

use std::path::{Path, PathBuf};

use aevqc::data::{load_image_dir, synth_dataset, DatasetSplit};
use aevqc::error::{Error, Result};
use aevqc::head::{build_ansatz, count_head_params, AnsatzFamily, AnsatzSpec};
use aevqc::metrics::MetricsReport;
use aevqc::nn::PoolMode;
use aevqc::pipeline::{
    build_model, evaluate, load_checkpoint, save_checkpoint, train, HeadConfig, Model,
    ModelConfig, TrainConfig,
};

use crate::config::{ConfigMode, DatasetSource, RunConfig};

fn load_dataset(config: &RunConfig) -> Result<DatasetSplit> {
    let split = match &config.dataset {
        DatasetSource::Synth(spec) => synth_dataset(spec)?,
        DatasetSource::Dir(root) => load_image_dir(root, config.image_side)?,
    };
    if let Some(declared) = config.n_classes {
        if declared != split.n_classes() {
            return Err(Error::Config(format!(
                "config declares {declared} classes but the dataset has {}",
                split.n_classes()
            )));
        }
    }
    Ok(split)
}

fn train_config(config: &RunConfig) -> TrainConfig {
    TrainConfig {
        epochs: config.epochs,
        batch_size: config.batch_size,
        lr: config.lr,
        shuffle_seed: config.seed,
        threads: config.threads,
    }
}

fn build_from_run_config(
    config: &RunConfig,
    head: HeadConfig,
    dataset: &DatasetSplit,
) -> Result<Model> {
    let input_shape = dataset
        .image_shape()
        .ok_or_else(|| Error::Data("dataset contains no images".into()))?;
    let model_config = ModelConfig {
        head,
        backbone_channels: config.backbone_channels.clone(),
        n_classes: dataset.n_classes(),
        seed: config.seed,
    };
    build_model(&model_config, input_shape)
}

fn train_one(
    config: &RunConfig,
    head: HeadConfig,
    dataset: &DatasetSplit,
) -> Result<(Model, aevqc::pipeline::TrainOutcome, MetricsReport)> {
    let mut model = build_from_run_config(config, head, dataset)?;
    let outcome = train(&mut model, &dataset.train, &train_config(config))?;
    let report = evaluate(&model, &dataset.test)?;
    Ok((model, outcome, report))
}

fn print_report(prefix: &str, report: &MetricsReport) {
    println!("{prefix} accuracy: {}", report.accuracy);
    println!("{prefix} macro-F1: {}", report.macro_f1);
}

/// `train`: fit one model, write checkpoint + metrics CSV, print test scores.
pub fn cmd_train(
    config_path: &Path,
    out_checkpoint: Option<PathBuf>,
    out_metrics: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<()> {
    let config =
        RunConfig::from_file(config_path, ConfigMode::SingleModel)?.with_overrides(seed, threads);
    let dataset = load_dataset(&config)?;
    let head = config.head.expect("SingleModel mode guarantees a head");
    let (model, outcome, report) = train_one(&config, head, &dataset)?;

    let metrics_path = out_metrics
        .or_else(|| config.out_metrics.clone())
        .unwrap_or_else(|| PathBuf::from("metrics.csv"));
    aevqc::pipeline::write_metrics_csv(&metrics_path, &outcome.metrics)?;

    let checkpoint_path = out_checkpoint
        .or_else(|| config.out_checkpoint.clone())
        .unwrap_or_else(|| PathBuf::from("checkpoint.json"));
    save_checkpoint(&model, &outcome.adam, config.epochs, &checkpoint_path)?;

    print_report("test", &report);
    Ok(())
}

/// `eval`: score a checkpoint against the config's test split.
pub fn cmd_eval(checkpoint_path: &Path, config_path: &Path) -> Result<()> {
    let config = RunConfig::from_file(config_path, ConfigMode::DatasetOnly)?;
    let (model, _adam, _epoch) = load_checkpoint(checkpoint_path)?;
    let dataset = load_dataset(&config)?;
    if dataset.n_classes() != model.config.n_classes {
        return Err(Error::Data(format!(
            "checkpoint was trained on {} classes, dataset has {}",
            model.config.n_classes,
            dataset.n_classes()
        )));
    }
    if dataset.image_shape() != Some(model.input_shape) {
        return Err(Error::Data(format!(
            "checkpoint expects images of shape {:?}, dataset provides {:?}",
            model.input_shape,
            dataset.image_shape()
        )));
    }
    let report = evaluate(&model, &dataset.test)?;
    print_report("test", &report);
    Ok(())
}

/// `compare`: train the classical (gap) and quantum variants on identical
/// seeds and data order, then emit a two-row CSV report.
pub fn cmd_compare(
    config_path: &Path,
    out_report: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<()> {
    let config =
        RunConfig::from_file(config_path, ConfigMode::Compare)?.with_overrides(seed, threads);
    let dataset = load_dataset(&config)?;
    let quantum_head = config.quantum_head.expect("Compare mode guarantees a quantum head");

    let classical_head = HeadConfig::Classical { pooling: PoolMode::Average };
    let (classical_model, _, classical_report) =
        train_one(&config, classical_head, &dataset)?;
    let (quantum_model, _, quantum_report) = train_one(&config, quantum_head, &dataset)?;

    let mut csv = String::from("model,params_after_backbone,accuracy,macro_f1\n");
    for (name, model, report) in [
        ("classical", &classical_model, &classical_report),
        ("quantum", &quantum_model, &quantum_report),
    ] {
        csv.push_str(&format!(
            "{name},{},{},{}\n",
            model.params_after_backbone(),
            report.accuracy,
            report.macro_f1
        ));
    }
    let report_path = out_report
        .or_else(|| config.out_report.clone())
        .unwrap_or_else(|| PathBuf::from("report.csv"));
    std::fs::write(&report_path, &csv)?;
    print!("{csv}");
    Ok(())
}

/// `circuit`: print the gate-list dump of an ansatz.
pub fn cmd_circuit(ansatz: &str, n_qubits: usize, depth: usize) -> Result<()> {
    let family: AnsatzFamily = ansatz.parse()?;
    if n_qubits < 1 || n_qubits > aevqc::quantum::MAX_QUBITS {
        return Err(Error::Capacity(n_qubits));
    }
    if depth < 1 {
        return Err(Error::Config("depth must be >= 1".into()));
    }
    let circuit = build_ansatz(&AnsatzSpec { family, n_qubits, depth });
    print!("{}", circuit.dump());
    Ok(())
}

/// `params`: print the parameter accounting for a head configuration, and
/// optionally the classical global-pooling head it would replace.
pub fn cmd_params(
    ansatz: &str,
    n_qubits: usize,
    depth: usize,
    n_classes: usize,
    classical_channels: Option<usize>,
) -> Result<()> {
    let family: AnsatzFamily = ansatz.parse()?;
    if n_qubits < 1 {
        return Err(Error::Config("qubits must be >= 1".into()));
    }
    if depth < 1 {
        return Err(Error::Config("depth must be >= 1".into()));
    }
    if n_classes < 2 {
        return Err(Error::Config("classes must be >= 2".into()));
    }
    let counts = count_head_params(&AnsatzSpec { family, n_qubits, depth }, n_classes);
    println!("quantum: {}", counts.quantum);
    println!("classical_fc: {}", counts.classical_fc);
    println!("total: {}", counts.total);
    if let Some(channels) = classical_channels {
        println!(
            "classical head ({channels} channels x {n_classes} classes): {}",
            channels * n_classes
        );
    }
    Ok(())
}
