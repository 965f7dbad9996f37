//! Run configuration: a flat JSON document with hard-rejected unknown keys.
//!
//! One `seed` governs the whole run; it fans out to the init, shuffle, and
//! synth substreams. No key is silently ignored: a typo fails the run.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use aevqc::data::SynthSpec;
use aevqc::error::{Error, Result};
use aevqc::head::AnsatzFamily;
use aevqc::nn::PoolMode;
use aevqc::pipeline::HeadConfig;

/// Raw key set of the config file. Everything is optional here; what must be
/// present depends on the command, checked in [`RunConfig::from_file`].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    head_kind: Option<String>,
    pooling_mode: Option<String>,
    ansatz: Option<String>,
    depth: Option<usize>,
    backbone_channels: Option<Vec<usize>>,
    n_classes: Option<usize>,
    seed: Option<u64>,
    epochs: Option<usize>,
    batch_size: Option<usize>,
    lr: Option<f64>,
    threads: Option<usize>,
    data_dir: Option<PathBuf>,
    image_side: Option<usize>,
    per_class_train: Option<usize>,
    per_class_test: Option<usize>,
    noise_sigma: Option<f64>,
    out_checkpoint: Option<PathBuf>,
    out_metrics: Option<PathBuf>,
    out_report: Option<PathBuf>,
}

/// Where samples come from.
#[derive(Clone, Debug)]
pub enum DatasetSource {
    /// `root/{train,test}/<class>/*.pgm|*.ppm`
    Dir(PathBuf),
    Synth(SynthSpec),
}

/// Which command shape the config must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigMode {
    /// `train`: a single head_kind is required.
    SingleModel,
    /// `compare`: head_kind must be absent; the quantum spec is required.
    Compare,
    /// `eval`: only the dataset section is consulted.
    DatasetOnly,
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Present in `SingleModel` mode.
    pub head: Option<HeadConfig>,
    /// Present in `Compare` mode: the quantum head under comparison.
    pub quantum_head: Option<HeadConfig>,
    pub backbone_channels: Vec<usize>,
    pub seed: u64,
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub threads: usize,
    pub dataset: DatasetSource,
    pub image_side: usize,
    pub out_checkpoint: Option<PathBuf>,
    pub out_metrics: Option<PathBuf>,
    pub out_report: Option<PathBuf>,
    /// Declared class count (required for synthetic data; cross-checked
    /// against directory datasets when given).
    pub n_classes: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_pooling(s: &str) -> Result<PoolMode> {
    match s {
        "gap" => Ok(PoolMode::Average),
        "gmp" => Ok(PoolMode::Max),
        other => Err(config_err(format!(
            "unknown pooling_mode {other:?}; expected \"gap\" or \"gmp\""
        ))),
    }
}

impl RunConfig {
    pub fn from_file(path: &Path, mode: ConfigMode) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let raw: RawConfig = serde_json::from_str(&text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_raw(raw, mode)
    }

    fn from_raw(raw: RawConfig, mode: ConfigMode) -> Result<Self> {
        let seed = raw.seed.unwrap_or(0);
        let epochs = raw.epochs.unwrap_or(200);
        let batch_size = raw.batch_size.unwrap_or(32);
        let lr = raw.lr.unwrap_or(1e-3);
        let threads = raw.threads.unwrap_or(1);
        if epochs < 1 {
            return Err(config_err("epochs must be >= 1"));
        }
        if batch_size < 1 {
            return Err(config_err("batch_size must be >= 1"));
        }
        if threads < 1 {
            return Err(config_err("threads must be >= 1"));
        }
        if !(lr.is_finite() && lr >= 0.0) {
            return Err(config_err("lr must be a finite non-negative number"));
        }

        let image_side = raw.image_side.ok_or_else(|| config_err("image_side is required"))?;
        let dataset = match (&raw.data_dir, raw.per_class_train) {
            (Some(dir), None) => {
                for (key, present) in [
                    ("per_class_test", raw.per_class_test.is_some()),
                    ("noise_sigma", raw.noise_sigma.is_some()),
                ] {
                    if present {
                        return Err(config_err(format!(
                            "{key} is a synthetic-dataset key; remove it when data_dir is set"
                        )));
                    }
                }
                DatasetSource::Dir(dir.clone())
            }
            (None, Some(per_class_train)) => {
                let n_classes =
                    raw.n_classes.ok_or_else(|| config_err("synthetic data needs n_classes"))?;
                let per_class_test = raw
                    .per_class_test
                    .ok_or_else(|| config_err("synthetic data needs per_class_test"))?;
                let noise_sigma = raw
                    .noise_sigma
                    .ok_or_else(|| config_err("synthetic data needs noise_sigma"))?;
                DatasetSource::Synth(SynthSpec {
                    n_classes,
                    per_class_train,
                    per_class_test,
                    image_side,
                    noise_sigma,
                    seed,
                })
            }
            (Some(_), Some(_)) => {
                return Err(config_err("set either data_dir or the synthetic keys, not both"))
            }
            (None, None) => {
                return Err(config_err(
                    "no dataset: set data_dir or the synthetic keys (per_class_train, ...)",
                ))
            }
        };

        let quantum_spec = || -> Result<HeadConfig> {
            let family: AnsatzFamily = raw
                .ansatz
                .as_deref()
                .ok_or_else(|| config_err("quantum head needs an ansatz (\"a1\" or \"a2\")"))?
                .parse()?;
            let depth = raw.depth.ok_or_else(|| config_err("quantum head needs a depth"))?;
            if depth < 1 {
                return Err(config_err("depth must be >= 1"));
            }
            Ok(HeadConfig::Quantum { family, depth })
        };

        let (head, quantum_head) = match mode {
            ConfigMode::SingleModel => {
                let kind = raw
                    .head_kind
                    .as_deref()
                    .ok_or_else(|| config_err("head_kind is required (\"classical\" or \"quantum\")"))?;
                let head = match kind {
                    "classical" => {
                        for (key, present) in
                            [("ansatz", raw.ansatz.is_some()), ("depth", raw.depth.is_some())]
                        {
                            if present {
                                return Err(config_err(format!(
                                    "{key} is a quantum-head key; remove it for a classical head"
                                )));
                            }
                        }
                        let pooling = parse_pooling(raw.pooling_mode.as_deref().unwrap_or("gap"))?;
                        HeadConfig::Classical { pooling }
                    }
                    "quantum" => {
                        if raw.pooling_mode.is_some() {
                            return Err(config_err(
                                "pooling_mode is a classical-head key; remove it for a quantum head",
                            ));
                        }
                        quantum_spec()?
                    }
                    other => {
                        return Err(config_err(format!(
                            "unknown head_kind {other:?}; expected \"classical\" or \"quantum\""
                        )))
                    }
                };
                (Some(head), None)
            }
            ConfigMode::Compare => {
                if raw.head_kind.is_some() {
                    return Err(config_err(
                        "compare trains both heads; omit head_kind from the config",
                    ));
                }
                if raw.pooling_mode.is_some() {
                    return Err(config_err(
                        "compare fixes the classical head to gap; omit pooling_mode",
                    ));
                }
                (None, Some(quantum_spec()?))
            }
            ConfigMode::DatasetOnly => (None, None),
        };

        let backbone_channels = match mode {
            ConfigMode::DatasetOnly => raw.backbone_channels.unwrap_or_default(),
            _ => raw
                .backbone_channels
                .ok_or_else(|| config_err("backbone_channels is required"))?,
        };
        if !matches!(mode, ConfigMode::DatasetOnly) && backbone_channels.is_empty() {
            return Err(config_err("backbone_channels must name at least one block"));
        }

        Ok(Self {
            head,
            quantum_head,
            backbone_channels,
            seed,
            epochs,
            batch_size,
            lr,
            threads,
            dataset,
            image_side,
            out_checkpoint: raw.out_checkpoint,
            out_metrics: raw.out_metrics,
            out_report: raw.out_report,
            n_classes: raw.n_classes,
        })
    }

    /// Apply `--seed` / `--threads` command-line overrides. The seed reaches
    /// every substream, including synthetic data generation.
    pub fn with_overrides(mut self, seed: Option<u64>, threads: Option<usize>) -> Self {
        if let Some(seed) = seed {
            self.seed = seed;
            if let DatasetSource::Synth(spec) = &mut self.dataset {
                spec.seed = seed;
            }
        }
        if let Some(threads) = threads {
            self.threads = threads.max(1);
        }
        self
    }
}
