//! Model assembly and training for the two competing architectures:
//!
//! - classical: backbone -> global pooling -> bias-free FC -> logits
//! - quantum:   backbone -> flatten -> amplitude-encoded VQC head -> FC
//!
//! Both share the backbone, loss, optimizer, and data order, so a run differs
//! only in the head under test.

mod checkpoint;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_FORMAT_VERSION};
pub use train::{evaluate, loss_and_grad, train, write_metrics_csv, EpochMetrics, SampleGrad, TrainOutcome};

use crate::error::{Error, Result};
use crate::head::{count_head_params, AnsatzFamily, QuantumHead};
use crate::nn::{dense_forward, global_pool, DenseParams, FeatureTensor, PoolMode, TinyConvNet};
use crate::rng::substream;

/// Which head sits after the backbone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeadConfig {
    Classical { pooling: PoolMode },
    Quantum { family: AnsatzFamily, depth: usize },
}

/// Everything needed to build a model deterministically.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub head: HeadConfig,
    /// Output channels of each backbone block.
    pub backbone_channels: Vec<usize>,
    pub n_classes: usize,
    pub seed: u64,
}

/// Epoch/batch/learning-rate settings. Defaults follow the standard protocol:
/// 200 epochs, mini-batches of 32, Adam at lr 0.001.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    /// Run seed for the shuffle substream.
    pub shuffle_seed: u64,
    /// 1 = fully sequential reference mode. Batch reductions are ordered, so
    /// results are identical at any thread count.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { epochs: 200, batch_size: 32, lr: 1e-3, shuffle_seed: 0, threads: 1 }
    }
}

#[derive(Clone, Debug)]
pub enum ModelHead {
    Classical(PoolMode),
    Quantum(QuantumHead),
}

/// A built model: backbone, head, and the final bias-free FC layer.
#[derive(Clone, Debug)]
pub struct Model {
    pub config: ModelConfig,
    pub input_shape: (usize, usize, usize),
    pub backbone: TinyConvNet,
    pub head: ModelHead,
    pub fc: DenseParams,
}

/// Build a model from `config` for images of `input_shape` (C, H, W).
///
/// All parameters are drawn from the "init" substream of the config seed, in
/// a fixed order (backbone, then head angles, then FC), so the classical and
/// quantum variants of one seed share bit-identical backbones.
pub fn build_model(config: &ModelConfig, input_shape: (usize, usize, usize)) -> Result<Model> {
    if config.n_classes < 2 {
        return Err(Error::Config("n_classes must be >= 2".into()));
    }
    if let HeadConfig::Quantum { depth, .. } = config.head {
        if depth == 0 {
            return Err(Error::Config("ansatz depth must be >= 1".into()));
        }
    }
    let mut rng = substream(config.seed, "init");
    let backbone = TinyConvNet::new(input_shape.0, &config.backbone_channels, &mut rng)?;
    let (c, h, w) = backbone.output_shape(input_shape)?;

    let (head, fc) = match config.head {
        HeadConfig::Classical { pooling } => {
            let fc = DenseParams::glorot(config.n_classes, c, &mut rng);
            (ModelHead::Classical(pooling), fc)
        }
        HeadConfig::Quantum { family, depth } => {
            let mut head = QuantumHead::new(family, depth, c * h * w)?;
            head.init_theta(&mut rng);
            let fc = DenseParams::glorot(config.n_classes, head.n_qubits(), &mut rng);
            (ModelHead::Quantum(head), fc)
        }
    };

    let model = Model { config: config.clone(), input_shape, backbone, head, fc };

    // Parameter-count audit against the closed-form arithmetic.
    let expected = match &model.head {
        ModelHead::Classical(_) => c * config.n_classes,
        ModelHead::Quantum(head) => count_head_params(head.spec(), config.n_classes).total,
    };
    assert_eq!(
        model.params_after_backbone(),
        expected,
        "head parameter count diverged from the closed-form arithmetic"
    );
    Ok(model)
}

impl Model {
    /// Class logits for one image.
    pub fn logits(&self, image: &FeatureTensor) -> Result<Vec<f64>> {
        if image.shape() != self.input_shape {
            return Err(Error::Shape(format!(
                "model expects images of shape {:?}, got {:?}",
                self.input_shape,
                image.shape()
            )));
        }
        let features = self.backbone.forward(image)?;
        let head_out = match &self.head {
            ModelHead::Classical(mode) => global_pool(&features, *mode),
            ModelHead::Quantum(head) => head.forward(features.flatten())?,
        };
        dense_forward(&head_out, &self.fc)
    }

    /// Predicted class: argmax of the logits, ties broken toward the lowest
    /// class index.
    pub fn predict(&self, image: &FeatureTensor) -> Result<usize> {
        let logits = self.logits(image)?;
        Ok(argmax_lowest(&logits))
    }

    /// Trainable parameters after the backbone (head angles plus FC weights).
    pub fn params_after_backbone(&self) -> usize {
        let head_params = match &self.head {
            ModelHead::Classical(_) => 0,
            ModelHead::Quantum(head) => head.theta.len(),
        };
        head_params + self.fc.len()
    }

    pub fn n_params(&self) -> usize {
        self.backbone.n_params() + self.params_after_backbone()
    }

    /// All trainable parameters, flat: backbone blocks, head angles, FC.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = self.backbone.params_flat();
        if let ModelHead::Quantum(head) = &self.head {
            out.extend_from_slice(&head.theta);
        }
        out.extend_from_slice(&self.fc.weights);
        out
    }

    /// Overwrite all trainable parameters from the flat layout.
    pub fn set_params_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.n_params() {
            return Err(Error::Shape(format!(
                "model has {} parameters, got {}",
                self.n_params(),
                flat.len()
            )));
        }
        let backbone_len = self.backbone.n_params();
        self.backbone.set_params_flat(&flat[..backbone_len])?;
        let mut offset = backbone_len;
        if let ModelHead::Quantum(head) = &mut self.head {
            let len = head.theta.len();
            head.theta.copy_from_slice(&flat[offset..offset + len]);
            offset += len;
        }
        self.fc.weights.copy_from_slice(&flat[offset..]);
        Ok(())
    }
}

pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
