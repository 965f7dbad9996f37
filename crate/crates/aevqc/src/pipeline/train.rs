//! Training loop and evaluation harness.

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::data::Sample;
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, MetricsReport};
use crate::nn::{
    adam_step, dense_backward, dense_forward, global_pool, global_pool_backward, softmax_ce,
    AdamState, FeatureTensor,
};
use crate::pipeline::{argmax_lowest, Model, ModelHead, TrainConfig};
use crate::rng::substream;

/// One line of the metrics stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochMetrics {
    pub epoch: usize,
    /// Mean per-sample loss over the epoch.
    pub loss: f64,
    /// Training accuracy measured on the pre-update forward passes.
    pub train_acc: f64,
}

/// Result of a training run: per-epoch metrics plus the optimizer state for
/// checkpointing.
pub struct TrainOutcome {
    pub metrics: Vec<EpochMetrics>,
    pub adam: AdamState,
}

/// Per-sample training signal: loss, whether the pre-update prediction was
/// correct, and the loss gradient in the model's flat parameter layout.
pub struct SampleGrad {
    pub loss: f64,
    pub correct: bool,
    pub grad: Vec<f64>,
}

// A non-finite loss short-circuits the backward pass; the zero gradient is
// never applied because `train` aborts on the loss value.
fn diverged(model: &Model, loss: f64) -> SampleGrad {
    SampleGrad { loss, correct: false, grad: vec![0.0; model.n_params()] }
}

/// Forward + backward for one sample.
pub fn loss_and_grad(model: &Model, sample: &Sample) -> Result<SampleGrad> {
    let (features, trace) = model.backbone.forward_trace(&sample.image)?;
    let (c, h, w) = features.shape();
    let (loss, correct, d_feature, head_grad, d_fc) = match &model.head {
        ModelHead::Quantum(head) => {
            let raw = features.flatten();
            let z = head.forward(raw)?;
            let logits = dense_forward(&z, &model.fc)?;
            let (loss, d_logits) = softmax_ce(&logits, sample.label)?;
            if !loss.is_finite() {
                return Ok(diverged(model, loss));
            }
            let (d_fc, d_z) = dense_backward(&z, &model.fc, &d_logits)?;
            let (d_theta, d_raw) = head.vjp(raw, &d_z)?;
            let d_feature = FeatureTensor::new(c, h, w, d_raw)?;
            (loss, argmax_lowest(&logits) == sample.label, d_feature, d_theta, d_fc)
        }
        ModelHead::Classical(mode) => {
            let pooled = global_pool(&features, *mode);
            let logits = dense_forward(&pooled, &model.fc)?;
            let (loss, d_logits) = softmax_ce(&logits, sample.label)?;
            if !loss.is_finite() {
                return Ok(diverged(model, loss));
            }
            let (d_fc, d_pooled) = dense_backward(&pooled, &model.fc, &d_logits)?;
            let d_feature = global_pool_backward(&features, *mode, &d_pooled)?;
            (loss, argmax_lowest(&logits) == sample.label, d_feature, Vec::new(), d_fc)
        }
    };
    let d_blocks = model.backbone.backward(&trace, &d_feature)?;

    let mut grad = Vec::with_capacity(model.n_params());
    for block in d_blocks {
        grad.extend_from_slice(&block);
    }
    grad.extend_from_slice(&head_grad);
    grad.extend_from_slice(&d_fc);
    Ok(SampleGrad { loss, correct, grad })
}

/// Train in place. Each batch uses the mean gradient over its samples;
/// shuffling is seeded, and batch reductions sum in ascending sample order,
/// so the run is deterministic at any thread count.
pub fn train(model: &mut Model, train_set: &[Sample], config: &TrainConfig) -> Result<TrainOutcome> {
    if train_set.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if config.epochs < 1 {
        return Err(Error::Config("epochs must be >= 1".into()));
    }
    if config.batch_size < 1 {
        return Err(Error::Config("batch_size must be >= 1".into()));
    }
    if config.threads < 1 {
        return Err(Error::Config("threads must be >= 1".into()));
    }
    for sample in train_set {
        if sample.label >= model.config.n_classes {
            return Err(Error::Data(format!(
                "label {} out of range for {} classes",
                sample.label, model.config.n_classes
            )));
        }
    }

    let pool = if config.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut rng = substream(config.shuffle_seed, "shuffle");
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut params = model.params_flat();
    let mut adam = AdamState::new(params.len(), config.lr);
    let mut metrics = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut epoch_correct = 0usize;

        for (batch_idx, batch) in order.chunks(config.batch_size).enumerate() {
            let results: Vec<SampleGrad> = match &pool {
                Some(pool) => pool.install(|| {
                    batch
                        .par_iter()
                        .map(|&i| loss_and_grad(model, &train_set[i]))
                        .collect::<Result<Vec<_>>>()
                })?,
                None => batch
                    .iter()
                    .map(|&i| loss_and_grad(model, &train_set[i]))
                    .collect::<Result<Vec<_>>>()?,
            };

            let scale = 1.0 / batch.len() as f64;
            let mut batch_grad = vec![0.0; params.len()];
            let mut batch_loss = 0.0;
            for r in &results {
                batch_loss += r.loss;
                epoch_correct += usize::from(r.correct);
                for (acc, g) in batch_grad.iter_mut().zip(&r.grad) {
                    *acc += g * scale;
                }
            }
            epoch_loss += batch_loss;
            if !batch_loss.is_finite() {
                return Err(Error::Divergence { epoch, batch: batch_idx });
            }

            adam_step(&mut params, &batch_grad, &mut adam)?;
            model.set_params_flat(&params)?;
        }

        metrics.push(EpochMetrics {
            epoch,
            loss: epoch_loss / train_set.len() as f64,
            train_acc: epoch_correct as f64 / train_set.len() as f64,
        });
    }
    Ok(TrainOutcome { metrics, adam })
}

/// Accuracy, macro-F1, and the confusion matrix over a test set.
pub fn evaluate(model: &Model, test_set: &[Sample]) -> Result<MetricsReport> {
    if test_set.is_empty() {
        return Err(Error::Data("test set is empty".into()));
    }
    let mut truth = Vec::with_capacity(test_set.len());
    let mut predictions = Vec::with_capacity(test_set.len());
    for sample in test_set {
        truth.push(sample.label);
        predictions.push(model.predict(&sample.image)?);
    }
    compute_metrics(&truth, &predictions, model.config.n_classes)
}

/// Write the metrics stream as CSV: header `epoch,loss,train_acc`, one row
/// per epoch. Floats print in shortest round-trip form, so identical runs
/// produce identical bytes.
pub fn write_metrics_csv(path: &Path, metrics: &[EpochMetrics]) -> Result<()> {
    let mut out = String::from("epoch,loss,train_acc\n");
    for m in metrics {
        out.push_str(&format!("{},{},{}\n", m.epoch, m.loss, m.train_acc));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}
