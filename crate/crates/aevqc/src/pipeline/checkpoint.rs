//! Checkpoint files: a single JSON document holding the run config and every
//! parameter array.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! f64 bit pattern through decimal, so a reloaded model reproduces forward
//! outputs bit-identically. The writer emits fields in a fixed order with no
//! timestamps, keeping reruns byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::head::AnsatzFamily;
use crate::nn::{AdamState, PoolMode};
use crate::pipeline::{build_model, HeadConfig, Model, ModelConfig, ModelHead};

pub const CHECKPOINT_FORMAT_VERSION: u64 = 1;

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_array(values: &[f64]) -> String {
    let mut out = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push(']');
    out
}

fn render(model: &Model, adam: &AdamState, epoch: usize) -> Result<String> {
    let all = model.params_flat();
    if all.iter().any(|p| !p.is_finite()) {
        return Err(Error::Format("refusing to write non-finite parameters".into()));
    }

    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format_version\": {CHECKPOINT_FORMAT_VERSION},");

    out.push_str("  \"config\": {\n");
    match &model.head {
        ModelHead::Classical(mode) => {
            out.push_str("    \"head_kind\": \"classical\",\n");
            let mode = match mode {
                PoolMode::Average => "gap",
                PoolMode::Max => "gmp",
            };
            let _ = writeln!(out, "    \"pooling_mode\": \"{mode}\",");
        }
        ModelHead::Quantum(head) => {
            out.push_str("    \"head_kind\": \"quantum\",\n");
            let _ = writeln!(out, "    \"ansatz\": \"{}\",", head.spec().family);
            let _ = writeln!(out, "    \"depth\": {},", head.spec().depth);
        }
    }
    let channels: Vec<String> =
        model.config.backbone_channels.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "    \"backbone_channels\": [{}],", channels.join(","));
    let _ = writeln!(out, "    \"n_classes\": {},", model.config.n_classes);
    let _ = writeln!(out, "    \"seed\": {},", model.config.seed);
    let (c, h, w) = model.input_shape;
    let _ = writeln!(out, "    \"input_channels\": {c},");
    let _ = writeln!(out, "    \"input_height\": {h},");
    let _ = writeln!(out, "    \"input_width\": {w}");
    out.push_str("  },\n");

    out.push_str("  \"backbone\": [");
    for (i, block) in model.backbone.blocks().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_array(&block.data));
    }
    out.push_str("],\n");

    let theta: &[f64] = match &model.head {
        ModelHead::Quantum(head) => &head.theta,
        ModelHead::Classical(_) => &[],
    };
    let _ = writeln!(out, "  \"theta\": {},", fmt_array(theta));
    let _ = writeln!(out, "  \"fc\": {},", fmt_array(&model.fc.weights));

    out.push_str("  \"adam\": {");
    let _ = write!(
        out,
        "\"step\": {}, \"lr\": {}, \"beta1\": {}, \"beta2\": {}, \"eps\": {}, \"m\": {}, \"v\": {}",
        adam.step,
        fmt_f64(adam.lr),
        fmt_f64(adam.beta1),
        fmt_f64(adam.beta2),
        fmt_f64(adam.eps),
        fmt_array(&adam.m),
        fmt_array(&adam.v),
    );
    out.push_str("},\n");
    let _ = writeln!(out, "  \"epoch\": {epoch}");
    out.push_str("}\n");
    Ok(out)
}

/// Serialize model + optimizer state + epoch counter to `path`.
pub fn save_checkpoint(model: &Model, adam: &AdamState, epoch: usize, path: &Path) -> Result<()> {
    let text = render(model, adam, epoch)?;
    std::fs::write(path, text)?;
    Ok(())
}

// --- strict parsing helpers -------------------------------------------------

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn expect_keys(obj: &serde_json::Map<String, Value>, keys: &[&str], context: &str) -> Result<()> {
    for key in obj.keys() {
        if !keys.contains(&key.as_str()) {
            return Err(fmt_err(format!("unexpected field {key:?} in {context}")));
        }
    }
    Ok(())
}

fn get<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| fmt_err(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| fmt_err(format!("field {key:?} must be a non-negative integer")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    Ok(as_u64(v, key)? as usize)
}

fn as_f64(v: &Value, key: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| fmt_err(format!("field {key:?} must be a number")))
}

fn as_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| fmt_err(format!("field {key:?} must be a string")))
}

fn as_f64_array(v: &Value, key: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| fmt_err(format!("field {key:?} must be an array")))?
        .iter()
        .map(|x| as_f64(x, key))
        .collect()
}

/// Load a checkpoint written by [`save_checkpoint`]. Returns the
/// reconstructed model, the optimizer state, and the epoch counter.
pub fn load_checkpoint(path: &Path) -> Result<(Model, AdamState, usize)> {
    let text = std::fs::read_to_string(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| fmt_err(format!("invalid JSON: {e}")))?;
    let root = value.as_object().ok_or_else(|| fmt_err("checkpoint root must be an object"))?;
    expect_keys(
        root,
        &["format_version", "config", "backbone", "theta", "fc", "adam", "epoch"],
        "checkpoint",
    )?;

    let version = as_u64(get(root, "format_version")?, "format_version")?;
    if version != CHECKPOINT_FORMAT_VERSION {
        return Err(fmt_err(format!(
            "unsupported format_version {version}; this build reads version {CHECKPOINT_FORMAT_VERSION}"
        )));
    }

    let config_obj = get(root, "config")?
        .as_object()
        .ok_or_else(|| fmt_err("field \"config\" must be an object"))?;
    expect_keys(
        config_obj,
        &[
            "head_kind",
            "pooling_mode",
            "ansatz",
            "depth",
            "backbone_channels",
            "n_classes",
            "seed",
            "input_channels",
            "input_height",
            "input_width",
        ],
        "config",
    )?;

    let head = match as_str(get(config_obj, "head_kind")?, "head_kind")? {
        "classical" => {
            let pooling = match as_str(get(config_obj, "pooling_mode")?, "pooling_mode")? {
                "gap" => PoolMode::Average,
                "gmp" => PoolMode::Max,
                other => return Err(fmt_err(format!("unknown pooling_mode {other:?}"))),
            };
            HeadConfig::Classical { pooling }
        }
        "quantum" => {
            let family: AnsatzFamily = as_str(get(config_obj, "ansatz")?, "ansatz")?
                .parse()
                .map_err(|e: Error| fmt_err(e.to_string()))?;
            let depth = as_usize(get(config_obj, "depth")?, "depth")?;
            HeadConfig::Quantum { family, depth }
        }
        other => return Err(fmt_err(format!("unknown head_kind {other:?}"))),
    };

    let backbone_channels: Vec<usize> = get(config_obj, "backbone_channels")?
        .as_array()
        .ok_or_else(|| fmt_err("backbone_channels must be an array"))?
        .iter()
        .map(|v| as_usize(v, "backbone_channels"))
        .collect::<Result<_>>()?;
    let config = ModelConfig {
        head,
        backbone_channels,
        n_classes: as_usize(get(config_obj, "n_classes")?, "n_classes")?,
        seed: as_u64(get(config_obj, "seed")?, "seed")?,
    };
    let input_shape = (
        as_usize(get(config_obj, "input_channels")?, "input_channels")?,
        as_usize(get(config_obj, "input_height")?, "input_height")?,
        as_usize(get(config_obj, "input_width")?, "input_width")?,
    );

    let mut model = build_model(&config, input_shape)
        .map_err(|e| fmt_err(format!("checkpoint config does not build: {e}")))?;

    let blocks = get(root, "backbone")?
        .as_array()
        .ok_or_else(|| fmt_err("field \"backbone\" must be an array of arrays"))?;
    if blocks.len() != model.backbone.blocks().len() {
        return Err(fmt_err(format!(
            "checkpoint has {} backbone blocks, config builds {}",
            blocks.len(),
            model.backbone.blocks().len()
        )));
    }
    let mut flat = Vec::with_capacity(model.n_params());
    for block in blocks {
        flat.extend(as_f64_array(block, "backbone")?);
    }
    flat.extend(as_f64_array(get(root, "theta")?, "theta")?);
    flat.extend(as_f64_array(get(root, "fc")?, "fc")?);
    model
        .set_params_flat(&flat)
        .map_err(|e| fmt_err(format!("parameter arrays do not fit the config: {e}")))?;

    let adam_obj = get(root, "adam")?
        .as_object()
        .ok_or_else(|| fmt_err("field \"adam\" must be an object"))?;
    expect_keys(adam_obj, &["step", "lr", "beta1", "beta2", "eps", "m", "v"], "adam")?;
    let adam = AdamState {
        step: as_u64(get(adam_obj, "step")?, "step")?,
        m: as_f64_array(get(adam_obj, "m")?, "m")?,
        v: as_f64_array(get(adam_obj, "v")?, "v")?,
        lr: as_f64(get(adam_obj, "lr")?, "lr")?,
        beta1: as_f64(get(adam_obj, "beta1")?, "beta1")?,
        beta2: as_f64(get(adam_obj, "beta2")?, "beta2")?,
        eps: as_f64(get(adam_obj, "eps")?, "eps")?,
    };
    if adam.m.len() != model.n_params() || adam.v.len() != model.n_params() {
        return Err(fmt_err("optimizer state length does not match the parameter count"));
    }

    let epoch = as_usize(get(root, "epoch")?, "epoch")?;
    Ok((model, adam, epoch))
}
