//! Seeded synthetic datasets: one random template image per class, samples
//! are the template plus Gaussian pixel noise, clamped to [0, 1].

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{DatasetSplit, Sample};
use crate::error::{Error, Result};
use crate::nn::FeatureTensor;
use crate::rng::substream;

/// Generator configuration; the `seed` is fanned out through the "synth"
/// substream so other consumers of the run seed are unaffected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthSpec {
    pub n_classes: usize,
    pub per_class_train: usize,
    pub per_class_test: usize,
    pub image_side: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

/// Box-Muller transform over the uniform stream; keeps the spare draw.
struct Gauss {
    spare: Option<f64>,
}

impl Gauss {
    fn new() -> Self {
        Self { spare: None }
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = std::f64::consts::TAU * u2;
        self.spare = Some(r * phi.sin());
        r * phi.cos()
    }
}

/// Build a deterministic synthetic split from `spec`.
pub fn synth_dataset(spec: &SynthSpec) -> Result<DatasetSplit> {
    if spec.n_classes < 2 {
        return Err(Error::Config("synthetic datasets need n_classes >= 2".into()));
    }
    if spec.image_side < 1 {
        return Err(Error::Config("image_side must be >= 1".into()));
    }
    if spec.per_class_train < 1 || spec.per_class_test < 1 {
        return Err(Error::Config("per-class sample counts must be >= 1".into()));
    }
    let mut rng = substream(spec.seed, "synth");
    let mut gauss = Gauss::new();
    let pixels = spec.image_side * spec.image_side;

    let templates: Vec<Vec<f64>> = (0..spec.n_classes)
        .map(|_| (0..pixels).map(|_| rng.gen::<f64>()).collect())
        .collect();

    let mut draw = |template: &[f64], label: usize, rng: &mut ChaCha8Rng| -> Result<Sample> {
        let data: Vec<f64> = template
            .iter()
            .map(|&t| (t + spec.noise_sigma * gauss.next(rng)).clamp(0.0, 1.0))
            .collect();
        Ok(Sample {
            image: FeatureTensor::new(1, spec.image_side, spec.image_side, data)?,
            label,
        })
    };

    let mut train = Vec::with_capacity(spec.n_classes * spec.per_class_train);
    let mut test = Vec::with_capacity(spec.n_classes * spec.per_class_test);
    for (label, template) in templates.iter().enumerate() {
        for _ in 0..spec.per_class_train {
            train.push(draw(template, label, &mut rng)?);
        }
        for _ in 0..spec.per_class_test {
            test.push(draw(template, label, &mut rng)?);
        }
    }
    let class_names = (0..spec.n_classes).map(|c| format!("class_{c}")).collect();
    Ok(DatasetSplit { train, test, class_names })
}
