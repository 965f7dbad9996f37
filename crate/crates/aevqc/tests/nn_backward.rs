//! Finite-difference checks for every classical backward op, plus a
//! whole-model gradient check through both heads.
//!
//! Each op is reduced to a scalar by contracting its output against a fixed
//! random cotangent R: L = sum(out * R). The backward pass with upstream R
//! must then match central differences of L.

use aevqc::data::Sample;
use aevqc::head::AnsatzFamily;
use aevqc::nn::{
    conv2d_backward, conv2d_forward, dense_backward, dense_forward, global_pool,
    global_pool_backward, pool2d, pool2d_backward, relu, relu_backward, softmax_ce, ConvKernels,
    DenseParams, FeatureTensor, PoolMode,
};
use aevqc::pipeline::{build_model, loss_and_grad, HeadConfig, ModelConfig};
use aevqc_testkit::finite_diff::{close, fd_scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const H: f64 = 1e-4;
const REL: f64 = 1e-4;
// FD noise floor: central differences carry O(h^2) truncation error, so
// entries that are analytically ~0 come back as ~1e-8 noise.
const FLOOR: f64 = 1e-7;

fn rng(seed: u64) -> ChaCha8Rng {
    aevqc_testkit::random::rng(seed)
}

fn rand_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Top-2 gap of a slice; max-pool gradients are undefined at ties, so test
/// inputs must keep each pooling region's winner clear of the runner-up.
fn top2_gap(values: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for &v in values {
        if v > best {
            second = best;
            best = v;
        } else if v > second {
            second = v;
        }
    }
    best - second
}

/// Resample until every 2x2 window of a C x H x W tensor has a clear max.
fn rand_tensor_windows_untied(
    rng: &mut ChaCha8Rng,
    (c, h, w): (usize, usize, usize),
    min_gap: f64,
) -> FeatureTensor {
    loop {
        let t = FeatureTensor::new(c, h, w, rand_vec(rng, c * h * w)).unwrap();
        let clear = (0..c).all(|ch| {
            (0..h / 2).all(|i| {
                (0..w / 2).all(|j| {
                    let window = [
                        t.get(ch, 2 * i, 2 * j),
                        t.get(ch, 2 * i, 2 * j + 1),
                        t.get(ch, 2 * i + 1, 2 * j),
                        t.get(ch, 2 * i + 1, 2 * j + 1),
                    ];
                    top2_gap(&window) > min_gap
                })
            })
        });
        if clear {
            return t;
        }
    }
}

/// Resample until every channel of a C x H x W tensor has a clear max.
fn rand_tensor_channels_untied(
    rng: &mut ChaCha8Rng,
    (c, h, w): (usize, usize, usize),
    min_gap: f64,
) -> FeatureTensor {
    loop {
        let t = FeatureTensor::new(c, h, w, rand_vec(rng, c * h * w)).unwrap();
        let clear =
            (0..c).all(|ch| top2_gap(&t.values()[ch * h * w..(ch + 1) * h * w]) > min_gap);
        if clear {
            return t;
        }
    }
}

fn contract(out: &[f64], cotangent: &[f64]) -> f64 {
    out.iter().zip(cotangent).map(|(a, b)| a * b).sum()
}

#[test]
fn conv2d_backward_matches_fd() {
    let mut rng = rng(101);
    let input_data = rand_vec(&mut rng, 3 * 8 * 8);
    let kernel_data = rand_vec(&mut rng, 4 * 3 * 3 * 3);
    let input = FeatureTensor::new(3, 8, 8, input_data.clone()).unwrap();
    let kernels = ConvKernels::new(4, 3, 3, kernel_data.clone()).unwrap();
    let out = conv2d_forward(&input, &kernels, 1).unwrap();
    let cotangent = rand_vec(&mut rng, out.values().len());
    let upstream = FeatureTensor::new(4, 6, 6, cotangent.clone()).unwrap();

    let (d_kernels, d_input) = conv2d_backward(&input, &kernels, 1, &upstream).unwrap();

    let fd_k = fd_scalar(
        &mut |k: &[f64]| {
            let kernels = ConvKernels::new(4, 3, 3, k.to_vec()).unwrap();
            contract(conv2d_forward(&input, &kernels, 1).unwrap().values(), &cotangent)
        },
        &kernel_data,
        H,
    );
    for (a, b) in d_kernels.iter().zip(&fd_k) {
        assert!(close(*a, *b, REL, FLOOR), "kernel grad {a} vs fd {b}");
    }

    let fd_i = fd_scalar(
        &mut |x: &[f64]| {
            let input = FeatureTensor::new(3, 8, 8, x.to_vec()).unwrap();
            contract(conv2d_forward(&input, &kernels, 1).unwrap().values(), &cotangent)
        },
        &input_data,
        H,
    );
    for (a, b) in d_input.values().iter().zip(&fd_i) {
        assert!(close(*a, *b, REL, FLOOR), "input grad {a} vs fd {b}");
    }
}

#[test]
fn conv2d_backward_matches_fd_with_stride_two() {
    let mut rng = rng(102);
    let input_data = rand_vec(&mut rng, 2 * 7 * 7);
    let kernel_data = rand_vec(&mut rng, 2 * 2 * 3 * 3);
    let input = FeatureTensor::new(2, 7, 7, input_data.clone()).unwrap();
    let kernels = ConvKernels::new(2, 2, 3, kernel_data.clone()).unwrap();
    let out = conv2d_forward(&input, &kernels, 2).unwrap();
    let cotangent = rand_vec(&mut rng, out.values().len());
    let upstream = FeatureTensor::new(2, 3, 3, cotangent.clone()).unwrap();

    let (d_kernels, _) = conv2d_backward(&input, &kernels, 2, &upstream).unwrap();
    let fd_k = fd_scalar(
        &mut |k: &[f64]| {
            let kernels = ConvKernels::new(2, 2, 3, k.to_vec()).unwrap();
            contract(conv2d_forward(&input, &kernels, 2).unwrap().values(), &cotangent)
        },
        &kernel_data,
        H,
    );
    for (a, b) in d_kernels.iter().zip(&fd_k) {
        assert!(close(*a, *b, REL, FLOOR));
    }
}

#[test]
fn pool2d_backward_matches_fd() {
    let mut rng = rng(103);
    for mode in [PoolMode::Average, PoolMode::Max] {
        let input = rand_tensor_windows_untied(&mut rng, (4, 8, 8), 20.0 * H);
        let data = input.values().to_vec();
        let out = pool2d(&input, mode).unwrap();
        let cotangent = rand_vec(&mut rng, out.values().len());
        let upstream = FeatureTensor::new(4, 4, 4, cotangent.clone()).unwrap();

        let analytic = pool2d_backward(&input, mode, &upstream).unwrap();
        let fd = fd_scalar(
            &mut |x: &[f64]| {
                let input = FeatureTensor::new(4, 8, 8, x.to_vec()).unwrap();
                contract(pool2d(&input, mode).unwrap().values(), &cotangent)
            },
            &data,
            H,
        );
        for (a, b) in analytic.values().iter().zip(&fd) {
            assert!(close(*a, *b, REL, FLOOR), "{mode:?}: {a} vs {b}");
        }
    }
}

#[test]
fn global_pool_backward_matches_fd() {
    let mut rng = rng(104);
    for mode in [PoolMode::Average, PoolMode::Max] {
        let input = rand_tensor_channels_untied(&mut rng, (4, 8, 8), 20.0 * H);
        let data = input.values().to_vec();
        let cotangent = rand_vec(&mut rng, 4);

        let analytic = global_pool_backward(&input, mode, &cotangent).unwrap();
        let fd = fd_scalar(
            &mut |x: &[f64]| {
                let input = FeatureTensor::new(4, 8, 8, x.to_vec()).unwrap();
                contract(&global_pool(&input, mode), &cotangent)
            },
            &data,
            H,
        );
        for (a, b) in analytic.values().iter().zip(&fd) {
            assert!(close(*a, *b, REL, FLOOR), "{mode:?}: {a} vs {b}");
        }
    }
}

#[test]
fn dense_backward_matches_fd() {
    let mut rng = rng(105);
    let x = rand_vec(&mut rng, 12);
    let weights = rand_vec(&mut rng, 5 * 12);
    let p = DenseParams::new(5, 12, weights.clone()).unwrap();
    let cotangent = rand_vec(&mut rng, 5);

    let (d_w, d_x) = dense_backward(&x, &p, &cotangent).unwrap();

    let fd_w = fd_scalar(
        &mut |w: &[f64]| {
            let p = DenseParams::new(5, 12, w.to_vec()).unwrap();
            contract(&dense_forward(&x, &p).unwrap(), &cotangent)
        },
        &weights,
        H,
    );
    for (a, b) in d_w.iter().zip(&fd_w) {
        assert!(close(*a, *b, REL, FLOOR));
    }

    let fd_x = fd_scalar(
        &mut |xv: &[f64]| contract(&dense_forward(xv, &p).unwrap(), &cotangent),
        &x,
        H,
    );
    for (a, b) in d_x.iter().zip(&fd_x) {
        assert!(close(*a, *b, REL, FLOOR));
    }
}

#[test]
fn relu_backward_matches_fd() {
    let mut rng = rng(106);
    // keep values away from the kink at 0
    let data: Vec<f64> = (0..4 * 8 * 8)
        .map(|_| {
            let v: f64 = rng.gen_range(0.01..1.0);
            if rng.gen_bool(0.5) {
                v
            } else {
                -v
            }
        })
        .collect();
    let input = FeatureTensor::new(4, 8, 8, data.clone()).unwrap();
    let cotangent = rand_vec(&mut rng, data.len());
    let upstream = FeatureTensor::new(4, 8, 8, cotangent.clone()).unwrap();

    let analytic = relu_backward(&input, &upstream).unwrap();
    let fd = fd_scalar(
        &mut |x: &[f64]| {
            let input = FeatureTensor::new(4, 8, 8, x.to_vec()).unwrap();
            contract(relu(&input).values(), &cotangent)
        },
        &data,
        H,
    );
    for (a, b) in analytic.values().iter().zip(&fd) {
        assert!(close(*a, *b, REL, FLOOR));
    }
}

#[test]
fn softmax_ce_gradient_matches_fd() {
    let mut rng = rng(107);
    let logits = rand_vec(&mut rng, 6);
    let label = 2;
    let (_, analytic) = softmax_ce(&logits, label).unwrap();
    let fd = fd_scalar(&mut |l: &[f64]| softmax_ce(l, label).unwrap().0, &logits, H);
    for (a, b) in analytic.iter().zip(&fd) {
        assert!(close(*a, *b, 1e-6, 1e-9), "{a} vs {b}");
    }
}

#[test]
fn whole_model_gradient_matches_fd_for_both_heads() {
    let mut rng = rng(108);
    let image =
        FeatureTensor::new(1, 8, 8, (0..64).map(|_| rng.gen_range(0.05..1.0)).collect()).unwrap();
    let sample = Sample { image, label: 1 };

    for head in [
        HeadConfig::Quantum { family: AnsatzFamily::A2, depth: 1 },
        HeadConfig::Classical { pooling: PoolMode::Average },
    ] {
        let config = ModelConfig {
            head,
            backbone_channels: vec![2],
            n_classes: 2,
            seed: 31,
        };
        let model = build_model(&config, (1, 8, 8)).unwrap();
        let analytic = loss_and_grad(&model, &sample).unwrap();

        let params = model.params_flat();
        let mut probe = model.clone();
        let fd = fd_scalar(
            &mut |p: &[f64]| {
                probe.set_params_flat(p).unwrap();
                let logits = probe.logits(&sample.image).unwrap();
                softmax_ce(&logits, sample.label).unwrap().0
            },
            &params,
            H,
        );
        for (i, (a, b)) in analytic.grad.iter().zip(&fd).enumerate() {
            assert!(close(*a, *b, REL, 1e-6), "{head:?} param {i}: analytic {a} vs fd {b}");
        }
    }
}
