//! Softmax cross-entropy with gradient.

use crate::error::{Error, Result};

/// Returns (loss, d_loss/d_logits). Stabilized by max subtraction, so logits
/// of any magnitude are safe; the gradient is softmax(logits) - one_hot(label).
pub fn softmax_ce(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if label >= logits.len() {
        return Err(Error::LabelIndex { label, n_classes: logits.len() });
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    let mut grad: Vec<f64> = exp.iter().map(|e| e / sum).collect();
    let loss = -(grad[label].ln());
    grad[label] -= 1.0;
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_give_ln_k() {
        for k in [2, 3, 10] {
            let logits = vec![0.7; k];
            let (loss, grad) = softmax_ce(&logits, 0).unwrap();
            assert!((loss - (k as f64).ln()).abs() < 1e-12);
            assert!((grad[0] - (1.0 / k as f64 - 1.0)).abs() < 1e-12);
            for &g in &grad[1..] {
                assert!((g - 1.0 / k as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn huge_logits_do_not_overflow() {
        let (loss, grad) = softmax_ce(&[1000.0, 0.0], 0).unwrap();
        assert!(loss.is_finite());
        assert!(loss < 1e-12);
        assert!(grad.iter().all(|g| g.is_finite()));
    }

    #[test]
    fn probabilities_sum_to_one() {
        let (_, grad) = softmax_ce(&[3.0, -2.0, 0.5, 9.0], 2).unwrap();
        // grad = p - one_hot, so sum(grad) = 1 - 1 = 0
        let total: f64 = grad.iter().sum();
        assert!(total.abs() < 1e-12);
    }

    #[test]
    fn label_out_of_range() {
        assert!(matches!(
            softmax_ce(&[0.0, 0.0], 2),
            Err(Error::LabelIndex { label: 2, n_classes: 2 })
        ));
    }
}
