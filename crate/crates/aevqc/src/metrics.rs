//! Classification metrics: accuracy, macro-averaged F1, confusion matrix.

use crate::error::{Error, Result};

/// Evaluation summary. The confusion matrix is K x K with rows = true class,
/// columns = predicted class.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub confusion: Vec<Vec<usize>>,
}

/// Per-class precision/recall/F1 with the 0/0 -> 0 convention, macro-averaged
/// over all `n_classes` classes (absent classes count as 0).
pub fn compute_metrics(
    true_labels: &[usize],
    predicted: &[usize],
    n_classes: usize,
) -> Result<MetricsReport> {
    if true_labels.len() != predicted.len() {
        return Err(Error::Shape(format!(
            "{} true labels vs {} predictions",
            true_labels.len(),
            predicted.len()
        )));
    }
    if true_labels.is_empty() {
        return Err(Error::Data("metrics need at least one sample".into()));
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in true_labels.iter().zip(predicted) {
        if t >= n_classes {
            return Err(Error::LabelIndex { label: t, n_classes });
        }
        if p >= n_classes {
            return Err(Error::LabelIndex { label: p, n_classes });
        }
        confusion[t][p] += 1;
    }
    Ok(report_from_confusion(confusion, true_labels.len()))
}

fn report_from_confusion(confusion: Vec<Vec<usize>>, total: usize) -> MetricsReport {
    let k = confusion.len();
    let correct: usize = (0..k).map(|i| confusion[i][i]).sum();
    let accuracy = correct as f64 / total as f64;

    let mut f1_sum = 0.0;
    for class in 0..k {
        let tp = confusion[class][class] as f64;
        let predicted_as: f64 = (0..k).map(|t| confusion[t][class]).sum::<usize>() as f64;
        let actual: f64 = confusion[class].iter().sum::<usize>() as f64;
        let precision = if predicted_as > 0.0 { tp / predicted_as } else { 0.0 };
        let recall = if actual > 0.0 { tp / actual } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        f1_sum += f1;
    }
    MetricsReport { accuracy, macro_f1: f1_sum / k as f64, confusion }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        for k in [2, 3, 5] {
            let labels: Vec<usize> = (0..k).flat_map(|c| [c, c]).collect();
            let report = compute_metrics(&labels, &labels, k).unwrap();
            assert_eq!(report.accuracy, 1.0);
            assert_eq!(report.macro_f1, 1.0);
            for (i, row) in report.confusion.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, if i == j { 2 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn binary_all_wrong() {
        let report = compute_metrics(&[0, 0, 1, 1], &[1, 1, 0, 0], 2).unwrap();
        assert_eq!(report.accuracy, 0.0);
        assert_eq!(report.macro_f1, 0.0);
    }

    #[test]
    fn three_class_mixed_case() {
        // confusion: row0 = [2,0,0], row1 = [0,2,0], row2 = [1,1,0]
        // class 0: P = 2/3, R = 1, F1 = 0.8; class 1: the same; class 2: 0.
        let report =
            compute_metrics(&[0, 0, 1, 1, 2, 2], &[0, 0, 1, 1, 0, 1], 3).unwrap();
        assert!((report.accuracy - 4.0 / 6.0).abs() < 1e-12);
        assert!((report.macro_f1 - (0.8 + 0.8 + 0.0) / 3.0).abs() < 1e-12);
        assert_eq!(report.confusion, vec![vec![2, 0, 0], vec![0, 2, 0], vec![1, 1, 0]]);
    }

    #[test]
    fn fixed_confusion_two_thirds() {
        // confusion [[2,1],[1,2]]: both classes have P = R = 2/3, F1 = 2/3.
        let report =
            compute_metrics(&[0, 0, 0, 1, 1, 1], &[0, 0, 1, 0, 1, 1], 2).unwrap();
        assert_eq!(report.confusion, vec![vec![2, 1], vec![1, 2]]);
        assert!((report.accuracy - 4.0 / 6.0).abs() < 1e-12);
        assert!((report.macro_f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn absent_class_counts_as_zero() {
        // 3 classes declared, class 2 never appears: its F1 is 0 and still
        // enters the unweighted mean.
        let report = compute_metrics(&[0, 1], &[0, 1], 3).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert!((report.macro_f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn label_out_of_range_is_an_index_error() {
        assert!(matches!(
            compute_metrics(&[0, 3], &[0, 1], 2),
            Err(Error::LabelIndex { label: 3, n_classes: 2 })
        ));
        assert!(matches!(
            compute_metrics(&[0, 1], &[0, 2], 2),
            Err(Error::LabelIndex { label: 2, n_classes: 2 })
        ));
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(compute_metrics(&[0], &[0, 1], 2).is_err());
        assert!(compute_metrics(&[], &[], 2).is_err());
    }
}
