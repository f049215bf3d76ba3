use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// Observed and chance agreement of a square confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub accuracy_total: f64,
    pub accuracy_random: f64,
    /// `None` when chance agreement is 1 and kappa is undefined.
    pub kappa: Option<f64>,
}

impl Agreement {
    /// Works for any number of classes. Rows are true classes, columns
    /// predictions.
    pub fn from_confusion<R: AsRef<[u64]>>(confusion: &[R]) -> Result<Agreement> {
        let k = confusion.len();
        if confusion.iter().any(|r| r.as_ref().len() != k) {
            return Err(Error::invalid("confusion matrix is not square"));
        }
        let n: u64 = confusion.iter().map(|r| r.as_ref().iter().sum::<u64>()).sum();
        if n == 0 {
            return Err(Error::invalid("confusion matrix is empty"));
        }
        let trace: u64 = (0..k).map(|i| confusion[i].as_ref()[i]).sum();
        // Integer marginal products keep the p_e = 1 test exact.
        let chance: u128 = (0..k)
            .map(|i| {
                let row: u64 = confusion[i].as_ref().iter().sum();
                let col: u64 = confusion.iter().map(|r| r.as_ref()[i]).sum();
                row as u128 * col as u128
            })
            .sum();
        let n2 = n as u128 * n as u128;
        let p_o = trace as f64 / n as f64;
        let p_e = chance as f64 / n2 as f64;
        let kappa = (chance != n2).then(|| (p_o - p_e) / (1.0 - p_e));
        Ok(Agreement {
            accuracy_total: p_o,
            accuracy_random: p_e,
            kappa,
        })
    }
}

pub type Confusion = [[u64; Label::COUNT]; Label::COUNT];

pub fn confusion_from(truth: &[Label], predicted: &[Label]) -> Confusion {
    let mut m = [[0u64; Label::COUNT]; Label::COUNT];
    for (t, p) in truth.iter().zip(predicted) {
        m[t.index()][p.index()] += 1;
    }
    m
}

/// Score of one cross-validation test fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldScore {
    pub repeat: usize,
    pub fold: usize,
    pub n: usize,
    pub accuracy: f64,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Rows are true labels, columns predictions, both in `a, c, p` order.
    pub confusion: Confusion,
    pub n: u64,
    pub accuracy_total: f64,
    pub accuracy_random: f64,
    pub kappa: Option<f64>,
    /// Per-fold breakdown; empty unless produced by cross-validation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub folds: Vec<FoldScore>,
}

impl EvalReport {
    pub fn from_confusion(confusion: Confusion) -> Result<EvalReport> {
        let a = Agreement::from_confusion(&confusion)?;
        Ok(EvalReport {
            confusion,
            n: confusion.iter().flatten().sum(),
            accuracy_total: a.accuracy_total,
            accuracy_random: a.accuracy_random,
            kappa: a.kappa,
            folds: Vec::new(),
        })
    }

    pub fn from_predictions(truth: &[Label], predicted: &[Label]) -> Result<EvalReport> {
        if truth.len() != predicted.len() {
            return Err(Error::invalid(format!(
                "{} labels but {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        if truth.is_empty() {
            return Err(Error::invalid("nothing to evaluate"));
        }
        Self::from_confusion(confusion_from(truth, predicted))
    }

    pub fn mean_fold_accuracy(&self) -> Option<f64> {
        mean(self.folds.iter().map(|f| f.accuracy))
    }

    /// Sample standard deviation of fold accuracies.
    pub fn sd_fold_accuracy(&self) -> Option<f64> {
        let m = self.mean_fold_accuracy()?;
        let n = self.folds.len();
        if n < 2 {
            return None;
        }
        let ss: f64 = self.folds.iter().map(|f| (f.accuracy - m).powi(2)).sum();
        Some((ss / (n - 1) as f64).sqrt())
    }

    /// Mean kappa over folds where it is defined.
    pub fn mean_fold_kappa(&self) -> Option<f64> {
        mean(self.folds.iter().filter_map(|f| f.kappa))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| s / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_class_worked_example() {
        let a = Agreement::from_confusion(&[[30u64, 10], [10, 50]]).unwrap();
        assert!((a.accuracy_total - 0.8).abs() < 1e-15);
        assert!((a.accuracy_random - 0.52).abs() < 1e-15);
        assert!((a.kappa.unwrap() - 0.28 / 0.48).abs() < 1e-12);
    }

    #[test]
    fn diagonal_is_perfect() {
        let r = EvalReport::from_confusion([[5, 0, 0], [0, 7, 0], [0, 0, 2]]).unwrap();
        assert_eq!(r.accuracy_total, 1.0);
        assert_eq!(r.kappa, Some(1.0));
    }

    #[test]
    fn constant_prediction_has_zero_kappa() {
        let r = EvalReport::from_confusion([[0, 4, 0], [0, 9, 0], [0, 3, 0]]).unwrap();
        assert_eq!(r.accuracy_total, r.accuracy_random);
        assert_eq!(r.kappa, Some(0.0));
    }

    #[test]
    fn single_class_everywhere_has_undefined_kappa() {
        let r = EvalReport::from_confusion([[0, 0, 0], [0, 9, 0], [0, 0, 0]]).unwrap();
        assert_eq!(r.accuracy_random, 1.0);
        assert_eq!(r.kappa, None);
    }

    #[test]
    fn empty_is_rejected() {
        assert!(EvalReport::from_confusion([[0; 3]; 3]).is_err());
        assert!(EvalReport::from_predictions(&[], &[]).is_err());
        assert!(Agreement::from_confusion(&[vec![1u64, 2], vec![3]]).is_err());
    }

    #[test]
    fn predictions_fill_rows_by_truth() {
        use Label::*;
        let r = EvalReport::from_predictions(&[Adaptive, Adaptive, Perfective], &[Adaptive, Corrective, Corrective])
            .unwrap();
        assert_eq!(r.confusion[0], [1, 1, 0]);
        assert_eq!(r.confusion[2], [0, 1, 0]);
        assert_eq!(r.n, 3);
    }

    #[test]
    fn fold_summaries() {
        let mut r = EvalReport::from_confusion([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        r.folds = vec![
            FoldScore { repeat: 0, fold: 0, n: 2, accuracy: 0.5, kappa: None },
            FoldScore { repeat: 0, fold: 1, n: 2, accuracy: 1.0, kappa: Some(1.0) },
        ];
        assert_eq!(r.mean_fold_accuracy(), Some(0.75));
        assert_eq!(r.mean_fold_kappa(), Some(1.0));
        assert!((r.sd_fold_accuracy().unwrap() - 0.125f64.sqrt()).abs() < 1e-12);
    }
}
