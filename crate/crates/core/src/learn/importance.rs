use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;

/// Area under the ROC curve of `scores` ranking the `positive` rows above
/// the rest, with ties counted as one half. `None` if either side is empty.
pub fn roc_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Rank-sum (Mann-Whitney U) with midranks for ties.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += midrank * idx[i..=j].iter().filter(|&&k| positive[k]).count() as f64;
        i = j + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureAuc {
    pub feature: String,
    /// One-vs-rest AUC per class in `a, c, p` order, before folding.
    pub raw: [f64; Label::COUNT],
    /// `max(auc, 1 - auc)`: direction-free importance.
    pub folded: [f64; Label::COUNT],
}

impl FeatureAuc {
    pub fn mean_folded(&self) -> f64 {
        self.folded.iter().sum::<f64>() / Label::COUNT as f64
    }
}

/// Single-feature ROC importance for every feature and class. A constant
/// feature, or a class absent from the data, scores 0.5.
pub fn roc_auc_importance(dataset: &Dataset) -> Result<Vec<FeatureAuc>> {
    let labels = dataset.labels()?;
    let present = Label::ALL.iter().filter(|l| labels.contains(l)).count();
    if present < 2 {
        return Err(Error::invalid("ROC importance needs at least two classes"));
    }
    Ok(dataset
        .columns()
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let x = dataset.column_values(j);
            let constant = x.iter().all(|&v| v == x[0]);
            let raw = Label::ALL.map(|c| {
                if constant {
                    return 0.5;
                }
                let pos: Vec<bool> = labels.iter().map(|&l| l == c).collect();
                roc_auc(&x, &pos).unwrap_or(0.5)
            });
            FeatureAuc {
                feature: col.name.clone(),
                raw,
                folded: raw.map(|a| a.max(1.0 - a)),
            }
        })
        .collect())
}
