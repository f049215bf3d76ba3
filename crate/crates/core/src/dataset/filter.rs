use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::table::Dataset;

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFilter {
    /// Surviving columns in schema order.
    pub kept: Vec<String>,
    /// Removed columns in removal order.
    pub removed: Vec<String>,
}

/// Repeatedly take the most correlated pair with `|r| > cutoff` and drop the
/// member with the larger mean absolute correlation to the remaining columns.
/// Ties (both for the pair and for the member) resolve by schema order, the
/// later column being dropped. Zero-variance columns take no part and are kept.
pub fn correlation_filter(dataset: &Dataset, cutoff: f64) -> CorrelationFilter {
    let p = dataset.n_features();
    let cols: Vec<Vec<f64>> = (0..p).map(|j| dataset.column_values(j)).collect();
    let mut corr = vec![vec![0.0; p]; p];
    let mut active = vec![true; p];
    for i in 0..p {
        for j in (i + 1)..p {
            let r = pearson(&cols[i], &cols[j]).map(f64::abs);
            corr[i][j] = r.unwrap_or(0.0);
            corr[j][i] = corr[i][j];
        }
        if cols[i].windows(2).all(|w| w[0] == w[1]) {
            active[i] = false;
        }
    }

    let mean_abs = |k: usize, active: &[bool]| {
        let others: Vec<f64> = (0..p).filter(|&m| m != k && active[m]).map(|m| corr[k][m]).collect();
        if others.is_empty() {
            0.0
        } else {
            others.iter().sum::<f64>() / others.len() as f64
        }
    };

    let mut removed = Vec::new();
    loop {
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in (0..p).filter(|&i| active[i]) {
            for j in ((i + 1)..p).filter(|&j| active[j]) {
                if corr[i][j] > cutoff && worst.is_none_or(|(_, _, r)| corr[i][j] > r) {
                    worst = Some((i, j, corr[i][j]));
                }
            }
        }
        let Some((i, j, _)) = worst else { break };
        let drop = if mean_abs(i, &active) > mean_abs(j, &active) { i } else { j };
        active[drop] = false;
        removed.push(dataset.columns()[drop].name.clone());
    }
    let kept = dataset
        .columns()
        .iter()
        .filter(|c| !removed.contains(&c.name))
        .map(|c| c.name.clone())
        .collect();
    CorrelationFilter { kept, removed }
}

/// Near-zero-variance rule: a column is dropped when the most frequent value
/// outnumbers the second most frequent by more than `freq_ratio` and the
/// distinct values make up less than `unique_fraction` of the rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearZeroRule {
    pub enabled: bool,
    pub freq_ratio: f64,
    pub unique_fraction: f64,
}

impl Default for NearZeroRule {
    fn default() -> Self {
        NearZeroRule {
            enabled: true,
            freq_ratio: 19.0,
            unique_fraction: 0.10,
        }
    }
}

impl NearZeroRule {
    pub fn zero_only() -> Self {
        NearZeroRule {
            enabled: false,
            ..Default::default()
        }
    }
}

fn value_counts(values: &[f64]) -> Vec<usize> {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &v in values {
        // fold -0.0 into 0.0
        let key = if v == 0.0 { 0.0f64.to_bits() } else { v.to_bits() };
        *counts.entry(key).or_insert(0) += 1;
    }
    let mut counts: Vec<usize> = counts.into_values().collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts
}

/// Drop constant columns and, if the rule is enabled, near-constant ones.
/// Returns the filtered dataset and the dropped column names.
pub fn variance_filter(dataset: &Dataset, rule: &NearZeroRule) -> (Dataset, Vec<String>) {
    let n = dataset.len();
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for (j, c) in dataset.columns().iter().enumerate() {
        let counts = value_counts(&dataset.column_values(j));
        let constant = counts.len() <= 1;
        let near_zero = rule.enabled
            && counts.len() >= 2
            && (counts[0] as f64 / counts[1] as f64) > rule.freq_ratio
            && (counts.len() as f64 / n as f64) < rule.unique_fraction;
        if constant || near_zero {
            dropped.push(c.name.clone());
        } else {
            keep.push(j);
        }
    }
    (dataset.select_indices(&keep), dropped)
}
