use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::table::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl SplitPlan {
    pub fn new(seed: u64) -> Self {
        SplitPlan {
            train_fraction: 0.85,
            stratified: true,
            seed,
        }
    }
}

impl Default for SplitPlan {
    fn default() -> Self {
        SplitPlan::new(0)
    }
}

fn train_count(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).round() as usize).clamp(1, n - 1)
}

/// Per-stratum training counts: floors of the exact shares, with the
/// remaining rows handed to the largest remainders so the total matches the
/// unstratified count where the one-row-per-side floor allows.
fn stratum_counts(sizes: &[usize], fraction: f64) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let target = train_count(total, fraction);
    let exact: Vec<f64> = sizes.iter().map(|&n| n as f64 * fraction).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())));
    let mut missing = target.saturating_sub(counts.iter().sum());
    for &k in &order {
        if missing == 0 {
            break;
        }
        if counts[k] < sizes[k] - 1 {
            counts[k] += 1;
            missing -= 1;
        }
    }
    counts
        .iter()
        .zip(sizes)
        .map(|(&c, &n)| c.clamp(1, n - 1))
        .collect()
}

/// Seeded train/validation partition. Under stratification every label is
/// split separately so class proportions carry over to both parts. Rows keep
/// their original relative order within each part.
pub fn split(dataset: &Dataset, plan: &SplitPlan) -> Result<(Dataset, Dataset)> {
    if !(plan.train_fraction > 0.0 && plan.train_fraction < 1.0) {
        return Err(Error::invalid(format!("train fraction {} not in (0, 1)", plan.train_fraction)));
    }
    if dataset.len() < 10 {
        return Err(Error::invalid(format!("split needs at least 10 rows, got {}", dataset.len())));
    }
    let mut rng = seed::rng(seed::derive(plan.seed, &[seed::tag("split")]));
    let mut train = Vec::new();
    if plan.stratified {
        let labels = dataset.labels()?;
        let mut strata = Vec::new();
        for label in Label::ALL {
            let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
            match idx.len() {
                0 => {}
                1 => {
                    return Err(Error::Stratification(format!(
                        "label {label} has 1 row; stratification needs 2"
                    )))
                }
                _ => strata.push(idx),
            }
        }
        let sizes: Vec<usize> = strata.iter().map(Vec::len).collect();
        for (mut idx, n) in strata.into_iter().zip(stratum_counts(&sizes, plan.train_fraction)) {
            idx.shuffle(&mut rng);
            train.extend_from_slice(&idx[..n]);
        }
    } else {
        let mut idx: Vec<usize> = (0..dataset.len()).collect();
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..train_count(idx.len(), plan.train_fraction)]);
    }
    train.sort_unstable();
    let mut in_train = vec![false; dataset.len()];
    train.iter().for_each(|&i| in_train[i] = true);
    let validation: Vec<usize> = (0..dataset.len()).filter(|&i| !in_train[i]).collect();
    Ok((dataset.subset(&train), dataset.subset(&validation)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Column, ColumnRole, LabeledSample};
    use proptest::prelude::*;

    fn labeled(counts: [usize; 3]) -> Dataset {
        let mut rows = Vec::new();
        for (k, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                let mut r = LabeledSample::new(vec![rows.len() as f64], Some(Label::ALL[k]));
                r.sha1 = Some(format!("s{}", rows.len()));
                rows.push(r);
            }
        }
        Dataset::new(vec![Column::new("i", ColumnRole::Size)], rows, "t").unwrap()
    }

    fn count(d: &Dataset, l: Label) -> usize {
        d.rows().iter().filter(|r| r.label == Some(l)).count()
    }

    #[test]
    fn thousand_rows_split_850_150() {
        let d = labeled([400, 350, 250]);
        let (tr, va) = split(&d, &SplitPlan::new(7)).unwrap();
        assert_eq!((tr.len(), va.len()), (850, 150));
        assert_eq!(count(&tr, Label::Adaptive), 340);
        // 297.5 and 212.5: the one spare row goes to the first of the tied remainders
        assert_eq!(count(&tr, Label::Corrective), 298);
        assert_eq!(count(&tr, Label::Perfective), 212);
    }

    #[test]
    fn same_seed_same_partition() {
        let d = labeled([30, 30, 40]);
        let a = split(&d, &SplitPlan::new(3)).unwrap();
        let b = split(&d, &SplitPlan::new(3)).unwrap();
        assert_eq!(a.0.rows(), b.0.rows());
        let c = split(&d, &SplitPlan::new(4)).unwrap();
        assert_ne!(a.0.rows(), c.0.rows());
    }

    #[test]
    fn singleton_class_cannot_be_stratified() {
        let d = labeled([20, 20, 1]);
        assert!(matches!(split(&d, &SplitPlan::new(1)), Err(Error::Stratification(_))));
        let plan = SplitPlan {
            stratified: false,
            ..SplitPlan::new(1)
        };
        assert!(split(&d, &plan).is_ok());
    }

    #[test]
    fn too_few_rows() {
        assert!(split(&labeled([3, 3, 3]), &SplitPlan::new(1)).is_err());
    }

    proptest! {
        #[test]
        fn partition_is_disjoint_and_exhaustive(a in 2usize..60, b in 2usize..60, c in 2usize..60, seed: u64, strat: bool) {
            let d = labeled([a, b, c]);
            let plan = SplitPlan { stratified: strat, ..SplitPlan::new(seed) };
            let (tr, va) = split(&d, &plan).unwrap();
            let mut all: Vec<String> = tr.rows().iter().chain(va.rows()).map(|r| r.sha1.clone().unwrap()).collect();
            prop_assert_eq!(all.len(), d.len());
            all.sort();
            all.dedup();
            prop_assert_eq!(all.len(), d.len());
            if strat {
                for (k, n) in [a, b, c].into_iter().enumerate() {
                    let expected = n as f64 * 0.85;
                    let got = count(&tr, Label::ALL[k]) as f64;
                    prop_assert!((got - expected).abs() <= 1.0);
                }
            }
        }
    }
}
