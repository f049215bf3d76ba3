use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;

/// Column-major training view of a labeled dataset.
#[derive(Debug, Clone)]
pub(crate) struct TrainingSet {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl TrainingSet {
    pub fn from_dataset(dataset: &Dataset) -> Result<TrainingSet> {
        if dataset.is_empty() {
            return Err(Error::invalid("training set is empty"));
        }
        let labels = dataset.labels()?.into_iter().map(Label::index).collect();
        let columns: Vec<Vec<f64>> = (0..dataset.n_features()).map(|j| dataset.column_values(j)).collect();
        for (j, col) in columns.iter().enumerate() {
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!(
                    "column {:?} has non-finite values",
                    dataset.columns()[j].name
                )));
            }
        }
        Ok(TrainingSet {
            names: dataset.feature_names(),
            columns,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn class_counts(&self) -> [usize; Label::COUNT] {
        let mut c = [0; Label::COUNT];
        for &y in &self.labels {
            c[y] += 1;
        }
        c
    }

    /// Fails unless at least two classes are present.
    pub fn require_two_classes(&self) -> Result<()> {
        let present = self.class_counts().iter().filter(|&&c| c > 0).count();
        if present < 2 {
            return Err(Error::DegenerateModel(format!(
                "training set has {present} class(es); need at least 2"
            )));
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }
}
