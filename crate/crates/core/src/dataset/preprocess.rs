use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use super::table::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreprocessStep {
    Center,
    Scale,
    YeoJohnson,
}

impl FromStr for PreprocessStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "center" => Ok(PreprocessStep::Center),
            "scale" => Ok(PreprocessStep::Scale),
            "yeo_johnson" | "yeojohnson" => Ok(PreprocessStep::YeoJohnson),
            other => Err(Error::invalid(format!("unknown preprocessing step {other:?}"))),
        }
    }
}

impl fmt::Display for PreprocessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreprocessStep::Center => "center",
            PreprocessStep::Scale => "scale",
            PreprocessStep::YeoJohnson => "yeo_johnson",
        })
    }
}

pub fn yeo_johnson(y: f64, lambda: f64) -> f64 {
    if y >= 0.0 {
        if lambda.abs() < 1e-12 {
            y.ln_1p()
        } else {
            ((y + 1.0).powf(lambda) - 1.0) / lambda
        }
    } else if (lambda - 2.0).abs() < 1e-12 {
        -(-y).ln_1p()
    } else {
        -((1.0 - y).powf(2.0 - lambda) - 1.0) / (2.0 - lambda)
    }
}

pub fn yeo_johnson_inverse(x: f64, lambda: f64) -> f64 {
    if x >= 0.0 {
        if lambda.abs() < 1e-12 {
            x.exp_m1()
        } else {
            (lambda * x + 1.0).powf(1.0 / lambda) - 1.0
        }
    } else if (lambda - 2.0).abs() < 1e-12 {
        -(-x).exp_m1()
    } else {
        1.0 - (1.0 - (2.0 - lambda) * x).powf(1.0 / (2.0 - lambda))
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
fn sample_sd(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn yj_log_likelihood(values: &[f64], lambda: f64) -> f64 {
    let n = values.len() as f64;
    let t: Vec<f64> = values.iter().map(|&y| yeo_johnson(y, lambda)).collect();
    let m = mean(&t);
    let var = t.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let jacobian: f64 = values.iter().map(|&y| y.signum() * y.abs().ln_1p()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * jacobian
}

/// λ on the grid -2.0, -1.9, …, 2.0 maximising the Gaussian log-likelihood
/// of the transformed values. Constant columns get λ = 1 (identity).
pub fn yeo_johnson_lambda(values: &[f64]) -> f64 {
    if values.len() < 2 || values.windows(2).all(|w| w[0] == w[1]) {
        return 1.0;
    }
    let mut best = (1.0, f64::NEG_INFINITY);
    for i in -20..=20 {
        let lambda = i as f64 / 10.0;
        let ll = yj_log_likelihood(values, lambda);
        if ll.is_finite() && ll > best.1 {
            best = (lambda, ll);
        }
    }
    best.0
}

/// Fitted parameters for one column; `None` means the step is not applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnTransform {
    pub name: String,
    pub lambda: Option<f64>,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

impl ColumnTransform {
    fn forward(&self, mut v: f64) -> f64 {
        if let Some(l) = self.lambda {
            v = yeo_johnson(v, l);
        }
        if let Some(m) = self.mean {
            v -= m;
        }
        if let Some(s) = self.sd {
            v /= s;
        }
        v
    }

    fn inverse(&self, mut v: f64) -> f64 {
        if let Some(s) = self.sd {
            v *= s;
        }
        if let Some(m) = self.mean {
            v += m;
        }
        if let Some(l) = self.lambda {
            v = yeo_johnson_inverse(v, l);
        }
        v
    }
}

/// Preprocessing fitted on training data and reusable on new data. Steps run
/// in the order Yeo–Johnson, center, scale regardless of how they were given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pub steps: Vec<PreprocessStep>,
    pub columns: Vec<ColumnTransform>,
}

impl Preprocessor {
    pub fn fit(dataset: &Dataset, steps: &[PreprocessStep]) -> Result<Self> {
        if dataset.is_empty() {
            return Err(Error::invalid("cannot fit preprocessing on an empty dataset"));
        }
        let has = |s| steps.contains(&s);
        let mut columns = Vec::with_capacity(dataset.n_features());
        for (j, c) in dataset.columns().iter().enumerate() {
            let mut values = dataset.column_values(j);
            let lambda = has(PreprocessStep::YeoJohnson).then(|| yeo_johnson_lambda(&values));
            if let Some(l) = lambda {
                values.iter_mut().for_each(|v| *v = yeo_johnson(*v, l));
            }
            let mean = has(PreprocessStep::Center).then(|| mean(&values));
            let sd = if has(PreprocessStep::Scale) {
                let sd = sample_sd(&values);
                if sd > 0.0 {
                    Some(sd)
                } else {
                    warn!("column {:?} has zero variance; not scaled", c.name);
                    None
                }
            } else {
                None
            };
            columns.push(ColumnTransform {
                name: c.name.clone(),
                lambda,
                mean,
                sd,
            });
        }
        let mut steps = steps.to_vec();
        steps.sort_by_key(|s| match s {
            PreprocessStep::YeoJohnson => 0,
            PreprocessStep::Center => 1,
            PreprocessStep::Scale => 2,
        });
        steps.dedup();
        Ok(Preprocessor { steps, columns })
    }

    fn apply(&self, dataset: &Dataset, f: impl Fn(&ColumnTransform, f64) -> f64) -> Result<Dataset> {
        let idx: Vec<(usize, &ColumnTransform)> = self
            .columns
            .iter()
            .map(|t| {
                dataset
                    .column_index(&t.name)
                    .map(|j| (j, t))
                    .ok_or_else(|| Error::schema(format!("missing column {:?}", t.name)))
            })
            .collect::<Result<_>>()?;
        let rows = dataset
            .rows()
            .iter()
            .map(|r| {
                let mut row = r.clone();
                for &(j, t) in &idx {
                    row.features[j] = f(t, r.features[j]);
                }
                row
            })
            .collect();
        Ok(dataset.with_rows(rows))
    }

    pub fn transform(&self, dataset: &Dataset) -> Result<Dataset> {
        self.apply(dataset, ColumnTransform::forward)
    }

    pub fn inverse_transform(&self, dataset: &Dataset) -> Result<Dataset> {
        self.apply(dataset, ColumnTransform::inverse)
    }

    pub fn transform_row(&self, names: &[String], row: &mut [f64]) {
        for t in &self.columns {
            if let Some(j) = names.iter().position(|n| n == &t.name) {
                row[j] = t.forward(row[j]);
            }
        }
    }
}

/// Fit on `dataset` and transform it.
pub fn preprocess(dataset: &Dataset, steps: &[PreprocessStep]) -> Result<(Dataset, Preprocessor)> {
    let fitted = Preprocessor::fit(dataset, steps)?;
    Ok((fitted.transform(dataset)?, fitted))
}
