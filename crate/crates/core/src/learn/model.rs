use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::compound::CompoundModel;
use super::data::TrainingSet;
use super::forest::{Forest, ForestConfig};
use super::logitboost::{BoostConfig, LogitBoost};
use super::metrics::EvalReport;
use crate::dataset::{Dataset, LabeledSample};
use crate::error::{Error, Result};
use crate::label::{argmax, Label};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Learner choice plus its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LearnerConfig {
    Zeror,
    Forest(ForestConfig),
    Logitboost(BoostConfig),
}

impl LearnerConfig {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerConfig::Zeror => "zeror",
            LearnerConfig::Forest(_) => "forest",
            LearnerConfig::Logitboost(_) => "logitboost",
        }
    }

    /// Same learner with its seed replaced.
    pub fn with_seed(&self, seed: u64) -> LearnerConfig {
        match self {
            LearnerConfig::Zeror => LearnerConfig::Zeror,
            LearnerConfig::Forest(c) => LearnerConfig::Forest(ForestConfig { seed, ..c.clone() }),
            LearnerConfig::Logitboost(c) => LearnerConfig::Logitboost(BoostConfig { seed, ..c.clone() }),
        }
    }

    pub fn train(&self, dataset: &Dataset) -> Result<TrainedModel> {
        let data = TrainingSet::from_dataset(dataset)?;
        let params = match self {
            LearnerConfig::Zeror => ModelParams::Zeror(ZeroR::fit(&data)),
            LearnerConfig::Forest(c) => ModelParams::Forest(Forest::fit(&data, c)?),
            LearnerConfig::Logitboost(c) => ModelParams::Logitboost(LogitBoost::fit(&data, c)?),
        };
        Ok(TrainedModel {
            features: data.names,
            classes: Label::ALL.to_vec(),
            params,
        })
    }
}

/// Always predicts the most frequent training label; probabilities are the
/// training class frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroR {
    pub priors: [f64; Label::COUNT],
}

impl ZeroR {
    fn fit(data: &TrainingSet) -> ZeroR {
        let n = data.len() as f64;
        ZeroR {
            priors: data.class_counts().map(|c| c as f64 / n),
        }
    }

    /// Ties go to the earliest label in `a, c, p` order.
    pub fn modal(&self) -> Label {
        Label::ALL[argmax(&self.priors)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelParams {
    Zeror(ZeroR),
    Forest(Forest),
    Logitboost(LogitBoost),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    /// Feature columns in the order the parameters index them.
    pub features: Vec<String>,
    pub classes: Vec<Label>,
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self.params {
            ModelParams::Zeror(_) => "zeror",
            ModelParams::Forest(_) => "forest",
            ModelParams::Logitboost(_) => "logitboost",
        }
    }

    /// Class probabilities for a row laid out like `self.features`.
    pub fn predict_proba(&self, row: &[f64]) -> [f64; Label::COUNT] {
        match &self.params {
            ModelParams::Zeror(z) => z.priors,
            ModelParams::Forest(f) => f.predict_proba(row),
            ModelParams::Logitboost(b) => b.predict_proba(row),
        }
    }

    pub fn predict(&self, row: &[f64]) -> Label {
        match &self.params {
            ModelParams::Zeror(z) => z.modal(),
            _ => Label::ALL[argmax(&self.predict_proba(row))],
        }
    }

    /// Positions of this model's features in `dataset`.
    pub fn bind(&self, dataset: &Dataset) -> Result<Binding> {
        let idx = self
            .features
            .iter()
            .map(|n| {
                dataset
                    .column_index(n)
                    .ok_or_else(|| Error::Schema(format!("model feature {n:?} missing from data")))
            })
            .collect::<Result<_>>()?;
        Ok(Binding(idx))
    }

    pub fn predict_proba_dataset(&self, dataset: &Dataset) -> Result<Vec<[f64; Label::COUNT]>> {
        let b = self.bind(dataset)?;
        Ok(dataset
            .rows()
            .iter()
            .map(|r| self.predict_proba(&b.gather(r)))
            .collect())
    }

    pub fn predict_dataset(&self, dataset: &Dataset) -> Result<Vec<Label>> {
        let b = self.bind(dataset)?;
        Ok(dataset.rows().iter().map(|r| self.predict(&b.gather(r))).collect())
    }

    /// Normalized Gini importance per feature, for forests only.
    pub fn forest_importance(&self) -> Result<Vec<(String, f64)>> {
        match &self.params {
            ModelParams::Forest(f) => Ok(self.features.iter().cloned().zip(f.importance()).collect()),
            _ => Err(Error::invalid(format!("{} model has no forest importance", self.kind()))),
        }
    }
}

/// Column positions mapping a dataset row onto a model's feature order.
#[derive(Debug, Clone)]
pub struct Binding(Vec<usize>);

impl Binding {
    pub fn gather(&self, sample: &LabeledSample) -> Vec<f64> {
        self.0.iter().map(|&j| sample.features[j]).collect()
    }
}

/// Predict every row of `data` and score against its labels.
pub fn evaluate(model: &TrainedModel, data: &Dataset) -> Result<EvalReport> {
    if data.is_empty() {
        return Err(Error::invalid("evaluation data is empty"));
    }
    let truth = data.labels()?;
    EvalReport::from_predictions(&truth, &model.predict_dataset(data)?)
}

/// Anything that can be written as a model document.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Single(TrainedModel),
    Compound(CompoundModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Single(m) => m.kind(),
            Model::Compound(_) => "compound",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    schema_version: u32,
    kind: String,
    model: serde_json::Value,
}

impl Model {
    pub fn to_json(&self) -> Result<String> {
        let model = match self {
            Model::Single(m) => serde_json::to_value(m)?,
            Model::Compound(m) => serde_json::to_value(m)?,
        };
        let doc = Document {
            schema_version: MODEL_SCHEMA_VERSION,
            kind: self.kind().to_string(),
            model,
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value.get("schema_version").and_then(|v| v.as_u64());
        if found != Some(MODEL_SCHEMA_VERSION as u64) {
            return Err(Error::VersionMismatch {
                expected: MODEL_SCHEMA_VERSION,
                // A missing version reads as 0.
                found: found.map_or(0, |v| v.min(u32::MAX as u64) as u32),
            });
        }
        let doc: Document = serde_json::from_value(value)?;
        match doc.kind.as_str() {
            "compound" => Ok(Model::Compound(serde_json::from_value(doc.model)?)),
            "zeror" | "forest" | "logitboost" => {
                let m: TrainedModel = serde_json::from_value(doc.model)?;
                if m.kind() != doc.kind {
                    return Err(Error::invalid(format!(
                        "document kind {} disagrees with model kind {}",
                        doc.kind,
                        m.kind()
                    )));
                }
                Ok(Model::Single(m))
            }
            other => Err(Error::invalid(format!("unknown model kind {other:?}"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Model> {
        Model::from_json(&fs::read_to_string(path)?)
    }
}
