use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::{Column, ColumnRole, Dataset, LabeledSample};
use crate::error::{Error, Result};
use crate::label::Label;

/// How the columns of an external labeled CSV map onto dataset roles.
/// Columns not named here are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub sha1: String,
    pub label: String,
    #[serde(default)]
    pub message: Option<String>,
    #[serde(default)]
    pub project: Option<String>,
    #[serde(default)]
    pub keyword_columns: Vec<String>,
    #[serde(default)]
    pub change_columns: Vec<String>,
    #[serde(default)]
    pub size_columns: Vec<String>,
    /// Extra spellings of labels, e.g. `"bugfix" = "c"`.
    #[serde(default)]
    pub label_values: BTreeMap<String, Label>,
}

impl ColumnMapping {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    fn parse_label(&self, raw: &str) -> Result<Label> {
        match self.label_values.get(raw.trim()) {
            Some(l) => Ok(*l),
            None => raw.parse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRejection {
    /// 1-based line in the file, header is line 1.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rejected: Vec<RowRejection>,
    pub duplicates_dropped: usize,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: Dataset,
    pub report: LoadReport,
}

pub fn load_labeled_csv(path: &Path, mapping: &ColumnMapping) -> Result<Loaded> {
    let file = std::fs::File::open(path)?;
    let mut loaded = load_labeled_reader(file, mapping)?;
    loaded.dataset.provenance = format!("labeled CSV {}", path.display());
    Ok(loaded)
}

/// Parse a labeled CSV. Rows with a bad label or number are rejected and
/// reported; later rows repeating a SHA1 are dropped.
pub fn load_labeled_reader<R: Read>(input: R, mapping: &ColumnMapping) -> Result<Loaded> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::schema(format!("column {name:?} not found in labeled CSV")))
    };
    let sha_idx = find(&mapping.sha1)?;
    let label_idx = find(&mapping.label)?;
    let message_idx = mapping.message.as_deref().map(find).transpose()?;
    let project_idx = mapping.project.as_deref().map(find).transpose()?;

    let mut columns = Vec::new();
    let mut feature_idx = Vec::new();
    let groups = [
        (&mapping.keyword_columns, ColumnRole::Keyword),
        (&mapping.change_columns, ColumnRole::Change),
        (&mapping.size_columns, ColumnRole::Size),
    ];
    for (names, role) in groups {
        for name in names {
            feature_idx.push(find(name)?);
            columns.push(Column::new(name.clone(), role));
        }
    }

    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let field = |j: usize| rec.get(j).unwrap_or("").trim();
        let parsed = (|| -> Result<LabeledSample> {
            let sha = field(sha_idx);
            if sha.is_empty() {
                return Err(Error::invalid("empty sha1"));
            }
            let label = mapping.parse_label(field(label_idx))?;
            let features = feature_idx
                .iter()
                .zip(&columns)
                .map(|(&j, c)| {
                    field(j)
                        .parse::<f64>()
                        .map_err(|_| Error::invalid(format!("column {:?}: bad number {:?}", c.name, field(j))))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LabeledSample {
                sha1: Some(sha.to_string()),
                project: project_idx.map(|j| field(j).to_string()),
                message: message_idx.map(|j| rec.get(j).unwrap_or("").to_string()),
                features,
                label: Some(label),
            })
        })();
        match parsed {
            Ok(row) => {
                if seen.insert(row.sha1.clone()) {
                    rows.push(row);
                } else {
                    report.duplicates_dropped += 1;
                }
            }
            Err(e) => report.rejected.push(RowRejection {
                line,
                reason: e.to_string(),
            }),
        }
    }
    let dataset = Dataset::new(columns, rows, "labeled CSV")?;
    Ok(Loaded { dataset, report })
}
