use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::miner::{CommitSizeRecord, SIZE_FEATURE_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnRole {
    Identity,
    Keyword,
    Change,
    Size,
    Label,
}

impl ColumnRole {
    pub fn is_feature(self) -> bool {
        matches!(self, ColumnRole::Keyword | ColumnRole::Change | ColumnRole::Size)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub role: ColumnRole,
}

impl Column {
    pub fn new(name: impl Into<String>, role: ColumnRole) -> Self {
        Column {
            name: name.into(),
            role,
        }
    }
}

/// One row. `features` is aligned with the owning dataset's feature columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub sha1: Option<String>,
    pub project: Option<String>,
    pub message: Option<String>,
    pub features: Vec<f64>,
    pub label: Option<Label>,
}

impl LabeledSample {
    pub fn new(features: Vec<f64>, label: Option<Label>) -> Self {
        LabeledSample {
            sha1: None,
            project: None,
            message: None,
            features,
            label,
        }
    }
}

/// Feature column groups used to build per-view models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureGroup {
    Keywords,
    Changes,
    Density,
    Combined,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 4] = [
        FeatureGroup::Keywords,
        FeatureGroup::Changes,
        FeatureGroup::Density,
        FeatureGroup::Combined,
    ];

    pub fn admits(self, role: ColumnRole) -> bool {
        match self {
            FeatureGroup::Keywords => role == ColumnRole::Keyword,
            FeatureGroup::Changes => role == ColumnRole::Change,
            FeatureGroup::Density => role == ColumnRole::Size,
            FeatureGroup::Combined => role.is_feature(),
        }
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureGroup::Keywords => "keywords",
            FeatureGroup::Changes => "changes",
            FeatureGroup::Density => "density",
            FeatureGroup::Combined => "combined",
        })
    }
}

impl FromStr for FeatureGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "keywords" => Ok(FeatureGroup::Keywords),
            "changes" => Ok(FeatureGroup::Changes),
            "density" => Ok(FeatureGroup::Density),
            "combined" => Ok(FeatureGroup::Combined),
            other => Err(Error::invalid(format!("unknown feature group {other:?}"))),
        }
    }
}

/// A feature table. The identity columns (`sha1`, `project`, `message`) and
/// the label live on each row; `columns` lists only feature columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Column>,
    rows: Vec<LabeledSample>,
    pub provenance: String,
}

impl Dataset {
    pub fn new(columns: Vec<Column>, rows: Vec<LabeledSample>, provenance: impl Into<String>) -> Result<Self> {
        let mut names = HashSet::new();
        for c in &columns {
            if !c.role.is_feature() {
                return Err(Error::schema(format!("column {:?} is not a feature column", c.name)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::schema(format!("duplicate column {:?}", c.name)));
            }
        }
        let mut shas = HashSet::new();
        for (i, r) in rows.iter().enumerate() {
            if r.features.len() != columns.len() {
                return Err(Error::schema(format!(
                    "row {i} has {} values for {} columns",
                    r.features.len(),
                    columns.len()
                )));
            }
            if let Some(sha) = &r.sha1 {
                if !shas.insert(sha.as_str()) {
                    return Err(Error::schema(format!("duplicate sha1 {sha}")));
                }
            }
        }
        Ok(Dataset {
            columns,
            rows,
            provenance: provenance.into(),
        })
    }

    /// Size features of non-merge commits; merges never enter analysis data.
    pub fn from_records(records: &[CommitSizeRecord]) -> Result<Self> {
        let columns = SIZE_FEATURE_COLUMNS
            .iter()
            .map(|n| Column::new(*n, ColumnRole::Size))
            .collect();
        let rows = records
            .iter()
            .filter(|r| !r.is_merge)
            .map(|r| LabeledSample {
                sha1: Some(r.sha1.clone()),
                project: Some(r.project.clone()),
                message: None,
                features: r.feature_values().to_vec(),
                label: None,
            })
            .collect();
        Dataset::new(columns, rows, "mined size records")
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[LabeledSample] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    /// Full schema including identity and label columns.
    pub fn schema(&self) -> Vec<Column> {
        let mut schema = vec![
            Column::new("sha1", ColumnRole::Identity),
            Column::new("project", ColumnRole::Identity),
            Column::new("message", ColumnRole::Identity),
            Column::new("label", ColumnRole::Label),
        ];
        schema.extend(self.columns.iter().cloned());
        schema
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column_values(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.features[j]).collect()
    }

    /// Labels of all rows; fails if any row is unlabeled.
    pub fn labels(&self) -> Result<Vec<Label>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.label
                    .ok_or_else(|| Error::invalid(format!("row {i} has no label")))
            })
            .collect()
    }

    /// Row-major copy of the feature values.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.features.clone()).collect()
    }

    /// Rows of the feature matrix restricted to `names`, in that order.
    pub fn matrix_for(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let idx = self.indices_of(names)?;
        Ok(self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&j| r.features[j]).collect())
            .collect())
    }

    fn indices_of(&self, names: &[String]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .ok_or_else(|| Error::schema(format!("missing column {n:?}")))
            })
            .collect()
    }

    /// Keep only the named feature columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Dataset> {
        let idx = self.indices_of(names)?;
        Ok(self.select_indices(&idx))
    }

    pub(crate) fn select_indices(&self, idx: &[usize]) -> Dataset {
        let columns = idx.iter().map(|&j| self.columns[j].clone()).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| LabeledSample {
                features: idx.iter().map(|&j| r.features[j]).collect(),
                ..r.clone()
            })
            .collect();
        Dataset {
            columns,
            rows,
            provenance: self.provenance.clone(),
        }
    }

    /// Drop the named columns; unknown names are ignored.
    pub fn without(&self, names: &[String]) -> Dataset {
        let drop: HashSet<&str> = names.iter().map(String::as_str).collect();
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&j| !drop.contains(self.columns[j].name.as_str()))
            .collect();
        self.select_indices(&keep)
    }

    /// Net-only size view: columns ending in `_n` plus the two ratios.
    pub fn net_size_view(&self) -> Result<Dataset> {
        let names: Vec<String> = self
            .columns
            .iter()
            .filter(|c| c.role == ColumnRole::Size)
            .filter(|c| c.name.ends_with("_n") || c.name == "affected_files_ratio_net" || c.name == "density")
            .map(|c| c.name.clone())
            .collect();
        if names.is_empty() {
            return Err(Error::EmptySelection("no net size columns".into()));
        }
        self.select(&names)
    }

    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn filter_rows(&self, mut keep: impl FnMut(&LabeledSample) -> bool) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            rows: self.rows.iter().filter(|r| keep(r)).cloned().collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub(crate) fn with_rows(&self, rows: Vec<LabeledSample>) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            rows,
            provenance: self.provenance.clone(),
        }
    }
}

/// Keep identity and label plus the feature columns of `group`.
pub fn vertical_split(dataset: &Dataset, group: FeatureGroup) -> Result<Dataset> {
    let idx: Vec<usize> = dataset
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| group.admits(c.role))
        .map(|(j, _)| j)
        .collect();
    if idx.is_empty() {
        return Err(Error::EmptySelection(format!("no {group} columns in dataset")));
    }
    let mut view = dataset.select_indices(&idx);
    view.provenance = format!("{} | {group} view", dataset.provenance);
    Ok(view)
}

/// Inner join on SHA1. Left rows keep their order; identity fields and the
/// label come from whichever side has them.
pub fn merge_on_sha(left: &Dataset, right: &Dataset) -> Result<Dataset> {
    let left_names: HashSet<&str> = left.columns.iter().map(|c| c.name.as_str()).collect();
    if let Some(dup) = right.columns.iter().find(|c| left_names.contains(c.name.as_str())) {
        return Err(Error::schema(format!("column {:?} exists on both sides", dup.name)));
    }
    let by_sha: HashMap<&str, &LabeledSample> = right
        .rows
        .iter()
        .filter_map(|r| r.sha1.as_deref().map(|s| (s, r)))
        .collect();

    let mut rows = Vec::new();
    for l in &left.rows {
        let Some(sha) = l.sha1.as_deref() else { continue };
        let Some(r) = by_sha.get(sha) else { continue };
        let label = match (l.label, r.label) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::schema(format!("conflicting labels for {sha}")));
            }
            (a, b) => a.or(b),
        };
        let mut features = l.features.clone();
        features.extend_from_slice(&r.features);
        rows.push(LabeledSample {
            sha1: Some(sha.to_string()),
            project: l.project.clone().or_else(|| r.project.clone()),
            message: l.message.clone().or_else(|| r.message.clone()),
            features,
            label,
        });
    }
    let columns = left.columns.iter().chain(&right.columns).cloned().collect();
    Dataset::new(columns, rows, format!("({}) ⋈ ({})", left.provenance, right.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy() -> Dataset {
        let columns = vec![
            Column::new("kw_fix", ColumnRole::Keyword),
            Column::new("chg_x", ColumnRole::Change),
            Column::new("density", ColumnRole::Size),
        ];
        let rows = (0..4)
            .map(|i| LabeledSample {
                sha1: Some(format!("s{i}")),
                project: Some("p".into()),
                message: Some(format!("msg {i}")),
                features: vec![i as f64, 2.0 * i as f64, 0.5],
                label: Some(Label::ALL[i % 3]),
            })
            .collect();
        Dataset::new(columns, rows, "toy").unwrap()
    }

    fn sized(shas: &[&str]) -> Dataset {
        let rows = shas
            .iter()
            .map(|s| LabeledSample {
                sha1: Some(s.to_string()),
                project: None,
                message: None,
                features: vec![1.0],
                label: None,
            })
            .collect();
        Dataset::new(vec![Column::new("lines", ColumnRole::Size)], rows, "mined").unwrap()
    }

    #[test]
    fn duplicate_sha_is_rejected() {
        let rows = vec![LabeledSample::new(vec![], None), LabeledSample::new(vec![], None)];
        assert!(Dataset::new(vec![], rows.clone(), "").is_ok());
        let mut dup = rows;
        dup[0].sha1 = Some("x".into());
        dup[1].sha1 = Some("x".into());
        assert!(Dataset::new(vec![], dup, "").is_err());
    }

    #[test]
    fn groups_select_by_role() {
        let d = toy();
        assert_eq!(vertical_split(&d, FeatureGroup::Density).unwrap().feature_names(), ["density"]);
        assert_eq!(vertical_split(&d, FeatureGroup::Combined).unwrap().columns(), d.columns());
        let sizes = sized(&["a"]);
        assert!(matches!(
            vertical_split(&sizes, FeatureGroup::Keywords),
            Err(Error::EmptySelection(_))
        ));
    }

    #[test]
    fn combined_then_density_equals_density() {
        let d = toy();
        let a = vertical_split(&vertical_split(&d, FeatureGroup::Combined).unwrap(), FeatureGroup::Density).unwrap();
        let b = vertical_split(&d, FeatureGroup::Density).unwrap();
        assert_eq!(a.columns(), b.columns());
        assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn merge_is_an_inner_join() {
        let labeled = toy();
        let mined = sized(&["s1", "s3", "zz"]);
        let m = merge_on_sha(&labeled, &mined).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.n_features(), 4);
        assert_eq!(m.rows()[0].label, Some(Label::Corrective));
        assert_eq!(m.rows()[0].message.as_deref(), Some("msg 1"));

        let disjoint = sized(&["q"]);
        assert_eq!(merge_on_sha(&labeled, &disjoint).unwrap().len(), 0);
    }

    #[test]
    fn merge_rejects_shared_column_names() {
        let d = toy();
        assert!(matches!(merge_on_sha(&d, &d), Err(Error::Schema(_))));
    }

    #[test]
    fn net_view_keeps_net_columns_and_ratios() {
        let records = vec![crate::miner::CommitSizeRecord::empty("a", None, "p", 0)];
        let d = Dataset::from_records(&records).unwrap();
        let net = d.net_size_view().unwrap();
        assert_eq!(net.n_features(), 12);
        assert!(net.feature_names().iter().all(|n| !n.ends_with("_g")));
    }
}
