use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::table::{Column, Dataset, LabeledSample};
use crate::error::{Error, Result};
use crate::label::Label;

const FIXED: [&str; 4] = ["sha1", "project", "message", "label"];

#[derive(Serialize, Deserialize)]
struct SchemaDocument {
    provenance: String,
    columns: Vec<Column>,
}

/// Sidecar file holding the column roles of a dataset CSV.
pub fn schema_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".schema.json");
    PathBuf::from(name)
}

/// Write `sha1,project,message,label,<features…>` plus a `.schema.json` sidecar.
pub fn write_dataset_csv(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(File::create(path)?));
    w.write_record(FIXED.iter().copied().chain(dataset.columns().iter().map(|c| c.name.as_str())))?;
    for r in dataset.rows() {
        let mut fields = vec![
            r.sha1.clone().unwrap_or_default(),
            r.project.clone().unwrap_or_default(),
            r.message.clone().unwrap_or_default(),
            r.label.map(|l| l.to_string()).unwrap_or_default(),
        ];
        fields.extend(r.features.iter().map(|v| v.to_string()));
        w.write_record(&fields)?;
    }
    w.flush()?;
    let doc = SchemaDocument {
        provenance: dataset.provenance.clone(),
        columns: dataset.columns().to_vec(),
    };
    std::fs::write(schema_path(path), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(())
}

pub fn read_dataset_csv(path: &Path) -> Result<Dataset> {
    let sidecar = schema_path(path);
    let doc: SchemaDocument = serde_json::from_str(
        &std::fs::read_to_string(&sidecar)
            .map_err(|e| Error::schema(format!("{}: {e}", sidecar.display())))?,
    )?;
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let expected: Vec<&str> = FIXED.iter().copied().chain(doc.columns.iter().map(|c| c.name.as_str())).collect();
    if header != expected {
        return Err(Error::schema(format!("{} header does not match its schema", path.display())));
    }
    let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let features = rec
            .iter()
            .skip(FIXED.len())
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("line {}: bad number {v:?}", i + 2)))
            })
            .collect::<Result<Vec<_>>>()?;
        let label = match rec[3].trim() {
            "" => None,
            l => Some(l.parse::<Label>()?),
        };
        rows.push(LabeledSample {
            sha1: opt(&rec[0]),
            project: opt(&rec[1]),
            message: opt(&rec[2]),
            features,
            label,
        });
    }
    Dataset::new(doc.columns, rows, doc.provenance)
}
