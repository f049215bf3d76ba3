use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::diffcore::{FileChange, FileKind};
use crate::error::{Error, Result};

pub const IDENTITY_COLUMNS: [&str; 5] = ["sha1", "parent_sha1", "project", "timestamp", "is_merge"];

/// The size features in their canonical order: gross then net for each of the
/// ten count features, then the two ratios.
pub const SIZE_FEATURE_COLUMNS: [&str; 22] = [
    "files_added_g",
    "files_added_n",
    "files_deleted_g",
    "files_deleted_n",
    "files_renamed_g",
    "files_renamed_n",
    "files_modified_g",
    "files_modified_n",
    "lines_added_by_added_g",
    "lines_added_by_added_n",
    "lines_deleted_by_deleted_g",
    "lines_deleted_by_deleted_n",
    "lines_added_by_modified_g",
    "lines_added_by_modified_n",
    "lines_deleted_by_modified_g",
    "lines_deleted_by_modified_n",
    "lines_added_by_renamed_g",
    "lines_added_by_renamed_n",
    "lines_deleted_by_renamed_g",
    "lines_deleted_by_renamed_n",
    "affected_files_ratio_net",
    "density",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrossNet {
    pub gross: u64,
    pub net: u64,
}

impl GrossNet {
    fn bump(&mut self, gross: u64, net: u64) {
        self.gross += gross;
        self.net += net;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitSizeRecord {
    pub sha1: String,
    pub parent_sha1: Option<String>,
    pub project: String,
    /// Author time, UTC seconds.
    pub timestamp: i64,
    pub is_merge: bool,

    pub files_added: GrossNet,
    pub files_deleted: GrossNet,
    pub files_renamed: GrossNet,
    pub files_modified: GrossNet,

    pub lines_added_by_added: GrossNet,
    pub lines_deleted_by_deleted: GrossNet,
    pub lines_added_by_modified: GrossNet,
    pub lines_deleted_by_modified: GrossNet,
    pub lines_added_by_renamed: GrossNet,
    pub lines_deleted_by_renamed: GrossNet,

    pub affected_files_ratio_net: f64,
    pub density: f64,
}

fn ratio(net: u64, gross: u64) -> f64 {
    if gross == 0 {
        0.0
    } else {
        net as f64 / gross as f64
    }
}

/// Sum of net line features over the sum of gross line features; 0 when
/// nothing changed.
pub fn commit_density(lines: &[GrossNet]) -> f64 {
    let gross: u64 = lines.iter().map(|l| l.gross).sum();
    let net: u64 = lines.iter().map(|l| l.net).sum();
    ratio(net, gross)
}

/// Sum of net file counts over the sum of gross file counts; 0 when no file
/// changed.
pub fn affected_files_ratio_net(files: &[GrossNet]) -> f64 {
    let gross: u64 = files.iter().map(|f| f.gross).sum();
    let net: u64 = files.iter().map(|f| f.net).sum();
    ratio(net, gross)
}

impl CommitSizeRecord {
    /// A record with all features zero.
    pub fn empty(sha1: impl Into<String>, parent_sha1: Option<String>, project: impl Into<String>, timestamp: i64) -> Self {
        CommitSizeRecord {
            sha1: sha1.into(),
            parent_sha1,
            project: project.into(),
            timestamp,
            is_merge: false,
            files_added: GrossNet::default(),
            files_deleted: GrossNet::default(),
            files_renamed: GrossNet::default(),
            files_modified: GrossNet::default(),
            lines_added_by_added: GrossNet::default(),
            lines_deleted_by_deleted: GrossNet::default(),
            lines_added_by_modified: GrossNet::default(),
            lines_deleted_by_modified: GrossNet::default(),
            lines_added_by_renamed: GrossNet::default(),
            lines_deleted_by_renamed: GrossNet::default(),
            affected_files_ratio_net: 0.0,
            density: 0.0,
        }
    }

    /// Accumulate file changes into the count features and recompute ratios.
    pub fn add_files<'a>(&mut self, files: impl IntoIterator<Item = &'a FileChange>) {
        for f in files {
            let t = &f.totals;
            let net_file = u64::from(f.affected_net);
            match f.kind {
                FileKind::Added => {
                    self.files_added.bump(1, net_file);
                    self.lines_added_by_added.bump(t.lines_added_gross, t.lines_added_net);
                }
                FileKind::Deleted => {
                    self.files_deleted.bump(1, net_file);
                    self.lines_deleted_by_deleted
                        .bump(t.lines_deleted_gross, t.lines_deleted_net);
                }
                FileKind::Modified => {
                    self.files_modified.bump(1, net_file);
                    self.lines_added_by_modified.bump(t.lines_added_gross, t.lines_added_net);
                    self.lines_deleted_by_modified
                        .bump(t.lines_deleted_gross, t.lines_deleted_net);
                }
                FileKind::Renamed { .. } => {
                    self.files_renamed.bump(1, net_file);
                    self.lines_added_by_renamed.bump(t.lines_added_gross, t.lines_added_net);
                    self.lines_deleted_by_renamed
                        .bump(t.lines_deleted_gross, t.lines_deleted_net);
                }
            }
        }
        self.refresh_ratios();
    }

    pub fn refresh_ratios(&mut self) {
        self.density = commit_density(&self.line_features());
        self.affected_files_ratio_net = affected_files_ratio_net(&self.file_features());
    }

    pub fn file_features(&self) -> [GrossNet; 4] {
        [self.files_added, self.files_deleted, self.files_renamed, self.files_modified]
    }

    pub fn line_features(&self) -> [GrossNet; 6] {
        [
            self.lines_added_by_added,
            self.lines_deleted_by_deleted,
            self.lines_added_by_modified,
            self.lines_deleted_by_modified,
            self.lines_added_by_renamed,
            self.lines_deleted_by_renamed,
        ]
    }

    fn counts_mut(&mut self) -> [&mut GrossNet; 10] {
        [
            &mut self.files_added,
            &mut self.files_deleted,
            &mut self.files_renamed,
            &mut self.files_modified,
            &mut self.lines_added_by_added,
            &mut self.lines_deleted_by_deleted,
            &mut self.lines_added_by_modified,
            &mut self.lines_deleted_by_modified,
            &mut self.lines_added_by_renamed,
            &mut self.lines_deleted_by_renamed,
        ]
    }

    pub fn gross_lines(&self) -> u64 {
        self.line_features().iter().map(|l| l.gross).sum()
    }

    pub fn net_lines(&self) -> u64 {
        self.line_features().iter().map(|l| l.net).sum()
    }

    pub fn gross_files(&self) -> u64 {
        self.file_features().iter().map(|l| l.gross).sum()
    }

    pub fn net_files(&self) -> u64 {
        self.file_features().iter().map(|l| l.net).sum()
    }

    /// Feature values in [`SIZE_FEATURE_COLUMNS`] order.
    pub fn feature_values(&self) -> [f64; 22] {
        let mut out = [0.0; 22];
        let counts = self.file_features().into_iter().chain(self.line_features());
        for (i, c) in counts.enumerate() {
            out[2 * i] = c.gross as f64;
            out[2 * i + 1] = c.net as f64;
        }
        out[20] = self.affected_files_ratio_net;
        out[21] = self.density;
        out
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut fields = vec![
            self.sha1.clone(),
            self.parent_sha1.clone().unwrap_or_default(),
            self.project.clone(),
            self.timestamp.to_string(),
            u8::from(self.is_merge).to_string(),
        ];
        for c in self.file_features().into_iter().chain(self.line_features()) {
            fields.push(c.gross.to_string());
            fields.push(c.net.to_string());
        }
        fields.push(format!("{:.6}", self.affected_files_ratio_net));
        fields.push(format!("{:.6}", self.density));
        fields
    }

    fn from_csv_fields(rec: &csv::StringRecord, line: u64) -> Result<Self> {
        let bad = |what: &str| Error::invalid(format!("record line {line}: bad {what}"));
        if rec.len() != IDENTITY_COLUMNS.len() + SIZE_FEATURE_COLUMNS.len() {
            return Err(bad("column count"));
        }
        let parent = rec[1].trim();
        let mut r = CommitSizeRecord::empty(
            rec[0].trim(),
            (!parent.is_empty()).then(|| parent.to_string()),
            &rec[2],
            rec[3].trim().parse().map_err(|_| bad("timestamp"))?,
        );
        r.is_merge = match rec[4].trim() {
            "1" | "true" => true,
            "0" | "false" => false,
            _ => return Err(bad("is_merge")),
        };
        for (i, c) in r.counts_mut().into_iter().enumerate() {
            let col = IDENTITY_COLUMNS.len() + 2 * i;
            c.gross = rec[col].trim().parse().map_err(|_| bad(SIZE_FEATURE_COLUMNS[2 * i]))?;
            c.net = rec[col + 1]
                .trim()
                .parse()
                .map_err(|_| bad(SIZE_FEATURE_COLUMNS[2 * i + 1]))?;
        }
        r.affected_files_ratio_net = rec[25].trim().parse().map_err(|_| bad("affected_files_ratio_net"))?;
        r.density = rec[26].trim().parse().map_err(|_| bad("density"))?;
        Ok(r)
    }
}

/// Write records as CSV: LF line endings, ratios with six decimals.
pub fn write_records_csv<W: Write>(out: W, records: &[CommitSizeRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(IDENTITY_COLUMNS.iter().chain(SIZE_FEATURE_COLUMNS.iter()))?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<CommitSizeRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let expected: Vec<&str> = IDENTITY_COLUMNS.iter().chain(SIZE_FEATURE_COLUMNS.iter()).copied().collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::schema("record CSV header does not match the canonical columns"));
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| CommitSizeRecord::from_csv_fields(&rec?, i as u64 + 2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::{aggregate_file, HunkChange};

    fn gn(gross: u64, net: u64) -> GrossNet {
        GrossNet { gross, net }
    }

    #[test]
    fn density_of_table_medians() {
        let d = commit_density(&[gn(45, 33)]);
        assert!((d - 33.0 / 45.0).abs() < 1e-15);
        assert!((d - 0.733_333_333).abs() < 1e-9);
    }

    #[test]
    fn zero_gross_gives_zero_ratio() {
        assert_eq!(commit_density(&[gn(0, 0)]), 0.0);
        assert_eq!(affected_files_ratio_net(&[gn(0, 0); 4]), 0.0);
    }

    #[test]
    fn full_density() {
        assert_eq!(commit_density(&[gn(100, 100), gn(20, 20)]), 1.0);
    }

    #[test]
    fn affected_files_ratio() {
        let r = affected_files_ratio_net(&[gn(1, 1), gn(0, 0), gn(0, 0), gn(2, 1)]);
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(affected_files_ratio_net(&[gn(3, 3), gn(1, 1)]), 1.0);
        assert_eq!(affected_files_ratio_net(&[gn(3, 0), gn(1, 0)]), 0.0);
    }

    #[test]
    fn files_accumulate_into_features() {
        let h = |ag, dg, an, dn| HunkChange {
            lines_added_gross: ag,
            lines_deleted_gross: dg,
            lines_added_net: an,
            lines_deleted_net: dn,
        };
        let files = vec![
            aggregate_file("new.c", FileKind::Added, vec![h(5, 0, 5, 0)]).unwrap(),
            aggregate_file("old.c", FileKind::Modified, vec![h(1, 1, 0, 0)]).unwrap(),
            aggregate_file("mv.c", FileKind::Renamed { similarity: 0.8 }, vec![h(2, 1, 1, 1)]).unwrap(),
        ];
        let mut r = CommitSizeRecord::empty("a", None, "p", 0);
        r.add_files(&files);
        assert_eq!(r.files_added, gn(1, 1));
        assert_eq!(r.files_modified, gn(1, 0));
        assert_eq!(r.files_renamed, gn(1, 1));
        assert_eq!(r.lines_added_by_renamed, gn(2, 1));
        assert_eq!(r.gross_lines(), 10);
        assert_eq!(r.net_lines(), 7);
        assert!((r.density - 0.7).abs() < 1e-15);
        assert!((r.affected_files_ratio_net - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn csv_has_canonical_header_and_six_decimals() {
        let mut r = CommitSizeRecord::empty("ab", Some("cd".into()), "proj", 1_500_000_000);
        r.lines_added_by_added = gn(3, 2);
        r.files_added = gn(1, 1);
        r.refresh_ratios();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[r.clone()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            format!("{},{}", IDENTITY_COLUMNS.join(","), SIZE_FEATURE_COLUMNS.join(","))
        );
        assert!(text.ends_with(",1.000000,0.666667\n"));
        assert!(!text.contains('\r'));
        let back = read_records_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0].lines_added_by_added, gn(3, 2));
        assert_eq!(back[0].parent_sha1.as_deref(), Some("cd"));
    }
}
