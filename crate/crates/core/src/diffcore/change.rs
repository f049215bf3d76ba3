use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::lexer::{LineClass, LineLexer};
use super::profile::LanguageProfile;
use crate::error::{Error, Result};

/// Similarity at or above which a delete/add pair is treated as a rename.
pub const RENAME_THRESHOLD: f64 = 0.5;

/// Gross and net line counts of one hunk (or of a whole file once summed).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HunkChange {
    pub lines_added_gross: u64,
    pub lines_deleted_gross: u64,
    pub lines_added_net: u64,
    pub lines_deleted_net: u64,
}

impl HunkChange {
    pub fn net_total(&self) -> u64 {
        self.lines_added_net + self.lines_deleted_net
    }

    pub fn gross_total(&self) -> u64 {
        self.lines_added_gross + self.lines_deleted_gross
    }
}

impl std::ops::Add for HunkChange {
    type Output = HunkChange;

    fn add(self, o: HunkChange) -> HunkChange {
        HunkChange {
            lines_added_gross: self.lines_added_gross + o.lines_added_gross,
            lines_deleted_gross: self.lines_deleted_gross + o.lines_deleted_gross,
            lines_added_net: self.lines_added_net + o.lines_added_net,
            lines_deleted_net: self.lines_deleted_net + o.lines_deleted_net,
        }
    }
}

impl std::iter::Sum for HunkChange {
    fn sum<I: Iterator<Item = HunkChange>>(iter: I) -> Self {
        iter.fold(HunkChange::default(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FileKind {
    Added,
    Deleted,
    Modified,
    Renamed { similarity: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileChange {
    pub path: String,
    pub kind: FileKind,
    pub hunks: Vec<HunkChange>,
    pub totals: HunkChange,
    /// Whether at least one changed line of the file is code.
    pub affected_net: bool,
}

fn count_code<S: AsRef<str>>(lines: &[S], profile: &LanguageProfile) -> u64 {
    let mut lexer = LineLexer::new(profile);
    lines
        .iter()
        .filter(|l| lexer.classify(l.as_ref()) == LineClass::Code)
        .count() as u64
}

/// Gross and net counts for one hunk. Added and deleted lines are lexed as two
/// independent runs, each starting outside any block comment.
pub fn analyze_hunk<S: AsRef<str>>(added: &[S], deleted: &[S], profile: &LanguageProfile) -> HunkChange {
    HunkChange {
        lines_added_gross: added.len() as u64,
        lines_deleted_gross: deleted.len() as u64,
        lines_added_net: count_code(added, profile),
        lines_deleted_net: count_code(deleted, profile),
    }
}

/// Sum a file's hunks. Fails when the hunks contradict the change kind
/// (deleted lines in an added file, added lines in a deleted file) or when a
/// rename carries a similarity outside `[0.5, 1]`.
pub fn aggregate_file(path: impl Into<String>, kind: FileKind, hunks: Vec<HunkChange>) -> Result<FileChange> {
    let path = path.into();
    let totals: HunkChange = hunks.iter().copied().sum();
    match kind {
        FileKind::Added if totals.lines_deleted_gross > 0 => {
            return Err(Error::invalid(format!("added file {path} has deleted lines")));
        }
        FileKind::Deleted if totals.lines_added_gross > 0 => {
            return Err(Error::invalid(format!("deleted file {path} has added lines")));
        }
        FileKind::Renamed { similarity } if !(RENAME_THRESHOLD..=1.0).contains(&similarity) => {
            return Err(Error::invalid(format!(
                "renamed file {path} has similarity {similarity} outside [0.5, 1]"
            )));
        }
        _ => {}
    }
    if hunks
        .iter()
        .any(|h| h.lines_added_net > h.lines_added_gross || h.lines_deleted_net > h.lines_deleted_gross)
    {
        return Err(Error::invalid(format!("hunk of {path} has net above gross")));
    }
    Ok(FileChange {
        affected_net: totals.net_total() > 0,
        path,
        kind,
        hunks,
        totals,
    })
}

/// Outcome of comparing a deleted and an added file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RenameResolution {
    /// Identical content: a rename without changed lines.
    PureRename,
    /// Similar enough to count as a rename that also changes content.
    ImpureRename,
    /// Below the threshold: one deleted and one added file.
    DeleteAdd,
}

fn multiset<T: Eq + Hash>(items: impl IntoIterator<Item = T>) -> HashMap<T, usize> {
    let mut counts = HashMap::new();
    for item in items {
        *counts.entry(item).or_insert(0) += 1;
    }
    counts
}

/// Line-multiset similarity `|old ∩ new| / max(|old|, |new|)` and the
/// resulting classification.
pub fn rename_similarity<S: AsRef<str>>(old: &[S], new: &[S]) -> Result<(f64, RenameResolution)> {
    if old.is_empty() || new.is_empty() {
        return Err(Error::invalid("rename similarity needs non-empty files"));
    }
    let old_counts = multiset(old.iter().map(AsRef::as_ref));
    let new_counts = multiset(new.iter().map(AsRef::as_ref));
    let (small, large) = if old_counts.len() <= new_counts.len() {
        (&old_counts, &new_counts)
    } else {
        (&new_counts, &old_counts)
    };
    let common: usize = small
        .iter()
        .map(|(line, &n)| n.min(large.get(line).copied().unwrap_or(0)))
        .sum();
    let ratio = common as f64 / old.len().max(new.len()) as f64;
    let resolution = if common == old.len() && common == new.len() {
        RenameResolution::PureRename
    } else if ratio >= RENAME_THRESHOLD {
        RenameResolution::ImpureRename
    } else {
        RenameResolution::DeleteAdd
    };
    Ok((ratio, resolution))
}
