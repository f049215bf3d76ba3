use std::path::Path;

use git2::{Delta, Diff, DiffFindOptions, DiffOptions, Oid, Patch, Repository};
use log::warn;
use rayon::prelude::*;

use super::record::CommitSizeRecord;
use crate::diffcore::{
    aggregate_file, analyze_hunk, rename_similarity, FileChange, FileKind, HunkChange, ProfileSet,
    RenameResolution, RENAME_THRESHOLD,
};
use crate::error::{Error, Result};

/// Similarity git uses to propose rename candidates. Candidates are then
/// re-scored on their lines, so this only has to be permissive enough.
const GIT_RENAME_CANDIDATE_THRESHOLD: u16 = 30;

#[derive(Debug, Clone, Default)]
pub struct WalkOptions {
    /// Branch, tag or revision to start from; `HEAD` when absent.
    pub branch: Option<String>,
    /// Keep only the most recent `n` first-parent commits.
    pub max_commits: Option<usize>,
    /// Project name written into each record; defaults to the directory name.
    pub project: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ExtractedCommit {
    pub record: CommitSizeRecord,
    pub message: String,
    /// Files that could not be read and were left out of the record.
    pub skipped_files: usize,
}

#[derive(Debug, Clone, Default)]
pub struct WalkOutput {
    /// Oldest first; every parent precedes its child.
    pub commits: Vec<ExtractedCommit>,
    pub skipped_files: usize,
}

impl WalkOutput {
    pub fn records(&self) -> Vec<CommitSizeRecord> {
        self.commits.iter().map(|c| c.record.clone()).collect()
    }
}

fn open(path: &Path) -> Result<Repository> {
    if !path.exists() {
        return Err(Error::Config(format!("repository path {} does not exist", path.display())));
    }
    Repository::open(path).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))
}

fn project_name(path: &Path, options: &WalkOptions) -> String {
    options.project.clone().unwrap_or_else(|| {
        path.canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "unknown".to_string())
    })
}

/// Mine every commit on the first-parent history of the start revision.
///
/// Merge commits are emitted flagged and with zero features. Commits are
/// extracted in parallel; the output order is fixed by the history.
pub fn walk_repo(path: &Path, options: &WalkOptions, profiles: &ProfileSet) -> Result<WalkOutput> {
    let oids = first_parent_history(&open(path)?, options)?;
    let project = project_name(path, options);
    walk_commits(path, &oids, &project, profiles)
}

/// First-parent history of the start revision, oldest first.
fn first_parent_history(repo: &Repository, options: &WalkOptions) -> Result<Vec<Oid>> {
    let start = match &options.branch {
        Some(rev) => repo
            .revparse_single(rev)
            .and_then(|o| o.peel_to_commit())
            .map_err(|e| Error::Config(format!("revision {rev:?}: {}", e.message())))?,
        None => repo.head()?.peel_to_commit()?,
    };
    let limit = options.max_commits.unwrap_or(usize::MAX);
    let mut oids = Vec::new();
    let mut current = Some(start);
    while let Some(commit) = current {
        if oids.len() >= limit {
            break;
        }
        oids.push(commit.id());
        current = commit.parents().next();
    }
    oids.reverse();
    Ok(oids)
}

fn walk_commits(path: &Path, oids: &[Oid], project: &str, profiles: &ProfileSet) -> Result<WalkOutput> {
    let commits = oids
        .par_iter()
        .map_init(
            || Repository::open(path),
            |repo, oid| {
                let repo = repo.as_ref().map_err(|e| Error::Git(git2::Error::from_str(e.message())))?;
                extract_commit(repo, &oid.to_string(), project, profiles)
            },
        )
        .collect::<Result<Vec<_>>>()?;
    let skipped_files = commits.iter().map(|c| c.skipped_files).sum();
    Ok(WalkOutput {
        commits,
        skipped_files,
    })
}

/// Size features of one commit, diffed against its only parent or against
/// the empty tree for a root commit.
pub fn extract_commit(repo: &Repository, sha1: &str, project: &str, profiles: &ProfileSet) -> Result<ExtractedCommit> {
    let oid = Oid::from_str(sha1).map_err(|_| Error::NotFound(format!("commit {sha1}")))?;
    let commit = repo
        .find_commit(oid)
        .map_err(|_| Error::NotFound(format!("commit {sha1}")))?;
    let parent_sha1 = commit.parent_ids().next().map(|p| p.to_string());
    let mut record = CommitSizeRecord::empty(sha1, parent_sha1, project, commit.author().when().seconds());
    let message = commit.message().unwrap_or("").to_string();

    if commit.parent_count() > 1 {
        record.is_merge = true;
        return Ok(ExtractedCommit {
            record,
            message,
            skipped_files: 0,
        });
    }

    let tree = commit.tree()?;
    let parent_tree = match commit.parents().next() {
        Some(p) => Some(p.tree()?),
        None => None,
    };
    let mut opts = DiffOptions::new();
    opts.context_lines(0).ignore_submodules(true);
    let mut diff = repo.diff_tree_to_tree(parent_tree.as_ref(), Some(&tree), Some(&mut opts))?;
    diff.find_similar(Some(
        DiffFindOptions::new()
            .renames(true)
            .rename_threshold(GIT_RENAME_CANDIDATE_THRESHOLD),
    ))?;

    let mut files = Vec::new();
    let mut skipped = 0;
    for idx in 0..diff.deltas().len() {
        match file_changes(repo, &diff, idx, profiles) {
            Ok(changes) => files.extend(changes),
            Err(e) => {
                warn!("{sha1}: skipping file #{idx}: {e}");
                skipped += 1;
            }
        }
    }
    record.add_files(&files);
    Ok(ExtractedCommit {
        record,
        message,
        skipped_files: skipped,
    })
}

fn line_text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes)
        .trim_end_matches(['\n', '\r'])
        .to_string()
}

fn blob_lines(repo: &Repository, oid: Oid) -> Result<Option<Vec<String>>> {
    let blob = repo.find_blob(oid)?;
    if blob.is_binary() {
        return Ok(None);
    }
    Ok(Some(String::from_utf8_lossy(blob.content()).lines().map(str::to_string).collect()))
}

/// Hunks of one delta as (added, deleted) line runs.
fn patch_hunks(diff: &Diff<'_>, idx: usize, path: &str, profiles: &ProfileSet) -> Result<Vec<HunkChange>> {
    let Some(patch) = Patch::from_diff(diff, idx)? else {
        return Ok(Vec::new());
    };
    if patch.delta().flags().is_binary() {
        return Ok(Vec::new());
    }
    let profile = profiles.for_path(path);
    let mut hunks = Vec::with_capacity(patch.num_hunks());
    for h in 0..patch.num_hunks() {
        let mut added = Vec::new();
        let mut deleted = Vec::new();
        for l in 0..patch.num_lines_in_hunk(h)? {
            let line = patch.line_in_hunk(h, l)?;
            match line.origin() {
                '+' => added.push(line_text(line.content())),
                '-' => deleted.push(line_text(line.content())),
                _ => {}
            }
        }
        hunks.push(analyze_hunk(&added, &deleted, profile));
    }
    Ok(hunks)
}

fn whole_file(path: &str, kind: FileKind, lines: &[String], profiles: &ProfileSet) -> Result<FileChange> {
    let none: [String; 0] = [];
    let profile = profiles.for_path(path);
    let hunk = match kind {
        FileKind::Deleted => analyze_hunk(&none, lines, profile),
        _ => analyze_hunk(lines, &none, profile),
    };
    aggregate_file(path, kind, vec![hunk])
}

fn file_changes(repo: &Repository, diff: &Diff<'_>, idx: usize, profiles: &ProfileSet) -> Result<Vec<FileChange>> {
    let delta = diff
        .get_delta(idx)
        .ok_or_else(|| Error::invalid(format!("delta #{idx} missing")))?;
    let new_path = delta.new_file().path().map(|p| p.to_string_lossy().into_owned());
    let old_path = delta.old_file().path().map(|p| p.to_string_lossy().into_owned());
    let path = new_path.clone().or_else(|| old_path.clone()).unwrap_or_default();

    let kind = match delta.status() {
        Delta::Added | Delta::Copied => FileKind::Added,
        Delta::Deleted => FileKind::Deleted,
        Delta::Modified | Delta::Typechange => FileKind::Modified,
        Delta::Renamed => {
            let old_id = delta.old_file().id();
            let new_id = delta.new_file().id();
            if old_id == new_id {
                return Ok(vec![aggregate_file(path, FileKind::Renamed { similarity: 1.0 }, vec![])?]);
            }
            let (old_lines, new_lines) = match (blob_lines(repo, old_id)?, blob_lines(repo, new_id)?) {
                (Some(o), Some(n)) => (o, n),
                // binary content that git paired up: keep it as a rename with no lines
                _ => {
                    let kind = FileKind::Renamed { similarity: RENAME_THRESHOLD };
                    return Ok(vec![aggregate_file(path, kind, vec![])?]);
                }
            };
            if old_lines.is_empty() || new_lines.is_empty() {
                let old = old_path.unwrap_or_default();
                return Ok(vec![
                    whole_file(&old, FileKind::Deleted, &old_lines, profiles)?,
                    whole_file(&path, FileKind::Added, &new_lines, profiles)?,
                ]);
            }
            let (similarity, resolution) = rename_similarity(&old_lines, &new_lines)?;
            return match resolution {
                RenameResolution::PureRename => {
                    Ok(vec![aggregate_file(path, FileKind::Renamed { similarity }, vec![])?])
                }
                RenameResolution::ImpureRename => {
                    let hunks = patch_hunks(diff, idx, &path, profiles)?;
                    Ok(vec![aggregate_file(path, FileKind::Renamed { similarity }, hunks)?])
                }
                RenameResolution::DeleteAdd => {
                    let old = old_path.unwrap_or_default();
                    Ok(vec![
                        whole_file(&old, FileKind::Deleted, &old_lines, profiles)?,
                        whole_file(&path, FileKind::Added, &new_lines, profiles)?,
                    ])
                }
            };
        }
        Delta::Unreadable => return Err(Error::invalid(format!("{path} is unreadable"))),
        _ => return Ok(Vec::new()),
    };
    let hunks = patch_hunks(diff, idx, &path, profiles)?;
    Ok(vec![aggregate_file(path, kind, hunks)?])
}
