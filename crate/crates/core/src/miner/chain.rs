use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::record::CommitSizeRecord;
use crate::error::{Error, Result};

/// Number of parent generations attached to a principal commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Generations(usize);

impl Generations {
    pub const SUPPORTED: [usize; 5] = [1, 2, 3, 5, 8];

    pub fn all() -> impl Iterator<Item = Generations> {
        Self::SUPPORTED.into_iter().map(Generations)
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Generations {
    type Error = Error;

    fn try_from(g: usize) -> Result<Self> {
        if Self::SUPPORTED.contains(&g) {
            Ok(Generations(g))
        } else {
            Err(Error::invalid(format!("generations must be one of 1,2,3,5,8, got {g}")))
        }
    }
}

impl From<Generations> for usize {
    fn from(g: Generations) -> usize {
        g.0
    }
}

impl fmt::Display for Generations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A principal commit and its nearest `requested_generations` ancestors,
/// nearest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationChain {
    pub principal: CommitSizeRecord,
    pub parents: Vec<CommitSizeRecord>,
    pub requested_generations: Generations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainRejection {
    MergeInWindow,
    InsufficientHistory,
    UnlabeledPrincipal,
    UnknownPrincipal,
}

impl fmt::Display for ChainRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainRejection::MergeInWindow => "merge-in-window",
            ChainRejection::InsufficientHistory => "insufficient-history",
            ChainRejection::UnlabeledPrincipal => "unlabeled-principal",
            ChainRejection::UnknownPrincipal => "unknown-principal",
        })
    }
}

/// Read-only lookup of mined records by SHA1.
#[derive(Debug, Clone, Default)]
pub struct RecordStore {
    records: HashMap<String, CommitSizeRecord>,
    labeled: Option<HashSet<String>>,
}

impl RecordStore {
    pub fn new(records: impl IntoIterator<Item = CommitSizeRecord>) -> Self {
        RecordStore {
            records: records.into_iter().map(|r| (r.sha1.clone(), r)).collect(),
            labeled: None,
        }
    }

    /// Restrict principals to the given SHA1s. Without this every stored
    /// commit may act as a principal.
    pub fn with_labeled(mut self, labeled: impl IntoIterator<Item = String>) -> Self {
        self.labeled = Some(labeled.into_iter().collect());
        self
    }

    pub fn get(&self, sha1: &str) -> Option<&CommitSizeRecord> {
        self.records.get(sha1)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn is_labeled(&self, sha1: &str) -> bool {
        self.labeled.as_ref().is_none_or(|l| l.contains(sha1))
    }
}

/// Collect the `g` nearest first-parent ancestors of `principal`. None of the
/// commits involved may be a merge.
pub fn build_generation_chain(
    store: &RecordStore,
    principal: &str,
    g: Generations,
) -> std::result::Result<GenerationChain, ChainRejection> {
    let head = store.get(principal).ok_or(ChainRejection::UnknownPrincipal)?;
    if !store.is_labeled(principal) {
        return Err(ChainRejection::UnlabeledPrincipal);
    }
    if head.is_merge {
        return Err(ChainRejection::MergeInWindow);
    }
    let mut parents = Vec::with_capacity(g.get());
    let mut current = head;
    while parents.len() < g.get() {
        let parent = current
            .parent_sha1
            .as_deref()
            .and_then(|sha| store.get(sha))
            .ok_or(ChainRejection::InsufficientHistory)?;
        if parent.is_merge {
            return Err(ChainRejection::MergeInWindow);
        }
        parents.push(parent.clone());
        current = parent;
    }
    Ok(GenerationChain {
        principal: head.clone(),
        parents,
        requested_generations: g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Linear history c0 <- c1 <- ... <- c{n-1}.
    fn linear(n: usize) -> Vec<CommitSizeRecord> {
        (0..n)
            .map(|i| {
                let parent = (i > 0).then(|| format!("c{}", i - 1));
                CommitSizeRecord::empty(format!("c{i}"), parent, "p", i as i64)
            })
            .collect()
    }

    fn g(n: usize) -> Generations {
        Generations::try_from(n).unwrap()
    }

    #[test]
    fn eight_generations() {
        let store = RecordStore::new(linear(10));
        let chain = build_generation_chain(&store, "c9", g(8)).unwrap();
        assert_eq!(chain.parents.len(), 8);
        let shas: Vec<_> = chain.parents.iter().map(|p| p.sha1.as_str()).collect();
        assert_eq!(shas, ["c8", "c7", "c6", "c5", "c4", "c3", "c2", "c1"]);
    }

    #[test]
    fn merge_inside_window_is_rejected() {
        let mut records = linear(6);
        records[3].is_merge = true; // generation 2 of c5
        let store = RecordStore::new(records);
        assert_eq!(
            build_generation_chain(&store, "c5", g(3)).unwrap_err(),
            ChainRejection::MergeInWindow
        );
        // the window of one generation stops before the merge
        assert!(build_generation_chain(&store, "c5", g(1)).is_ok());
    }

    #[test]
    fn root_has_no_history() {
        let store = RecordStore::new(linear(3));
        assert_eq!(
            build_generation_chain(&store, "c0", g(1)).unwrap_err(),
            ChainRejection::InsufficientHistory
        );
    }

    #[test]
    fn unlabeled_principal_is_rejected() {
        let store = RecordStore::new(linear(3)).with_labeled(["c1".to_string()]);
        assert_eq!(
            build_generation_chain(&store, "c2", g(1)).unwrap_err(),
            ChainRejection::UnlabeledPrincipal
        );
        assert!(build_generation_chain(&store, "c1", g(1)).is_ok());
    }

    #[test]
    fn shorter_chains_are_prefixes() {
        let store = RecordStore::new(linear(12));
        let long = build_generation_chain(&store, "c11", g(8)).unwrap();
        for short in Generations::all().filter(|x| x.get() < 8) {
            let c = build_generation_chain(&store, "c11", short).unwrap();
            assert_eq!(c.parents[..], long.parents[..short.get()]);
        }
    }

    #[test]
    fn only_fibonacci_depths() {
        assert!(Generations::try_from(4).is_err());
        assert!(Generations::try_from(0).is_err());
        assert_eq!(Generations::all().count(), 5);
    }
}
