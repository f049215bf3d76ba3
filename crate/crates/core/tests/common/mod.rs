#![allow(dead_code)]

use std::path::Path;

use git2::{Oid, Repository, Signature, Time};

/// Builds small git histories for tests with fixed author times.
pub struct FixtureRepo {
    pub repo: Repository,
    clock: i64,
}

impl FixtureRepo {
    pub fn init(dir: &Path) -> Self {
        let repo = Repository::init(dir).unwrap();
        FixtureRepo {
            repo,
            clock: 1_600_000_000,
        }
    }

    fn sig(&mut self) -> Signature<'static> {
        self.clock += 60;
        Signature::new("Fixture", "fixture@example.com", &Time::new(self.clock, 0)).unwrap()
    }

    pub fn write(&self, path: &str, content: &str) {
        let full = self.repo.workdir().unwrap().join(path);
        std::fs::create_dir_all(full.parent().unwrap()).unwrap();
        std::fs::write(full, content).unwrap();
    }

    pub fn write_bytes(&self, path: &str, content: &[u8]) {
        let full = self.repo.workdir().unwrap().join(path);
        std::fs::create_dir_all(full.parent().unwrap()).unwrap();
        std::fs::write(full, content).unwrap();
    }

    pub fn remove(&self, path: &str) {
        std::fs::remove_file(self.repo.workdir().unwrap().join(path)).unwrap();
    }

    /// Stage the whole work tree and commit on top of HEAD (plus `extra_parents`).
    pub fn commit_with_parents(&mut self, message: &str, extra_parents: &[Oid]) -> Oid {
        let sig = self.sig();
        let mut index = self.repo.index().unwrap();
        index
            .add_all(["*"].iter(), git2::IndexAddOption::DEFAULT, None)
            .unwrap();
        index.update_all(["*"].iter(), None).unwrap();
        index.write().unwrap();
        let tree_id = index.write_tree().unwrap();
        let tree = self.repo.find_tree(tree_id).unwrap();
        let mut parents = Vec::new();
        if let Ok(head) = self.repo.head() {
            parents.push(head.peel_to_commit().unwrap());
        }
        for p in extra_parents {
            parents.push(self.repo.find_commit(*p).unwrap());
        }
        let refs: Vec<_> = parents.iter().collect();
        self.repo
            .commit(Some("HEAD"), &sig, &sig, message, &tree, &refs)
            .unwrap()
    }

    pub fn commit(&mut self, message: &str) -> Oid {
        self.commit_with_parents(message, &[])
    }

    /// A commit not on HEAD's history, for use as a merge parent.
    pub fn side_commit(&mut self, message: &str) -> Oid {
        let sig = self.sig();
        let head = self.repo.head().unwrap().peel_to_commit().unwrap();
        let tree = head.tree().unwrap();
        self.repo
            .commit(None, &sig, &sig, message, &tree, &[&head])
            .unwrap()
    }
}

pub fn numbered_lines(prefix: &str, n: usize) -> String {
    (0..n).map(|i| format!("{prefix}_{i} = {i};\n")).collect()
}
