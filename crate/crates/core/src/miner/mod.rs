//! Repository mining: one [`CommitSizeRecord`] per commit, plus parent
//! generation chains.

mod chain;
mod record;
mod walk;

pub use chain::{build_generation_chain, ChainRejection, GenerationChain, Generations, RecordStore};
pub use record::{
    affected_files_ratio_net, commit_density, read_records_csv, write_records_csv, CommitSizeRecord,
    GrossNet, IDENTITY_COLUMNS, SIZE_FEATURE_COLUMNS,
};
pub use walk::{extract_commit, walk_repo, ExtractedCommit, WalkOptions, WalkOutput};
