//! Line lexing and hunk/file aggregation.
//!
//! A changed line is classified as [`LineClass::Code`], [`LineClass::Comment`]
//! or [`LineClass::Whitespace`]. Gross counts include every changed line, net
//! counts include only code lines.

mod change;
mod lexer;
mod profile;

pub use change::{
    aggregate_file, analyze_hunk, rename_similarity, FileChange, FileKind, HunkChange,
    RenameResolution, RENAME_THRESHOLD,
};
pub use lexer::{classify_line, LexState, LineClass, LineLexer};
pub use profile::{LanguageProfile, ProfileSet};
