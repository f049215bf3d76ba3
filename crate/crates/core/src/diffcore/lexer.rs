use serde::{Deserialize, Serialize};

use super::profile::LanguageProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineClass {
    Code,
    Comment,
    Whitespace,
}

/// Block-comment state carried from one line to the next.
///
/// `open_block` holds the index of the profile's block pair whose close marker
/// is awaited; it is `Some` exactly when the lexer is inside a block comment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LexState {
    open_block: Option<usize>,
}

impl LexState {
    pub const OUTSIDE: LexState = LexState { open_block: None };

    pub fn inside(pair_index: usize) -> Self {
        LexState {
            open_block: Some(pair_index),
        }
    }

    pub fn in_block_comment(&self) -> bool {
        self.open_block.is_some()
    }

    pub fn open_marker_index(&self) -> Option<usize> {
        self.open_block
    }
}

enum Marker {
    Line,
    BlockOpen(usize),
}

/// Earliest comment marker in `text`; on equal positions the longer marker wins.
fn earliest_marker(text: &str, profile: &LanguageProfile) -> Option<(usize, usize, Marker)> {
    let lines = profile
        .line_markers
        .iter()
        .map(|m| (m.as_str(), Marker::Line));
    let blocks = profile
        .block_pairs
        .iter()
        .enumerate()
        .map(|(i, (open, _))| (open.as_str(), Marker::BlockOpen(i)));

    let mut best: Option<(usize, usize, Marker)> = None;
    for (marker, kind) in lines.chain(blocks) {
        if let Some(pos) = text.find(marker) {
            let better = match &best {
                None => true,
                Some((bp, blen, _)) => pos < *bp || (pos == *bp && marker.len() > *blen),
            };
            if better {
                best = Some((pos, marker.len(), kind));
            }
        }
    }
    best
}

/// Classify one changed line.
///
/// A line is `Code` as soon as any non-whitespace character lies outside
/// comment syntax, even if the line also carries a comment. Block comments
/// close at the first close marker. Comment markers inside string literals
/// are not recognised as such and start a comment.
pub fn classify_line(text: &str, profile: &LanguageProfile, state: LexState) -> (LineClass, LexState) {
    let mut rest = text;
    let mut state = state;
    let mut has_code = false;
    let mut has_comment = false;

    loop {
        if let Some(pair) = state.open_block {
            has_comment = true;
            let close = &profile.block_pairs[pair].1;
            match rest.find(close.as_str()) {
                Some(pos) => {
                    rest = &rest[pos + close.len()..];
                    state = LexState::OUTSIDE;
                }
                None => break,
            }
        } else {
            match earliest_marker(rest, profile) {
                Some((pos, len, marker)) => {
                    if !rest[..pos].trim().is_empty() {
                        has_code = true;
                    }
                    has_comment = true;
                    match marker {
                        Marker::Line => break,
                        Marker::BlockOpen(i) => {
                            rest = &rest[pos + len..];
                            state = LexState::inside(i);
                        }
                    }
                }
                None => {
                    if !rest.trim().is_empty() {
                        has_code = true;
                    }
                    break;
                }
            }
        }
    }

    let class = if has_code {
        LineClass::Code
    } else if has_comment {
        LineClass::Comment
    } else {
        LineClass::Whitespace
    };
    (class, state)
}

/// Classifies a run of lines, threading block-comment state between them.
#[derive(Debug, Clone)]
pub struct LineLexer<'p> {
    profile: &'p LanguageProfile,
    state: LexState,
}

impl<'p> LineLexer<'p> {
    pub fn new(profile: &'p LanguageProfile) -> Self {
        LineLexer {
            profile,
            state: LexState::OUTSIDE,
        }
    }

    pub fn classify(&mut self, line: &str) -> LineClass {
        let (class, next) = classify_line(line, self.profile, self.state);
        self.state = next;
        class
    }

    pub fn state(&self) -> LexState {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::ProfileSet;

    fn c() -> LanguageProfile {
        ProfileSet::default().by_name("c-family").unwrap().clone()
    }

    #[test]
    fn empty_line_is_whitespace() {
        assert_eq!(
            classify_line("", &c(), LexState::OUTSIDE),
            (LineClass::Whitespace, LexState::OUTSIDE)
        );
        assert_eq!(classify_line(" \t ", &c(), LexState::OUTSIDE).0, LineClass::Whitespace);
    }

    #[test]
    fn indented_line_comment() {
        assert_eq!(
            classify_line("    // TODO", &c(), LexState::OUTSIDE),
            (LineClass::Comment, LexState::OUTSIDE)
        );
    }

    #[test]
    fn code_then_unclosed_block_opens_state() {
        assert_eq!(
            classify_line("x += 1; /* inc", &c(), LexState::OUTSIDE),
            (LineClass::Code, LexState::inside(0))
        );
    }

    #[test]
    fn code_after_close_marker() {
        assert_eq!(
            classify_line("still commented */ y=2;", &c(), LexState::inside(0)),
            (LineClass::Code, LexState::OUTSIDE)
        );
    }

    #[test]
    fn blank_line_inside_block_is_comment() {
        assert_eq!(
            classify_line("", &c(), LexState::inside(0)),
            (LineClass::Comment, LexState::inside(0))
        );
    }

    #[test]
    fn close_is_non_greedy() {
        // the first */ ends the block, the remainder is code
        let (class, state) = classify_line("/* a */ b /* c */", &c(), LexState::OUTSIDE);
        assert_eq!((class, state), (LineClass::Code, LexState::OUTSIDE));
        let (class, _) = classify_line("/* a */ /* c */", &c(), LexState::OUTSIDE);
        assert_eq!(class, LineClass::Comment);
    }

    #[test]
    fn plain_profile_only_separates_whitespace() {
        let plain = LanguageProfile::plain();
        assert_eq!(classify_line("// x", &plain, LexState::OUTSIDE).0, LineClass::Code);
        assert_eq!(classify_line("  ", &plain, LexState::OUTSIDE).0, LineClass::Whitespace);
    }

    #[test]
    fn longer_marker_wins_on_same_position() {
        let p = LanguageProfile::new("lua", ["lua"], ["--"], [("--[[", "]]")]);
        let (class, state) = classify_line("--[[ start", &p, LexState::OUTSIDE);
        assert_eq!(class, LineClass::Comment);
        assert!(state.in_block_comment());
    }

    #[test]
    fn marker_inside_string_starts_comment() {
        let (class, state) = classify_line("s = \"/*\";", &c(), LexState::OUTSIDE);
        assert_eq!(class, LineClass::Code);
        assert!(state.in_block_comment());
    }
}
