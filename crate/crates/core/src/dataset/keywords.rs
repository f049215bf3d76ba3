use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::{Column, ColumnRole, Dataset};
use crate::error::{Error, Result};

pub const KEYWORD_COLUMN_PREFIX: &str = "kw_";

/// Default vocabulary. Placeholder: replace it with the vocabulary of the
/// labeled dataset in use for exact reproduction.
const DEFAULT_KEYWORDS: [&str; 20] = [
    "add", "allow", "bug", "change", "error", "fail", "fix", "implement", "improve", "issue", "method",
    "new", "npe", "refactor", "remove", "report", "set", "support", "test", "use",
];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Lowercased words of a message, split at word boundaries.
pub fn tokenize(message: &str) -> impl Iterator<Item = String> + '_ {
    message
        .split(|c: char| !is_word_char(c))
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

/// Keyword set used both for keyword features and for compound-model routing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct KeywordVocabulary {
    words: Vec<String>,
}

#[derive(Deserialize)]
struct VocabularyDocument {
    keywords: Vec<String>,
}

impl KeywordVocabulary {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for w in words {
            let w = w.as_ref().trim().to_lowercase();
            if w.is_empty() || !w.chars().all(is_word_char) {
                return Err(Error::Config(format!("keyword {w:?} is not a single word")));
            }
            if !out.contains(&w) {
                out.push(w);
            }
        }
        if out.is_empty() {
            return Err(Error::Config("keyword vocabulary is empty".into()));
        }
        Ok(KeywordVocabulary { words: out })
    }

    /// Load from TOML/JSON (`keywords = [...]`) or a plain list, one word per line.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::new(toml::from_str::<VocabularyDocument>(&text)?.keywords),
            Some("json") => Self::new(
                serde_json::from_str::<VocabularyDocument>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
                    .keywords,
            ),
            _ => Self::new(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// True when at least one vocabulary word occurs in the message as a whole word.
    pub fn matches(&self, message: &str) -> bool {
        tokenize(message).any(|t| self.words.contains(&t))
    }

    /// 0/1 indicator per vocabulary word, in vocabulary order.
    pub fn indicators(&self, message: &str) -> Vec<f64> {
        let tokens: Vec<String> = tokenize(message).collect();
        self.words
            .iter()
            .map(|w| if tokens.contains(w) { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|w| format!("{KEYWORD_COLUMN_PREFIX}{w}"))
            .collect()
    }
}

impl Default for KeywordVocabulary {
    fn default() -> Self {
        KeywordVocabulary::new(DEFAULT_KEYWORDS).expect("default vocabulary is valid")
    }
}

impl TryFrom<Vec<String>> for KeywordVocabulary {
    type Error = Error;

    fn try_from(words: Vec<String>) -> Result<Self> {
        KeywordVocabulary::new(words)
    }
}

impl From<KeywordVocabulary> for Vec<String> {
    fn from(v: KeywordVocabulary) -> Self {
        v.words
    }
}

/// Append one binary `kw_<word>` column per vocabulary word, computed from
/// each row's message.
pub fn add_keyword_features(dataset: &Dataset, vocabulary: &KeywordVocabulary) -> Result<Dataset> {
    let names = vocabulary.column_names();
    if let Some(n) = names.iter().find(|n| dataset.column_index(n).is_some()) {
        return Err(Error::schema(format!("column {n:?} already exists")));
    }
    let rows = dataset
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let msg = r
                .message
                .as_deref()
                .ok_or_else(|| Error::invalid(format!("row {i} has no message text")))?;
            let mut row = r.clone();
            row.features.extend(vocabulary.indicators(msg));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = dataset
        .columns()
        .iter()
        .cloned()
        .chain(names.into_iter().map(|n| Column::new(n, ColumnRole::Keyword)))
        .collect();
    Dataset::new(columns, rows, format!("{} + keyword indicators", dataset.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabeledSample;

    #[test]
    fn whole_word_case_insensitive() {
        let v = KeywordVocabulary::new(["fix", "npe"]).unwrap();
        assert!(v.matches("Fix NPE in parser"));
        assert!(v.matches("parser: fix."));
        assert!(!v.matches("prefix handling"));
        assert!(!v.matches("fixed it"));
        assert!(!v.matches("update docs"));
        assert!(!v.matches("fix_later"));
    }

    #[test]
    fn rejects_bad_vocabularies() {
        assert!(KeywordVocabulary::new(Vec::<String>::new()).is_err());
        assert!(KeywordVocabulary::new(["two words"]).is_err());
        assert_eq!(KeywordVocabulary::new(["Fix", "fix"]).unwrap().words(), ["fix"]);
    }

    #[test]
    fn default_has_twenty_words() {
        assert_eq!(KeywordVocabulary::default().words().len(), 20);
    }

    #[test]
    fn indicator_columns() {
        let v = KeywordVocabulary::new(["fix", "add"]).unwrap();
        let mut row = LabeledSample::new(vec![], None);
        row.message = Some("Add test, then fix".into());
        let d = Dataset::new(vec![], vec![row], "t").unwrap();
        let out = add_keyword_features(&d, &v).unwrap();
        assert_eq!(out.feature_names(), ["kw_fix", "kw_add"]);
        assert_eq!(out.rows()[0].features, [1.0, 1.0]);

        let no_msg = Dataset::new(vec![], vec![LabeledSample::new(vec![], None)], "t").unwrap();
        assert!(add_keyword_features(&no_msg, &v).is_err());
    }

    #[test]
    fn loads_plain_and_toml() {
        let dir = tempfile::tempdir().unwrap();
        let txt = dir.path().join("v.txt");
        std::fs::write(&txt, "# vocabulary\nfix\n\nbug\n").unwrap();
        assert_eq!(KeywordVocabulary::load(&txt).unwrap().words(), ["fix", "bug"]);
        let toml = dir.path().join("v.toml");
        std::fs::write(&toml, "keywords = [\"add\"]\n").unwrap();
        assert_eq!(KeywordVocabulary::load(&toml).unwrap().words(), ["add"]);
    }
}
