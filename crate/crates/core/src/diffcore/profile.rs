use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comment syntax for a family of file types.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageProfile {
    #[serde(default)]
    pub name: String,
    /// Lowercase file extensions without the leading dot.
    pub extensions: BTreeSet<String>,
    #[serde(default)]
    pub line_markers: Vec<String>,
    #[serde(default)]
    pub block_pairs: Vec<(String, String)>,
}

impl LanguageProfile {
    pub fn new<E, L, B>(name: &str, extensions: E, line_markers: L, block_pairs: B) -> Self
    where
        E: IntoIterator,
        E::Item: Into<String>,
        L: IntoIterator,
        L::Item: Into<String>,
        B: IntoIterator<Item = (&'static str, &'static str)>,
    {
        LanguageProfile {
            name: name.to_string(),
            extensions: extensions.into_iter().map(Into::into).collect(),
            line_markers: line_markers.into_iter().map(Into::into).collect(),
            block_pairs: block_pairs
                .into_iter()
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect(),
        }
    }

    /// Profile with no comment syntax: only whitespace and code are told apart.
    pub fn plain() -> Self {
        LanguageProfile {
            name: "plain".to_string(),
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let empty_line = self.line_markers.iter().any(|m| m.is_empty());
        let empty_block = self
            .block_pairs
            .iter()
            .any(|(o, c)| o.is_empty() || c.is_empty());
        if empty_line || empty_block {
            return Err(Error::Config(format!(
                "profile {:?} has an empty comment marker",
                self.name
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct ProfileDocument {
    profiles: Vec<LanguageProfile>,
}

/// A set of profiles indexed by file extension.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    profiles: Vec<LanguageProfile>,
    by_extension: HashMap<String, usize>,
    plain: LanguageProfile,
}

impl ProfileSet {
    pub fn new(profiles: Vec<LanguageProfile>) -> Result<Self> {
        let mut by_extension = HashMap::new();
        for (i, profile) in profiles.iter().enumerate() {
            profile.validate()?;
            for ext in &profile.extensions {
                let ext = ext.trim_start_matches('.').to_ascii_lowercase();
                if let Some(prev) = by_extension.insert(ext.clone(), i) {
                    return Err(Error::Config(format!(
                        "extension {ext:?} appears in profiles {:?} and {:?}",
                        profiles[prev].name, profile.name
                    )));
                }
            }
        }
        Ok(ProfileSet {
            profiles,
            by_extension,
            plain: LanguageProfile::plain(),
        })
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let doc: ProfileDocument = toml::from_str(s)?;
        Self::new(doc.profiles)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ProfileDocument =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("profile set: {e}")))?;
        Self::new(doc.profiles)
    }

    /// Load from a `.toml` or `.json` file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        }
    }

    pub fn profiles(&self) -> &[LanguageProfile] {
        &self.profiles
    }

    /// Profile for a repository path; files without a known extension get the
    /// plain profile.
    pub fn for_path(&self, path: &str) -> &LanguageProfile {
        let file_name = path.rsplit('/').next().unwrap_or(path);
        file_name
            .rsplit_once('.')
            .and_then(|(_, ext)| self.by_extension.get(&ext.to_ascii_lowercase()))
            .map(|&i| &self.profiles[i])
            .unwrap_or(&self.plain)
    }

    pub fn by_name(&self, name: &str) -> Option<&LanguageProfile> {
        self.profiles.iter().find(|p| p.name == name)
    }
}

impl Default for ProfileSet {
    /// C-family, `#`-scripting, SQL and XML/HTML comment syntaxes.
    fn default() -> Self {
        let c_family = LanguageProfile::new(
            "c-family",
            [
                "c", "h", "cc", "cpp", "cxx", "hpp", "hh", "hxx", "cs", "java", "js", "jsx", "mjs",
                "ts", "tsx", "go", "rs", "kt", "kts", "scala", "swift", "groovy", "gradle", "m",
                "mm", "dart", "php", "css", "scss", "less", "proto",
            ],
            ["//"],
            [("/*", "*/")],
        );
        let scripting = LanguageProfile::new(
            "scripting",
            [
                "py", "sh", "bash", "zsh", "rb", "pl", "pm", "r", "yml", "yaml", "toml", "cmake",
                "ps1", "properties", "conf", "cfg", "ini", "mk", "dockerfile", "tcl",
            ],
            ["#"],
            [],
        );
        let sql = LanguageProfile::new("sql", ["sql", "ddl", "psql"], ["--"], [("/*", "*/")]);
        let markup = LanguageProfile::new(
            "markup",
            ["xml", "html", "htm", "xhtml", "xsd", "xsl", "xslt", "svg", "xaml", "plist", "pom", "iml"],
            Vec::<String>::new(),
            [("<!--", "-->")],
        );
        ProfileSet::new(vec![c_family, scripting, sql, markup]).expect("default profiles are valid")
    }
}
