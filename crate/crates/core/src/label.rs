use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Maintenance activity of a commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "a")]
    Adaptive,
    #[serde(rename = "c")]
    Corrective,
    #[serde(rename = "p")]
    Perfective,
}

impl Label {
    /// All labels in their fixed order `a < c < p`.
    pub const ALL: [Label; 3] = [Label::Adaptive, Label::Corrective, Label::Perfective];
    pub const COUNT: usize = 3;

    pub fn index(self) -> usize {
        match self {
            Label::Adaptive => 0,
            Label::Corrective => 1,
            Label::Perfective => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Adaptive => "a",
            Label::Corrective => "c",
            Label::Perfective => "p",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    /// Accepts the short codes and the full activity names, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "adaptive" => Ok(Label::Adaptive),
            "c" | "corrective" => Ok(Label::Corrective),
            "p" | "perfective" => Ok(Label::Perfective),
            other => Err(Error::invalid(format!("unknown label {other:?}"))),
        }
    }
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
