use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

const DEFAULT_LIST: &str = include_str!("../../data/english.stop");

/// Case-insensitive stop-word set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWordList {
    words: HashSet<String>,
    source_path: String,
}

impl StopWordList {
    pub fn empty() -> Self {
        Self::default()
    }

    /// One token per line; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, source_path: impl Into<String>) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        StopWordList {
            words,
            source_path: source_path.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text, path.display().to_string()))
    }

    /// The built-in English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_LIST, "builtin:english")
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopWordList {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
            source_path: "inline".into(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        if token.chars().any(char::is_uppercase) {
            self.words.contains(&token.to_lowercase())
        } else {
            self.words.contains(token)
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }
}
