use std::collections::BTreeSet;

use super::StopWordList;

/// Lower-cased title tokens in order, split on every non-alphanumeric
/// character. Nothing is filtered.
pub fn title_tokens(title: &str) -> Vec<String> {
    title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn keep(token: &str, stop: &StopWordList) -> bool {
    token.chars().nth(1).is_some() && !token.chars().all(|c| c.is_ascii_digit()) && !stop.contains(token)
}

/// Distinct analysis tokens of a title: lower-cased, at least two
/// characters, not all digits, not stop words.
pub fn tokenize_title(title: &str, stop: &StopWordList) -> BTreeSet<String> {
    title_tokens(title).into_iter().filter(|t| keep(t, stop)).collect()
}
