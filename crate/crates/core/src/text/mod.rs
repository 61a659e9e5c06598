//! Title-word analysis: tokenization, document frequencies, new words,
//! co-words and phrase trends.

mod metrics;
mod stopwords;
mod tokenize;

pub use metrics::{
    cosine_pairs, doc_frequencies, new_coword_pairs, new_terms, phrase_trend, CoWordPair, NewCoWord, PhrasePoint,
    TermStats,
};
pub use stopwords::StopWordList;
pub use tokenize::{title_tokens, tokenize_title};

/// Default minimum cosine for co-word pairs (an angle of about 75.5°).
pub const DEFAULT_MIN_COSINE: f64 = 0.25;
/// Default minimum share of the later year's papers, in percent.
pub const DEFAULT_MIN_PERCENT: f64 = 1.0;
