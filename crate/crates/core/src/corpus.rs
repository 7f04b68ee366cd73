//! Text normalization and n-gram statistics.
//!
//! A corpus is folded to lowercase and reduced to the characters a keypad
//! layout can represent: the 26 letters, single spaces, and a configurable
//! set of special characters (punctuation used in emoticons such as `:)`).
//! N-grams are always counted inside whitespace-delimited runs, because the
//! space key lives outside the optimized grid.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Special characters kept by the default policy.
pub const DEFAULT_SPECIALS: &str = ".,?!':;)(-=^";

/// Number of multigram slots on a full layout.
pub const MULTIGRAM_SLOTS: usize = 14;

/// Default size of the candidate pool the multigram search draws from.
pub const DEFAULT_POOL_SIZE: usize = 50;

/// Which characters survive normalization besides `a-z` and space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharsetPolicy {
    pub specials: BTreeSet<char>,
    pub digits: bool,
}

impl Default for CharsetPolicy {
    fn default() -> Self {
        Self::with_specials(DEFAULT_SPECIALS)
    }
}

impl CharsetPolicy {
    pub fn with_specials(specials: &str) -> Self {
        Self {
            specials: specials.chars().filter(|c| c.is_ascii() && !c.is_ascii_whitespace()).collect(),
            digits: false,
        }
    }

    pub fn letters_only() -> Self {
        Self { specials: BTreeSet::new(), digits: false }
    }

    pub fn with_digits(mut self, digits: bool) -> Self {
        self.digits = digits;
        self
    }

    /// Whether `c` (already lowercased) is kept as a non-space character.
    pub fn admits(&self, c: char) -> bool {
        c.is_ascii_lowercase() || (self.digits && c.is_ascii_digit()) || self.specials.contains(&c)
    }

    /// Specials as a string, in sorted order; used as the `charset` field of
    /// layout files.
    pub fn specials_string(&self) -> String {
        let mut s: String = self.specials.iter().collect();
        if self.digits {
            s.push_str("0123456789");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedCorpus {
    text: String,
    source_digest: String,
    char_count_all: usize,
    char_count_layout: usize,
}

impl NormalizedCorpus {
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Hex SHA-256 of the raw input.
    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }

    /// Characters including spaces.
    pub fn char_count_all(&self) -> usize {
        self.char_count_all
    }

    /// Non-space characters.
    pub fn char_count_layout(&self) -> usize {
        self.char_count_layout
    }

    /// Iterator over maximal non-space runs.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.text.split(' ').filter(|w| !w.is_empty())
    }
}

/// Lowercase, drop characters outside the policy and collapse whitespace.
pub fn normalize(raw_text: &str, policy: &CharsetPolicy) -> Result<NormalizedCorpus> {
    let mut text = String::with_capacity(raw_text.len());
    let mut pending_space = false;
    for c in raw_text.chars().flat_map(char::to_lowercase) {
        if c.is_whitespace() {
            pending_space = !text.is_empty();
        } else if policy.admits(c) {
            if pending_space {
                text.push(' ');
                pending_space = false;
            }
            text.push(c);
        }
    }
    if text.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let char_count_all = text.len();
    let char_count_layout = text.bytes().filter(|&b| b != b' ').count();
    let source_digest = hex::encode(Sha256::digest(raw_text.as_bytes()));
    Ok(NormalizedCorpus { text, source_digest, char_count_all, char_count_layout })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramTable {
    pub order: usize,
    pub entries: BTreeMap<String, u64>,
}

impl NgramTable {
    pub fn get(&self, gram: &str) -> u64 {
        self.entries.get(gram).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Counts all length-`order` windows inside non-space runs.
///
/// Panics if `order` is not 1, 2 or 3.
pub fn ngram_counts(corpus: &NormalizedCorpus, order: usize) -> NgramTable {
    assert!((1..=3).contains(&order), "n-gram order must be 1, 2 or 3, got {order}");
    let mut entries = BTreeMap::new();
    for word in corpus.words() {
        let bytes = word.as_bytes();
        for window in bytes.windows(order) {
            // normalized text is ASCII
            let gram = std::str::from_utf8(window).expect("normalized corpus is ASCII");
            *entries.entry(gram.to_owned()).or_insert(0) += 1;
        }
    }
    NgramTable { order, entries }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultigramCandidate {
    pub text: String,
    pub count: u64,
    pub rank: usize,
}

/// Orders candidate multigrams: count descending, shorter first, then
/// lexicographic.
pub(crate) fn candidate_order(a: (&str, u64), b: (&str, u64)) -> std::cmp::Ordering {
    b.1.cmp(&a.1).then(a.0.len().cmp(&b.0.len())).then(a.0.cmp(b.0))
}

/// Every distinct bigram and trigram of the corpus, ranked.
pub fn rank_candidates(corpus: &NormalizedCorpus) -> Vec<MultigramCandidate> {
    let bi = ngram_counts(corpus, 2);
    let tri = ngram_counts(corpus, 3);
    let mut pooled: Vec<(String, u64)> = bi.entries.into_iter().chain(tri.entries).collect();
    pooled.sort_by(|a, b| candidate_order((&a.0, a.1), (&b.0, b.1)));
    pooled
        .into_iter()
        .enumerate()
        .map(|(i, (text, count))| MultigramCandidate { text, count, rank: i + 1 })
        .collect()
}

/// The `k` highest-ranked bigrams/trigrams.
///
/// Fails when the corpus cannot fill a full layout's multigram slots.
pub fn top_candidates(corpus: &NormalizedCorpus, k: usize) -> Result<Vec<MultigramCandidate>> {
    let mut all = rank_candidates(corpus);
    if all.len() < MULTIGRAM_SLOTS {
        return Err(Error::InsufficientCandidates { needed: MULTIGRAM_SLOTS, found: all.len() });
    }
    all.truncate(k);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(s: &str) -> NormalizedCorpus {
        normalize(s, &CharsetPolicy::default()).unwrap()
    }

    #[test]
    fn case_folding() {
        let c = corpus("Hello");
        assert_eq!(c.text(), "hello");
        assert_eq!(c.char_count_all(), 5);
    }

    #[test]
    fn whitespace_collapse() {
        assert_eq!(corpus("A  B").text(), "a b");
        assert_eq!(corpus("  a\n\n\tb  ").text(), "a b");
    }

    #[test]
    fn emoticons_survive() {
        let policy = CharsetPolicy::with_specials(":)");
        let c = normalize("btw :)", &policy).unwrap();
        assert_eq!(c.text(), "btw :)");
        assert_eq!(c.char_count_layout(), 5);
    }

    #[test]
    fn drops_outside_charset() {
        assert_eq!(corpus("caf\u{e9} 42 x@y").text(), "caf xy");
        let digits = CharsetPolicy::default().with_digits(true);
        assert_eq!(normalize("<:33", &digits).unwrap().text(), ":33");
    }

    #[test]
    fn empty_after_filtering() {
        assert!(matches!(normalize("  \u{3b1}\u{3b2} 123 ", &CharsetPolicy::default()), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn overlapping_windows() {
        let t = ngram_counts(&corpus("aaa"), 2);
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get("aa"), 2);
    }

    #[test]
    fn no_cross_space_ngrams() {
        let t = ngram_counts(&corpus("ab ab"), 2);
        assert_eq!(t.get("ab"), 2);
        assert_eq!(t.get("b "), 0);
        assert_eq!(t.get(" a"), 0);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn unigram_hand_count() {
        let t = ngram_counts(&corpus("this is"), 1);
        let expect: BTreeMap<String, u64> =
            [("t", 1), ("h", 1), ("i", 2), ("s", 2)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(t.entries, expect);
    }

    #[test]
    fn candidate_tie_break() {
        let ranked = rank_candidates(&corpus("ththth"));
        let got: Vec<(&str, u64, usize)> = ranked.iter().map(|c| (c.text.as_str(), c.count, c.rank)).collect();
        assert_eq!(got, vec![("th", 3, 1), ("ht", 2, 2), ("hth", 2, 3), ("tht", 2, 4)]);
    }

    #[test]
    fn insufficient_candidates() {
        assert!(matches!(
            top_candidates(&corpus("a"), 50),
            Err(Error::InsufficientCandidates { needed: 14, found: 0 })
        ));
        assert!(top_candidates(&corpus("ththth"), 3).is_err());
    }

    #[test]
    fn top_k_size_bound() {
        let c = corpus("the quick brown fox jumps over the lazy dog while the cat sleeps");
        let all = rank_candidates(&c).len();
        assert_eq!(top_candidates(&c, 50).unwrap().len(), all.min(50));
        assert_eq!(top_candidates(&c, 14).unwrap().len(), 14);
    }
}
