//! Typing cost model.
//!
//! A corpus is typed on a layout by greedy longest-match segmentation over
//! the layout's live symbols (letters plus non-deprecated multigrams).
//! Characters with no symbol, spaces included, are skipped and break
//! adjacency: the next symbol starts a fresh run.
//!
//! Four per-character rates are derived from the resulting key presses:
//!
//! * `f1` strokes per covered character,
//! * `f2` same-key transitions per character,
//! * `f3` same-hand transitions per character, where the middle column is
//!   typed by whichever thumb is free (see [`HandParity`]),
//! * `f4` thumb travel distance per character.
//!
//! The two-thumb cost is `alpha*f1 + beta*f2 + gamma*f3`; the single-thumb
//! cost of Moradi and Nickabadi is `alpha*f1 + beta*f2 + gamma*f4`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::NormalizedCorpus;
use crate::error::{Error, Result};
use crate::keypad::{hand_of, key_distance, HandClass, KeySlot, Layout, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    TwoThumb,
    Moradi,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::TwoThumb => "two-thumb",
            Metric::Moradi => "moradi",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "two-thumb" | "twothumb" | "two_thumb" => Ok(Metric::TwoThumb),
            "moradi" => Ok(Metric::Moradi),
            other => Err(format!("unknown metric '{other}' (expected two-thumb or moradi)")),
        }
    }
}

/// Weights of the cost terms. For [`Metric::Moradi`], `gamma` weighs the
/// distance term instead of the same-hand term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub variant: Metric,
}

impl FitnessWeights {
    pub const fn two_thumb() -> Self {
        Self { alpha: 1.0, beta: 1.5, gamma: 0.25, variant: Metric::TwoThumb }
    }

    pub const fn moradi() -> Self {
        Self { alpha: 0.7, beta: 3.0, gamma: 1.0, variant: Metric::Moradi }
    }

    pub const fn for_metric(metric: Metric) -> Self {
        match metric {
            Metric::TwoThumb => Self::two_thumb(),
            Metric::Moradi => Self::moradi(),
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self { alpha: self.alpha * c, beta: self.beta * c, gamma: self.gamma * c, ..self }
    }

    pub fn is_valid(&self) -> bool {
        [self.alpha, self.beta, self.gamma].iter().all(|w| w.is_finite() && *w >= 0.0)
    }
}

impl Default for FitnessWeights {
    fn default() -> Self {
        Self::two_thumb()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessBreakdown {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub total: f64,
    pub metric: Metric,
}

impl FitnessBreakdown {
    /// Header matching [`FitnessBreakdown::table_row`].
    pub const TABLE_HEADER: &'static str = "Overall Fitness | Mean Strokes | Same Key | Same Hand";

    pub fn table_row(&self) -> String {
        format!("{:.5} | {:.5} | {:.5} | {:.5}", self.total, self.f1, self.f2, self.f3)
    }
}

/// One key press produced by segmentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentItem {
    pub symbol: Symbol,
    pub slot: KeySlot,
    /// Byte offset of the symbol in the corpus text.
    pub start: usize,
    /// First symbol after the start of text or after a skipped character.
    pub run_start: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentationResult {
    pub items: Vec<SegmentItem>,
    /// Characters covered by symbols: the fitness denominator.
    pub covered_chars: usize,
    /// Skipped characters with their byte offsets; each resets adjacency.
    pub breaks: Vec<(usize, char)>,
}

impl SegmentationResult {
    /// Rebuilds the segmented text from symbols and skipped characters.
    pub fn reassemble(&self) -> String {
        let mut parts: Vec<(usize, &str)> = self.items.iter().map(|i| (i.start, i.symbol.as_str())).collect();
        let skipped: Vec<(usize, String)> = self.breaks.iter().map(|&(p, c)| (p, c.to_string())).collect();
        parts.extend(skipped.iter().map(|(p, s)| (*p, s.as_str())));
        parts.sort_by_key(|&(p, _)| p);
        parts.into_iter().map(|(_, s)| s).collect()
    }

    fn tally(&self) -> Tally {
        Tally::over(self.items.iter().map(|i| (i.slot, i.symbol.len(), i.run_start)))
    }
}

/// Tracks the middle-column parity rule across a run of key presses.
///
/// Consecutive non-center presses with `k` center presses between them are
/// penalized when they use the same hand and `k` is even, or different hands
/// and `k` is odd: in both cases strict alternation is impossible.
#[derive(Debug, Clone, Default)]
pub struct HandParity {
    last: Option<HandClass>,
    centers: usize,
}

impl HandParity {
    pub fn reset(&mut self) {
        self.last = None;
        self.centers = 0;
    }

    /// Feeds one press; returns whether it incurs a same-hand penalty.
    pub fn push(&mut self, hand: HandClass) -> bool {
        if hand == HandClass::Center {
            if self.last.is_some() {
                self.centers += 1;
            }
            return false;
        }
        let penalty = match self.last {
            Some(prev) => (prev == hand) == (self.centers % 2 == 0),
            None => false,
        };
        self.last = Some(hand);
        self.centers = 0;
        penalty
    }
}

/// Same-hand penalty count for one uninterrupted sequence of hands.
pub fn same_hand_count<I: IntoIterator<Item = HandClass>>(hands: I) -> u64 {
    let mut parity = HandParity::default();
    hands.into_iter().filter(|&h| parity.push(h)).count() as u64
}

#[derive(Debug, Clone, Default)]
struct Tally {
    strokes: u64,
    same_key: u64,
    same_hand: u64,
    distance: f64,
    covered: u64,
}

impl Tally {
    fn over<I: Iterator<Item = (KeySlot, usize, bool)>>(presses: I) -> Self {
        let mut t = Tally::default();
        let mut parity = HandParity::default();
        let mut prev: Option<KeySlot> = None;
        for (slot, len, run_start) in presses {
            t.strokes += slot.stroke as u64;
            t.covered += len as u64;
            if run_start {
                parity.reset();
                prev = None;
            }
            if let Some(p) = prev {
                if p.key() == slot.key() {
                    t.same_key += 1;
                }
                t.distance += key_distance(p, slot);
            }
            if parity.push(hand_of(slot)) {
                t.same_hand += 1;
            }
            prev = Some(slot);
        }
        t
    }

    fn rates(&self) -> Result<[f64; 4]> {
        if self.covered == 0 {
            return Err(Error::EmptySegmentation);
        }
        let c = self.covered as f64;
        Ok([self.strokes as f64 / c, self.same_key as f64 / c, self.same_hand as f64 / c, self.distance / c])
    }

    fn breakdown(&self, weights: &FitnessWeights) -> Result<FitnessBreakdown> {
        let [f1, f2, f3, f4] = self.rates()?;
        let total = match weights.variant {
            Metric::TwoThumb => weights.alpha * f1 + weights.beta * f2 + weights.gamma * f3,
            Metric::Moradi => weights.alpha * f1 + weights.beta * f2 + weights.gamma * f4,
        };
        Ok(FitnessBreakdown { f1, f2, f3, f4, total, metric: weights.variant })
    }
}

const NO_MATCH: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token {
    pub sym: u8,
    pub run_start: bool,
    pub start: u32,
}

/// For every corpus position, the symbol (if any) of each length 1-3 that
/// starts there.
#[derive(Debug, Clone)]
pub(crate) struct MatchTable {
    text: Vec<u8>,
    matches: Vec<[u8; 3]>,
}

impl MatchTable {
    pub fn new(text: &str, symbols: &[Symbol]) -> Self {
        assert!(symbols.len() < NO_MATCH as usize && symbols.len() <= 64);
        let lookup: HashMap<&[u8], u8> = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| (1..=3).contains(&s.len()))
            .map(|(i, s)| (s.as_str().as_bytes(), i as u8))
            .collect();
        let text = text.as_bytes().to_vec();
        let matches = (0..text.len())
            .map(|i| {
                let mut m = [NO_MATCH; 3];
                for (len, slot) in m.iter_mut().enumerate() {
                    if let Some(window) = text.get(i..i + len + 1) {
                        if let Some(&idx) = lookup.get(window) {
                            *slot = idx;
                        }
                    }
                }
                m
            })
            .collect();
        Self { text, matches }
    }

    /// Greedy longest match, left to right, over symbols whose bit is set in
    /// `live`.
    pub fn segment(&self, live: u64, mut skipped: Option<&mut Vec<(usize, char)>>) -> Vec<Token> {
        let mut tokens = Vec::with_capacity(self.text.len());
        let mut i = 0;
        let mut run_start = true;
        while i < self.text.len() {
            let m = &self.matches[i];
            let hit = (0..3).rev().find(|&l| m[l] != NO_MATCH && live & (1u64 << m[l]) != 0);
            match hit {
                Some(l) => {
                    tokens.push(Token { sym: m[l], run_start, start: i as u32 });
                    run_start = false;
                    i += l + 1;
                }
                None => {
                    if let Some(s) = skipped.as_deref_mut() {
                        s.push((i, self.text[i] as char));
                    }
                    run_start = true;
                    i += 1;
                }
            }
        }
        tokens
    }
}

/// Liveness of each symbol given its slot: letters always, multigrams only
/// when cheaper than typing their letters one by one.
#[derive(Debug, Clone)]
pub(crate) struct Deprecation {
    /// For each multigram, indices of its letters (None when some character
    /// has no symbol of its own, so the multigram is the only way to type it).
    constituents: Vec<Option<Vec<usize>>>,
    is_multigram: Vec<bool>,
    is_blank: Vec<bool>,
}

impl Deprecation {
    pub fn new(symbols: &[Symbol]) -> Self {
        let index: HashMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let constituents = symbols
            .iter()
            .map(|s| {
                if !s.is_multigram() {
                    return None;
                }
                s.as_str()
                    .chars()
                    .map(|c| index.get(c.to_string().as_str()).copied().filter(|&i| symbols[i].is_letter()))
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        Self {
            constituents,
            is_multigram: symbols.iter().map(Symbol::is_multigram).collect(),
            is_blank: symbols.iter().map(Symbol::is_empty).collect(),
        }
    }

    pub fn is_deprecated(&self, idx: usize, slots: &[KeySlot]) -> bool {
        if !self.is_multigram[idx] {
            return false;
        }
        match &self.constituents[idx] {
            Some(letters) => {
                let direct: u32 = letters.iter().map(|&l| slots[l].stroke as u32).sum();
                slots[idx].stroke as u32 >= direct
            }
            None => false,
        }
    }

    pub fn live_mask(&self, slots: &[KeySlot]) -> u64 {
        (0..slots.len())
            .filter(|&i| !self.is_blank[i] && !self.is_deprecated(i, slots))
            .fold(0u64, |m, i| m | (1u64 << i))
    }
}

/// Reusable evaluator over a fixed corpus and symbol list; only the slot
/// assignment varies between calls. Segmentations are cached per set of
/// live symbols.
#[derive(Debug, Clone)]
pub struct Evaluator {
    table: MatchTable,
    deprecation: Deprecation,
    lens: Vec<usize>,
    cache: HashMap<u64, Vec<Token>>,
}

const CACHE_LIMIT: usize = 4096;

impl Evaluator {
    pub fn new(corpus: &NormalizedCorpus, symbols: &[Symbol]) -> Self {
        Self {
            table: MatchTable::new(corpus.text(), symbols),
            deprecation: Deprecation::new(symbols),
            lens: symbols.iter().map(Symbol::len).collect(),
            cache: HashMap::new(),
        }
    }

    /// `slots[i]` is the slot of the i-th symbol passed to [`Evaluator::new`].
    pub fn evaluate(&mut self, slots: &[KeySlot], weights: &FitnessWeights) -> Result<FitnessBreakdown> {
        debug_assert_eq!(slots.len(), self.lens.len());
        let mask = self.deprecation.live_mask(slots);
        if self.cache.len() >= CACHE_LIMIT && !self.cache.contains_key(&mask) {
            self.cache.clear();
        }
        let table = &self.table;
        let tokens = self.cache.entry(mask).or_insert_with(|| table.segment(mask, None));
        let lens = &self.lens;
        Tally::over(tokens.iter().map(|t| (slots[t.sym as usize], lens[t.sym as usize], t.run_start)))
            .breakdown(weights)
    }
}

/// Multigrams that cost at least as many strokes as typing their letters.
pub fn deprecated_set(layout: &Layout) -> HashSet<Symbol> {
    let symbols: Vec<Symbol> = layout.symbols().cloned().collect();
    let slots: Vec<KeySlot> = layout.placements().iter().map(|p| p.slot).collect();
    let dep = Deprecation::new(&symbols);
    symbols.into_iter().enumerate().filter(|(i, _)| dep.is_deprecated(*i, &slots)).map(|(_, s)| s).collect()
}

pub fn segment(corpus: &NormalizedCorpus, layout: &Layout) -> SegmentationResult {
    let symbols: Vec<Symbol> = layout.symbols().cloned().collect();
    let slots: Vec<KeySlot> = layout.placements().iter().map(|p| p.slot).collect();
    let table = MatchTable::new(corpus.text(), &symbols);
    let live = Deprecation::new(&symbols).live_mask(&slots);
    let mut breaks = Vec::new();
    let tokens = table.segment(live, Some(&mut breaks));
    let items: Vec<SegmentItem> = tokens
        .iter()
        .map(|t| SegmentItem {
            symbol: symbols[t.sym as usize].clone(),
            slot: slots[t.sym as usize],
            start: t.start as usize,
            run_start: t.run_start,
        })
        .collect();
    let covered_chars = items.iter().map(|i| i.symbol.len()).sum();
    SegmentationResult { items, covered_chars, breaks }
}

pub fn f1_strokes(seg: &SegmentationResult) -> Result<f64> {
    Ok(seg.tally().rates()?[0])
}

pub fn f2_same_key(seg: &SegmentationResult) -> Result<f64> {
    Ok(seg.tally().rates()?[1])
}

pub fn f3_same_hand(seg: &SegmentationResult) -> Result<f64> {
    Ok(seg.tally().rates()?[2])
}

pub fn f4_distance(seg: &SegmentationResult) -> Result<f64> {
    Ok(seg.tally().rates()?[3])
}

/// Scores a segmentation; the same arithmetic [`evaluate`] uses.
pub fn breakdown(seg: &SegmentationResult, weights: &FitnessWeights) -> Result<FitnessBreakdown> {
    seg.tally().breakdown(weights)
}

pub fn evaluate(layout: &Layout, corpus: &NormalizedCorpus, weights: &FitnessWeights) -> Result<FitnessBreakdown> {
    let symbols: Vec<Symbol> = layout.symbols().cloned().collect();
    let slots: Vec<KeySlot> = layout.placements().iter().map(|p| p.slot).collect();
    Evaluator::new(corpus, &symbols).evaluate(&slots, weights)
}

/// Greedy segmentation over an explicit symbol list with every symbol live;
/// returns occurrences per symbol. Used by the multigram search, which runs
/// before any layout exists.
pub(crate) fn symbol_counts(corpus: &NormalizedCorpus, symbols: &[Symbol]) -> Vec<u64> {
    let table = MatchTable::new(corpus.text(), symbols);
    let live = if symbols.len() == 64 { u64::MAX } else { (1u64 << symbols.len()) - 1 };
    let mut counts = vec![0u64; symbols.len()];
    for t in table.segment(live, None) {
        counts[t.sym as usize] += 1;
    }
    counts
}
