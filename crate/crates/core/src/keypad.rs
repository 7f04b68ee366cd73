//! Keypad geometry and the layout chromosome.
//!
//! The grid is the usual 4x3 phone keypad. Keys `*` (4,1) and `#` (4,3) are
//! reserved, leaving ten keys with four strokes each: 40 slots.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::typing::FitnessWeights;

pub const ROWS: u8 = 4;
pub const COLS: u8 = 3;
pub const STROKES: u8 = 4;
pub const KEY_COUNT: usize = 10;
pub const SLOT_COUNT: usize = KEY_COUNT * STROKES as usize;
pub const LETTER_COUNT: usize = 26;

pub const LAYOUT_FILE_VERSION: u32 = 1;

/// A (row, column, stroke) cell of the keypad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeySlot {
    pub row: u8,
    pub col: u8,
    pub stroke: u8,
}

impl KeySlot {
    pub const fn new(row: u8, col: u8, stroke: u8) -> Self {
        Self { row, col, stroke }
    }

    /// In range and not on `*` or `#`.
    pub fn is_valid(&self) -> bool {
        (1..=ROWS).contains(&self.row)
            && (1..=COLS).contains(&self.col)
            && (1..=STROKES).contains(&self.stroke)
            && is_usable_key(self.row, self.col)
    }

    pub fn key(&self) -> Key {
        Key { row: self.row, col: self.col }
    }

    /// Dense index in `0..40` following [`valid_slots`] order. Only
    /// meaningful for valid slots.
    pub fn index(&self) -> usize {
        self.key().index() * STROKES as usize + (self.stroke - 1) as usize
    }

    pub fn from_index(i: usize) -> Self {
        let key = Key::from_index(i / STROKES as usize);
        Self::new(key.row, key.col, (i % STROKES as usize) as u8 + 1)
    }
}

impl fmt::Display for KeySlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.row, self.col, self.stroke)
    }
}

/// One physical key, ignoring stroke count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub row: u8,
    pub col: u8,
}

impl Key {
    pub fn index(&self) -> usize {
        // rows 1-3 hold three keys each, row 4 only the middle one
        if self.row < ROWS {
            ((self.row - 1) * COLS + self.col - 1) as usize
        } else {
            KEY_COUNT - 1
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i < 9 {
            Key { row: (i / 3) as u8 + 1, col: (i % 3) as u8 + 1 }
        } else {
            Key { row: 4, col: 2 }
        }
    }

    pub fn is_usable(&self) -> bool {
        is_usable_key(self.row, self.col)
    }
}

fn is_usable_key(row: u8, col: u8) -> bool {
    !(row == 4 && (col == 1 || col == 3))
}

/// The ten usable keys in row-major order.
pub fn usable_keys() -> impl Iterator<Item = Key> {
    (0..KEY_COUNT).map(Key::from_index)
}

/// All 40 placeable slots, key-major then stroke.
pub fn valid_slots() -> Vec<KeySlot> {
    (0..SLOT_COUNT).map(KeySlot::from_index).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HandClass {
    Left,
    Right,
    Center,
}

pub fn hand_of(slot: KeySlot) -> HandClass {
    match slot.col {
        1 => HandClass::Left,
        3 => HandClass::Right,
        _ => HandClass::Center,
    }
}

/// Euclidean distance between the keys of two slots; strokes are ignored.
pub fn key_distance(a: KeySlot, b: KeySlot) -> f64 {
    let dr = a.row as f64 - b.row as f64;
    let dc = a.col as f64 - b.col as f64;
    (dr * dr + dc * dc).sqrt()
}

/// A placeable symbol: a letter, or a bigram/trigram multigram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(text: impl Into<String>) -> Self {
        Symbol(text.into())
    }

    pub fn letter(c: char) -> Self {
        Symbol(c.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_letter(&self) -> bool {
        self.0.len() == 1 && self.0.as_bytes()[0].is_ascii_lowercase()
    }

    pub fn is_multigram(&self) -> bool {
        (2..=3).contains(&self.0.len())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

pub fn alphabet() -> impl Iterator<Item = Symbol> {
    ('a'..='z').map(Symbol::letter)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub corpus_digest: Option<String>,
    /// Seed of the run that produced the layout.
    pub seed: Option<u64>,
    pub metric: Option<String>,
    pub weights: Option<FitnessWeights>,
    pub fitness: Option<f64>,
}

/// A constraint a layout breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateSlot { slot: KeySlot, symbols: Vec<Symbol> },
    ForbiddenSlot { slot: KeySlot, symbol: Symbol },
    MissingLetter(char),
    DuplicateSymbol(Symbol),
    BadSymbol(Symbol),
    SymbolCount(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSlot { slot, symbols } => {
                let names: Vec<&str> = symbols.iter().map(Symbol::as_str).collect();
                write!(f, "slot {slot} holds {}", names.join(", "))
            }
            Violation::ForbiddenSlot { slot, symbol } => write!(f, "'{symbol}' placed on forbidden slot {slot}"),
            Violation::MissingLetter(c) => write!(f, "letter '{c}' is not placed"),
            Violation::DuplicateSymbol(s) => write!(f, "symbol '{s}' placed twice"),
            Violation::BadSymbol(s) => write!(f, "'{s}' is neither a letter nor a 2-3 character multigram"),
            Violation::SymbolCount(n) => {
                write!(f, "{n} symbols placed, expected {LETTER_COUNT} or {SLOT_COUNT}")
            }
        }
    }
}

/// Symbols mapped onto keypad slots.
///
/// Holds either 40 symbols (26 letters and 14 multigrams) covering every
/// slot, or just the 26 letters with 14 slots left vacant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    placements: Vec<Placement>,
    pub charset: String,
    pub weights_used: Option<FitnessWeights>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub symbol: Symbol,
    pub slot: KeySlot,
    /// Flag as stored in a layout file; see [`crate::typing::deprecated_set`]
    /// for the computed value.
    pub deprecated: bool,
}

impl Layout {
    /// Builds a layout without checking constraints; call [`Layout::validate`].
    pub fn from_placements<I>(placements: I) -> Self
    where
        I: IntoIterator<Item = (Symbol, KeySlot)>,
    {
        let mut placements: Vec<Placement> = placements
            .into_iter()
            .map(|(symbol, slot)| Placement { symbol, slot, deprecated: false })
            .collect();
        placements.sort_by(|a, b| (a.slot, &a.symbol).cmp(&(b.slot, &b.symbol)));
        Self { placements, charset: String::new(), weights_used: None, provenance: Provenance::default() }
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.placements.iter().map(|p| &p.symbol)
    }

    pub fn multigrams(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols().filter(|s| s.is_multigram())
    }

    pub fn slot_of(&self, symbol: &str) -> Option<KeySlot> {
        self.placements.iter().find(|p| p.symbol.as_str() == symbol).map(|p| p.slot)
    }

    /// Occupant of each of the 40 valid slots (`None` when vacant).
    pub fn occupants(&self) -> Vec<Option<&Symbol>> {
        let mut out = vec![None; SLOT_COUNT];
        for p in &self.placements {
            if p.slot.is_valid() {
                out[p.slot.index()] = Some(&p.symbol);
            }
        }
        out
    }

    pub fn set_deprecated_flags(&mut self, deprecated: &HashSet<Symbol>) {
        for p in &mut self.placements {
            p.deprecated = deprecated.contains(&p.symbol);
        }
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let n = self.placements.len();
        if n != LETTER_COUNT && n != SLOT_COUNT {
            violations.push(Violation::SymbolCount(n));
        }

        let mut by_slot: BTreeMap<KeySlot, Vec<Symbol>> = BTreeMap::new();
        let mut seen: HashSet<&Symbol> = HashSet::new();
        for p in &self.placements {
            if !p.slot.is_valid() {
                violations.push(Violation::ForbiddenSlot { slot: p.slot, symbol: p.symbol.clone() });
            }
            by_slot.entry(p.slot).or_default().push(p.symbol.clone());
            if !p.symbol.is_letter() && !p.symbol.is_multigram() {
                violations.push(Violation::BadSymbol(p.symbol.clone()));
            }
            if !seen.insert(&p.symbol) {
                violations.push(Violation::DuplicateSymbol(p.symbol.clone()));
            }
        }
        for (slot, symbols) in by_slot {
            if symbols.len() > 1 {
                violations.push(Violation::DuplicateSlot { slot, symbols });
            }
        }
        for c in 'a'..='z' {
            if !seen.contains(&Symbol::letter(c)) {
                violations.push(Violation::MissingLetter(c));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate().map_err(Error::InvalidLayout)?;
        let file = LayoutFile::from(self);
        let json = serde_json::to_string_pretty(&file).expect("layout file serializes");
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Malformed { reason, .. } => Error::Malformed { path: path.to_owned(), reason },
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate().map_err(Error::InvalidLayout)?;
        Ok(serde_json::to_string_pretty(&LayoutFile::from(self)).expect("layout file serializes"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LayoutFile = serde_json::from_str(text)
            .map_err(|e| Error::Malformed { path: Default::default(), reason: e.to_string() })?;
        if file.version != LAYOUT_FILE_VERSION {
            return Err(Error::Malformed {
                path: Default::default(),
                reason: format!("unsupported layout file version {}", file.version),
            });
        }
        let layout = Layout::from(file);
        layout.validate().map_err(Error::InvalidLayout)?;
        Ok(layout)
    }
}

/// On-disk layout document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub version: u32,
    pub charset: String,
    pub symbols: Vec<SymbolEntry>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolEntry {
    pub text: String,
    pub row: u8,
    pub col: u8,
    pub stroke: u8,
    pub deprecated: bool,
}

impl From<&Layout> for LayoutFile {
    fn from(layout: &Layout) -> Self {
        let mut provenance = layout.provenance.clone();
        if provenance.weights.is_none() {
            provenance.weights = layout.weights_used;
        }
        let mut symbols: Vec<SymbolEntry> = layout
            .placements
            .iter()
            .map(|p| SymbolEntry {
                text: p.symbol.as_str().to_owned(),
                row: p.slot.row,
                col: p.slot.col,
                stroke: p.slot.stroke,
                deprecated: p.deprecated,
            })
            .collect();
        symbols.sort_by_key(|e| (e.row, e.col, e.stroke));
        LayoutFile { version: LAYOUT_FILE_VERSION, charset: layout.charset.clone(), symbols, provenance }
    }
}

impl From<LayoutFile> for Layout {
    fn from(file: LayoutFile) -> Self {
        let mut placements: Vec<Placement> = file
            .symbols
            .into_iter()
            .map(|e| Placement {
                symbol: Symbol::new(e.text),
                slot: KeySlot::new(e.row, e.col, e.stroke),
                deprecated: e.deprecated,
            })
            .collect();
        placements.sort_by(|a, b| (a.slot, &a.symbol).cmp(&(b.slot, &b.symbol)));
        Layout {
            placements,
            charset: file.charset,
            weights_used: file.provenance.weights,
            provenance: file.provenance,
        }
    }
}

/// Standard ITU letter grouping: `abc` on key 2 through `wxyz` on key 9,
/// key 1 left empty.
pub fn abc_baseline() -> Layout {
    const GROUPS: [(u8, u8, &str); 8] = [
        (1, 2, "abc"),
        (1, 3, "def"),
        (2, 1, "ghi"),
        (2, 2, "jkl"),
        (2, 3, "mno"),
        (3, 1, "pqrs"),
        (3, 2, "tuv"),
        (3, 3, "wxyz"),
    ];
    Layout::from_placements(GROUPS.iter().flat_map(|&(row, col, letters)| {
        letters
            .chars()
            .enumerate()
            .map(move |(i, c)| (Symbol::letter(c), KeySlot::new(row, col, i as u8 + 1)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_slots() {
        let slots = valid_slots();
        assert_eq!(slots.len(), 40);
        assert!(slots.iter().all(KeySlot::is_valid));
        assert!(slots.contains(&KeySlot::new(4, 2, 4)));
        assert!(!slots.contains(&KeySlot::new(4, 1, 1)));
        assert!(!slots.iter().any(|s| s.row == 4 && s.col != 2));
        let unique: HashSet<_> = slots.iter().collect();
        assert_eq!(unique.len(), 40);
    }

    #[test]
    fn slot_index_roundtrip() {
        for (i, s) in valid_slots().into_iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(KeySlot::from_index(i), s);
        }
    }

    #[test]
    fn abc_layout() {
        let abc = abc_baseline();
        assert_eq!(abc.validate(), Ok(()));
        assert_eq!(abc.slot_of("g"), Some(KeySlot::new(2, 1, 1)));
        assert_eq!(abc.slot_of("f"), Some(KeySlot::new(1, 3, 3)));
        assert_eq!(abc.slot_of("s"), Some(KeySlot::new(3, 1, 4)));
        assert_eq!(abc.multigrams().count(), 0);
        assert!(abc.placements().iter().all(|p| p.slot.key() != Key { row: 1, col: 1 }));
    }

    #[test]
    fn duplicate_slot_detected() {
        let mut placements: Vec<_> = abc_baseline().placements().iter().map(|p| (p.symbol.clone(), p.slot)).collect();
        placements[0].1 = KeySlot::new(1, 2, 1);
        placements[1].1 = KeySlot::new(1, 2, 1);
        let errs = Layout::from_placements(placements).validate().unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::DuplicateSlot { slot, .. } if *slot == KeySlot::new(1, 2, 1))));
    }

    #[test]
    fn forbidden_slot_detected() {
        let mut placements: Vec<_> = abc_baseline().placements().iter().map(|p| (p.symbol.clone(), p.slot)).collect();
        placements[25].1 = KeySlot::new(4, 3, 2);
        let errs = Layout::from_placements(placements).validate().unwrap_err();
        assert!(errs.iter().any(|v| matches!(v, Violation::ForbiddenSlot { .. })));
    }

    #[test]
    fn missing_letter_and_count() {
        let placements: Vec<_> =
            abc_baseline().placements().iter().skip(1).map(|p| (p.symbol.clone(), p.slot)).collect();
        let errs = Layout::from_placements(placements).validate().unwrap_err();
        assert!(errs.contains(&Violation::MissingLetter('a')));
        assert!(errs.contains(&Violation::SymbolCount(25)));
    }

    #[test]
    fn hands() {
        assert_eq!(hand_of(KeySlot::new(2, 1, 3)), HandClass::Left);
        assert_eq!(hand_of(KeySlot::new(2, 3, 1)), HandClass::Right);
        assert_eq!(hand_of(KeySlot::new(4, 2, 2)), HandClass::Center);
    }

    #[test]
    fn distances() {
        let s = |r, c| KeySlot::new(r, c, 1);
        assert_eq!(key_distance(s(1, 1), KeySlot::new(1, 1, 4)), 0.0);
        assert!((key_distance(s(1, 1), s(2, 2)) - 2f64.sqrt()).abs() < 1e-12);
        assert!((key_distance(s(1, 1), s(4, 3)) - 13f64.sqrt()).abs() < 1e-12);
    }
}
