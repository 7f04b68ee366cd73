#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use keypad_layout::keypad::{KeySlot, Layout, Symbol};
use keypad_layout::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load_corpus(name: &str) -> NormalizedCorpus {
    let raw = std::fs::read_to_string(data_path(name)).expect("corpus file");
    normalize(&raw, &CharsetPolicy::default()).expect("non-empty corpus")
}

pub fn corpus(text: &str) -> NormalizedCorpus {
    normalize(text, &CharsetPolicy::default()).unwrap()
}

pub fn layout_of(assign: &[(&str, (u8, u8, u8))]) -> Layout {
    Layout::from_placements(assign.iter().map(|&(t, (r, c, s))| (Symbol::new(t), KeySlot::new(r, c, s))))
}

/// Random full layout: 26 letters plus the given multigrams (blanks if fewer than 14).
pub fn random_full_layout<R: Rng>(multigrams: &[String], rng: &mut R) -> Layout {
    let mut slots = valid_slots();
    slots.shuffle(rng);
    let symbols = ('a'..='z').map(|c| c.to_string()).chain(multigrams.iter().cloned());
    Layout::from_placements(symbols.zip(slots).map(|(s, k)| (Symbol::new(s), k)))
}

pub fn random_word<R: Rng>(alphabet: &[char], min: usize, max: usize, rng: &mut R) -> String {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// Deprecation computed from scratch: a multigram of letters is dead when its
/// stroke is at least the sum of its letters' strokes.
pub fn naive_deprecated(layout: &Layout) -> Vec<String> {
    let stroke: HashMap<&str, u8> = layout.placements().iter().map(|p| (p.symbol.as_str(), p.slot.stroke)).collect();
    let mut out = Vec::new();
    for p in layout.placements() {
        let t = p.symbol.as_str();
        if t.chars().count() < 2 || !t.chars().all(|c| c.is_ascii_lowercase()) {
            continue;
        }
        let letters: Option<u32> = t.chars().map(|c| stroke.get(c.to_string().as_str()).map(|&s| s as u32)).sum();
        if let Some(sum) = letters {
            if p.slot.stroke as u32 >= sum {
                out.push(t.to_owned());
            }
        }
    }
    out.sort();
    out
}

/// Reference greedy segmenter: (symbol text, slot, starts a run) per press,
/// plus covered character count.
pub fn naive_segment(text: &str, layout: &Layout) -> (Vec<(String, KeySlot, bool)>, usize) {
    let dead = naive_deprecated(layout);
    let live: HashMap<String, KeySlot> = layout
        .placements()
        .iter()
        .filter(|p| !dead.contains(&p.symbol.as_str().to_owned()) && !p.symbol.as_str().is_empty())
        .map(|p| (p.symbol.as_str().to_owned(), p.slot))
        .collect();
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut covered = 0;
    let mut i = 0;
    let mut fresh = true;
    while i < chars.len() {
        let mut hit = None;
        for len in (1..=3).rev() {
            if i + len > chars.len() || chars[i..i + len].contains(&' ') {
                continue;
            }
            let piece: String = chars[i..i + len].iter().collect();
            if let Some(&slot) = live.get(&piece) {
                hit = Some((piece, slot, len));
                break;
            }
        }
        match hit {
            Some((piece, slot, len)) => {
                out.push((piece, slot, fresh));
                covered += len;
                fresh = false;
                i += len;
            }
            None => {
                fresh = true;
                i += 1;
            }
        }
    }
    (out, covered)
}

/// Fewest strokes over all segmentations of each run of coverable text.
/// Characters no live symbol covers are skipped exactly as the greedy pass does.
pub fn dp_min_strokes(text: &str, layout: &Layout) -> Option<u64> {
    let dead = naive_deprecated(layout);
    let live: HashMap<String, u8> = layout
        .placements()
        .iter()
        .filter(|p| !dead.contains(&p.symbol.as_str().to_owned()) && !p.symbol.as_str().is_empty())
        .map(|p| (p.symbol.as_str().to_owned(), p.slot.stroke))
        .collect();
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut best = vec![u64::MAX; n + 1];
    best[0] = 0;
    for i in 0..n {
        if best[i] == u64::MAX {
            continue;
        }
        let single = chars[i].to_string();
        if !live.contains_key(&single) {
            best[i + 1] = best[i + 1].min(best[i]);
        }
        for len in 1..=3 {
            if i + len > n {
                break;
            }
            let piece: String = chars[i..i + len].iter().collect();
            if let Some(&s) = live.get(&piece) {
                best[i + len] = best[i + len].min(best[i] + s as u64);
            }
        }
    }
    (best[n] != u64::MAX).then_some(best[n])
}

/// Full-matrix edit distance.
pub fn matrix_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

/// Rank-shift score computed by direct counting.
pub fn naive_rank_shift(members: &[String], text: &str) -> f64 {
    let letters: Vec<String> = ('a'..='z').map(|c| c.to_string()).collect();
    let mut raw: HashMap<String, u64> = letters.iter().map(|l| (l.clone(), 0)).collect();
    for c in text.chars() {
        if let Some(v) = raw.get_mut(&c.to_string()) {
            *v += 1;
        }
    }
    let mut all: Vec<String> = letters.clone();
    all.extend(members.iter().cloned());
    let mut absorbed: HashMap<String, u64> = all.iter().map(|s| (s.clone(), 0)).collect();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut step = 1;
        for len in (1..=3).rev() {
            if i + len > chars.len() {
                continue;
            }
            let piece: String = chars[i..i + len].iter().collect();
            if piece.contains(' ') {
                continue;
            }
            if let Some(v) = absorbed.get_mut(&piece) {
                *v += 1;
                step = len;
                break;
            }
        }
        i += step;
    }
    let rank = |counts: &HashMap<String, u64>, pool: &[String]| -> HashMap<String, usize> {
        let mut v: Vec<&String> = pool.iter().collect();
        v.sort_by(|a, b| counts[*b].cmp(&counts[*a]).then(a.cmp(b)));
        v.into_iter().enumerate().map(|(i, s)| (s.clone(), i + 1)).collect()
    };
    let r0 = rank(&raw, &letters);
    let r1 = rank(&absorbed, &all);
    letters.iter().map(|l| (r1[l] as f64 - r0[l] as f64).abs()).sum()
}
