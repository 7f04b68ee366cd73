//! Selection of the multigrams that share the keypad with the letters.
//!
//! A small steady-state GA picks `set_size` bigrams/trigrams from the most
//! frequent candidates of the corpus. Its operators are frequency-biased:
//! initialization samples by roulette over candidate counts, crossover keeps
//! the parents' common members and fills up in order of frequency, and a
//! low-rate mutation swaps members for n-grams from outside the pool.
//!
//! Fitness is the rank shift of the letters: how far the 26 letters move in a
//! frequency ranking once multigram occurrences are absorbed. Large shifts
//! mean the multigrams will claim good key positions.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{ngram_counts, rank_candidates, MultigramCandidate, NormalizedCorpus, DEFAULT_POOL_SIZE, MULTIGRAM_SLOTS};
use crate::error::{Error, Result};
use crate::keypad::{alphabet, Symbol};
use crate::typing::symbol_counts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultigramSet {
    /// Sorted, distinct.
    pub members: Vec<String>,
    pub fitness: f64,
}

impl MultigramSet {
    fn unscored(mut members: Vec<String>) -> Self {
        members.sort();
        members.dedup();
        Self { members, fitness: f64::NAN }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.members.iter().map(|m| Symbol::new(m.as_str()))
    }

    pub fn contains(&self, gram: &str) -> bool {
        self.members.binary_search_by(|m| m.as_str().cmp(gram)).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub pool_size: usize,
    pub set_size: usize,
    pub population: usize,
    pub iterations: usize,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for SelectionParams {
    fn default() -> Self {
        Self {
            pool_size: DEFAULT_POOL_SIZE,
            set_size: MULTIGRAM_SLOTS,
            population: 50,
            iterations: 1000,
            mutation_rate: 0.01,
            seed: 0,
        }
    }
}

impl SelectionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_owned()));
        if self.set_size == 0 || self.pool_size == 0 || self.population == 0 {
            return bad("pool size, set size and population must be positive");
        }
        if self.set_size > self.pool_size {
            return bad("set size exceeds pool size");
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("mutation rate must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Letter ranks by descending count, ties in lexicographic order; 1-based.
fn ranks_of_letters(counts: &[(String, u64)]) -> HashMap<String, usize> {
    let mut sorted: Vec<&(String, u64)> = counts.iter().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    sorted
        .iter()
        .enumerate()
        .filter(|(_, (s, _))| s.len() == 1)
        .map(|(i, (s, _))| (s.clone(), i + 1))
        .collect()
}

/// Sum over the 26 letters of `|rank among all symbols after absorbing the
/// multigrams - rank among letters by raw count|`.
///
/// Segmentation is greedy longest-match over the letters and `members`, all
/// live.
pub fn rank_shift_fitness(members: &[String], corpus: &NormalizedCorpus) -> f64 {
    let unigrams = ngram_counts(corpus, 1);
    let raw: Vec<(String, u64)> = alphabet().map(|l| (l.as_str().to_owned(), unigrams.get(l.as_str()))).collect();
    let before = ranks_of_letters(&raw);

    let symbols: Vec<Symbol> = alphabet().chain(members.iter().map(|m| Symbol::new(m.as_str()))).collect();
    let counts = symbol_counts(corpus, &symbols);
    let absorbed: Vec<(String, u64)> =
        symbols.iter().zip(counts).map(|(s, c)| (s.as_str().to_owned(), c)).collect();
    let after = ranks_of_letters(&absorbed);

    before.iter().map(|(l, &r0)| (after[l] as f64 - r0 as f64).abs()).sum()
}

/// Draws one set of `set_size` members by roulette over candidate counts,
/// without replacement.
fn roulette_set<R: Rng>(candidates: &[MultigramCandidate], set_size: usize, rng: &mut R) -> Result<Vec<String>> {
    let mut remaining: Vec<&MultigramCandidate> = candidates.iter().filter(|c| c.count > 0).collect();
    if remaining.len() < set_size {
        return Err(Error::InsufficientCandidates { needed: set_size, found: remaining.len() });
    }
    let mut chosen = Vec::with_capacity(set_size);
    for _ in 0..set_size {
        let total: u64 = remaining.iter().map(|c| c.count).sum();
        let mut ticket = rng.gen_range(0..total);
        let idx = remaining
            .iter()
            .position(|c| {
                if ticket < c.count {
                    true
                } else {
                    ticket -= c.count;
                    false
                }
            })
            .expect("ticket below total mass");
        chosen.push(remaining.swap_remove(idx).text.clone());
    }
    Ok(chosen)
}

/// Initial population, each individual sampled proportionally to frequency.
pub fn eager_init<R: Rng>(
    candidates: &[MultigramCandidate],
    params: &SelectionParams,
    rng: &mut R,
) -> Result<Vec<MultigramSet>> {
    (0..params.population)
        .map(|_| roulette_set(candidates, params.set_size, rng).map(MultigramSet::unscored))
        .collect()
}

/// Keeps the common members, then fills from the symmetric difference in
/// descending corpus frequency (ties lexicographic).
pub fn eager_crossover(p1: &MultigramSet, p2: &MultigramSet, frequency: &HashMap<String, u64>) -> MultigramSet {
    let a: BTreeSet<&String> = p1.members.iter().collect();
    let b: BTreeSet<&String> = p2.members.iter().collect();
    let set_size = p1.members.len();
    let mut child: Vec<String> = a.intersection(&b).map(|s| (*s).clone()).collect();
    let mut rest: Vec<&String> = a.symmetric_difference(&b).copied().collect();
    let freq = |s: &String| frequency.get(s).copied().unwrap_or(0);
    rest.sort_by(|x, y| freq(y).cmp(&freq(x)).then_with(|| x.cmp(y)));
    child.extend(rest.into_iter().take(set_size.saturating_sub(child.len())).cloned());
    MultigramSet::unscored(child)
}

/// Replaces each member with probability `rate` by a uniformly drawn n-gram
/// from `outside` that is not already in the set.
pub fn candidate_mutation<R: Rng>(s: &MultigramSet, outside: &[String], rate: f64, rng: &mut R) -> MultigramSet {
    let mut members = s.members.clone();
    for i in 0..members.len() {
        if !rng.gen_bool(rate) {
            continue;
        }
        let available: Vec<&String> = outside.iter().filter(|o| !members.contains(o)).collect();
        if let Some(pick) = available.choose(rng) {
            members[i] = (*pick).clone();
        }
    }
    if members == s.members {
        return s.clone();
    }
    MultigramSet::unscored(members)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionRun {
    pub best: MultigramSet,
    /// Best fitness after each iteration.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

/// Runs the selection GA and returns the best set.
pub fn select_multigrams(corpus: &NormalizedCorpus, params: &SelectionParams) -> Result<MultigramSet> {
    run_selection(corpus, params).map(|r| r.best)
}

pub fn run_selection(corpus: &NormalizedCorpus, params: &SelectionParams) -> Result<SelectionRun> {
    params.validate()?;
    let ranked = rank_candidates(corpus);
    if ranked.len() < params.set_size {
        return Err(Error::InsufficientCandidates { needed: params.set_size, found: ranked.len() });
    }
    let pool = &ranked[..params.pool_size.min(ranked.len())];
    let outside: Vec<String> = ranked[pool.len()..].iter().map(|c| c.text.clone()).collect();
    let frequency: HashMap<String, u64> = ranked.iter().map(|c| (c.text.clone(), c.count)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut cache: HashMap<Vec<String>, f64> = HashMap::new();
    let mut evaluations = 0;
    let mut score = |set: &mut MultigramSet| {
        set.fitness = *cache.entry(set.members.clone()).or_insert_with(|| {
            evaluations += 1;
            rank_shift_fitness(&set.members, corpus)
        });
    };

    let mut population = eager_init(pool, params, &mut rng)?;
    population.iter_mut().for_each(&mut score);
    let best_of = |pop: &[MultigramSet]| {
        pop.iter()
            .max_by(|a, b| a.fitness.total_cmp(&b.fitness).then_with(|| b.members.cmp(&a.members)))
            .cloned()
            .expect("non-empty population")
    };
    let mut best = best_of(&population);
    let mut history = Vec::with_capacity(params.iterations);

    for _ in 0..params.iterations {
        if population.len() >= 2 {
            let i = rng.gen_range(0..population.len());
            let mut j = rng.gen_range(0..population.len() - 1);
            if j >= i {
                j += 1;
            }
            let mut child = eager_crossover(&population[i], &population[j], &frequency);
            score(&mut child);
            let worse = if population[i].fitness <= population[j].fitness { i } else { j };
            if child.fitness > population[worse].fitness {
                population[worse] = child;
            }
        }

        let k = rng.gen_range(0..population.len());
        let mut child = candidate_mutation(&population[k], &outside, params.mutation_rate, &mut rng);
        if child.members != population[k].members {
            score(&mut child);
            if child.fitness > population[k].fitness {
                population[k] = child;
            }
        }

        let current = best_of(&population);
        if current.fitness > best.fitness {
            best = current;
        }
        history.push(best.fitness);
    }
    Ok(SelectionRun { best, history, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{normalize, CharsetPolicy};

    fn corpus(s: &str) -> NormalizedCorpus {
        normalize(s, &CharsetPolicy::default()).unwrap()
    }

    fn set(members: &[&str]) -> MultigramSet {
        MultigramSet::unscored(members.iter().map(|s| s.to_string()).collect())
    }

    fn candidates(counts: &[(&str, u64)]) -> Vec<MultigramCandidate> {
        counts
            .iter()
            .enumerate()
            .map(|(i, &(t, c))| MultigramCandidate { text: t.into(), count: c, rank: i + 1 })
            .collect()
    }

    #[test]
    fn absent_multigrams_score_zero() {
        let c = corpus("the quick brown fox jumps over the lazy dog");
        assert_eq!(rank_shift_fitness(&["zq".into(), "qzx".into()], &c), 0.0);
    }

    #[test]
    fn absorbing_of() {
        let text = format!("{} {} {}", "of ".repeat(30), "o ".repeat(70), "f ".repeat(20));
        let c = corpus(&text);
        // o:70, of:30, f:20 -> f and every unused letter drop one place
        assert_eq!(rank_shift_fitness(&["of".into()], &c), 25.0);
    }

    #[test]
    fn zero_count_never_drawn() {
        let cands = candidates(&[("aa", 5), ("bb", 0), ("cc", 3)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = roulette_set(&cands, 2, &mut rng).unwrap();
            assert!(!s.contains(&"bb".to_string()));
        }
        assert!(roulette_set(&cands, 3, &mut rng).is_err());
    }

    #[test]
    fn forced_init() {
        let texts = ["aa", "bb", "cc", "dd", "ee", "ff", "gg", "hh", "ii", "jj", "kk", "ll", "mm", "nn"];
        let counts: Vec<(&str, u64)> = texts.iter().enumerate().map(|(i, t)| (*t, i as u64 + 1)).collect();
        let params = SelectionParams { population: 5, ..Default::default() };
        let pop = eager_init(&candidates(&counts), &params, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let mut all: Vec<String> = texts.iter().map(|s| s.to_string()).collect();
        all.sort();
        assert!(pop.iter().all(|s| s.members == all));
    }

    #[test]
    fn crossover_rules() {
        let freq: HashMap<String, u64> =
            [("ab", 9), ("cd", 5), ("ef", 7), ("gh", 7), ("ij", 1)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let p = set(&["ab", "cd", "ef"]);
        assert_eq!(eager_crossover(&p, &p, &freq).members, p.members);
        let q = set(&["ab", "cd", "gh"]);
        // one common slot left: ef and gh tie at 7, lexicographic picks ef
        assert_eq!(eager_crossover(&p, &q, &freq).members, set(&["ab", "cd", "ef"]).members);
        let r = set(&["ij", "gh", "cd"]);
        let child = eager_crossover(&p, &r, &freq);
        assert_eq!(child.members, set(&["ab", "cd", "ef"]).members);
        assert_eq!(child.members.len(), 3);
    }

    #[test]
    fn mutation_bounds() {
        let s = set(&["ab", "cd"]);
        let outside: Vec<String> = ["xy", "yz", "zx"].iter().map(|s| s.to_string()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(candidate_mutation(&s, &outside, 0.0, &mut rng).members, s.members);
        let m = candidate_mutation(&s, &outside, 1.0, &mut rng);
        assert_eq!(m.members.len(), 2);
        assert!(m.members.iter().all(|x| outside.contains(x)));
        // nothing outside: no-op
        assert_eq!(candidate_mutation(&s, &[], 1.0, &mut rng).members, s.members);
    }

    #[test]
    fn tiny_pool_returns_it() {
        // 8 bigrams + 6 trigrams
        let c = corpus("abcde fghij");
        assert_eq!(rank_candidates(&c).len(), 14);
        let params = SelectionParams { iterations: 20, population: 4, ..Default::default() };
        let best = select_multigrams(&c, &params).unwrap();
        let mut all: Vec<String> = rank_candidates(&c).into_iter().map(|x| x.text).collect();
        all.sort();
        assert_eq!(best.members, all);
    }

    #[test]
    fn deterministic_and_monotone() {
        let c = corpus("the other thing is that they think there is nothing in this house of theirs");
        let params = SelectionParams { iterations: 200, population: 20, seed: 5, ..Default::default() };
        let a = run_selection(&c, &params).unwrap();
        let b = run_selection(&c, &params).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.best.members.len(), 14);
        assert!(a.history.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(a.best.fitness, rank_shift_fitness(&a.best.members, &c));
    }
}
