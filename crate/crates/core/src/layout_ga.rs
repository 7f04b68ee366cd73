//! Steady-state GA over keypad layouts.
//!
//! A chromosome assigns each of 40 symbols to a distinct valid slot. In
//! letters-only mode the 14 spare symbols are blanks that never occur in
//! text, so every operator works on a full 40-slot permutation.
//!
//! Crossover builds a child "between" its parents: each gene should land in
//! the box spanned by the parents' (row, column, stroke) values. Genes are
//! placed most-constrained first; a gene left with no free between-slot is
//! placed at random.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::NormalizedCorpus;
use crate::error::{Error, Result};
use crate::keypad::{alphabet, valid_slots, KeySlot, Layout, Symbol, COLS, KEY_COUNT, SLOT_COUNT, STROKES};
use crate::multigram::MultigramSet;
use crate::stats::{summarize, Summary};
use crate::typing::{evaluate, Evaluator, FitnessBreakdown, FitnessWeights};

/// Upper bound on gene selection steps in one crossover: 40 + 39 + ... + 1.
pub const CROSSOVER_ITERATION_BOUND: usize = SLOT_COUNT * (SLOT_COUNT + 1) / 2;

/// The 40 symbols a chromosome places. Blank symbols are empty strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    /// Letters followed by the given multigrams, padded with blanks to 40.
    pub fn new<I: IntoIterator<Item = Symbol>>(multigrams: I) -> Result<Self> {
        let mut symbols: Vec<Symbol> = alphabet().collect();
        for m in multigrams {
            if !m.is_multigram() || symbols.contains(&m) {
                return Err(Error::InvalidParams(format!("'{m}' is not a usable multigram")));
            }
            symbols.push(m);
        }
        if symbols.len() > SLOT_COUNT {
            return Err(Error::InvalidParams(format!("{} symbols exceed {SLOT_COUNT} slots", symbols.len())));
        }
        symbols.resize(SLOT_COUNT, Symbol::new(""));
        Ok(Self { symbols })
    }

    pub fn letters_only() -> Self {
        Self::new(std::iter::empty()).expect("26 letters fit")
    }

    pub fn with_multigrams(set: &MultigramSet) -> Result<Self> {
        Self::new(set.symbols())
    }

    /// Symbols of a layout (blanks added for vacant slots).
    pub fn of_layout(layout: &Layout) -> Result<Self> {
        layout.validate().map_err(Error::InvalidLayout)?;
        Self::new(layout.multigrams().cloned())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn is_blank(&self, i: usize) -> bool {
        self.symbols[i].is_empty()
    }

    pub fn to_layout(&self, genome: &Genome) -> Layout {
        let slots = genome.slots_by_symbol();
        Layout::from_placements(
            self.symbols
                .iter()
                .zip(slots)
                .filter(|(s, _)| !s.is_empty())
                .map(|(s, slot)| (s.clone(), KeySlot::from_index(slot as usize))),
        )
    }

    /// Chromosome for `layout`; blanks fill vacant slots in slot order.
    pub fn genome_of(&self, layout: &Layout) -> Result<Genome> {
        layout.validate().map_err(Error::InvalidLayout)?;
        let mut occupant = [u8::MAX; SLOT_COUNT];
        for p in layout.placements() {
            let idx = self
                .symbols
                .iter()
                .position(|s| s == &p.symbol)
                .ok_or_else(|| Error::InvalidParams(format!("symbol '{}' not in symbol table", p.symbol)))?;
            occupant[p.slot.index()] = idx as u8;
        }
        let mut blanks = (0..SLOT_COUNT).filter(|&i| self.is_blank(i));
        for o in occupant.iter_mut().filter(|o| **o == u8::MAX) {
            *o = blanks.next().ok_or_else(|| Error::InvalidParams("layout does not match symbol table".into()))? as u8;
        }
        if blanks.next().is_some() {
            return Err(Error::InvalidParams("layout does not match symbol table".into()));
        }
        Ok(Genome { occupant })
    }
}

/// Slot-major chromosome: `occupant[slot]` is the symbol index there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Genome {
    #[serde(with = "occupant_serde")]
    occupant: [u8; SLOT_COUNT],
}

mod occupant_serde {
    use super::SLOT_COUNT;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8; SLOT_COUNT], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[u8; SLOT_COUNT], D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        v.try_into().map_err(|_| serde::de::Error::custom("expected 40 genes"))
    }
}

impl Genome {
    /// Uniformly random permutation.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut occupant: [u8; SLOT_COUNT] = std::array::from_fn(|i| i as u8);
        occupant.shuffle(rng);
        Self { occupant }
    }

    pub fn occupants(&self) -> &[u8; SLOT_COUNT] {
        &self.occupant
    }

    /// `result[symbol]` is its slot index.
    pub fn slots_by_symbol(&self) -> [u8; SLOT_COUNT] {
        let mut out = [0u8; SLOT_COUNT];
        for (slot, &sym) in self.occupant.iter().enumerate() {
            out[sym as usize] = slot as u8;
        }
        out
    }

    pub fn key_slots(&self) -> [KeySlot; SLOT_COUNT] {
        let by_symbol = self.slots_by_symbol();
        std::array::from_fn(|s| KeySlot::from_index(by_symbol[s] as usize))
    }

    /// Every symbol appears exactly once.
    pub fn is_permutation(&self) -> bool {
        let mut seen = [false; SLOT_COUNT];
        self.occupant.iter().all(|&s| (s as usize) < SLOT_COUNT && !std::mem::replace(&mut seen[s as usize], true))
    }
}

/// Whether each component of `g1` lies in the closed interval spanned by the
/// corresponding components of `g2` and `g3`.
pub fn between(g1: KeySlot, g2: KeySlot, g3: KeySlot) -> bool {
    let within = |x: u8, a: u8, b: u8| a.min(b) <= x && x <= a.max(b);
    within(g1.row, g2.row, g3.row) && within(g1.col, g2.col, g3.col) && within(g1.stroke, g2.stroke, g3.stroke)
}

/// Bookkeeping of the between-crossover: per-cell candidate lists and the
/// number of free between-slots left for every symbol.
#[derive(Debug, Clone)]
pub struct CrossoverWorkspace {
    /// `candidate[slot]`: symbols for which `slot` lies between the parents.
    candidate: Vec<Vec<u8>>,
    /// Between-slots of each symbol.
    options: Vec<Vec<u8>>,
    possible_count: [usize; SLOT_COUNT],
    /// Unplaced symbols still listing each cell.
    cell_load: [usize; SLOT_COUNT],
    occupied: [bool; SLOT_COUNT],
    placed: [bool; SLOT_COUNT],
    pub fallback_count: usize,
}

impl CrossoverWorkspace {
    pub fn new(p1: &Genome, p2: &Genome) -> Self {
        let s1 = p1.key_slots();
        let s2 = p2.key_slots();
        let slots = valid_slots();
        let mut candidate = vec![Vec::new(); SLOT_COUNT];
        let mut options = vec![Vec::new(); SLOT_COUNT];
        for sym in 0..SLOT_COUNT {
            for (cell, &slot) in slots.iter().enumerate() {
                if between(slot, s1[sym], s2[sym]) {
                    candidate[cell].push(sym as u8);
                    options[sym].push(cell as u8);
                }
            }
        }
        let possible_count = std::array::from_fn(|s| options[s].len());
        let cell_load = std::array::from_fn(|c| candidate[c].len());
        Self {
            candidate,
            options,
            possible_count,
            cell_load,
            occupied: [false; SLOT_COUNT],
            placed: [false; SLOT_COUNT],
            fallback_count: 0,
        }
    }

    /// Free between-slots left for `symbol`.
    pub fn possible_count(&self, symbol: usize) -> usize {
        self.possible_count[symbol]
    }

    /// Symbols listed in the candidate cell at `slot`.
    pub fn candidates_at(&self, slot: KeySlot) -> &[u8] {
        &self.candidate[slot.index()]
    }

    fn place(&mut self, sym: usize, cell: usize) {
        debug_assert!(!self.occupied[cell] && !self.placed[sym]);
        self.placed[sym] = true;
        self.occupied[cell] = true;
        for &c in &self.options[sym] {
            self.cell_load[c as usize] -= 1;
        }
        for &other in &self.candidate[cell] {
            if !self.placed[other as usize] {
                self.possible_count[other as usize] -= 1;
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossoverTrace {
    /// Genes placed at random because no between-slot was free.
    pub fallback_genes: Vec<u8>,
    /// Unplaced genes inspected while choosing what to place next.
    pub selection_iterations: usize,
}

impl CrossoverTrace {
    pub fn fallback_used(&self) -> usize {
        self.fallback_genes.len()
    }
}

/// Between-crossover with most-constrained-first placement.
///
/// Repeatedly takes the unplaced gene with the fewest free between-slots and
/// puts it in the free between-slot wanted by the fewest other unplaced
/// genes (ties at random). A gene with no free between-slot goes to a random
/// vacant slot.
pub fn between_crossover<R: Rng>(p1: &Genome, p2: &Genome, rng: &mut R) -> (Genome, CrossoverTrace) {
    let mut ws = CrossoverWorkspace::new(p1, p2);
    let mut trace = CrossoverTrace::default();
    let mut occupant = [u8::MAX; SLOT_COUNT];
    let mut ties: Vec<usize> = Vec::with_capacity(SLOT_COUNT);

    for remaining in (1..=SLOT_COUNT).rev() {
        trace.selection_iterations += remaining;
        let sym = (0..SLOT_COUNT)
            .filter(|&s| !ws.placed[s])
            .min_by_key(|&s| ws.possible_count[s])
            .expect("an unplaced gene remains");

        let cell = if ws.possible_count[sym] == 0 {
            trace.fallback_genes.push(sym as u8);
            ws.fallback_count += 1;
            let vacant: Vec<usize> = (0..SLOT_COUNT).filter(|&c| !ws.occupied[c]).collect();
            *vacant.choose(rng).expect("a vacant slot remains")
        } else {
            ties.clear();
            let mut best = usize::MAX;
            for &c in &ws.options[sym] {
                let c = c as usize;
                if ws.occupied[c] {
                    continue;
                }
                let load = ws.cell_load[c];
                if load < best {
                    best = load;
                    ties.clear();
                }
                if load == best {
                    ties.push(c);
                }
            }
            *ties.choose(rng).expect("possible_count > 0 implies a free option")
        };
        ws.place(sym, cell);
        occupant[cell] = sym as u8;
    }
    (Genome { occupant }, trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    SwapColumns,
    SwapRows,
    SwapKeys,
    ReorganizeStrokes,
    SwapPair,
}

impl MutationKind {
    pub const ALL: [MutationKind; 5] = [
        MutationKind::SwapColumns,
        MutationKind::SwapRows,
        MutationKind::SwapKeys,
        MutationKind::ReorganizeStrokes,
        MutationKind::SwapPair,
    ];
}

fn two_distinct<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn cell(row: u8, col: u8, stroke: u8) -> usize {
    KeySlot::new(row, col, stroke).index()
}

/// Applies one mutation in place.
///
/// Column and row swaps exchange slot-wise over rows/columns 1-3 only, so the
/// bottom key (4,2) is never part of a column swap.
pub fn mutate_genome<R: Rng>(genome: &mut Genome, kind: MutationKind, rng: &mut R) {
    let occ = &mut genome.occupant;
    match kind {
        MutationKind::SwapColumns => {
            let (a, b) = two_distinct(COLS as usize, rng);
            for row in 1..=3 {
                for stroke in 1..=STROKES {
                    occ.swap(cell(row, a as u8 + 1, stroke), cell(row, b as u8 + 1, stroke));
                }
            }
        }
        MutationKind::SwapRows => {
            let (a, b) = two_distinct(3, rng);
            for col in 1..=COLS {
                for stroke in 1..=STROKES {
                    occ.swap(cell(a as u8 + 1, col, stroke), cell(b as u8 + 1, col, stroke));
                }
            }
        }
        MutationKind::SwapKeys => {
            let (a, b) = two_distinct(KEY_COUNT, rng);
            for s in 0..STROKES as usize {
                occ.swap(a * STROKES as usize + s, b * STROKES as usize + s);
            }
        }
        MutationKind::ReorganizeStrokes => {
            let k = rng.gen_range(0..KEY_COUNT);
            let base = k * STROKES as usize;
            occ[base..base + STROKES as usize].shuffle(rng);
        }
        MutationKind::SwapPair => {
            let (a, b) = two_distinct(SLOT_COUNT, rng);
            occ.swap(a, b);
        }
    }
}

/// Uniformly random layout over `symbols` (letters plus multigrams).
pub fn random_layout<R: Rng>(symbols: &[Symbol], rng: &mut R) -> Result<Layout> {
    let multigrams = symbols.iter().filter(|s| s.is_multigram()).cloned();
    let table = SymbolTable::new(multigrams)?;
    Ok(table.to_layout(&Genome::random(rng)))
}

/// Layout-level crossover; both parents must hold the same symbols.
pub fn crossover_layouts<R: Rng>(p1: &Layout, p2: &Layout, rng: &mut R) -> Result<(Layout, usize)> {
    let table = SymbolTable::of_layout(p1)?;
    let (child, trace) = between_crossover(&table.genome_of(p1)?, &table.genome_of(p2)?, rng);
    Ok((table.to_layout(&child), trace.fallback_used()))
}

pub fn mutate<R: Rng>(layout: &Layout, kind: MutationKind, rng: &mut R) -> Result<Layout> {
    let table = SymbolTable::of_layout(layout)?;
    let mut g = table.genome_of(layout)?;
    mutate_genome(&mut g, kind, rng);
    Ok(table.to_layout(&g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population: usize,
    pub evaluations: usize,
    pub mutation_rate_each: f64,
    pub crossover_rate: f64,
    pub elite: usize,
    pub trials: usize,
    pub seed: u64,
    pub weights: FitnessWeights,
    /// Concurrent trials; 0 uses every available core.
    pub workers: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 50,
            evaluations: 50_050,
            mutation_rate_each: 0.01,
            crossover_rate: 1.0,
            elite: 1,
            trials: 50,
            seed: 0,
            weights: FitnessWeights::two_thumb(),
            workers: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.population < 2 {
            return bad(format!("population must be at least 2, got {}", self.population));
        }
        if self.evaluations < self.population {
            return bad(format!("evaluations ({}) below population ({})", self.evaluations, self.population));
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        if self.elite >= self.population {
            return bad("elite must be smaller than the population".into());
        }
        for (name, p) in [("mutation rate", self.mutation_rate_each), ("crossover rate", self.crossover_rate)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1]"));
            }
        }
        if self.crossover_rate == 0.0 && self.mutation_rate_each == 0.0 {
            return bad("crossover and mutation rates cannot both be zero".into());
        }
        if !self.weights.is_valid() {
            return bad("weights must be finite and non-negative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Genome,
    pub breakdown: FitnessBreakdown,
    /// Best-ever cost after each evaluation.
    pub history: Vec<f64>,
    pub evaluations: usize,
    pub crossover_fallbacks: usize,
}

struct Individual {
    genome: Genome,
    cost: f64,
}

/// Indices of the `elite` cheapest individuals.
fn elite_indices(pop: &[Individual], elite: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pop.len()).collect();
    idx.sort_by(|&a, &b| pop[a].cost.total_cmp(&pop[b].cost).then(a.cmp(&b)));
    idx.truncate(elite);
    idx
}

/// One steady-state run with an exact evaluation budget.
///
/// Each step performs a crossover (with probability `crossover_rate`) whose
/// child competes with both parents, the costliest of the three leaving,
/// then gives each mutation kind a `mutation_rate_each` chance to replace a
/// random non-elite individual with its mutant.
pub fn steady_state_run<R: Rng>(
    evaluator: &mut Evaluator,
    params: &GaParams,
    rng: &mut R,
) -> Result<RunResult> {
    params.validate()?;
    let weights = params.weights;
    let budget = params.evaluations;
    let mut evaluations = 0usize;
    let mut history = Vec::with_capacity(budget);
    let mut crossover_fallbacks = 0;

    let mut eval = |g: &Genome, evaluations: &mut usize| -> Result<FitnessBreakdown> {
        *evaluations += 1;
        evaluator.evaluate(&g.key_slots(), &weights)
    };

    let mut pop: Vec<Individual> = Vec::with_capacity(params.population);
    let mut best: Option<(Genome, FitnessBreakdown)> = None;
    let record = |g: &Genome, b: FitnessBreakdown, history: &mut Vec<f64>, best: &mut Option<(Genome, FitnessBreakdown)>| {
        if best.as_ref().is_none_or(|(_, cur)| b.total < cur.total) {
            *best = Some((*g, b));
        }
        history.push(best.as_ref().expect("set above").1.total);
    };

    for _ in 0..params.population {
        let genome = Genome::random(rng);
        let b = eval(&genome, &mut evaluations)?;
        record(&genome, b, &mut history, &mut best);
        pop.push(Individual { genome, cost: b.total });
    }

    while evaluations < budget {
        if rng.gen_bool(params.crossover_rate) {
            let (i, j) = two_distinct(pop.len(), rng);
            let (child, trace) = between_crossover(&pop[i].genome, &pop[j].genome, rng);
            crossover_fallbacks += trace.fallback_used();
            let b = eval(&child, &mut evaluations)?;
            record(&child, b, &mut history, &mut best);
            let elite = elite_indices(&pop, params.elite);
            // the costliest of {p1, p2, child} leaves; the child loses ties
            let mut loser = None;
            let worst_parent = if pop[i].cost >= pop[j].cost { i } else { j };
            let other_parent = if worst_parent == i { j } else { i };
            if b.total < pop[worst_parent].cost {
                loser = Some(worst_parent);
            }
            if let Some(l) = loser {
                if elite.contains(&l) {
                    loser = (b.total < pop[other_parent].cost && !elite.contains(&other_parent)).then_some(other_parent);
                }
            }
            if let Some(l) = loser {
                pop[l] = Individual { genome: child, cost: b.total };
            }
        }

        for kind in MutationKind::ALL {
            if evaluations >= budget {
                break;
            }
            if !rng.gen_bool(params.mutation_rate_each) {
                continue;
            }
            let elite = elite_indices(&pop, params.elite);
            let choices: Vec<usize> = (0..pop.len()).filter(|k| !elite.contains(k)).collect();
            let k = *choices.choose(rng).expect("elite is smaller than the population");
            let mut child = pop[k].genome;
            mutate_genome(&mut child, kind, rng);
            let b = eval(&child, &mut evaluations)?;
            record(&child, b, &mut history, &mut best);
            pop[k] = Individual { genome: child, cost: b.total };
        }
    }

    let (best, breakdown) = best.expect("population is non-empty");
    Ok(RunResult { best, breakdown, history, evaluations, crossover_fallbacks })
}

/// Per-trial seed: splitmix64 of the master seed mixed with the trial index.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    let mut z = master ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomBaseline {
    pub best: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub best: FitnessBreakdown,
    pub evaluations: usize,
    pub crossover_fallbacks: usize,
    pub random_baseline: Option<RandomBaseline>,
}

/// Outcome of a multi-trial experiment, free of timing so that equal seeds
/// give equal reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub params: GaParams,
    pub multigrams: Vec<String>,
    pub trials: Vec<TrialResult>,
    /// Summary of per-trial best totals.
    pub optimized: Summary,
    /// Summary of per-trial best-of-population random layouts.
    pub random: Option<Summary>,
    pub abc: Option<FitnessBreakdown>,
}

impl TrialReport {
    pub fn best_totals(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.best.total).collect()
    }

    pub fn random_best_totals(&self) -> Vec<f64> {
        self.trials.iter().filter_map(|t| t.random_baseline.map(|r| r.best)).collect()
    }

    pub fn best_trial(&self) -> &TrialResult {
        self.trials
            .iter()
            .min_by(|a, b| a.best.total.total_cmp(&b.best.total).then(a.trial.cmp(&b.trial)))
            .expect("at least one trial")
    }
}

#[derive(Debug, Clone)]
pub struct Optimization {
    pub report: TrialReport,
    pub best_layout: Layout,
    pub wall_clock: Vec<Duration>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Baselines {
    pub random: bool,
    pub abc: bool,
}

/// Runs `params.trials` independent steady-state runs, in parallel up to
/// `params.workers`, and aggregates them.
pub fn multi_trial_optimize(
    corpus: &NormalizedCorpus,
    table: &SymbolTable,
    params: &GaParams,
    baselines: Baselines,
    progress: Option<&(dyn Fn(usize, &RunResult, Duration) + Sync)>,
) -> Result<Optimization> {
    params.validate()?;
    let prototype = Evaluator::new(corpus, table.symbols());

    let run_trial = |trial: usize| -> Result<(TrialResult, Genome, Duration)> {
        let started = Instant::now();
        let seed = trial_seed(params.seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut evaluator = prototype.clone();
        let random_baseline = if baselines.random {
            let mut base_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_BA5E);
            let costs = (0..params.population)
                .map(|_| evaluator.evaluate(&Genome::random(&mut base_rng).key_slots(), &params.weights).map(|b| b.total))
                .collect::<Result<Vec<f64>>>()?;
            let s = summarize(&costs)?;
            Some(RandomBaseline { best: s.best, mean: s.mean })
        } else {
            None
        };
        let run = steady_state_run(&mut evaluator, params, &mut rng)?;
        let elapsed = started.elapsed();
        if let Some(cb) = progress {
            cb(trial, &run, elapsed);
        }
        let result = TrialResult {
            trial,
            seed,
            best: run.breakdown,
            evaluations: run.evaluations,
            crossover_fallbacks: run.crossover_fallbacks,
            random_baseline,
        };
        Ok((result, run.best, elapsed))
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    let mut outcomes: Vec<(TrialResult, Genome, Duration)> =
        pool.install(|| (0..params.trials).into_par_iter().map(run_trial).collect::<Result<Vec<_>>>())?;
    outcomes.sort_by_key(|o| o.0.trial);

    let totals: Vec<f64> = outcomes.iter().map(|o| o.0.best.total).collect();
    let optimized = summarize(&totals)?;
    let random = if baselines.random {
        let bests: Vec<f64> = outcomes.iter().filter_map(|o| o.0.random_baseline.map(|r| r.best)).collect();
        Some(summarize(&bests)?)
    } else {
        None
    };
    let abc = if baselines.abc {
        Some(evaluate(&crate::keypad::abc_baseline(), corpus, &params.weights)?)
    } else {
        None
    };

    let best_idx = (0..outcomes.len())
        .min_by(|&a, &b| outcomes[a].0.best.total.total_cmp(&outcomes[b].0.best.total))
        .expect("at least one trial");
    let mut best_layout = table.to_layout(&outcomes[best_idx].1);
    best_layout.set_deprecated_flags(&crate::typing::deprecated_set(&best_layout));
    best_layout.weights_used = Some(params.weights);
    best_layout.provenance = crate::keypad::Provenance {
        corpus_digest: Some(corpus.source_digest().to_owned()),
        seed: Some(outcomes[best_idx].0.seed),
        metric: Some(params.weights.variant.name().to_owned()),
        weights: Some(params.weights),
        fitness: Some(outcomes[best_idx].0.best.total),
    };

    let wall_clock = outcomes.iter().map(|o| o.2).collect();
    let report = TrialReport {
        params: *params,
        multigrams: table.symbols().iter().filter(|s| s.is_multigram()).map(|s| s.as_str().to_owned()).collect(),
        trials: outcomes.into_iter().map(|o| o.0).collect(),
        optimized,
        random,
        abc,
    };
    Ok(Optimization { report, best_layout, wall_clock })
}
