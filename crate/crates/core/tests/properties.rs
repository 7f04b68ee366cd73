mod common;

use common::*;
use keypad_layout::corpus::ngram_counts;
use keypad_layout::keypad::{KeySlot, Symbol, SLOT_COUNT};
use keypad_layout::layout_ga::{between_crossover, mutate_genome, Genome, MutationKind, SymbolTable};
use keypad_layout::multigram::rank_shift_fitness;
use keypad_layout::prelude::*;
use keypad_layout::session::{score_session, SessionRecord};
use keypad_layout::stats::wilcoxon_rank_sum;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn text_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-zA-Z .,?!:)(\\-'0-9\n]{1,120}").unwrap()
}

fn multigram_strategy() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::btree_set("[a-h]{2,3}", 0..=14).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalized_text_stays_in_charset(raw in text_strategy()) {
        let policy = CharsetPolicy::default();
        if let Ok(c) = normalize(&raw, &policy) {
            prop_assert!(c.text().chars().all(|ch| ch == ' ' || policy.admits(ch)));
            prop_assert!(!c.text().contains("  "));
            let again = normalize(c.text(), &policy).unwrap();
            prop_assert_eq!(again.text(), c.text());
            let unigram_total: u64 = ngram_counts(&c, 1).total();
            prop_assert_eq!(unigram_total as usize, c.char_count_layout());
        }
    }

    #[test]
    fn ngrams_never_span_spaces(raw in "[a-c ]{1,60}") {
        if let Ok(c) = normalize(&raw, &CharsetPolicy::default()) {
            for order in 1..=3 {
                let t = ngram_counts(&c, order);
                prop_assert!(t.entries.keys().all(|g| !g.contains(' ') && g.chars().count() == order));
                let expected: usize = c.words().map(|w| w.chars().count().saturating_sub(order - 1)).sum();
                prop_assert_eq!(t.total() as usize, expected);
            }
        }
    }

    #[test]
    fn segmentation_matches_reference(seed in any::<u64>(), multis in multigram_strategy(), raw in "[a-h .?]{1,80}") {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = random_full_layout(&multis, &mut rng);
        if let Ok(c) = normalize(&raw, &CharsetPolicy::default()) {
            let seg = segment(&c, &layout);
            prop_assert_eq!(seg.reassemble(), c.text());
            prop_assert_eq!(seg.covered_chars, seg.items.iter().map(|i| i.symbol.len()).sum::<usize>());
            let (want, covered) = naive_segment(c.text(), &layout);
            let got: Vec<(String, KeySlot, bool)> =
                seg.items.iter().map(|i| (i.symbol.as_str().to_owned(), i.slot, i.run_start)).collect();
            prop_assert_eq!(got, want);
            prop_assert_eq!(seg.covered_chars, covered);
        }
    }

    #[test]
    fn deprecation_matches_reference(seed in any::<u64>(), multis in multigram_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = random_full_layout(&multis, &mut rng);
        let mut got: Vec<String> = deprecated_set(&layout).into_iter().map(|s| s.as_str().to_owned()).collect();
        got.sort();
        prop_assert_eq!(got, naive_deprecated(&layout));
    }

    #[test]
    fn weights_scale_total_only(seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = random_full_layout(&["th".into(), "he".into(), "the".into()], &mut rng);
        let corpus = corpus("the weather is nice, then they left the theatre");
        for w in [FitnessWeights::two_thumb(), FitnessWeights::moradi()] {
            let a = evaluate(&layout, &corpus, &w).unwrap();
            let b = evaluate(&layout, &corpus, &w.scaled(c)).unwrap();
            prop_assert_eq!((a.f1, a.f2, a.f3, a.f4), (b.f1, b.f2, b.f3, b.f4));
            prop_assert!((b.total - c * a.total).abs() <= 1e-9 * b.total.abs().max(1.0));
        }
    }

    #[test]
    fn costs_are_bounded(seed in any::<u64>(), raw in "[a-z ]{1,80}") {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = random_full_layout(&[], &mut rng);
        if let Ok(c) = normalize(&raw, &CharsetPolicy::default()) {
            let b = evaluate(&layout, &c, &FitnessWeights::two_thumb()).unwrap();
            prop_assert!((1.0..=4.0).contains(&b.f1));
            prop_assert!((0.0..1.0).contains(&b.f2));
            prop_assert!((0.0..1.0).contains(&b.f3));
            let seg = segment(&c, &layout);
            let dp = dp_min_strokes(c.text(), &layout).unwrap();
            let greedy: u64 = seg.items.iter().map(|i| i.slot.stroke as u64).sum();
            prop_assert_eq!(dp, greedy);
        }
    }

    #[test]
    fn rank_shift_matches_direct_count(members in proptest::collection::btree_set("[a-e]{2,3}", 1..6), raw in "[a-e ]{5,100}") {
        let members: Vec<String> = members.into_iter().collect();
        if let Ok(c) = normalize(&raw, &CharsetPolicy::default()) {
            prop_assert_eq!(rank_shift_fitness(&members, &c), naive_rank_shift(&members, c.text()));
        }
    }

    #[test]
    fn crossover_children_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p1, p2) = (Genome::random(&mut rng), Genome::random(&mut rng));
        let (child, trace) = between_crossover(&p1, &p2, &mut rng);
        prop_assert!(child.is_permutation());
        prop_assert!(trace.selection_iterations <= 820);
        let (a, b, c) = (p1.key_slots(), p2.key_slots(), child.key_slots());
        for g in 0..SLOT_COUNT {
            if !trace.fallback_genes.contains(&(g as u8)) {
                prop_assert!(between(c[g], a[g], b[g]), "gene {g}: {} {} -> {}", a[g], b[g], c[g]);
            }
        }
        let (same, _) = between_crossover(&p1, &p1, &mut rng);
        prop_assert_eq!(same, p1);
    }

    #[test]
    fn mutations_touch_expected_gene_counts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Genome::random(&mut rng);
        for (kind, genes) in [
            (MutationKind::SwapColumns, 24),
            (MutationKind::SwapRows, 24),
            (MutationKind::SwapKeys, 8),
            (MutationKind::ReorganizeStrokes, 4),
            (MutationKind::SwapPair, 2),
        ] {
            let mut m = g;
            mutate_genome(&mut m, kind, &mut rng);
            prop_assert!(m.is_permutation());
            let changed = g.occupants().iter().zip(m.occupants()).filter(|(x, y)| x != y).count();
            if kind == MutationKind::ReorganizeStrokes {
                prop_assert!(changed <= genes);
            } else {
                prop_assert_eq!(changed, genes, "{:?}", kind);
            }
        }
    }

    #[test]
    fn genome_layout_roundtrip(seed in any::<u64>(), multis in proptest::collection::btree_set("[a-z]{2,3}", 14..=14)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = SymbolTable::new(multis.iter().map(|m| Symbol::new(m.as_str()))).unwrap();
        let g = Genome::random(&mut rng);
        let layout = table.to_layout(&g);
        prop_assert!(layout.validate().is_ok());
        prop_assert_eq!(table.genome_of(&layout).unwrap(), g);
        let back = keypad_layout::keypad::Layout::from_json(&layout.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, layout);
    }

    #[test]
    fn levenshtein_is_a_metric(a in "[ab é]{0,10}", b in "[ab é]{0,10}", c in "[ab é]{0,10}") {
        let d = levenshtein(&a, &b);
        prop_assert_eq!(d, matrix_levenshtein(&a, &b));
        prop_assert_eq!(d, levenshtein(&b, &a));
        prop_assert_eq!(d == 0, a == b);
        prop_assert!(levenshtein(&a, &c) <= d + levenshtein(&b, &c));
        prop_assert!(d <= a.chars().count().max(b.chars().count()));
    }

    #[test]
    fn cpm_never_exceeds_error_free_speed(target in "[a-z ]{1,40}", typed in "[a-z ]{0,40}", ms in 1i64..120_000) {
        let rec = |typed: &str| SessionRecord {
            target: target.clone(),
            typed: typed.into(),
            elapsed_ms: ms,
            layout_id: String::new(),
            timestamp: None,
            subject_id: String::new(),
        };
        let clean = score_session(&rec(&target)).unwrap();
        let s = score_session(&rec(&typed)).unwrap();
        prop_assert!(s.cpm <= clean.cpm);
        let expected = 60.0 * target.chars().count() as f64 / (ms as f64 / 1000.0 + s.edit_distance as f64);
        prop_assert!((s.cpm - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn rank_sums_are_complementary(a in proptest::collection::vec(0i32..20, 1..30), b in proptest::collection::vec(0i32..20, 1..30)) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let ab = wilcoxon_rank_sum(&a, &b).unwrap();
        let ba = wilcoxon_rank_sum(&b, &a).unwrap();
        let n = (a.len() + b.len()) as f64;
        prop_assert_eq!(ab.w + ba.w, n * (n + 1.0) / 2.0);
        prop_assert!((ab.z_w + ba.z_w).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&ab.p_one_sided));
    }
}
