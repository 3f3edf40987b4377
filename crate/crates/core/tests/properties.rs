use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cluetree::corpus::{build_vocabulary, split_corpus, Corpus, Token, Vocabulary, VocabularyConfig};
use cluetree::fixtures::synthetic_corpus;
use cluetree::ga::{random_tree, GaParams};
use cluetree::harness::{per_word_breakdown, run_experiment, ExperimentConfig, Method};
use cluetree::topdown::TopDownParams;
use cluetree::tree::{
    evaluate, extract_rules, generalized_rules, parse_tree, per_word_rules, serialize_tree, DecisionTree,
    EvaluationReport, TokenSet,
};

fn corpus() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(synthetic_corpus)
}

fn vocab() -> &'static Vocabulary {
    static V: OnceLock<Vocabulary> = OnceLock::new();
    V.get_or_init(|| build_vocabulary(corpus(), VocabularyConfig::default()).unwrap())
}

fn tree_from(seed: u64) -> DecisionTree {
    random_tree(vocab(), &GaParams::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn subsample(seed: u64, n: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = corpus().cases();
    (0..n).map(|_| all[rng.gen_range(0..all.len())].clone()).collect()
}

/// Drops every token already claimed by an earlier arc of the same node,
/// and arcs left empty, everywhere in the tree.
fn disjoint(tree: &DecisionTree) -> DecisionTree {
    match tree {
        DecisionTree::Leaf(_) => tree.clone(),
        DecisionTree::Node(n) => {
            let mut seen: Vec<Token> = Vec::new();
            let mut arcs = Vec::new();
            for arc in &n.arcs {
                let fresh: Vec<Token> = arc.tokens.iter().filter(|t| !seen.contains(t)).cloned().collect();
                seen.extend(fresh.iter().cloned());
                if !fresh.is_empty() {
                    arcs.push(cluetree::tree::Arc::new(TokenSet::new(fresh), disjoint(&arc.child)));
                }
            }
            if arcs.is_empty() {
                return disjoint(&n.default);
            }
            DecisionTree::node(n.position, arcs, disjoint(&n.default))
        }
    }
}

fn reverse_arcs(tree: &DecisionTree) -> DecisionTree {
    match tree {
        DecisionTree::Leaf(_) => tree.clone(),
        DecisionTree::Node(n) => {
            let arcs = n
                .arcs
                .iter()
                .rev()
                .map(|a| cluetree::tree::Arc::new(a.tokens.clone(), reverse_arcs(&a.child)))
                .collect();
            DecisionTree::node(n.position, arcs, reverse_arcs(&n.default))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_text_round_trips(seed in any::<u64>()) {
        let tree = tree_from(seed);
        let text = serialize_tree(&tree);
        let back = parse_tree(&text).unwrap();
        prop_assert_eq!(&back, &tree);
        prop_assert_eq!(serialize_tree(&back), text);
    }

    #[test]
    fn shadowed_tokens_are_dead(seed in any::<u64>()) {
        let tree = tree_from(seed);
        let flat = disjoint(&tree);
        let flipped = reverse_arcs(&flat);
        for case in corpus() {
            let c = tree.classify(case);
            prop_assert_eq!(c, flat.classify(case));
            prop_assert_eq!(c, flipped.classify(case));
        }
    }

    #[test]
    fn rules_partition_any_sample(seed in any::<u64>(), n in 1usize..200) {
        let tree = tree_from(seed);
        let cases = subsample(seed ^ 0xabc, n);
        let rules = extract_rules(&tree, &cases).unwrap();
        let matched: usize = rules.iter().map(|r| r.matched).sum();
        let correct: usize = rules.iter().map(|r| r.correct).sum();
        prop_assert_eq!(matched, n);
        prop_assert_eq!(correct, evaluate(&tree, &cases).unwrap().correct);
        prop_assert_eq!(rules.len(), tree.leaf_count());
        let pooled = generalized_rules(&tree, &cases).unwrap();
        prop_assert_eq!(pooled.iter().map(|r| r.matched).sum::<usize>(), n);
        prop_assert_eq!(pooled.iter().map(|r| r.correct).sum::<usize>(), correct);
    }

    #[test]
    fn per_word_views_agree(seed in any::<u64>()) {
        let tree = tree_from(seed);
        let rows = per_word_breakdown(&tree, corpus()).unwrap();
        let mut total = EvaluationReport::default();
        for (word, row) in &rows {
            let (_, report) = per_word_rules(&tree, word, corpus()).unwrap();
            prop_assert_eq!(report, *row);
            prop_assert_eq!(evaluate(&tree, &corpus().for_word(word)).unwrap(), *row);
            total = total.merge(*row);
        }
        prop_assert_eq!(total, evaluate(&tree, corpus()).unwrap());
    }

    #[test]
    fn split_halves_cover_corpus(seed in any::<u64>(), n in 2usize..60) {
        let cases = subsample(seed, n);
        let (train, test) = split_corpus(&cases, seed).unwrap();
        prop_assert_eq!(train.len(), n.div_ceil(2));
        prop_assert_eq!(test.len(), n / 2);
        let mut a: Vec<String> = cases.to_tsv().lines().map(String::from).collect();
        let mut b: Vec<String> = train.to_tsv().lines().chain(test.to_tsv().lines()).map(String::from).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn experiment_report_recomputes(seed in 0u64..1000, runs in 1usize..6, topdown in any::<bool>()) {
        let method = if topdown { Method::TopDown(TopDownParams::default()) } else { Method::Baseline };
        let report = run_experiment(corpus(), &ExperimentConfig::new(method, runs, seed)).unwrap();
        prop_assert_eq!(report.per_run.len(), runs);
        let tests: Vec<f64> = report.per_run.iter().map(|r| r.test.accuracy()).collect();
        let trains: Vec<f64> = report.per_run.iter().map(|r| r.train.accuracy()).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        prop_assert_eq!(report.max_test, tests.iter().cloned().fold(f64::MIN, f64::max));
        prop_assert!((report.mean_test - mean(&tests)).abs() < 1e-9);
        prop_assert!((report.mean_disparity_signed - (mean(&trains) - mean(&tests))).abs() < 1e-9);
        let abs: Vec<f64> = trains.iter().zip(&tests).map(|(a, b)| (a - b).abs()).collect();
        prop_assert!((report.mean_disparity_abs - mean(&abs)).abs() < 1e-9);
        let first_best = trains.iter().position(|&t| t == trains.iter().cloned().fold(f64::MIN, f64::max)).unwrap();
        prop_assert_eq!(report.best_run, first_best);
        for (i, run) in report.per_run.iter().enumerate() {
            prop_assert_eq!(run.seed, seed + i as u64);
            let (train, test) = split_corpus(corpus(), run.seed).unwrap();
            prop_assert_eq!(evaluate(&run.tree, &train).unwrap(), run.train);
            prop_assert_eq!(evaluate(&run.tree, &test).unwrap(), run.test);
        }
        if !topdown {
            let whole = report.per_run[0].train.merge(report.per_run[0].test);
            prop_assert_eq!(whole.to_string(), "813/1027 = 79.16%");
        }
    }
}
