//! Repeated random-half experiments: split, induce, score both halves and
//! aggregate over runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{build_vocabulary, split_corpus, Corpus, SplitError, Token, VocabularyConfig, VocabularyError};
use crate::ga::{induce_ga, GaError, GaParams};
use crate::topdown::{induce_topdown, TopDownError, TopDownParams};
use crate::tree::{evaluate, hl_baseline_tree, DecisionTree, EvaluationError, EvaluationReport};

/// Mixed into a run seed to get the GA seed, so the split and the GA
/// draw from unrelated streams.
const GA_SEED_MIX: u64 = 0x5851_F42D_4C95_7F2D;

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Ga(GaParams),
    TopDown(TopDownParams),
    /// The fixed hand-built tree; training data is ignored.
    Baseline,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Ga(_) => "ga",
            Method::TopDown(_) => "topdown",
            Method::Baseline => "baseline",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    pub n_runs: usize,
    pub base_seed: u64,
    pub vocab: VocabularyConfig,
}

impl ExperimentConfig {
    pub fn new(method: Method, n_runs: usize, base_seed: u64) -> Self {
        ExperimentConfig {
            method,
            n_runs,
            base_seed,
            vocab: VocabularyConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("n_runs must be at least 1")]
    NoRuns,
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Vocabulary(#[from] VocabularyError),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    TopDown(#[from] TopDownError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub seed: u64,
    pub train: EvaluationReport,
    pub test: EvaluationReport,
    pub tree: DecisionTree,
}

impl RunOutcome {
    /// Train minus test accuracy, in percentage points.
    pub fn disparity(&self) -> f64 {
        self.train.accuracy() - self.test.accuracy()
    }
}

/// Splits `corpus` by `seed`, induces on the first half and scores the tree
/// on both halves.
pub fn run_once(corpus: &Corpus, method: &Method, vocab_cfg: VocabularyConfig, seed: u64) -> Result<RunOutcome, HarnessError> {
    let (train, test) = split_corpus(corpus, seed)?;
    let tree = match method {
        Method::Baseline => hl_baseline_tree(),
        Method::Ga(params) => {
            let vocab = build_vocabulary(&train, vocab_cfg)?;
            let params = GaParams {
                seed: seed.wrapping_add(GA_SEED_MIX),
                ..params.clone()
            };
            induce_ga(&train, &vocab, &params)?.best_tree
        }
        Method::TopDown(params) => {
            let vocab = build_vocabulary(&train, vocab_cfg)?;
            induce_topdown(&train, &vocab, params)?
        }
    };
    Ok(RunOutcome {
        seed,
        train: evaluate(&tree, &train)?,
        test: evaluate(&tree, &test)?,
        tree,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub method: &'static str,
    /// One outcome per seed, in seed order.
    pub per_run: Vec<RunOutcome>,
    pub max_test: f64,
    pub mean_test: f64,
    pub mean_disparity_signed: f64,
    pub mean_disparity_abs: f64,
    /// Index into `per_run` of the run with the highest training accuracy,
    /// the earliest on ties.
    pub best_run: usize,
}

impl ExperimentReport {
    pub fn best(&self) -> &RunOutcome {
        &self.per_run[self.best_run]
    }

    pub fn best_tree(&self) -> &DecisionTree {
        &self.best().tree
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# seed\ttrain\ttest\ttrain_acc\ttest_acc\tdisparity\n");
        for r in &self.per_run {
            let _ = writeln!(
                out,
                "{}\t{}/{}\t{}/{}\t{}\t{}\t{:.2}",
                r.seed,
                r.train.correct,
                r.train.total,
                r.test.correct,
                r.test.total,
                r.train.accuracy_text(),
                r.test.accuracy_text(),
                r.disparity()
            );
        }
        out.push_str("# summary\n");
        let _ = writeln!(out, "method\t{}", self.method);
        let _ = writeln!(out, "runs\t{}", self.per_run.len());
        let _ = writeln!(out, "best_seed\t{}", self.best().seed);
        let _ = writeln!(out, "max_test\t{:.2}", self.max_test);
        let _ = writeln!(out, "mean_test\t{:.2}", self.mean_test);
        let _ = writeln!(out, "mean_disparity_signed\t{:.2}", self.mean_disparity_signed);
        let _ = writeln!(out, "mean_disparity_abs\t{:.2}", self.mean_disparity_abs);
        out
    }
}

/// Runs seeds `base_seed .. base_seed + n_runs` (in parallel) and folds the
/// outcomes in seed order.
pub fn run_experiment(corpus: &Corpus, config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    if config.n_runs == 0 {
        return Err(HarnessError::NoRuns);
    }
    let seeds: Vec<u64> = (0..config.n_runs as u64)
        .map(|i| config.base_seed.wrapping_add(i))
        .collect();
    let per_run = seeds
        .par_iter()
        .map(|&seed| run_once(corpus, &config.method, config.vocab, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let n = per_run.len() as f64;
    let mut max_test = f64::NEG_INFINITY;
    let mut best_run = 0;
    let (mut sum_test, mut sum_signed, mut sum_abs) = (0.0, 0.0, 0.0);
    for (i, r) in per_run.iter().enumerate() {
        max_test = max_test.max(r.test.accuracy());
        sum_test += r.test.accuracy();
        sum_signed += r.disparity();
        sum_abs += r.disparity().abs();
        let best = &per_run[best_run].train;
        // Compare correct/total exactly by cross-multiplication.
        if r.train.correct * best.total > best.correct * r.train.total {
            best_run = i;
        }
    }
    Ok(ExperimentReport {
        method: config.method.name(),
        per_run,
        max_test,
        mean_test: sum_test / n,
        mean_disparity_signed: sum_signed / n,
        mean_disparity_abs: sum_abs / n,
        best_run,
    })
}

/// Per clue word: the tree's score on the cases carrying that word,
/// alphabetically by word.
pub fn per_word_breakdown(tree: &DecisionTree, cases: &Corpus) -> Result<Vec<(Token, EvaluationReport)>, EvaluationError> {
    if cases.is_empty() {
        return Err(EvaluationError::Empty);
    }
    let mut table: BTreeMap<Token, EvaluationReport> = BTreeMap::new();
    for case in cases {
        let entry = table.entry(case.word().clone()).or_default();
        entry.total += 1;
        if tree.classify(case) == case.class() {
            entry.correct += 1;
        }
    }
    Ok(table.into_iter().collect())
}

pub fn breakdown_to_tsv(rows: &[(Token, EvaluationReport)]) -> String {
    let mut out = String::from("# word\tcorrect\ttotal\taccuracy\n");
    let mut overall = EvaluationReport::default();
    for (word, report) in rows {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", word, report.correct, report.total, report.accuracy_text());
        overall = overall.merge(*report);
    }
    let _ = writeln!(out, "# overall {}/{} = {}", overall.correct, overall.total, overall.accuracy_text());
    out
}
