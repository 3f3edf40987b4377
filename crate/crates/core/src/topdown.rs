//! Greedy top-down induction with binary single-token tests.
//!
//! Each split is an internal node with one arc `{t}` and the default arc.
//! Splits are ranked by information gain, ties going to the smaller position
//! and then the lexicographically smaller token. At the last level above
//! the depth limit the children are bound to be leaves, so there the split
//! with the highest resulting training accuracy is taken instead (gain and
//! then the same order break ties).

use thiserror::Error;

use crate::corpus::{Corpus, Position, SenseClass, Token, TrainingCase, Vocabulary};
use crate::tree::{Arc, DecisionTree, TokenSet};

/// Gains closer than this are treated as equal.
const GAIN_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopDownParams {
    pub min_cases_per_split: usize,
    pub max_depth: usize,
    /// A split must gain strictly more than this many bits.
    pub min_gain: f64,
}

impl Default for TopDownParams {
    fn default() -> Self {
        TopDownParams {
            min_cases_per_split: 10,
            max_depth: 6,
            min_gain: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopDownError {
    #[error("no cases")]
    Empty,
    #[error("min_cases_per_split must be at least 2, got {0}")]
    MinCases(usize),
}

/// Binary entropy in bits of a `(discourse, sentential)` count.
pub fn entropy_of_counts(discourse: usize, sentential: usize) -> f64 {
    let n = (discourse + sentential) as f64;
    [discourse, sentential]
        .into_iter()
        .filter(|&k| k > 0)
        .map(|k| {
            let p = k as f64 / n;
            -p * p.log2()
        })
        .sum()
}

pub fn entropy(cases: &Corpus) -> Result<f64, TopDownError> {
    if cases.is_empty() {
        return Err(TopDownError::Empty);
    }
    let d = cases.count_class(SenseClass::Discourse);
    Ok(entropy_of_counts(d, cases.len() - d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub position: Position,
    pub token: Token,
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    d: usize,
    s: usize,
}

impl Counts {
    fn add(&mut self, class: SenseClass) {
        match class {
            SenseClass::Discourse => self.d += 1,
            SenseClass::Sentential => self.s += 1,
        }
    }

    fn total(self) -> usize {
        self.d + self.s
    }

    fn minus(self, other: Counts) -> Counts {
        Counts {
            d: self.d - other.d,
            s: self.s - other.s,
        }
    }

    fn entropy(self) -> f64 {
        entropy_of_counts(self.d, self.s)
    }

    /// Cases a majority leaf gets right; ties go to Sentential.
    fn majority_correct(self) -> usize {
        self.d.max(self.s)
    }

    fn majority(self) -> SenseClass {
        if self.d > self.s {
            SenseClass::Discourse
        } else {
            SenseClass::Sentential
        }
    }
}

struct Candidate {
    position: Position,
    token: Token,
    gain: f64,
    correct: usize,
}

fn count(cases: &[&TrainingCase]) -> Counts {
    let mut c = Counts::default();
    for case in cases {
        c.add(case.class());
    }
    c
}

/// Every test whose gain clears `min_gain`, in tie-break order.
fn candidates(cases: &[&TrainingCase], vocab: &Vocabulary, min_gain: f64) -> Vec<Candidate> {
    let all = count(cases);
    let n = all.total() as f64;
    let base = all.entropy();
    let mut out = Vec::new();
    for position in Position::ALL {
        let partition = vocab.for_position(position);
        let mut per_token: std::collections::HashMap<&Token, Counts> = std::collections::HashMap::new();
        for case in cases {
            let t = case.token(position);
            if partition.contains(t) {
                per_token.entry(t).or_default().add(case.class());
            }
        }
        for token in partition {
            let Some(&hit) = per_token.get(token) else {
                continue;
            };
            let miss = all.minus(hit);
            let remainder = (hit.total() as f64 / n) * hit.entropy() + (miss.total() as f64 / n) * miss.entropy();
            let gain = base - remainder;
            if gain > min_gain + GAIN_EPSILON {
                out.push(Candidate {
                    position,
                    token: token.clone(),
                    gain,
                    correct: hit.majority_correct() + miss.majority_correct(),
                });
            }
        }
    }
    out
}

fn by_gain(cands: Vec<Candidate>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in cands {
        if best.as_ref().is_none_or(|b| c.gain > b.gain + GAIN_EPSILON) {
            best = Some(c);
        }
    }
    best
}

fn by_accuracy(cands: Vec<Candidate>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in cands {
        let better = match &best {
            None => true,
            Some(b) => c.correct > b.correct || (c.correct == b.correct && c.gain > b.gain + GAIN_EPSILON),
        };
        if better {
            best = Some(c);
        }
    }
    best
}

/// The highest-gain single-token test, or `None` when no test gains more
/// than `min_gain` or there are fewer than `min_cases_per_split` cases.
pub fn best_split(cases: &Corpus, vocab: &Vocabulary, params: &TopDownParams) -> Option<Split> {
    let refs: Vec<&TrainingCase> = cases.iter().collect();
    if refs.is_empty() || refs.len() < params.min_cases_per_split {
        return None;
    }
    by_gain(candidates(&refs, vocab, params.min_gain)).map(|c| Split {
        position: c.position,
        token: c.token,
        gain: c.gain,
    })
}

pub fn induce_topdown(train: &Corpus, vocab: &Vocabulary, params: &TopDownParams) -> Result<DecisionTree, TopDownError> {
    if params.min_cases_per_split < 2 {
        return Err(TopDownError::MinCases(params.min_cases_per_split));
    }
    if train.is_empty() {
        return Err(TopDownError::Empty);
    }
    let refs: Vec<&TrainingCase> = train.iter().collect();
    Ok(grow(&refs, vocab, params, 0))
}

fn grow(cases: &[&TrainingCase], vocab: &Vocabulary, params: &TopDownParams, depth: usize) -> DecisionTree {
    let counts = count(cases);
    let leaf = DecisionTree::Leaf(counts.majority());
    if counts.d == 0 || counts.s == 0 || depth >= params.max_depth || cases.len() < params.min_cases_per_split {
        return leaf;
    }
    let cands = candidates(cases, vocab, params.min_gain);
    let chosen = if depth + 1 == params.max_depth {
        by_accuracy(cands)
    } else {
        by_gain(cands)
    };
    let Some(split) = chosen else {
        return leaf;
    };
    let (hit, miss): (Vec<&TrainingCase>, Vec<&TrainingCase>) =
        cases.iter().partition(|c| c.token(split.position) == &split.token);
    DecisionTree::node(
        split.position,
        vec![Arc::new(
            TokenSet::new([split.token]),
            grow(&hit, vocab, params, depth + 1),
        )],
        grow(&miss, vocab, params, depth + 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize_token;
    use crate::tree::evaluate;
    use std::collections::BTreeSet;

    fn t(s: &str) -> Token {
        normalize_token(s).unwrap()
    }

    fn case(class: SenseClass, left: &str, word: &str) -> TrainingCase {
        TrainingCase::new(class, [left, word, "a", "b", "c", "d"].map(t)).unwrap()
    }

    fn vocab(general: &[&str], clue: &[&str]) -> Vocabulary {
        Vocabulary::new(
            general.iter().map(|s| t(s)).collect::<BTreeSet<_>>(),
            clue.iter().map(|s| t(s)).collect::<BTreeSet<_>>(),
        )
    }

    fn loose() -> TopDownParams {
        TopDownParams {
            min_cases_per_split: 2,
            ..TopDownParams::default()
        }
    }

    #[test]
    fn entropy_values() {
        use SenseClass::*;
        let pure: Corpus = (0..4).map(|_| case(Discourse, ".", "now")).collect();
        assert_eq!(entropy(&pure).unwrap(), 0.0);
        let half: Corpus = vec![case(Discourse, ".", "now"), case(Sentential, ".", "now")].into_iter().collect();
        assert_eq!(entropy(&half).unwrap(), 1.0);
        assert_eq!(entropy(&Corpus::default()), Err(TopDownError::Empty));
        // 407 of 1027, by the formula directly.
        let p: f64 = 407.0 / 1027.0;
        let expected = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
        assert!((entropy_of_counts(407, 620) - expected).abs() < 1e-12);
        assert!((entropy_of_counts(407, 620) - 0.968745).abs() < 1e-6);
    }

    #[test]
    fn perfect_predictor_is_chosen() {
        use SenseClass::*;
        let corpus: Corpus = vec![
            case(Discourse, ".", "now"),
            case(Discourse, ".", "say"),
            case(Sentential, "to", "now"),
            case(Sentential, "the", "say"),
        ]
        .into_iter()
        .collect();
        let v = vocab(&["<period>", "to", "the"], &["now", "say"]);
        let split = best_split(&corpus, &v, &loose()).unwrap();
        assert_eq!((split.position, split.token.as_str()), (Position::LEFT, "<period>"));
        assert!((split.gain - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_corpus_has_no_split() {
        let corpus: Corpus = (0..5).map(|_| case(SenseClass::Sentential, "to", "say")).collect();
        let v = vocab(&["to"], &["say"]);
        assert_eq!(best_split(&corpus, &v, &loose()), None);
        assert_eq!(induce_topdown(&corpus, &v, &loose()).unwrap(), DecisionTree::Leaf(SenseClass::Sentential));
    }

    #[test]
    fn too_few_cases() {
        use SenseClass::*;
        let corpus: Corpus = vec![case(Discourse, ".", "now"), case(Sentential, "to", "now")].into_iter().collect();
        let v = vocab(&["<period>", "to"], &["now"]);
        assert!(best_split(&corpus, &v, &TopDownParams::default()).is_none());
        assert!(best_split(&corpus, &v, &loose()).is_some());
        let bad = TopDownParams { min_cases_per_split: 1, ..TopDownParams::default() };
        assert_eq!(induce_topdown(&corpus, &v, &bad), Err(TopDownError::MinCases(1)));
    }

    #[test]
    fn ties_go_to_smaller_position_then_token() {
        use SenseClass::*;
        // `to` at -1 and `so` at 0 split identically.
        let corpus: Corpus = vec![
            case(Discourse, "to", "so"),
            case(Sentential, "the", "now"),
        ]
        .into_iter()
        .collect();
        let v = vocab(&["the", "to"], &["now", "so"]);
        let split = best_split(&corpus, &v, &loose()).unwrap();
        assert_eq!((split.position, split.token.as_str()), (Position::LEFT, "the"));
    }

    #[test]
    fn last_level_prefers_accuracy() {
        use SenseClass::*;
        let with_right = |class, left: &str, right: &str| {
            TrainingCase::new(class, [left, "now", right, "b", "c", "d"].map(t)).unwrap()
        };
        // 6 D / 2 S. `1 = x` isolates one S: accuracy 7/8, gain 0.294.
        // `-1 = to` gives {2D,2S} | {4D}: accuracy 6/8, gain 0.311.
        let mut cases = vec![
            with_right(Sentential, "to", "x"),
            with_right(Sentential, "to", "a"),
            with_right(Discourse, "to", "a"),
            with_right(Discourse, "to", "a"),
        ];
        cases.extend((0..4).map(|_| with_right(Discourse, "a", "a")));
        let corpus: Corpus = cases.into_iter().collect();
        let v = vocab(&["to", "x"], &[]);
        let split = best_split(&corpus, &v, &loose()).unwrap();
        assert_eq!(split.token.as_str(), "to");
        let tree = induce_topdown(&corpus, &v, &TopDownParams { max_depth: 1, ..loose() }).unwrap();
        assert_eq!(evaluate(&tree, &corpus).unwrap().correct, 7);
    }

    #[test]
    fn deterministic() {
        let corpus = crate::fixtures::synthetic_corpus();
        let v = crate::corpus::build_vocabulary(&corpus, Default::default()).unwrap();
        let a = induce_topdown(&corpus, &v, &TopDownParams::default()).unwrap();
        let b = induce_topdown(&corpus, &v, &TopDownParams::default()).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }
}
