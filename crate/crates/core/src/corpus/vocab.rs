use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Corpus, Position, Token};

/// Frequency cut-offs. A token qualifies when its count is strictly greater
/// than the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VocabularyConfig {
    pub general_threshold: usize,
    pub clue_threshold: usize,
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        VocabularyConfig {
            general_threshold: 15,
            clue_threshold: 4,
        }
    }
}

/// Tokens a tree may place on its arcs.
///
/// `clue` serves nodes testing position 0, `general` every other position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub general: BTreeSet<Token>,
    pub clue: BTreeSet<Token>,
}

impl Vocabulary {
    pub fn new(general: BTreeSet<Token>, clue: BTreeSet<Token>) -> Self {
        Vocabulary { general, clue }
    }

    /// The partition that arcs under a node at `position` draw from.
    pub fn for_position(&self, position: Position) -> &BTreeSet<Token> {
        if position.is_word() {
            &self.clue
        } else {
            &self.general
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabularyError {
    #[error("cannot build a vocabulary from an empty training corpus")]
    EmptyCorpus,
}

pub fn build_vocabulary(
    train: &Corpus,
    cfg: VocabularyConfig,
) -> Result<Vocabulary, VocabularyError> {
    if train.is_empty() {
        return Err(VocabularyError::EmptyCorpus);
    }
    let mut general: BTreeMap<&Token, usize> = BTreeMap::new();
    let mut clue: BTreeMap<&Token, usize> = BTreeMap::new();
    for case in train {
        for position in Position::ALL {
            let counts = if position.is_word() {
                &mut clue
            } else {
                &mut general
            };
            *counts.entry(case.token(position)).or_default() += 1;
        }
    }
    let keep = |counts: BTreeMap<&Token, usize>, threshold: usize| {
        counts
            .into_iter()
            .filter(|&(_, n)| n > threshold)
            .map(|(t, _)| t.clone())
            .collect::<BTreeSet<Token>>()
    };
    Ok(Vocabulary {
        general: keep(general, cfg.general_threshold),
        clue: keep(clue, cfg.clue_threshold),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{normalize_token, SenseClass, TrainingCase};

    fn case(tokens: [&str; 6]) -> TrainingCase {
        TrainingCase::new(
            SenseClass::Sentential,
            tokens.map(|t| normalize_token(t).unwrap()),
        )
        .unwrap()
    }

    fn repeated(n: usize, tokens: [&str; 6]) -> Vec<TrainingCase> {
        (0..n).map(|_| case(tokens)).collect()
    }

    #[test]
    fn general_threshold_is_strict() {
        // `to` appears at position -1 in every case.
        let sixteen: Corpus = repeated(16, ["to", "say", "x", "y", "z", "w"]).into_iter().collect();
        let fifteen: Corpus = repeated(15, ["to", "say", "x", "y", "z", "w"]).into_iter().collect();
        let cfg = VocabularyConfig::default();
        let to = normalize_token("to").unwrap();
        assert!(build_vocabulary(&sixteen, cfg).unwrap().general.contains(&to));
        assert!(!build_vocabulary(&fifteen, cfg).unwrap().general.contains(&to));
    }

    #[test]
    fn general_counts_pool_non_zero_positions() {
        // 8 at position 1 plus 8 at position 3 makes 16.
        let mut cases = repeated(8, ["a", "now", "to", "b", "c", "d"]);
        cases.extend(repeated(8, ["a", "now", "b", "c", "to", "d"]));
        let corpus: Corpus = cases.into_iter().collect();
        let vocab = build_vocabulary(&corpus, VocabularyConfig::default()).unwrap();
        assert!(vocab.general.contains("to"));
        assert!(!vocab.general.contains("now"));
    }

    #[test]
    fn clue_threshold_is_strict() {
        let five: Corpus = repeated(5, ["a", "say", "b", "c", "d", "e"]).into_iter().collect();
        let four: Corpus = repeated(4, ["a", "say", "b", "c", "d", "e"]).into_iter().collect();
        let cfg = VocabularyConfig::default();
        assert!(build_vocabulary(&five, cfg).unwrap().clue.contains("say"));
        assert!(!build_vocabulary(&four, cfg).unwrap().clue.contains("say"));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(
            build_vocabulary(&Corpus::default(), VocabularyConfig::default()),
            Err(VocabularyError::EmptyCorpus)
        );
    }

    #[test]
    fn sentinel_is_an_ordinary_token() {
        let corpus: Corpus = repeated(16, ["<none>", "so", "b", "c", "d", "e"]).into_iter().collect();
        let vocab = build_vocabulary(&corpus, VocabularyConfig::default()).unwrap();
        assert!(vocab.general.contains("<none>"));
        let corpus: Corpus = repeated(3, ["<none>", "so", "b", "c", "d", "e"]).into_iter().collect();
        let vocab = build_vocabulary(&corpus, VocabularyConfig::default()).unwrap();
        assert!(!vocab.general.contains("<none>"));
    }
}
