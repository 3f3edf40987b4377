use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Corpus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("need at least 2 cases to split, got {0}")]
    TooFew(usize),
}

/// Random half split. The training half gets `ceil(n / 2)` cases; both
/// halves keep the corpus order of the cases they receive.
pub fn split_corpus(corpus: &Corpus, seed: u64) -> Result<(Corpus, Corpus), SplitError> {
    let n = corpus.len();
    if n < 2 {
        return Err(SplitError::TooFew(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut in_train = vec![false; n];
    for &i in &order[..n.div_ceil(2)] {
        in_train[i] = true;
    }
    let (train, test): (Vec<_>, Vec<_>) = corpus
        .cases()
        .iter()
        .cloned()
        .zip(in_train)
        .partition(|(_, t)| *t);
    Ok((
        train.into_iter().map(|(c, _)| c).collect(),
        test.into_iter().map(|(c, _)| c).collect(),
    ))
}
