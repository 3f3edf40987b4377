//! Reference data: the clue-word marginals, the seed-0 synthetic corpus, and
//! small trees and corpus slices whose rule counts are known in advance.

use crate::corpus::{
    normalize_token, parse_marginals, synth_corpus, Corpus, Position, SenseClass, Token,
    TrainingCase, WordMarginal,
};
use crate::tree::{Arc, DecisionTree, TokenSet};

/// Tab-separated `word, discourse, total` for the 34 clue words.
pub const MARGINALS_TSV: &str = include_str!("../data/clue_marginals.tsv");

pub fn clue_marginals() -> Vec<WordMarginal> {
    parse_marginals(MARGINALS_TSV).expect("bundled marginals parse")
}

/// The seed-0 synthetic corpus over the bundled marginals.
pub fn synthetic_corpus() -> Corpus {
    synth_corpus(&clue_marginals(), 0).expect("bundled marginals are feasible")
}

fn t(s: &str) -> Token {
    normalize_token(s).expect("static token")
}

fn set(tokens: &[&str]) -> TokenSet {
    tokens.iter().map(|s| t(s)).collect()
}

fn leaf(class: SenseClass) -> DecisionTree {
    DecisionTree::Leaf(class)
}

/// Tree whose projection onto `and` tests -1 for `<period>`, `<comma>`,
/// `is` (Discourse), then position 1 for `the` (Sentential) and `i`, `we`,
/// `this`, `at` (Discourse), defaulting to Sentential.
pub fn and_rules_tree() -> DecisionTree {
    use SenseClass::*;
    let right = DecisionTree::node(
        Position::new(1).expect("position 1"),
        vec![
            Arc::new(set(&["the"]), leaf(Sentential)),
            Arc::new(set(&["i"]), leaf(Discourse)),
            Arc::new(set(&["we"]), leaf(Discourse)),
            Arc::new(set(&["this"]), leaf(Discourse)),
            Arc::new(set(&["at"]), leaf(Discourse)),
        ],
        leaf(Sentential),
    );
    DecisionTree::node(
        Position::LEFT,
        vec![
            Arc::new(set(&["<period>"]), leaf(Discourse)),
            Arc::new(set(&["<comma>"]), leaf(Discourse)),
            Arc::new(set(&["is"]), leaf(Discourse)),
        ],
        right,
    )
}

/// Tree that routes `say` to its own subtree: Sentential after `to` or `i`,
/// otherwise Discourse. Every other word is Sentential.
pub fn say_rules_tree() -> DecisionTree {
    use SenseClass::*;
    let say = DecisionTree::node(
        Position::LEFT,
        vec![
            Arc::new(set(&["to"]), leaf(Sentential)),
            Arc::new(set(&["i"]), leaf(Sentential)),
        ],
        leaf(Discourse),
    );
    DecisionTree::node(
        Position::WORD,
        vec![Arc::new(set(&["say"]), say)],
        leaf(Sentential),
    )
}

/// Deterministic right-hand context for hand-built fixture cases.
fn right_context(i: usize) -> [&'static str; 4] {
    const FILL: [&str; 7] = ["that", "it", "the", "we", "a", "of", "you"];
    [FILL[i % 7], FILL[(i + 2) % 7], FILL[(i + 4) % 7], FILL[(i + 5) % 7]]
}

fn build(rows: &[(&str, &str, SenseClass, usize)]) -> Corpus {
    let mut cases = Vec::new();
    for &(left, word, class, n) in rows {
        for _ in 0..n {
            let r = right_context(cases.len());
            let context = [left, word, r[0], r[1], r[2], r[3]].map(t);
            cases.push(TrainingCase::new(class, context).expect("fixture words are clue words"));
        }
    }
    cases.into_iter().collect()
}

/// 36 `say` cases: 4 after `to` and 2 after `i`, all Sentential; of the other
/// 30, 24 are Discourse.
pub fn say_slice() -> Corpus {
    use SenseClass::*;
    build(&[
        ("to", "say", Sentential, 4),
        ("i", "say", Sentential, 2),
        ("<period>", "say", Discourse, 14),
        ("<comma>", "say", Discourse, 4),
        ("and", "say", Discourse, 6),
        ("<comma>", "say", Sentential, 2),
        ("we", "say", Sentential, 4),
    ])
}

/// Tree testing -1 for `to`, `the`, `as` and `is` (all Sentential),
/// defaulting to Discourse.
pub fn left_word_rules_tree() -> DecisionTree {
    use SenseClass::*;
    DecisionTree::node(
        Position::LEFT,
        vec![
            Arc::new(set(&["to"]), leaf(Sentential)),
            Arc::new(set(&["the"]), leaf(Sentential)),
            Arc::new(set(&["as"]), leaf(Sentential)),
            Arc::new(set(&["is"]), leaf(Sentential)),
        ],
        leaf(Discourse),
    )
}

/// Cases for [`left_word_rules_tree`]: `-1 = to` holds 30 times (29
/// Sentential) over see, look, further and say; `-1 = the` 18 times (all
/// Sentential) over like, and, right, first and next; `-1 = as` 11 times
/// (10 Sentential) for well; `-1 = is` 13 times (10 Sentential) over also,
/// now, generally, actually and basically.
pub fn left_word_slice() -> Corpus {
    use SenseClass::*;
    build(&[
        ("to", "see", Sentential, 12),
        ("to", "look", Sentential, 10),
        ("to", "further", Sentential, 1),
        ("to", "say", Sentential, 6),
        ("to", "say", Discourse, 1),
        ("the", "like", Sentential, 5),
        ("the", "and", Sentential, 6),
        ("the", "right", Sentential, 3),
        ("the", "first", Sentential, 3),
        ("the", "next", Sentential, 1),
        ("as", "well", Sentential, 10),
        ("as", "well", Discourse, 1),
        ("is", "also", Sentential, 2),
        ("is", "also", Discourse, 1),
        ("is", "now", Sentential, 3),
        ("is", "now", Discourse, 1),
        ("is", "generally", Sentential, 2),
        ("is", "actually", Sentential, 1),
        ("is", "actually", Discourse, 1),
        ("is", "basically", Sentential, 2),
        ("<period>", "now", Discourse, 5),
        ("<period>", "so", Discourse, 4),
        ("<period>", "but", Discourse, 2),
        ("<period>", "but", Sentential, 1),
    ])
}
