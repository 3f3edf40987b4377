//! Rules read off a tree.
//!
//! Every root-to-leaf path is a rule; the cases routed to its leaf are the
//! rule's partition of the corpus.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::{percent_hundredths, format_hundredths, DecisionTree, EvaluationReport, TokenSet};
use crate::corpus::{Corpus, Position, SenseClass, Token, TrainingCase};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Test {
    Tokens(TokenSet),
    /// None of the sister arcs matched.
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub position: Position,
    pub test: Test,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.test {
            Test::Tokens(set) => write!(f, "{}={}", self.position, set),
            Test::Default => f.write_str("DEFAULT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub path: Vec<Condition>,
    pub predicted: SenseClass,
    pub matched: usize,
    pub correct: usize,
    pub word_scope: BTreeSet<Token>,
}

impl Rule {
    /// The last condition on the path; `None` for a single-leaf tree.
    pub fn decisive(&self) -> Option<&Condition> {
        self.path.last()
    }

    pub fn report(&self) -> EvaluationReport {
        EvaluationReport::new(self.correct, self.matched)
    }

    /// Text of the decisive condition, `ALWAYS` for an empty path.
    pub fn condition_text(&self) -> String {
        self.decisive()
            .map(Condition::to_string)
            .unwrap_or_else(|| "ALWAYS".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("cannot extract rules over an empty set of cases")]
    Empty,
    #[error("clue word `{0}` does not occur in the cases")]
    WordAbsent(Token),
}

struct Leaf<'t> {
    path: Vec<Condition>,
    class: SenseClass,
    node: &'t DecisionTree,
}

fn collect_leaves<'t>(tree: &'t DecisionTree, path: &mut Vec<Condition>, out: &mut Vec<Leaf<'t>>) {
    match tree {
        DecisionTree::Leaf(class) => out.push(Leaf {
            path: path.clone(),
            class: *class,
            node: tree,
        }),
        DecisionTree::Node(n) => {
            for arc in &n.arcs {
                path.push(Condition {
                    position: n.position,
                    test: Test::Tokens(arc.tokens.clone()),
                });
                collect_leaves(&arc.child, path, out);
                path.pop();
            }
            path.push(Condition {
                position: n.position,
                test: Test::Default,
            });
            collect_leaves(&n.default, path, out);
            path.pop();
        }
    }
}

fn reach<'t>(tree: &'t DecisionTree, case: &TrainingCase) -> &'t DecisionTree {
    let mut current = tree;
    while let DecisionTree::Node(n) = current {
        current = n.select(case.token(n.position)).1;
    }
    current
}

/// One rule per root-to-leaf path, depth-first and left to right.
pub fn extract_rules(tree: &DecisionTree, cases: &Corpus) -> Result<Vec<Rule>, RuleError> {
    if cases.is_empty() {
        return Err(RuleError::Empty);
    }
    let mut leaves = Vec::new();
    collect_leaves(tree, &mut Vec::new(), &mut leaves);
    let index: HashMap<*const DecisionTree, usize> = leaves
        .iter()
        .enumerate()
        .map(|(i, l)| (l.node as *const DecisionTree, i))
        .collect();
    let mut rules: Vec<Rule> = leaves
        .into_iter()
        .map(|l| Rule {
            path: l.path,
            predicted: l.class,
            matched: 0,
            correct: 0,
            word_scope: BTreeSet::new(),
        })
        .collect();
    for case in cases {
        let leaf = reach(tree, case);
        let rule = &mut rules[index[&(leaf as *const DecisionTree)]];
        rule.matched += 1;
        if case.class() == rule.predicted {
            rule.correct += 1;
        }
        if !rule.word_scope.contains(case.word()) {
            rule.word_scope.insert(case.word().clone());
        }
    }
    Ok(rules)
}

/// The rules that fire for `word`, in traversal order, and their total.
pub fn per_word_rules(
    tree: &DecisionTree,
    word: &Token,
    cases: &Corpus,
) -> Result<(Vec<Rule>, EvaluationReport), RuleError> {
    let slice = cases.for_word(word);
    if slice.is_empty() {
        return Err(RuleError::WordAbsent(word.clone()));
    }
    let rules: Vec<Rule> = extract_rules(tree, &slice)?
        .into_iter()
        .filter(|r| r.matched > 0)
        .collect();
    let report = rules
        .iter()
        .fold(EvaluationReport::default(), |acc, r| acc.merge(r.report()));
    Ok((rules, report))
}

/// Per-word rules pooled across clue words that share a decisive condition
/// and prediction, largest first.
pub fn generalized_rules(tree: &DecisionTree, cases: &Corpus) -> Result<Vec<Rule>, RuleError> {
    if cases.is_empty() {
        return Err(RuleError::Empty);
    }
    let words: BTreeSet<&Token> = cases.iter().map(TrainingCase::word).collect();
    let mut pooled: Vec<Rule> = Vec::new();
    for word in words {
        let (rules, _) = per_word_rules(tree, word, cases)?;
        for rule in rules {
            let key = rule.decisive().cloned();
            match pooled
                .iter_mut()
                .find(|p| p.decisive() == key.as_ref() && p.predicted == rule.predicted)
            {
                Some(p) => {
                    p.matched += rule.matched;
                    p.correct += rule.correct;
                    p.word_scope.extend(rule.word_scope);
                }
                None => pooled.push(Rule {
                    path: key.into_iter().collect(),
                    ..rule
                }),
            }
        }
    }
    pooled.sort_by_key(|r| std::cmp::Reverse(r.matched));
    Ok(pooled)
}

/// What the `scope` column of an exported rule table shows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleScope {
    /// `*`: rules over the whole corpus.
    All,
    Word(Token),
    /// Each rule's own word scope, `+`-joined.
    PerRule,
}

/// `scope, index, condition, predicted, matched, correct, accuracy` rows
/// under a `#` header line. Accuracy is `NA` for rules matching no case.
pub fn rules_to_tsv(rules: &[Rule], scope: &RuleScope) -> String {
    let mut out = String::from("# scope\tindex\tcondition\tpredicted\tmatched\tcorrect\taccuracy\n");
    for (i, rule) in rules.iter().enumerate() {
        let scope_text = match scope {
            RuleScope::All => "*".to_string(),
            RuleScope::Word(w) => w.to_string(),
            RuleScope::PerRule => rule
                .word_scope
                .iter()
                .map(Token::as_str)
                .collect::<Vec<_>>()
                .join("+"),
        };
        let accuracy = if rule.matched == 0 {
            "NA".to_string()
        } else {
            format_hundredths(percent_hundredths(rule.correct, rule.matched))
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            scope_text,
            i + 1,
            rule.condition_text(),
            rule.predicted,
            rule.matched,
            rule.correct,
            accuracy
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize_token;
    use crate::tree::{evaluate, hl_baseline_tree, Arc};

    fn t(s: &str) -> Token {
        normalize_token(s).unwrap()
    }

    fn case(class: SenseClass, tokens: [&str; 6]) -> TrainingCase {
        TrainingCase::new(class, tokens.map(t)).unwrap()
    }

    fn small() -> Corpus {
        use SenseClass::*;
        vec![
            case(Discourse, [".", "now", "a", "b", "c", "d"]),
            case(Sentential, [".", "say", "a", "b", "c", "d"]),
            case(Discourse, [",", "say", "a", "b", "c", "d"]),
            case(Sentential, ["to", "say", "a", "b", "c", "d"]),
            case(Discourse, ["the", "now", "a", "b", "c", "d"]),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn baseline_rules_partition_the_corpus() {
        let rules = extract_rules(&hl_baseline_tree(), &small()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!((rules[0].matched, rules[0].correct), (3, 2));
        assert_eq!((rules[1].matched, rules[1].correct), (2, 1));
        assert_eq!(rules[0].condition_text(), "-1={<period> <comma>}");
        assert_eq!(rules[1].condition_text(), "DEFAULT");
        assert_eq!(rules[0].word_scope, [t("now"), t("say")].into_iter().collect());
    }

    #[test]
    fn leaf_tree_is_one_rule() {
        let rules = extract_rules(&DecisionTree::Leaf(SenseClass::Discourse), &small()).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!((rules[0].matched, rules[0].correct), (5, 3));
        assert_eq!(rules[0].condition_text(), "ALWAYS");
        let pooled = generalized_rules(&DecisionTree::Leaf(SenseClass::Discourse), &small()).unwrap();
        assert_eq!(pooled.len(), 1);
        assert_eq!(pooled[0].word_scope.len(), 2);
        assert_eq!((pooled[0].matched, pooled[0].correct), (5, 3));
    }

    #[test]
    fn errors() {
        assert_eq!(extract_rules(&hl_baseline_tree(), &Corpus::default()), Err(RuleError::Empty));
        assert_eq!(
            per_word_rules(&hl_baseline_tree(), &t("so"), &small()).unwrap_err(),
            RuleError::WordAbsent(t("so"))
        );
    }

    #[test]
    fn per_word_drops_unreached_paths() {
        let (rules, report) = per_word_rules(&hl_baseline_tree(), &t("now"), &small()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(report, EvaluationReport::new(1, 2));
        let tree = DecisionTree::node(
            Position::LEFT,
            vec![Arc::new([t("to")].into_iter().collect(), DecisionTree::Leaf(SenseClass::Sentential))],
            hl_baseline_tree(),
        );
        let (rules, report) = per_word_rules(&tree, &t("now"), &small()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(report.total, 2);
        assert_eq!(report.correct, evaluate(&tree, &small().for_word(&t("now"))).unwrap().correct);
    }

    #[test]
    fn tsv_export() {
        let rules = extract_rules(&hl_baseline_tree(), &small()).unwrap();
        let tsv = rules_to_tsv(&rules, &RuleScope::All);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[1], "*\t1\t-1={<period> <comma>}\tD\t3\t2\t66.67");
        assert_eq!(lines[2], "*\t2\tDEFAULT\tS\t2\t1\t50.00");
        let tsv = rules_to_tsv(&rules, &RuleScope::PerRule);
        assert!(tsv.lines().nth(1).unwrap().starts_with("now+say\t"));
    }
}
