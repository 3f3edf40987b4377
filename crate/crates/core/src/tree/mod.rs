//! Decision trees over the six context positions.
//!
//! An internal node tests one position. Its arcs are tried left to right and
//! the first arc whose token set contains the case's token at that position
//! is followed; when none matches, the default arc is taken. Arc token sets
//! of one node may overlap.

mod compiled;
mod rules;
mod sexpr;

use std::fmt;

use thiserror::Error;

use crate::corpus::{Corpus, Position, SenseClass, Token, TrainingCase, Vocabulary};

pub use compiled::{CompiledTree, EncodedCorpus, TokenIndex};
pub use rules::{
    extract_rules, generalized_rules, per_word_rules, rules_to_tsv, Condition, Rule, RuleError,
    RuleScope, Test,
};
pub use sexpr::{parse_tree, serialize_tree, TreeParseError};

/// Insertion-ordered set of tokens labelling one arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenSet(Vec<Token>);

impl TokenSet {
    /// Builds a set from `tokens`, dropping repeats but keeping first-seen order.
    pub fn new(tokens: impl IntoIterator<Item = Token>) -> Self {
        let mut out: Vec<Token> = Vec::new();
        for t in tokens {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        TokenSet(out)
    }

    pub fn contains(&self, token: &Token) -> bool {
        self.0.iter().any(|t| t == token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Token] {
        &self.0
    }

    /// Appends `token` if absent. Returns whether it was added.
    pub fn insert(&mut self, token: Token) -> bool {
        if self.contains(&token) {
            false
        } else {
            self.0.push(token);
            true
        }
    }

    pub fn remove_at(&mut self, index: usize) -> Token {
        self.0.remove(index)
    }
}

impl fmt::Display for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t.as_str())?;
        }
        f.write_str("}")
    }
}

impl FromIterator<Token> for TokenSet {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenSet::new(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tokens: TokenSet,
    pub child: DecisionTree,
}

impl Arc {
    pub fn new(tokens: TokenSet, child: DecisionTree) -> Self {
        Arc { tokens, child }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub position: Position,
    pub arcs: Vec<Arc>,
    pub default: Box<DecisionTree>,
}

impl Node {
    /// The child a case with `token` at this node's position descends to,
    /// with the index of the arc taken (`None` for the default arc).
    pub fn select(&self, token: &Token) -> (Option<usize>, &DecisionTree) {
        match self.arcs.iter().position(|a| a.tokens.contains(token)) {
            Some(i) => (Some(i), &self.arcs[i].child),
            None => (None, &self.default),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DecisionTree {
    Leaf(SenseClass),
    Node(Node),
}

impl DecisionTree {
    pub fn leaf(class: SenseClass) -> Self {
        DecisionTree::Leaf(class)
    }

    pub fn node(position: Position, arcs: Vec<Arc>, default: DecisionTree) -> Self {
        DecisionTree::Node(Node {
            position,
            arcs,
            default: Box::new(default),
        })
    }

    /// Number of internal levels on the longest root-to-leaf path. A leaf has
    /// depth 0.
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node(n) => {
                1 + n
                    .arcs
                    .iter()
                    .map(|a| a.child.depth())
                    .chain(std::iter::once(n.default.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Node(n) => {
                1 + n.arcs.iter().map(|a| a.child.size()).sum::<usize>() + n.default.size()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Node(n) => {
                n.arcs.iter().map(|a| a.child.leaf_count()).sum::<usize>() + n.default.leaf_count()
            }
        }
    }

    /// Children in order: arcs left to right, then the default.
    pub fn children(&self) -> Vec<&DecisionTree> {
        match self {
            DecisionTree::Leaf(_) => Vec::new(),
            DecisionTree::Node(n) => n
                .arcs
                .iter()
                .map(|a| &a.child)
                .chain(std::iter::once(n.default.as_ref()))
                .collect(),
        }
    }

    /// Paths to every node in preorder: a node, its arc subtrees left to
    /// right, then its default subtree.
    pub fn paths(&self) -> Vec<Vec<Step>> {
        fn walk(tree: &DecisionTree, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
            out.push(path.clone());
            if let DecisionTree::Node(n) = tree {
                for (i, arc) in n.arcs.iter().enumerate() {
                    path.push(Step::Arc(i));
                    walk(&arc.child, path, out);
                    path.pop();
                }
                path.push(Step::Default);
                walk(&n.default, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at(&self, path: &[Step]) -> Option<&DecisionTree> {
        let mut current = self;
        for step in path {
            let DecisionTree::Node(n) = current else {
                return None;
            };
            current = match step {
                Step::Arc(i) => &n.arcs.get(*i)?.child,
                Step::Default => &n.default,
            };
        }
        Some(current)
    }

    pub fn at_mut(&mut self, path: &[Step]) -> Option<&mut DecisionTree> {
        let mut current = self;
        for step in path {
            let DecisionTree::Node(n) = current else {
                return None;
            };
            current = match step {
                Step::Arc(i) => &mut n.arcs.get_mut(*i)?.child,
                Step::Default => &mut n.default,
            };
        }
        Some(current)
    }

    pub fn classify(&self, case: &TrainingCase) -> SenseClass {
        let mut current = self;
        loop {
            match current {
                DecisionTree::Leaf(class) => return *class,
                DecisionTree::Node(n) => current = n.select(case.token(n.position)).1,
            }
        }
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_tree(self))
    }
}

pub fn classify(tree: &DecisionTree, case: &TrainingCase) -> SenseClass {
    tree.classify(case)
}

/// The punctuation tree: Discourse after a period or comma, else Sentential.
pub fn hl_baseline_tree() -> DecisionTree {
    DecisionTree::node(
        Position::LEFT,
        vec![Arc::new(
            TokenSet::new([Token::period(), Token::comma()]),
            DecisionTree::Leaf(SenseClass::Discourse),
        )],
        DecisionTree::Leaf(SenseClass::Sentential),
    )
}

/// Correct classifications out of a total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvaluationReport {
    pub correct: usize,
    pub total: usize,
}

impl EvaluationReport {
    pub fn new(correct: usize, total: usize) -> Self {
        debug_assert!(correct <= total);
        EvaluationReport { correct, total }
    }

    /// Accuracy in percent, unrounded.
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.correct as f64 / self.total as f64
        }
    }

    /// Accuracy in hundredths of a percent, rounded half up.
    pub fn accuracy_hundredths(&self) -> u64 {
        percent_hundredths(self.correct, self.total)
    }

    /// Accuracy as `dd.dd`.
    pub fn accuracy_text(&self) -> String {
        format_hundredths(self.accuracy_hundredths())
    }

    pub fn merge(self, other: EvaluationReport) -> EvaluationReport {
        EvaluationReport::new(self.correct + other.correct, self.total + other.total)
    }
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {}%", self.correct, self.total, self.accuracy_text())
    }
}

/// `100 * num / den` in hundredths, rounded half up; 0 when `den` is 0.
pub fn percent_hundredths(num: usize, den: usize) -> u64 {
    if den == 0 {
        return 0;
    }
    let (num, den) = (num as u128, den as u128);
    ((num * 20_000 + den) / (2 * den)) as u64
}

pub fn format_hundredths(h: u64) -> String {
    format!("{}.{:02}", h / 100, h % 100)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("cannot evaluate over an empty set of cases")]
    Empty,
}

pub fn evaluate(tree: &DecisionTree, cases: &Corpus) -> Result<EvaluationReport, EvaluationError> {
    if cases.is_empty() {
        return Err(EvaluationError::Empty);
    }
    let correct = cases
        .iter()
        .filter(|c| tree.classify(c) == c.class())
        .count();
    Ok(EvaluationReport::new(correct, cases.len()))
}

/// Shape limits in force when a tree is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLimits {
    pub max_depth: usize,
    pub max_arcs: usize,
}

impl Default for TreeLimits {
    fn default() -> Self {
        TreeLimits {
            max_depth: 6,
            max_arcs: 8,
        }
    }
}

/// One step from a node to a child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Arc(usize),
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreePath(pub Vec<Step>);

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for step in &self.0 {
            match step {
                Step::Arc(i) => write!(f, "/arc[{i}]")?,
                Step::Default => f.write_str("/default")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("node has no arcs besides the default")]
    NoArcs,
    #[error("node has {0} arcs, more than the limit")]
    TooManyArcs(usize),
    #[error("arc {0} has an empty token set")]
    EmptyArc(usize),
    #[error("arc {arc}: token `{token}` is not in the vocabulary for position {position}")]
    OutOfVocabulary {
        arc: usize,
        token: Token,
        position: Position,
    },
    #[error("subtree is {depth} levels deep with only {budget} left")]
    TooDeep { depth: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid tree at {path}: {violation}")]
pub struct ValidationError {
    pub path: TreePath,
    pub violation: Violation,
}

/// Checks shape limits and that every arc draws its tokens from the
/// vocabulary partition of its node's position.
pub fn validate_tree(
    tree: &DecisionTree,
    vocab: &Vocabulary,
    limits: TreeLimits,
) -> Result<(), ValidationError> {
    validate_at(tree, Some(vocab), limits, limits.max_depth, &mut Vec::new())
}

/// Like [`validate_tree`] but without the vocabulary check.
pub fn check_shape(tree: &DecisionTree, limits: TreeLimits) -> Result<(), ValidationError> {
    validate_at(tree, None, limits, limits.max_depth, &mut Vec::new())
}

fn validate_at(
    tree: &DecisionTree,
    vocab: Option<&Vocabulary>,
    limits: TreeLimits,
    budget: usize,
    path: &mut Vec<Step>,
) -> Result<(), ValidationError> {
    let DecisionTree::Node(node) = tree else {
        return Ok(());
    };
    let fail = |violation, path: &Vec<Step>| ValidationError {
        path: TreePath(path.clone()),
        violation,
    };
    if budget == 0 {
        return Err(fail(
            Violation::TooDeep {
                depth: tree.depth(),
                budget,
            },
            path,
        ));
    }
    if node.arcs.is_empty() {
        return Err(fail(Violation::NoArcs, path));
    }
    if node.arcs.len() > limits.max_arcs {
        return Err(fail(Violation::TooManyArcs(node.arcs.len()), path));
    }
    for (i, arc) in node.arcs.iter().enumerate() {
        if arc.tokens.is_empty() {
            return Err(fail(Violation::EmptyArc(i), path));
        }
        if let Some(vocab) = vocab {
            let allowed = vocab.for_position(node.position);
            if let Some(t) = arc.tokens.iter().find(|t| !allowed.contains(*t)) {
                return Err(fail(
                    Violation::OutOfVocabulary {
                        arc: i,
                        token: t.clone(),
                        position: node.position,
                    },
                    path,
                ));
            }
        }
    }
    for (i, arc) in node.arcs.iter().enumerate() {
        path.push(Step::Arc(i));
        validate_at(&arc.child, vocab, limits, budget - 1, path)?;
        path.pop();
    }
    path.push(Step::Default);
    validate_at(&node.default, vocab, limits, budget - 1, path)?;
    path.pop();
    Ok(())
}
