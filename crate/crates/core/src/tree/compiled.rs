//! Integer-coded trees and cases for bulk evaluation.
//!
//! Induction scores thousands of trees against the same training set, so the
//! set is encoded once and each tree is flattened into index-linked nodes.

use std::collections::HashMap;

use super::DecisionTree;
use crate::corpus::{Corpus, Position, SenseClass, Token};

/// Ids for every token that occurs in an encoded corpus.
#[derive(Debug, Clone, Default)]
pub struct TokenIndex {
    ids: HashMap<Token, u32>,
}

impl TokenIndex {
    pub fn get(&self, token: &Token) -> Option<u32> {
        self.ids.get(token).copied()
    }

    fn intern(&mut self, token: &Token) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(token.clone()).or_insert(next)
    }
}

#[derive(Debug, Clone)]
pub struct EncodedCorpus {
    index: TokenIndex,
    rows: Vec<[u32; 6]>,
    classes: Vec<SenseClass>,
}

impl EncodedCorpus {
    pub fn new(corpus: &Corpus) -> Self {
        let mut index = TokenIndex::default();
        let rows = corpus
            .iter()
            .map(|c| {
                let mut row = [0u32; 6];
                for p in Position::ALL {
                    row[p.index()] = index.intern(c.token(p));
                }
                row
            })
            .collect();
        EncodedCorpus {
            index,
            rows,
            classes: corpus.iter().map(|c| c.class()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index(&self) -> &TokenIndex {
        &self.index
    }

    pub fn row(&self, i: usize) -> &[u32; 6] {
        &self.rows[i]
    }

    pub fn class(&self, i: usize) -> SenseClass {
        self.classes[i]
    }
}

#[derive(Debug, Clone)]
enum Flat {
    Leaf(SenseClass),
    Node {
        slot: usize,
        /// `(first, len)` range into `CompiledTree::arcs`.
        arcs: (usize, usize),
        default: usize,
    },
}

#[derive(Debug, Clone)]
struct FlatArc {
    tokens: Vec<u32>,
    child: usize,
}

/// A tree whose arc tokens are resolved against one [`TokenIndex`]. Tokens
/// absent from the index are dropped, since no encoded case can carry them.
#[derive(Debug, Clone)]
pub struct CompiledTree {
    nodes: Vec<Flat>,
    arcs: Vec<FlatArc>,
}

impl CompiledTree {
    pub fn new(tree: &DecisionTree, index: &TokenIndex) -> Self {
        let mut out = CompiledTree {
            nodes: Vec::new(),
            arcs: Vec::new(),
        };
        out.push(tree, index);
        out
    }

    fn push(&mut self, tree: &DecisionTree, index: &TokenIndex) -> usize {
        let id = self.nodes.len();
        match tree {
            DecisionTree::Leaf(c) => self.nodes.push(Flat::Leaf(*c)),
            DecisionTree::Node(n) => {
                self.nodes.push(Flat::Leaf(SenseClass::Sentential));
                let first = self.arcs.len();
                for arc in &n.arcs {
                    let tokens = arc.tokens.iter().filter_map(|t| index.get(t)).collect();
                    self.arcs.push(FlatArc { tokens, child: 0 });
                }
                for (k, arc) in n.arcs.iter().enumerate() {
                    let child = self.push(&arc.child, index);
                    self.arcs[first + k].child = child;
                }
                let default = self.push(&n.default, index);
                self.nodes[id] = Flat::Node {
                    slot: n.position.index(),
                    arcs: (first, n.arcs.len()),
                    default,
                };
            }
        }
        id
    }

    /// Node id of the leaf `row` reaches.
    fn leaf_of(&self, row: &[u32; 6]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Flat::Leaf(_) => return at,
                Flat::Node { slot, arcs, default } => {
                    let token = row[*slot];
                    at = self.arcs[arcs.0..arcs.0 + arcs.1]
                        .iter()
                        .find(|a| a.tokens.contains(&token))
                        .map(|a| a.child)
                        .unwrap_or(*default);
                }
            }
        }
    }

    pub fn classify(&self, row: &[u32; 6]) -> SenseClass {
        match self.nodes[self.leaf_of(row)] {
            Flat::Leaf(c) => c,
            Flat::Node { .. } => unreachable!("leaf_of returns leaves"),
        }
    }

    /// Number of encoded cases classified correctly.
    pub fn correct(&self, cases: &EncodedCorpus) -> usize {
        (0..cases.len())
            .filter(|&i| self.classify(cases.row(i)) == cases.class(i))
            .count()
    }
}
