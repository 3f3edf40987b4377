//! Training cases for clue-word disambiguation.
//!
//! A case is one occurrence of a clue word together with the tokens found in
//! the six context slots `-1, 0, 1, 2, 3, 4` (slot 0 is the clue word itself)
//! and the sense a human annotator assigned to it.

mod split;
mod synth;
mod token;
mod vocab;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use split::{split_corpus, SplitError};
pub use synth::{
    parse_marginals, synth_corpus, synth_with, CaseGroup, LeftPartition, Slot, SynthError,
    SynthPlan, WordMarginal, WordProfile, FILLER_HEAVY, FILLER_LIGHT,
};
pub use token::{is_clue_word, normalize_token, Token, TokenError, CLUE_WORDS};
pub use vocab::{build_vocabulary, Vocabulary, VocabularyConfig, VocabularyError};

/// The two senses a clue word can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SenseClass {
    Discourse,
    Sentential,
}

impl SenseClass {
    pub fn symbol(self) -> &'static str {
        match self {
            SenseClass::Discourse => "D",
            SenseClass::Sentential => "S",
        }
    }

    pub fn flipped(self) -> SenseClass {
        match self {
            SenseClass::Discourse => SenseClass::Sentential,
            SenseClass::Sentential => SenseClass::Discourse,
        }
    }
}

impl fmt::Display for SenseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown sense class `{0}` (expected `D` or `S`)")]
pub struct UnknownClass(pub String);

impl FromStr for SenseClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "D" => Ok(SenseClass::Discourse),
            "S" => Ok(SenseClass::Sentential),
            other => Err(UnknownClass(other.to_string())),
        }
    }
}

/// A context slot relative to the clue word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(i8);

impl Position {
    pub const LEFT: Position = Position(-1);
    pub const WORD: Position = Position(0);

    pub const ALL: [Position; 6] = [
        Position(-1),
        Position(0),
        Position(1),
        Position(2),
        Position(3),
        Position(4),
    ];

    pub fn new(value: i8) -> Option<Position> {
        (-1..=4).contains(&value).then_some(Position(value))
    }

    pub fn value(self) -> i8 {
        self.0
    }

    /// Index into a six-slot context array.
    pub fn index(self) -> usize {
        (self.0 + 1) as usize
    }

    pub fn is_word(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid position `{0}` (expected one of -1, 0, 1, 2, 3, 4)")]
pub struct InvalidPosition(pub String);

impl FromStr for Position {
    type Err = InvalidPosition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<i8>()
            .ok()
            .and_then(Position::new)
            .ok_or_else(|| InvalidPosition(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a clue word")]
pub struct NotAClueWord(pub Token);

/// One annotated clue-word occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrainingCase {
    class: SenseClass,
    context: [Token; 6],
}

impl TrainingCase {
    /// `context` is ordered by position, `-1` first.
    pub fn new(class: SenseClass, context: [Token; 6]) -> Result<Self, NotAClueWord> {
        let word = &context[Position::WORD.index()];
        if !is_clue_word(word.as_str()) {
            return Err(NotAClueWord(word.clone()));
        }
        Ok(TrainingCase { class, context })
    }

    pub fn class(&self) -> SenseClass {
        self.class
    }

    pub fn token(&self, position: Position) -> &Token {
        &self.context[position.index()]
    }

    pub fn word(&self) -> &Token {
        self.token(Position::WORD)
    }

    pub fn context(&self) -> &[Token; 6] {
        &self.context
    }

    fn write_tsv(&self, out: &mut String) {
        out.push_str(self.class.symbol());
        for token in &self.context {
            out.push('\t');
            out.push_str(token.as_str());
        }
        out.push('\n');
    }
}

/// An ordered collection of training cases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    cases: Vec<TrainingCase>,
}

impl Corpus {
    pub fn new(cases: Vec<TrainingCase>) -> Self {
        Corpus { cases }
    }

    pub fn cases(&self) -> &[TrainingCase] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TrainingCase> {
        self.cases.iter()
    }

    pub fn into_cases(self) -> Vec<TrainingCase> {
        self.cases
    }

    pub fn count_class(&self, class: SenseClass) -> usize {
        self.cases.iter().filter(|c| c.class == class).count()
    }

    /// Cases whose clue word (position 0) is `word`, in corpus order.
    pub fn for_word(&self, word: &Token) -> Corpus {
        self.cases
            .iter()
            .filter(|c| c.word() == word)
            .cloned()
            .collect()
    }

    /// Canonical TSV rendering; see [`parse_corpus`].
    pub fn to_tsv(&self) -> String {
        let mut out = String::with_capacity(self.cases.len() * 40);
        for case in &self.cases {
            case.write_tsv(&mut out);
        }
        out
    }
}

impl FromIterator<TrainingCase> for Corpus {
    fn from_iter<I: IntoIterator<Item = TrainingCase>>(iter: I) -> Self {
        Corpus {
            cases: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a TrainingCase;
    type IntoIter = std::slice::Iter<'a, TrainingCase>;

    fn into_iter(self) -> Self::IntoIter {
        self.cases.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected 7 tab-separated fields, found {0}")]
    FieldCount(usize),
    #[error(transparent)]
    Class(#[from] UnknownClass),
    #[error("field {field}: {source}")]
    Token { field: usize, source: TokenError },
    #[error(transparent)]
    NotAClueWord(#[from] NotAClueWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Parses the corpus TSV format: `class, tok[-1], tok[0], ..., tok[4]`.
///
/// Lines starting with `#` and blank lines are skipped. Line numbers in
/// errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Corpus, ParseError> {
    let mut cases = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let case = parse_line(line).map_err(|kind| ParseError {
            line: idx + 1,
            kind,
        })?;
        cases.push(case);
    }
    Ok(Corpus { cases })
}

fn parse_line(line: &str) -> Result<TrainingCase, ParseErrorKind> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 7 {
        return Err(ParseErrorKind::FieldCount(fields.len()));
    }
    let class: SenseClass = fields[0].trim().parse()?;
    let mut tokens = Vec::with_capacity(6);
    for (i, field) in fields[1..].iter().enumerate() {
        let token = normalize_token(field).map_err(|source| ParseErrorKind::Token {
            field: i + 2,
            source,
        })?;
        tokens.push(token);
    }
    let context: [Token; 6] = tokens.try_into().expect("six context fields");
    Ok(TrainingCase::new(class, context)?)
}
