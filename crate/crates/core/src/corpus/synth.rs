//! Synthetic corpora that reproduce published count marginals.
//!
//! The generator fixes, exactly, each clue word's sense counts and the
//! three-way split of position -1 into `<period>`, `<comma>` and everything
//! else. Optional per-word profiles pin further slots for groups of cases.
//! All remaining slots are filled from a fixed filler lexicon.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::token::{COMMA, PERIOD};
use super::{is_clue_word, normalize_token, Corpus, Position, SenseClass, Token, TrainingCase};

/// Frequent filler tokens with their draw weights. Every one of these clears
/// the default general threshold on any half of a 1027-case corpus.
pub const FILLER_HEAVY: [(&str, u32); 21] = [
    ("the", 14),
    ("<comma>", 12),
    ("<period>", 12),
    ("and", 11),
    ("to", 10),
    ("i", 10),
    ("that", 9),
    ("a", 9),
    ("of", 8),
    ("it", 8),
    ("is", 8),
    ("we", 7),
    ("in", 7),
    ("you", 6),
    ("this", 6),
    ("<apostrophe-s>", 5),
    ("for", 5),
    ("are", 5),
    ("as", 5),
    ("can", 4),
    ("at", 4),
];

/// Rare filler tokens with their exact corpus-wide counts. No count exceeds
/// 15, so none can clear the default general threshold in any subset.
pub const FILLER_LIGHT: [(&str, usize); 19] = [
    ("people", 14),
    ("know", 13),
    ("think", 13),
    ("there", 12),
    ("system", 11),
    ("have", 11),
    ("just", 10),
    ("very", 10),
    ("what", 9),
    ("don't", 9),
    ("one", 8),
    ("been", 8),
    ("with", 7),
    ("about", 7),
    ("work", 6),
    ("which", 6),
    ("some", 5),
    ("do", 5),
    ("make", 4),
];

/// Per-word sense counts: `discourse` of `total` occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordMarginal {
    pub word: Token,
    pub discourse: usize,
    pub total: usize,
}

impl WordMarginal {
    pub fn sentential(&self) -> usize {
        self.total - self.discourse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("marginals line {line}: {message}")]
    MarginalsSyntax { line: usize, message: String },
    #[error("`{0}` is not a clue word")]
    NotAClueWord(Token),
    #[error("`{0}` listed twice")]
    DuplicateWord(Token),
    #[error("`{word}`: discourse count {discourse} exceeds total {total}")]
    DiscourseExceedsTotal {
        word: Token,
        discourse: usize,
        total: usize,
    },
    #[error("profile for `{0}` does not match its marginal")]
    ProfileMismatch(Token),
    #[error("infeasible constraints: {0}")]
    Infeasible(String),
}

/// Parses `word<TAB>discourse<TAB>total` lines. `#` lines are comments.
pub fn parse_marginals(text: &str) -> Result<Vec<WordMarginal>, SynthError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let err = |message: String| SynthError::MarginalsSyntax {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        }
        let word = normalize_token(fields[0]).map_err(|e| err(e.to_string()))?;
        let count = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| err(format!("`{s}` is not a count")))
        };
        out.push(WordMarginal {
            word,
            discourse: count(fields[1])?,
            total: count(fields[2])?,
        });
    }
    Ok(out)
}

/// Count of cases, and how many of them are Discourse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCount {
    pub total: usize,
    pub discourse: usize,
}

/// How position -1 divides the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeftPartition {
    pub period: ClassCount,
    pub comma: ClassCount,
    /// Cases with neither `<period>` nor `<comma>` at -1.
    pub rest: ClassCount,
}

impl LeftPartition {
    /// 189 (185 D) after a period, 72 (42 D) after a comma, 766 (180 D) otherwise.
    pub fn baseline_counts() -> Self {
        LeftPartition {
            period: ClassCount { total: 189, discourse: 185 },
            comma: ClassCount { total: 72, discourse: 42 },
            rest: ClassCount { total: 766, discourse: 180 },
        }
    }
}

/// Constraint on one context slot of a case group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Fixed(Token),
    /// Any filler token except the listed ones.
    Excluding(Vec<Token>),
}

/// A block of cases sharing slot constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseGroup {
    pub slots: Vec<(Position, Slot)>,
    pub discourse: usize,
    pub sentential: usize,
}

impl CaseGroup {
    fn slot(&self, position: Position) -> Option<&Slot> {
        self.slots.iter().find(|(p, _)| *p == position).map(|(_, s)| s)
    }
}

/// Pinned context structure for every occurrence of one clue word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordProfile {
    pub word: Token,
    pub groups: Vec<CaseGroup>,
}

impl WordProfile {
    /// The `and` structure whose rule projection is 29/30, 18/25, 1/1, 9/14,
    /// 9/12, 6/7, 5/6, 1/2 and 188/251 under the matching fixture tree.
    pub fn and_profile() -> Self {
        let t = |s: &str| normalize_token(s).expect("static token");
        let left_excl = || Slot::Excluding(vec![t("<period>"), t("<comma>"), t("is")]);
        let right_tested = ["the", "i", "we", "this", "at"];
        let group = |slots: Vec<(Position, Slot)>, d: usize, s: usize| CaseGroup {
            slots,
            discourse: d,
            sentential: s,
        };
        let one = Position::new(1).expect("position 1");
        let mut groups = vec![
            group(vec![(Position::LEFT, Slot::Fixed(t("<period>")))], 29, 1),
            group(vec![(Position::LEFT, Slot::Fixed(t("<comma>")))], 18, 7),
            group(vec![(Position::LEFT, Slot::Fixed(t("is")))], 1, 0),
        ];
        for (word, d, s) in [("the", 5, 9), ("i", 9, 3), ("we", 6, 1), ("this", 5, 1), ("at", 1, 1)] {
            groups.push(group(
                vec![(Position::LEFT, left_excl()), (one, Slot::Fixed(t(word)))],
                d,
                s,
            ));
        }
        groups.push(group(
            vec![
                (Position::LEFT, left_excl()),
                (one, Slot::Excluding(right_tested.iter().map(|w| t(w)).collect())),
            ],
            63,
            188,
        ));
        WordProfile {
            word: t("and"),
            groups,
        }
    }

    fn totals(&self) -> (usize, usize) {
        self.groups
            .iter()
            .fold((0, 0), |(d, s), g| (d + g.discourse, s + g.sentential))
    }
}

/// Everything the generator needs besides the seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPlan {
    pub marginals: Vec<WordMarginal>,
    pub left: LeftPartition,
    pub profiles: Vec<WordProfile>,
}

impl SynthPlan {
    /// Baseline-tree left partition, plus the `and` profile when the
    /// marginals give `and` exactly 137 of 348.
    pub fn standard(marginals: &[WordMarginal]) -> Self {
        let and = WordProfile::and_profile();
        let (d, s) = and.totals();
        let profiles = marginals
            .iter()
            .any(|m| m.word == and.word && m.discourse == d && m.total == d + s)
            .then_some(and)
            .into_iter()
            .collect();
        SynthPlan {
            marginals: marginals.to_vec(),
            left: LeftPartition::baseline_counts(),
            profiles,
        }
    }
}

pub fn synth_corpus(marginals: &[WordMarginal], seed: u64) -> Result<Corpus, SynthError> {
    synth_with(&SynthPlan::standard(marginals), seed)
}

/// One case under construction: fixed slots are `Some`, exclusions apply to
/// the slots still open.
struct Skeleton {
    class: SenseClass,
    slots: [Option<Token>; 6],
    exclude: [Vec<Token>; 6],
}

impl Skeleton {
    fn new(class: SenseClass, word: &Token) -> Self {
        let mut slots: [Option<Token>; 6] = Default::default();
        slots[Position::WORD.index()] = Some(word.clone());
        Skeleton {
            class,
            slots,
            exclude: Default::default(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LeftKind {
    Period,
    Comma,
    Rest,
}

fn left_kind(slot: Option<&Slot>) -> LeftKind {
    match slot {
        Some(Slot::Fixed(t)) if t.as_str() == PERIOD => LeftKind::Period,
        Some(Slot::Fixed(t)) if t.as_str() == COMMA => LeftKind::Comma,
        _ => LeftKind::Rest,
    }
}

/// Remaining (discourse, sentential) budget for each left-context kind.
struct LeftBudget {
    period: (usize, usize),
    comma: (usize, usize),
    rest: (usize, usize),
}

impl LeftBudget {
    fn from_partition(p: &LeftPartition) -> Result<Self, SynthError> {
        let split = |name: &str, c: ClassCount| {
            if c.discourse > c.total {
                Err(SynthError::Infeasible(format!(
                    "{name}: {} discourse of {} cases",
                    c.discourse, c.total
                )))
            } else {
                Ok((c.discourse, c.total - c.discourse))
            }
        };
        Ok(LeftBudget {
            period: split("period", p.period)?,
            comma: split("comma", p.comma)?,
            rest: split("rest", p.rest)?,
        })
    }

    fn take(&mut self, kind: LeftKind, discourse: usize, sentential: usize) -> Result<(), SynthError> {
        let (name, slot) = match kind {
            LeftKind::Period => ("period", &mut self.period),
            LeftKind::Comma => ("comma", &mut self.comma),
            LeftKind::Rest => ("rest", &mut self.rest),
        };
        if slot.0 < discourse || slot.1 < sentential {
            return Err(SynthError::Infeasible(format!(
                "profiles need more `{name}` cases at -1 than the partition allows"
            )));
        }
        slot.0 -= discourse;
        slot.1 -= sentential;
        Ok(())
    }
}

pub fn synth_with(plan: &SynthPlan, seed: u64) -> Result<Corpus, SynthError> {
    check_marginals(&plan.marginals)?;
    let total: usize = plan.marginals.iter().map(|m| m.total).sum();
    let discourse: usize = plan.marginals.iter().map(|m| m.discourse).sum();
    let left = &plan.left;
    let part_total = left.period.total + left.comma.total + left.rest.total;
    let part_discourse = left.period.discourse + left.comma.discourse + left.rest.discourse;
    if part_total != total || part_discourse != discourse {
        return Err(SynthError::Infeasible(format!(
            "left partition covers {part_total} cases ({part_discourse} discourse) \
             but marginals give {total} ({discourse} discourse)"
        )));
    }
    let mut budget = LeftBudget::from_partition(left)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut skeletons: Vec<Skeleton> = Vec::with_capacity(total);
    let mut open_discourse = Vec::new();
    let mut open_sentential = Vec::new();
    for m in &plan.marginals {
        match plan.profiles.iter().find(|p| p.word == m.word) {
            Some(profile) => {
                if profile.totals() != (m.discourse, m.sentential()) {
                    return Err(SynthError::ProfileMismatch(m.word.clone()));
                }
                for group in &profile.groups {
                    let kind = left_kind(group.slot(Position::LEFT));
                    budget.take(kind, group.discourse, group.sentential)?;
                    let classes = std::iter::repeat_n(SenseClass::Discourse, group.discourse)
                        .chain(std::iter::repeat_n(SenseClass::Sentential, group.sentential));
                    for class in classes {
                        let mut sk = Skeleton::new(class, &m.word);
                        for (position, slot) in &group.slots {
                            match slot {
                                Slot::Fixed(t) => sk.slots[position.index()] = Some(t.clone()),
                                Slot::Excluding(ex) => sk.exclude[position.index()] = ex.clone(),
                            }
                        }
                        if kind == LeftKind::Rest {
                            push_left_exclusions(&mut sk);
                        }
                        skeletons.push(sk);
                    }
                }
            }
            None => {
                for class in std::iter::repeat_n(SenseClass::Discourse, m.discourse)
                    .chain(std::iter::repeat_n(SenseClass::Sentential, m.sentential()))
                {
                    let idx = skeletons.len();
                    skeletons.push(Skeleton::new(class, &m.word));
                    match class {
                        SenseClass::Discourse => open_discourse.push(idx),
                        SenseClass::Sentential => open_sentential.push(idx),
                    }
                }
            }
        }
    }

    // Distribute the remaining left-context budget over unprofiled cases.
    for (open, pick) in [
        (&mut open_discourse, 0usize),
        (&mut open_sentential, 1usize),
    ] {
        open.shuffle(&mut rng);
        let get = |c: (usize, usize)| if pick == 0 { c.0 } else { c.1 };
        let (n_period, n_comma) = (get(budget.period), get(budget.comma));
        let n_rest = get(budget.rest);
        if n_period + n_comma + n_rest != open.len() {
            return Err(SynthError::Infeasible(
                "left partition does not match the unprofiled cases".to_string(),
            ));
        }
        for (k, &idx) in open.iter().enumerate() {
            let sk = &mut skeletons[idx];
            if k < n_period {
                sk.slots[Position::LEFT.index()] = Some(Token::period());
            } else if k < n_period + n_comma {
                sk.slots[Position::LEFT.index()] = Some(Token::comma());
            } else {
                push_left_exclusions(sk);
            }
        }
    }

    fill_open_slots(&mut skeletons, &mut rng);

    Ok(skeletons
        .into_iter()
        .map(|sk| {
            let context = sk.slots.map(|t| t.expect("every slot filled"));
            TrainingCase::new(sk.class, context).expect("marginal words are clue words")
        })
        .collect())
}

fn push_left_exclusions(sk: &mut Skeleton) {
    let ex = &mut sk.exclude[Position::LEFT.index()];
    for t in [Token::period(), Token::comma()] {
        if !ex.contains(&t) {
            ex.push(t);
        }
    }
}

fn check_marginals(marginals: &[WordMarginal]) -> Result<(), SynthError> {
    let mut seen = BTreeSet::new();
    for m in marginals {
        if !is_clue_word(m.word.as_str()) {
            return Err(SynthError::NotAClueWord(m.word.clone()));
        }
        if !seen.insert(m.word.clone()) {
            return Err(SynthError::DuplicateWord(m.word.clone()));
        }
        if m.discourse > m.total {
            return Err(SynthError::DiscourseExceedsTotal {
                word: m.word.clone(),
                discourse: m.discourse,
                total: m.total,
            });
        }
    }
    Ok(())
}

fn fill_open_slots(skeletons: &mut [Skeleton], rng: &mut ChaCha8Rng) {
    let mut open: Vec<(usize, usize)> = skeletons
        .iter()
        .enumerate()
        .flat_map(|(i, sk)| {
            sk.slots
                .iter()
                .enumerate()
                .filter(|(_, t)| t.is_none())
                .map(move |(p, _)| (i, p))
        })
        .collect();
    open.shuffle(rng);

    let token = |s: &str| normalize_token(s).expect("static filler token");
    let mut cursor = 0;
    let mut deferred = Vec::new();
    for (text, count) in FILLER_LIGHT {
        let t = token(text);
        let mut placed = 0;
        while placed < count && cursor < open.len() {
            let (i, p) = open[cursor];
            cursor += 1;
            if skeletons[i].exclude[p].contains(&t) {
                deferred.push((i, p));
                continue;
            }
            skeletons[i].slots[p] = Some(t.clone());
            placed += 1;
        }
    }
    deferred.extend_from_slice(&open[cursor.min(open.len())..]);

    let heavy: Vec<Token> = FILLER_HEAVY.iter().map(|(s, _)| token(s)).collect();
    let weights = WeightedIndex::new(FILLER_HEAVY.iter().map(|(_, w)| *w)).expect("positive weights");
    // Keep the fill order independent of how many light slots were deferred.
    deferred.sort_unstable();
    for (i, p) in deferred {
        let t = loop {
            let candidate = &heavy[weights.sample(rng)];
            if !skeletons[i].exclude[p].contains(candidate) {
                break candidate.clone();
            }
        };
        skeletons[i].slots[p] = Some(t);
    }
}
