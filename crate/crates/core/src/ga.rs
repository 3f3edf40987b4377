//! Genetic-algorithm tree induction.
//!
//! Individuals are whole trees. Crossover works either on structure (swap in
//! a subtree of the other parent) or on an arc's token set (mix the tokens of
//! two arcs testing the same position). Fitness is the number of training
//! cases classified correctly; the best tree seen in any generation is
//! returned.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, Position, SenseClass, Token, Vocabulary};
use crate::tree::{Arc, CompiledTree, DecisionTree, EncodedCorpus, Step, TokenSet, TreeLimits};

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub elitism: usize,
    pub max_depth: usize,
    pub max_arcs: usize,
    pub max_tokens_per_arc: usize,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 100,
            generations: 200,
            crossover_rate: 0.8,
            mutation_rate: 0.2,
            tournament_size: 3,
            elitism: 1,
            max_depth: 6,
            max_arcs: 8,
            max_tokens_per_arc: 8,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn limits(&self) -> TreeLimits {
        TreeLimits {
            max_depth: self.max_depth,
            max_arcs: self.max_arcs,
        }
    }

    pub fn check(&self) -> Result<(), GaError> {
        let bad = |msg: &str| Err(GaError::InvalidParams(msg.to_string()));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("rates must lie in [0, 1]");
        }
        if self.elitism >= self.population_size {
            return bad("elitism must be smaller than population_size");
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be at least 1");
        }
        if self.max_arcs == 0 || self.max_tokens_per_arc == 0 {
            return bad("max_arcs and max_tokens_per_arc must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("invalid GA parameters: {0}")]
    InvalidParams(String),
    #[error("vocabulary has no tokens for position {0}")]
    EmptyPartition(Position),
    #[error("training corpus is empty")]
    EmptyTraining,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub best_tree: DecisionTree,
    pub best_train_fitness: usize,
    pub evaluations_used: usize,
    pub seed: u64,
    /// Highest fitness in each population, the initial one first.
    pub generation_best: Vec<usize>,
}

/// Vocabulary partitions as indexable lists.
struct Pools {
    general: Vec<Token>,
    clue: Vec<Token>,
}

impl Pools {
    fn new(vocab: &Vocabulary) -> Result<Self, GaError> {
        if vocab.clue.is_empty() {
            return Err(GaError::EmptyPartition(Position::WORD));
        }
        if vocab.general.is_empty() {
            return Err(GaError::EmptyPartition(Position::LEFT));
        }
        Ok(Pools {
            general: vocab.general.iter().cloned().collect(),
            clue: vocab.clue.iter().cloned().collect(),
        })
    }

    fn for_position(&self, p: Position) -> &[Token] {
        if p.is_word() {
            &self.clue
        } else {
            &self.general
        }
    }
}

fn sample_tokens<R: Rng>(pool: &[Token], count: usize, rng: &mut R) -> TokenSet {
    let count = count.min(pool.len()).max(1);
    let mut picked = sample(rng, pool.len(), count).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| pool[i].clone()).collect()
}

/// Probability that the generator stops with a leaf `level` nodes below the
/// root of the subtree it is growing.
fn leaf_probability(level: usize) -> f64 {
    (0.25 + 0.25 * level as f64).min(1.0)
}

fn grow<R: Rng>(pools: &Pools, params: &GaParams, level: usize, budget: usize, rng: &mut R) -> DecisionTree {
    if budget == 0 || rng.gen_bool(leaf_probability(level)) {
        return DecisionTree::Leaf(random_class(rng));
    }
    let position = Position::ALL[rng.gen_range(0..Position::ALL.len())];
    let pool = pools.for_position(position);
    let n_arcs = rng.gen_range(1..=params.max_arcs);
    let mut arcs = Vec::with_capacity(n_arcs);
    for _ in 0..n_arcs {
        let k = rng.gen_range(1..=params.max_tokens_per_arc.min(pool.len()));
        let tokens = sample_tokens(pool, k, rng);
        arcs.push(Arc::new(tokens, grow(pools, params, level + 1, budget - 1, rng)));
    }
    let default = grow(pools, params, level + 1, budget - 1, rng);
    DecisionTree::node(position, arcs, default)
}

fn random_class<R: Rng>(rng: &mut R) -> SenseClass {
    if rng.gen_bool(0.5) {
        SenseClass::Discourse
    } else {
        SenseClass::Sentential
    }
}

/// Grow-style random tree within `params`' depth, arc and token limits.
pub fn random_tree<R: Rng>(vocab: &Vocabulary, params: &GaParams, rng: &mut R) -> Result<DecisionTree, GaError> {
    let pools = Pools::new(vocab)?;
    Ok(grow(&pools, params, 0, params.max_depth, rng))
}

/// Number of internal nodes above the node at `path`.
fn depth_of(path: &[Step]) -> usize {
    path.len()
}

/// Which edit [`mutate_with`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    FlipLeaf,
    Relabel,
    AddToken,
    RemoveToken,
    ReplaceSubtree,
}

impl MutationKind {
    pub const ALL: [MutationKind; 5] = [
        MutationKind::FlipLeaf,
        MutationKind::Relabel,
        MutationKind::AddToken,
        MutationKind::RemoveToken,
        MutationKind::ReplaceSubtree,
    ];
}

/// `(node path, arc index)` of every arc in preorder.
fn arc_sites(tree: &DecisionTree) -> Vec<(Vec<Step>, usize)> {
    tree.paths()
        .into_iter()
        .flat_map(|path| {
            let n = match tree.at(&path) {
                Some(DecisionTree::Node(node)) => node.arcs.len(),
                _ => 0,
            };
            (0..n).map(move |i| (path.clone(), i))
        })
        .collect()
}

fn node_mut<'a>(tree: &'a mut DecisionTree, path: &[Step]) -> &'a mut crate::tree::Node {
    match tree.at_mut(path) {
        Some(DecisionTree::Node(n)) => n,
        _ => unreachable!("path was collected from this tree"),
    }
}

fn node_ref<'a>(tree: &'a DecisionTree, path: &[Step]) -> &'a crate::tree::Node {
    match tree.at(path) {
        Some(DecisionTree::Node(n)) => n,
        _ => unreachable!("path was collected from this tree"),
    }
}

struct Sites {
    leaves: Vec<Vec<Step>>,
    internals: Vec<Vec<Step>>,
    addable: Vec<(Vec<Step>, usize)>,
    removable: Vec<(Vec<Step>, usize)>,
    all: Vec<Vec<Step>>,
}

fn sites(tree: &DecisionTree, pools: &Pools, params: &GaParams) -> Sites {
    let all = tree.paths();
    let (leaves, internals) = all
        .iter()
        .cloned()
        .partition(|p| matches!(tree.at(p), Some(DecisionTree::Leaf(_))));
    let mut addable = Vec::new();
    let mut removable = Vec::new();
    for (path, i) in arc_sites(tree) {
        let node = node_ref(tree, &path);
        let tokens = &node.arcs[i].tokens;
        if tokens.len() >= 2 {
            removable.push((path.clone(), i));
        }
        let pool = pools.for_position(node.position);
        if tokens.len() < params.max_tokens_per_arc && pool.iter().any(|t| !tokens.contains(t)) {
            addable.push((path, i));
        }
    }
    Sites {
        leaves,
        internals,
        addable,
        removable,
        all,
    }
}

fn pick<'a, T, R: Rng>(items: &'a [T], rng: &mut R) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Applies one uniformly chosen applicable edit.
pub fn mutate<R: Rng>(
    tree: &DecisionTree,
    vocab: &Vocabulary,
    params: &GaParams,
    rng: &mut R,
) -> Result<DecisionTree, GaError> {
    let pools = Pools::new(vocab)?;
    Ok(mutate_in(tree, &pools, params, rng))
}

fn mutate_in<R: Rng>(tree: &DecisionTree, pools: &Pools, params: &GaParams, rng: &mut R) -> DecisionTree {
    let s = sites(tree, pools, params);
    let applicable: Vec<MutationKind> = MutationKind::ALL
        .into_iter()
        .filter(|k| match k {
            MutationKind::FlipLeaf => !s.leaves.is_empty(),
            MutationKind::Relabel => !s.internals.is_empty(),
            MutationKind::AddToken => !s.addable.is_empty(),
            MutationKind::RemoveToken => !s.removable.is_empty(),
            MutationKind::ReplaceSubtree => true,
        })
        .collect();
    let kind = *pick(&applicable, rng);
    apply(tree, kind, &s, pools, params, rng).expect("kind is applicable")
}

/// Applies the edit `kind` at a uniformly chosen site, or `None` when the
/// tree has no site for it.
pub fn mutate_with<R: Rng>(
    tree: &DecisionTree,
    kind: MutationKind,
    vocab: &Vocabulary,
    params: &GaParams,
    rng: &mut R,
) -> Result<Option<DecisionTree>, GaError> {
    let pools = Pools::new(vocab)?;
    let s = sites(tree, &pools, params);
    Ok(apply(tree, kind, &s, &pools, params, rng))
}

fn apply<R: Rng>(
    tree: &DecisionTree,
    kind: MutationKind,
    s: &Sites,
    pools: &Pools,
    params: &GaParams,
    rng: &mut R,
) -> Option<DecisionTree> {
    let mut out = tree.clone();
    match kind {
        MutationKind::FlipLeaf => {
            if s.leaves.is_empty() {
                return None;
            }
            let path = pick(&s.leaves, rng);
            if let Some(DecisionTree::Leaf(c)) = out.at_mut(path) {
                *c = c.flipped();
            }
        }
        MutationKind::Relabel => {
            if s.internals.is_empty() {
                return None;
            }
            let path = pick(&s.internals, rng).clone();
            let node = node_mut(&mut out, &path);
            let others: Vec<Position> = Position::ALL.into_iter().filter(|p| *p != node.position).collect();
            node.position = *pick(&others, rng);
            let pool = pools.for_position(node.position);
            for arc in &mut node.arcs {
                let k = arc.tokens.len().min(params.max_tokens_per_arc);
                arc.tokens = sample_tokens(pool, k, rng);
            }
        }
        MutationKind::AddToken => {
            if s.addable.is_empty() {
                return None;
            }
            let (path, i) = pick(&s.addable, rng).clone();
            let node = node_mut(&mut out, &path);
            let pool = pools.for_position(node.position);
            let tokens = &mut node.arcs[i].tokens;
            let fresh: Vec<&Token> = pool.iter().filter(|t| !tokens.contains(t)).collect();
            tokens.insert((*pick(&fresh, rng)).clone());
        }
        MutationKind::RemoveToken => {
            if s.removable.is_empty() {
                return None;
            }
            let (path, i) = pick(&s.removable, rng).clone();
            let tokens = &mut node_mut(&mut out, &path).arcs[i].tokens;
            let at = rng.gen_range(0..tokens.len());
            tokens.remove_at(at);
        }
        MutationKind::ReplaceSubtree => {
            let path = pick(&s.all, rng).clone();
            let budget = params.max_depth.saturating_sub(depth_of(&path));
            let fresh = grow(pools, params, 0, budget, rng);
            *out.at_mut(&path).expect("collected path") = fresh;
        }
    }
    Some(out)
}

/// Breeding operators that need the training set (crossover repairs
/// over-deep offspring with majority-class leaves).
pub struct Breeder<'a> {
    pools: Pools,
    params: &'a GaParams,
    train: &'a EncodedCorpus,
}

impl<'a> Breeder<'a> {
    pub fn new(vocab: &Vocabulary, params: &'a GaParams, train: &'a EncodedCorpus) -> Result<Self, GaError> {
        Ok(Breeder {
            pools: Pools::new(vocab)?,
            params,
            train,
        })
    }

    pub fn random_tree<R: Rng>(&self, rng: &mut R) -> DecisionTree {
        grow(&self.pools, self.params, 0, self.params.max_depth, rng)
    }

    pub fn mutate<R: Rng>(&self, tree: &DecisionTree, rng: &mut R) -> DecisionTree {
        mutate_in(tree, &self.pools, self.params, rng)
    }

    /// Subtree or token-set crossover with equal probability. Token-set
    /// crossover falls back to subtree crossover when the parents have no
    /// arcs under nodes testing the same position.
    pub fn crossover<R: Rng>(&self, a: &DecisionTree, b: &DecisionTree, rng: &mut R) -> DecisionTree {
        if rng.gen_bool(0.5) {
            if let Some(child) = self.token_set_crossover(a, b, rng) {
                return child;
            }
        }
        let a_paths = a.paths();
        let b_paths = b.paths();
        let at = pick(&a_paths, rng);
        let from = pick(&b_paths, rng);
        self.subtree_crossover_at(a, at, b, from)
    }

    /// Copy of `a` with the node at `at` replaced by `b`'s subtree at
    /// `from`, cut back to the depth limit.
    pub fn subtree_crossover_at(&self, a: &DecisionTree, at: &[Step], b: &DecisionTree, from: &[Step]) -> DecisionTree {
        let mut child = a.clone();
        let donor = b.at(from).expect("valid donor path").clone();
        *child.at_mut(at).expect("valid target path") = donor;
        if child.depth() > self.params.max_depth {
            let all: Vec<usize> = (0..self.train.len()).collect();
            child = self.truncate(&child, self.params.max_depth, &all);
        }
        child
    }

    fn majority(&self, cases: &[usize]) -> SenseClass {
        let d = cases
            .iter()
            .filter(|&&i| self.train.class(i) == SenseClass::Discourse)
            .count();
        if 2 * d > cases.len() {
            SenseClass::Discourse
        } else {
            SenseClass::Sentential
        }
    }

    fn truncate(&self, tree: &DecisionTree, budget: usize, cases: &[usize]) -> DecisionTree {
        let DecisionTree::Node(node) = tree else {
            return tree.clone();
        };
        if budget == 0 {
            return DecisionTree::Leaf(self.majority(cases));
        }
        if tree.depth() <= budget {
            return tree.clone();
        }
        let index = self.train.index();
        let arc_ids: Vec<Vec<u32>> = node
            .arcs
            .iter()
            .map(|a| a.tokens.iter().filter_map(|t| index.get(t)).collect())
            .collect();
        let mut routed: Vec<Vec<usize>> = vec![Vec::new(); node.arcs.len() + 1];
        for &i in cases {
            let token = self.train.row(i)[node.position.index()];
            let slot = arc_ids
                .iter()
                .position(|ids| ids.contains(&token))
                .unwrap_or(node.arcs.len());
            routed[slot].push(i);
        }
        let arcs = node
            .arcs
            .iter()
            .zip(&routed)
            .map(|(a, sub)| Arc::new(a.tokens.clone(), self.truncate(&a.child, budget - 1, sub)))
            .collect();
        let default = self.truncate(&node.default, budget - 1, &routed[node.arcs.len()]);
        DecisionTree::node(node.position, arcs, default)
    }

    fn token_set_crossover<R: Rng>(&self, a: &DecisionTree, b: &DecisionTree, rng: &mut R) -> Option<DecisionTree> {
        let a_arcs = arc_sites(a);
        let b_arcs = arc_sites(b);
        let mut pairs = Vec::new();
        for (ia, (pa, _)) in a_arcs.iter().enumerate() {
            let pos_a = node_ref(a, pa).position;
            for (ib, (pb, _)) in b_arcs.iter().enumerate() {
                if node_ref(b, pb).position == pos_a {
                    pairs.push((ia, ib));
                }
            }
        }
        if pairs.is_empty() {
            return None;
        }
        let &(ia, ib) = pick(&pairs, rng);
        let (pa, arc_a) = &a_arcs[ia];
        let (pb, arc_b) = &b_arcs[ib];
        let union: Vec<Token> = node_ref(a, pa).arcs[*arc_a]
            .tokens
            .iter()
            .chain(node_ref(b, pb).arcs[*arc_b].tokens.iter())
            .cloned()
            .collect::<TokenSet>()
            .as_slice()
            .to_vec();
        let keep = union.len().div_ceil(2).min(self.params.max_tokens_per_arc).max(1);
        let tokens = sample_tokens(&union, keep, rng);
        let mut child = a.clone();
        node_mut(&mut child, pa).arcs[*arc_a].tokens = tokens;
        Some(child)
    }
}

fn fitness_all(population: &[DecisionTree], train: &EncodedCorpus) -> Vec<usize> {
    population
        .par_iter()
        .map(|tree| CompiledTree::new(tree, train.index()).correct(train))
        .collect()
}

/// Number of training cases `tree` classifies correctly.
pub fn fitness(tree: &DecisionTree, train: &Corpus) -> usize {
    let encoded = EncodedCorpus::new(train);
    CompiledTree::new(tree, encoded.index()).correct(&encoded)
}

fn tournament<R: Rng>(fit: &[usize], size: usize, rng: &mut R) -> usize {
    let mut best = rng.gen_range(0..fit.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..fit.len());
        if fit[challenger] > fit[best] {
            best = challenger;
        }
    }
    best
}

/// Generational GA with tournament selection and elitism. Returns the
/// fittest tree met in any generation; ties keep the earlier tree.
pub fn induce_ga(train: &Corpus, vocab: &Vocabulary, params: &GaParams) -> Result<RunResult, GaError> {
    params.check()?;
    if train.is_empty() {
        return Err(GaError::EmptyTraining);
    }
    let encoded = EncodedCorpus::new(train);
    let breeder = Breeder::new(vocab, params, &encoded)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut population: Vec<DecisionTree> = (0..params.population_size)
        .map(|_| breeder.random_tree(&mut rng))
        .collect();
    let mut fit = fitness_all(&population, &encoded);
    let mut evaluations = population.len();

    let mut best_index = argmax(&fit);
    let mut best_tree = population[best_index].clone();
    let mut best_fitness = fit[best_index];
    let mut generation_best = vec![best_fitness];

    for _ in 0..params.generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&i, &j| fit[j].cmp(&fit[i]).then(i.cmp(&j)));
        let mut next: Vec<DecisionTree> = Vec::with_capacity(params.population_size);
        let mut next_fit: Vec<Option<usize>> = Vec::with_capacity(params.population_size);
        for &i in &ranked[..params.elitism] {
            next.push(population[i].clone());
            next_fit.push(Some(fit[i]));
        }
        while next.len() < params.population_size {
            let p1 = tournament(&fit, params.tournament_size, &mut rng);
            let mut child = if rng.gen_bool(params.crossover_rate) {
                let p2 = tournament(&fit, params.tournament_size, &mut rng);
                breeder.crossover(&population[p1], &population[p2], &mut rng)
            } else {
                population[p1].clone()
            };
            if rng.gen_bool(params.mutation_rate) {
                child = breeder.mutate(&child, &mut rng);
            }
            next.push(child);
            next_fit.push(None);
        }
        let fresh: Vec<usize> = (0..next.len()).filter(|&i| next_fit[i].is_none()).collect();
        let scored: Vec<usize> = fresh
            .par_iter()
            .map(|&i| CompiledTree::new(&next[i], encoded.index()).correct(&encoded))
            .collect();
        evaluations += scored.len();
        for (&i, score) in fresh.iter().zip(scored) {
            next_fit[i] = Some(score);
        }
        population = next;
        fit = next_fit.into_iter().map(|f| f.expect("scored")).collect();

        best_index = argmax(&fit);
        if fit[best_index] > best_fitness {
            best_fitness = fit[best_index];
            best_tree = population[best_index].clone();
        }
        generation_best.push(fit[best_index]);
    }

    Ok(RunResult {
        best_tree,
        best_train_fitness: best_fitness,
        evaluations_used: evaluations,
        seed: params.seed,
        generation_best,
    })
}

/// First index holding the maximum.
fn argmax(values: &[usize]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, split_corpus, VocabularyConfig};
    use crate::fixtures::synthetic_corpus;
    use crate::tree::{evaluate, hl_baseline_tree, parse_tree, serialize_tree, validate_tree};

    fn setup() -> (Corpus, Vocabulary) {
        let (train, _) = split_corpus(&synthetic_corpus(), 0).unwrap();
        let vocab = build_vocabulary(&train, VocabularyConfig::default()).unwrap();
        (train, vocab)
    }

    #[test]
    fn zero_depth_forces_leaf() {
        let (_, vocab) = setup();
        let params = GaParams {
            max_depth: 0,
            ..GaParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(matches!(random_tree(&vocab, &params, &mut rng).unwrap(), DecisionTree::Leaf(_)));
        }
    }

    #[test]
    fn random_trees_are_deterministic_and_valid() {
        let (_, vocab) = setup();
        let params = GaParams::default();
        let a = random_tree(&vocab, &params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_tree(&vocab, &params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let t = random_tree(&vocab, &params, &mut rng).unwrap();
            validate_tree(&t, &vocab, params.limits()).unwrap();
        }
    }

    #[test]
    fn empty_partition_is_an_error() {
        let (_, mut vocab) = setup();
        vocab.clue.clear();
        let err = random_tree(&vocab, &GaParams::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert_eq!(err, GaError::EmptyPartition(Position::WORD));
    }

    #[test]
    fn fitness_matches_evaluate() {
        let (train, _) = setup();
        let leaf = DecisionTree::Leaf(SenseClass::Discourse);
        assert_eq!(fitness(&leaf, &train), train.count_class(SenseClass::Discourse));
        assert_eq!(fitness(&hl_baseline_tree(), &synthetic_corpus()), 813);
        let reparsed = parse_tree(&serialize_tree(&hl_baseline_tree())).unwrap();
        assert_eq!(fitness(&reparsed, &train), evaluate(&hl_baseline_tree(), &train).unwrap().correct);
    }

    #[test]
    fn crossover_of_identical_leaves() {
        let (train, vocab) = setup();
        let params = GaParams::default();
        let enc = EncodedCorpus::new(&train);
        let breeder = Breeder::new(&vocab, &params, &enc).unwrap();
        let leaf = DecisionTree::Leaf(SenseClass::Discourse);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(breeder.crossover(&leaf, &leaf, &mut rng), leaf);
        }
    }

    #[test]
    fn root_swap_with_self_is_identity() {
        let (train, vocab) = setup();
        let params = GaParams::default();
        let enc = EncodedCorpus::new(&train);
        let breeder = Breeder::new(&vocab, &params, &enc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = breeder.random_tree(&mut rng);
            assert_eq!(breeder.subtree_crossover_at(&a, &[], &a, &[]), a);
        }
    }

    #[test]
    fn over_deep_offspring_is_cut_back_with_majority_leaves() {
        let (train, vocab) = setup();
        let params = GaParams {
            max_depth: 1,
            ..GaParams::default()
        };
        let enc = EncodedCorpus::new(&train);
        let breeder = Breeder::new(&vocab, &params, &enc).unwrap();
        let host = hl_baseline_tree();
        // Graft the baseline under the default arc: depth 2 with a limit of 1.
        let child = breeder.subtree_crossover_at(&host, &[Step::Default], &host, &[]);
        assert_eq!(child.depth(), 1);
        // Cases reaching the default arc are mostly Sentential.
        assert_eq!(child, hl_baseline_tree());
    }

    #[test]
    fn leaf_mutations() {
        let (_, vocab) = setup();
        let params = GaParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let leaf = DecisionTree::Leaf(SenseClass::Sentential);
        let flipped = mutate_with(&leaf, MutationKind::FlipLeaf, &vocab, &params, &mut rng).unwrap();
        assert_eq!(flipped, Some(DecisionTree::Leaf(SenseClass::Discourse)));
        for kind in [MutationKind::Relabel, MutationKind::AddToken, MutationKind::RemoveToken] {
            assert_eq!(mutate_with(&leaf, kind, &vocab, &params, &mut rng).unwrap(), None);
        }
        for _ in 0..200 {
            // Either the flip or a fresh random subtree; both must validate.
            let m = mutate(&DecisionTree::Leaf(SenseClass::Discourse), &vocab, &params, &mut rng).unwrap();
            validate_tree(&m, &vocab, params.limits()).unwrap();
        }
    }

    #[test]
    fn relabel_resamples_from_the_new_partition() {
        let (_, vocab) = setup();
        let params = GaParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let m = mutate_with(&hl_baseline_tree(), MutationKind::Relabel, &vocab, &params, &mut rng)
                .unwrap()
                .unwrap();
            let DecisionTree::Node(n) = &m else { panic!("still a node") };
            assert_ne!(n.position, Position::LEFT);
            validate_tree(&m, &vocab, params.limits()).unwrap();
        }
    }

    #[test]
    fn degenerate_run_returns_fitter_initial_tree() {
        let (train, vocab) = setup();
        let params = GaParams {
            population_size: 2,
            generations: 0,
            seed: 11,
            ..GaParams::default()
        };
        let result = induce_ga(&train, &vocab, &params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_tree(&vocab, &params, &mut rng).unwrap();
        let b = random_tree(&vocab, &params, &mut rng).unwrap();
        let (fa, fb) = (fitness(&a, &train), fitness(&b, &train));
        let expected = if fb > fa { b } else { a };
        assert_eq!(result.best_tree, expected);
        assert_eq!(result.best_train_fitness, fa.max(fb));
        assert_eq!(result.evaluations_used, 2);
    }

    #[test]
    fn params_are_checked() {
        let (train, vocab) = setup();
        for params in [
            GaParams { population_size: 1, ..GaParams::default() },
            GaParams { crossover_rate: 1.5, ..GaParams::default() },
            GaParams { elitism: 100, ..GaParams::default() },
        ] {
            assert!(matches!(induce_ga(&train, &vocab, &params), Err(GaError::InvalidParams(_))));
        }
    }
}
