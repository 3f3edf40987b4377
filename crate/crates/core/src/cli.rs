//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 file or parse error,
//! 3 validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{
    build_vocabulary, normalize_token, parse_corpus, parse_marginals, synth_corpus, Corpus, VocabularyConfig,
};
use crate::ga::{induce_ga, GaParams};
use crate::harness::{run_experiment, ExperimentConfig, HarnessError, Method};
use crate::topdown::{induce_topdown, TopDownParams};
use crate::tree::{
    check_shape, evaluate, extract_rules, generalized_rules, hl_baseline_tree, parse_tree, per_word_rules,
    rules_to_tsv, serialize_tree, DecisionTree, EvaluationReport, RuleError, RuleScope, TreeLimits,
};

#[derive(Debug, Parser)]
#[command(name = "cluetree", version, about = "Clue-word sense disambiguation with decision trees")]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic corpus from per-word marginals.
    Synth {
        #[arg(long)]
        marginals: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the arc vocabulary of a training corpus.
    Vocab {
        #[arg(long)]
        train: PathBuf,
        #[command(flatten)]
        vocab: VocabArgs,
    },
    /// Write the fixed baseline tree.
    Baseline {
        #[arg(long)]
        out: PathBuf,
    },
    /// Induce a tree from training cases.
    #[command(subcommand)]
    Induce(Induce),
    /// Print the predicted class of every case.
    Classify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cases: PathBuf,
    },
    /// Print the accuracy of a tree over cases.
    Eval {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cases: PathBuf,
    },
    /// Print the rules of a tree with their counts.
    Rules {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        cases: PathBuf,
        /// Only the rules that fire for this clue word.
        #[arg(long, conflicts_with = "generalize")]
        word: Option<String>,
        /// Pool per-word rules that share their decisive condition.
        #[arg(long)]
        generalize: bool,
    },
    /// Repeated random-half runs with aggregate statistics.
    Experiment {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        method: MethodName,
        #[arg(long)]
        runs: usize,
        #[arg(long)]
        seed: u64,
        /// Also write the tree of the best-by-training run here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long, default_value_t = 10)]
        min_cases: usize,
        #[command(flatten)]
        vocab: VocabArgs,
    },
}

#[derive(Debug, Subcommand)]
enum Induce {
    Ga {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ga: GaArgs,
        #[command(flatten)]
        vocab: VocabArgs,
    },
    Topdown {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        min_cases: usize,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[command(flatten)]
        vocab: VocabArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodName {
    Ga,
    Topdown,
    Baseline,
}

#[derive(Debug, Args)]
struct VocabArgs {
    #[arg(long, default_value_t = 15)]
    general_threshold: usize,
    #[arg(long, default_value_t = 4)]
    clue_threshold: usize,
}

impl VocabArgs {
    fn config(&self) -> VocabularyConfig {
        VocabularyConfig {
            general_threshold: self.general_threshold,
            clue_threshold: self.clue_threshold,
        }
    }
}

#[derive(Debug, Args)]
struct GaArgs {
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 200)]
    gens: usize,
    #[arg(long, default_value_t = 0.8)]
    cx: f64,
    #[arg(long, default_value_t = 0.2)]
    r#mut: f64,
    #[arg(long, default_value_t = 3)]
    tourn: usize,
    #[arg(long, default_value_t = 1)]
    elite: usize,
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
}

impl GaArgs {
    fn params(&self, seed: u64) -> Result<GaParams, CliError> {
        let params = GaParams {
            population_size: self.pop,
            generations: self.gens,
            crossover_rate: self.cx,
            mutation_rate: self.r#mut,
            tournament_size: self.tourn,
            elitism: self.elite,
            max_depth: self.max_depth,
            seed,
            ..GaParams::default()
        };
        params.check().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(params)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::File { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}

fn file_err(path: &Path, message: impl ToString) -> CliError {
    CliError::File {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| file_err(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| file_err(path, e))
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    parse_corpus(&read(path)?).map_err(|e| file_err(path, e))
}

/// Parses a tree file and checks it against the default shape limits.
fn load_tree(path: &Path) -> Result<DecisionTree, CliError> {
    let tree = parse_tree(&read(path)?).map_err(|e| file_err(path, e))?;
    check_shape(&tree, TreeLimits::default()).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(tree)
}

fn nonempty(corpus: &Corpus, path: &Path) -> Result<(), CliError> {
    if corpus.is_empty() {
        Err(CliError::Validation(format!("{}: no cases", path.display())))
    } else {
        Ok(())
    }
}

fn overall_line(report: EvaluationReport) -> String {
    format!("# overall {}/{} = {}\n", report.correct, report.total, report.accuracy_text())
}

/// Parses `args` (program name first), runs the command and writes its
/// standard output to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => dispatch(cli.command),
    };
    match result.and_then(|text| out.write_all(text.as_bytes()).map_err(|e| file_err(Path::new("<stdout>"), e))) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Synth { marginals, seed, out } => {
            let m = parse_marginals(&read(&marginals)?).map_err(|e| file_err(&marginals, e))?;
            let corpus = synth_corpus(&m, seed).map_err(|e| CliError::Validation(e.to_string()))?;
            write(&out, &corpus.to_tsv())?;
            Ok(String::new())
        }
        Command::Vocab { train, vocab } => {
            let corpus = load_corpus(&train)?;
            let v = build_vocabulary(&corpus, vocab.config()).map_err(|e| CliError::Validation(e.to_string()))?;
            let mut text = String::new();
            for (label, set) in [("general", &v.general), ("clue", &v.clue)] {
                for token in set {
                    text.push_str(&format!("{label}\t{token}\n"));
                }
            }
            Ok(text)
        }
        Command::Baseline { out } => {
            write(&out, &(serialize_tree(&hl_baseline_tree()) + "\n"))?;
            Ok(String::new())
        }
        Command::Induce(Induce::Ga { train, seed, out, ga, vocab }) => {
            let params = ga.params(seed)?;
            let corpus = load_corpus(&train)?;
            nonempty(&corpus, &train)?;
            let v = build_vocabulary(&corpus, vocab.config()).map_err(|e| CliError::Validation(e.to_string()))?;
            let result = induce_ga(&corpus, &v, &params).map_err(|e| CliError::Validation(e.to_string()))?;
            write(&out, &(serialize_tree(&result.best_tree) + "\n"))?;
            Ok(format!("train {}/{}\n", result.best_train_fitness, corpus.len()))
        }
        Command::Induce(Induce::Topdown {
            train,
            out,
            min_cases,
            max_depth,
            vocab,
        }) => {
            let params = TopDownParams {
                min_cases_per_split: min_cases,
                max_depth,
                ..TopDownParams::default()
            };
            if min_cases < 2 {
                return Err(CliError::Validation("--min-cases must be at least 2".into()));
            }
            let corpus = load_corpus(&train)?;
            nonempty(&corpus, &train)?;
            let v = build_vocabulary(&corpus, vocab.config()).map_err(|e| CliError::Validation(e.to_string()))?;
            let tree = induce_topdown(&corpus, &v, &params).map_err(|e| CliError::Validation(e.to_string()))?;
            let report = evaluate(&tree, &corpus).map_err(|e| CliError::Validation(e.to_string()))?;
            write(&out, &(serialize_tree(&tree) + "\n"))?;
            Ok(format!("train {report}\n"))
        }
        Command::Classify { tree, cases } => {
            let t = load_tree(&tree)?;
            let corpus = load_corpus(&cases)?;
            let mut text = String::from("# index\tword\tgold\tpredicted\n");
            for (i, case) in corpus.iter().enumerate() {
                text.push_str(&format!("{}\t{}\t{}\t{}\n", i + 1, case.word(), case.class(), t.classify(case)));
            }
            Ok(text)
        }
        Command::Eval { tree, cases } => {
            let t = load_tree(&tree)?;
            let corpus = load_corpus(&cases)?;
            let report = evaluate(&t, &corpus).map_err(|e| CliError::Validation(format!("{}: {e}", cases.display())))?;
            Ok(format!("{report}\n"))
        }
        Command::Rules {
            tree,
            cases,
            word,
            generalize,
        } => {
            let word = word
                .map(|w| normalize_token(&w).map_err(|e| CliError::Usage(format!("--word: {e}"))))
                .transpose()?;
            let t = load_tree(&tree)?;
            let corpus = load_corpus(&cases)?;
            let rule_err = |e: RuleError| CliError::Validation(e.to_string());
            let (rules, scope) = match (&word, generalize) {
                (Some(w), _) => {
                    let (rules, _) = per_word_rules(&t, w, &corpus).map_err(rule_err)?;
                    (rules, RuleScope::Word(w.clone()))
                }
                (None, true) => (generalized_rules(&t, &corpus).map_err(rule_err)?, RuleScope::PerRule),
                (None, false) => (extract_rules(&t, &corpus).map_err(rule_err)?, RuleScope::All),
            };
            let total = rules
                .iter()
                .fold(EvaluationReport::default(), |acc, r| acc.merge(r.report()));
            Ok(rules_to_tsv(&rules, &scope) + &overall_line(total))
        }
        Command::Experiment {
            corpus,
            method,
            runs,
            seed,
            out,
            ga,
            min_cases,
            vocab,
        } => {
            if runs == 0 {
                return Err(CliError::Validation("--runs must be at least 1".into()));
            }
            let method = match method {
                MethodName::Ga => Method::Ga(ga.params(seed)?),
                MethodName::Topdown => {
                    if min_cases < 2 {
                        return Err(CliError::Validation("--min-cases must be at least 2".into()));
                    }
                    Method::TopDown(TopDownParams {
                        min_cases_per_split: min_cases,
                        max_depth: ga.max_depth,
                        ..TopDownParams::default()
                    })
                }
                MethodName::Baseline => Method::Baseline,
            };
            let cases = load_corpus(&corpus)?;
            let config = ExperimentConfig {
                vocab: vocab.config(),
                ..ExperimentConfig::new(method, runs, seed)
            };
            let report = run_experiment(&cases, &config).map_err(|e: HarnessError| CliError::Validation(e.to_string()))?;
            if let Some(out) = out {
                write(&out, &(serialize_tree(report.best_tree()) + "\n"))?;
            }
            Ok(report.to_tsv())
        }
    }
}
