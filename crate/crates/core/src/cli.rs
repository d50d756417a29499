//! Command-line driver. Commands communicate only through files; every
//! primary output is a deterministic function of the inputs and options.
//! Wall-clock details go to `run.log` in the output directory.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classifier::{ClassWeighting, TrainConfig};
use crate::corpus::{
    load_relations, read_corpus, read_embeddings, split_stratified, split_train_test, Document,
    EmbeddingTable, LexiconSet, SplitRatio, Task,
};
use crate::cotrain::{
    evaluate_views, format_sweep, negatives_for, sweep, CoTrainConfig, CoTrainer, ViewPair,
};
use crate::csr::{mine, read_rules, write_rules, ClassSequentialRule, MiningConfig};
use crate::encoder::{ItemInventory, SequenceDatabase};
use crate::error::{Error, Result};
use crate::eval::{
    discordant_counts, domain_breakdown, precision_recall_f, prevalence_baseline, sign_test,
    EvalReport,
};
use crate::features::{write_matrix, FeatureVector};
use crate::pipeline::{
    labels, load_json, save_json, AmbiguityPipeline, MisleadingFeaturizer, MisleadingModel,
    MisleadingPipeline,
};

#[derive(Debug, Parser)]
#[command(
    name = "headcheck",
    version,
    about = "Ambiguous and misleading headline detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus and its resources and summarize them.
    IngestCheck(RunArgs),
    /// Mine class sequential rules from training headlines.
    MineCsr {
        #[command(flatten)]
        run: RunArgs,
        /// Mine an encoded sequence database (JSON lines) instead of a corpus.
        #[arg(long)]
        sequences: Option<PathBuf>,
    },
    /// Write the feature matrix for a task.
    Featurize {
        #[command(flatten)]
        run: RunArgs,
        /// Rule set to use for ambiguity features instead of mining one.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Train a supervised detector and evaluate it on a held-out split.
    Train(RunArgs),
    /// Co-train the misleading detector's two views.
    Cotrain(RunArgs),
    /// Score a trained detector on a labeled corpus.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        model: PathBuf,
        /// Second detector for the same task; adds a sign test.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Tally both detectors' predictions per news domain.
    Analyze {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        ambiguous_model: PathBuf,
        #[arg(long)]
        misleading_model: PathBuf,
    },
}

/// Options shared by every command. Each may also come from the JSON file
/// given with `--config`; flags take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunArgs {
    /// JSON file with option defaults, keyed by option name.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Line-delimited JSON corpus, one document per line.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory of word lists; the built-in lists are used when absent.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Word vectors: a `count dimension` line, then one word and its values per line.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Lexical relation table overriding the one in the lexicon directory.
    #[arg(long)]
    pub relations: Option<PathBuf>,
    /// Item inventory JSON (label to word class, in priority order).
    #[arg(long)]
    pub inventory: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Which detector to build.
    #[arg(long, value_enum)]
    pub task: Option<Task>,
    /// Minimum rule support (default 0.02).
    #[arg(long)]
    pub minsup: Option<f64>,
    /// Minimum rule confidence (default 0.8).
    #[arg(long)]
    pub minconf: Option<f64>,
    /// Longest rule pattern (default 5).
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Positives each view promotes per co-training iteration (default 10).
    #[arg(long)]
    pub p: Option<usize>,
    /// Negatives each view promotes per iteration (default 20).
    #[arg(long)]
    pub n: Option<usize>,
    /// Co-training iterations (default 50).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Seed for the split and model initialisation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Train:test proportion, e.g. `3:1`.
    #[arg(long)]
    pub split: Option<String>,
    /// Keep class proportions on both sides of the split.
    #[arg(long)]
    #[serde(default)]
    pub stratify: bool,
    /// Comma-separated values of p to sweep, with n = 2p.
    #[arg(long)]
    pub sweep: Option<String>,
    /// L2 penalty on the weights (default 0.001).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Initial gradient step (default 1.0).
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Gradient steps (default 300).
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Per-class loss weights (default balanced).
    #[arg(long, value_enum)]
    pub class_weighting: Option<ClassWeighting>,
}

macro_rules! prefer {
    ($flags:expr, $file:expr; $($field:ident),*) => {
        RunArgs {
            config: $flags.config,
            stratify: $flags.stratify || $file.stratify,
            $($field: $flags.$field.or($file.$field),)*
        }
    };
}

impl RunArgs {
    /// Fills unset options from the config file, if one was given.
    pub fn resolve(self) -> Result<RunArgs> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let file: RunArgs = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Ok(
            prefer!(self, file; corpus, lexicons, embeddings, relations, inventory, out, task, minsup, minconf,
            max_len, p, n, iterations, seed, split, sweep, lambda, learning_rate, epochs, class_weighting),
        )
    }

    fn check_inputs(&self) -> Result<()> {
        let inputs = [
            &self.corpus,
            &self.lexicons,
            &self.embeddings,
            &self.relations,
            &self.inventory,
        ];
        for path in inputs.into_iter().flatten() {
            if !path.exists() {
                return Err(Error::InvalidConfig(format!(
                    "{} does not exist",
                    path.display()
                )));
            }
        }
        Ok(())
    }

    fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig(format!("--{flag} is required")))
    }

    fn seed(&self) -> Result<u64> {
        Self::required(&self.seed, "seed").copied()
    }

    fn task(&self) -> Result<Task> {
        Self::required(&self.task, "task").copied()
    }

    fn out_dir(&self) -> Result<&Path> {
        let dir = Self::required(&self.out, "out")?;
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        Ok(dir)
    }

    fn split_ratio(&self) -> Result<SplitRatio> {
        self.split
            .as_deref()
            .map_or(Ok(SplitRatio::default()), str::parse)
    }

    fn mining(&self) -> Result<MiningConfig> {
        let d = MiningConfig::default();
        MiningConfig::new(
            self.minsup.unwrap_or(d.minsup),
            self.minconf.unwrap_or(d.minconf),
            self.max_len.unwrap_or(d.max_pattern_length),
        )
    }

    fn training(&self) -> Result<TrainConfig> {
        let d = TrainConfig::default();
        let cfg = TrainConfig {
            regularization_strength: self.lambda.unwrap_or(d.regularization_strength),
            learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
            epochs: self.epochs.unwrap_or(d.epochs),
            seed: self.seed.unwrap_or(d.seed),
            class_weighting: self.class_weighting.unwrap_or(d.class_weighting),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn cotraining(&self, gold: &[bool]) -> Result<CoTrainConfig> {
        let d = CoTrainConfig::default();
        let p = self.p.unwrap_or(d.p);
        let n = match (self.n, self.p) {
            (Some(n), _) => n,
            (None, Some(p)) => negatives_for(p, gold),
            (None, None) => d.n,
        };
        let cfg = CoTrainConfig {
            p,
            n,
            iterations: self.iterations.unwrap_or(d.iterations),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn sweep_grid(&self) -> Result<Option<Vec<usize>>> {
        let Some(list) = &self.sweep else {
            return Ok(None);
        };
        let grid = list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| Error::InvalidConfig(format!("bad sweep value `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(grid))
    }

    fn lexicons(&self) -> Result<LexiconSet> {
        let mut lex = match &self.lexicons {
            Some(dir) => LexiconSet::load(dir)?,
            None => LexiconSet::builtin(),
        };
        if let Some(path) = &self.relations {
            lex.set_relations(load_relations(path)?);
        }
        Ok(lex)
    }

    fn inventory(&self, lex: &LexiconSet) -> Result<ItemInventory> {
        match &self.inventory {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
                ItemInventory::from_json(&text, lex)
            }
            None => Ok(ItemInventory::default_for(lex)),
        }
    }

    fn embeddings(&self) -> Result<EmbeddingTable> {
        match &self.embeddings {
            Some(path) => read_embeddings(path),
            None => EmbeddingTable::new(1),
        }
    }

    fn corpus(&self) -> Result<Vec<Document>> {
        let docs = read_corpus(Self::required(&self.corpus, "corpus")?)?;
        if docs.is_empty() {
            return Err(Error::EmptyInput("corpus has no documents".into()));
        }
        Ok(docs)
    }

    /// Documents labeled for `task`, split into training and test parts.
    fn labeled_split(
        &self,
        docs: &[Document],
        task: Task,
    ) -> Result<(Vec<Document>, Vec<Document>)> {
        let labeled: Vec<Document> = docs
            .iter()
            .filter(|d| d.label(task).is_some())
            .cloned()
            .collect();
        if labeled.is_empty() {
            labels(&docs[..1], task)?;
        }
        let (ratio, seed) = (self.split_ratio()?, self.seed()?);
        if self.stratify {
            split_stratified(&labeled, ratio, seed, |d| d.label(task) == Some(true))
        } else {
            split_train_test(&labeled, ratio, seed)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(format!("creating {}", path.display()), e))
}

fn log_run(out: &Path, command: &str, args: &RunArgs) -> Result<()> {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let options = serde_json::to_string(args).map_err(|e| Error::json("run log", e))?;
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(out.join("run.log"))
        .map_err(|e| Error::io("opening run.log", e))?;
    writeln!(
        f,
        "{secs} {command} version={} os={} {options}",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::OS
    )
    .map_err(|e| Error::io("writing run.log", e))
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::json("serializing output", e))
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    documents: usize,
    domains: std::collections::BTreeMap<String, usize>,
    label_ambiguous: LabelCounts,
    label_misleading: LabelCounts,
    with_headline_deps: usize,
    with_body_deps: usize,
    with_entities: usize,
    lexicon_words: usize,
    relations: usize,
    embedding_words: usize,
    embedding_dimension: Option<usize>,
}

#[derive(Debug, Default, Serialize)]
struct LabelCounts {
    positive: usize,
    negative: usize,
    missing: usize,
}

fn ingest_check(run: &RunArgs) -> Result<String> {
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let emb = run.embeddings()?;
    let count = |task: Task| {
        let mut c = LabelCounts::default();
        for d in &docs {
            match d.label(task) {
                Some(true) => c.positive += 1,
                Some(false) => c.negative += 1,
                None => c.missing += 1,
            }
        }
        c
    };
    let mut domains = std::collections::BTreeMap::new();
    for d in &docs {
        *domains.entry(d.domain.to_string()).or_insert(0) += 1;
    }
    let summary = IngestSummary {
        documents: docs.len(),
        domains,
        label_ambiguous: count(Task::Ambiguous),
        label_misleading: count(Task::Misleading),
        with_headline_deps: docs.iter().filter(|d| d.headline_deps.is_some()).count(),
        with_body_deps: docs.iter().filter(|d| d.body_deps.is_some()).count(),
        with_entities: docs
            .iter()
            .filter(|d| d.headline_entities.is_some())
            .count(),
        lexicon_words: lex.word_count(),
        relations: lex.relations.len(),
        embedding_words: emb.len(),
        embedding_dimension: run.embeddings.as_ref().map(|_| emb.dimension()),
    };
    let json = pretty(&summary)?;
    if let Some(out) = &run.out {
        let out = run.out_dir().map(|_| out.as_path())?;
        write_file(&out.join("ingest.json"), &json)?;
        log_run(out, "ingest-check", run)?;
    }
    Ok(json)
}

fn mine_rules_for(
    run: &RunArgs,
    docs: &[Document],
    lex: &LexiconSet,
) -> Result<Vec<ClassSequentialRule>> {
    let (train, _) = run.labeled_split(docs, Task::Ambiguous)?;
    let db = SequenceDatabase::from_documents(&train, &run.inventory(lex)?, Task::Ambiguous)?;
    mine(&db, &run.mining()?)
}

fn mine_csr(run: &RunArgs, sequences: Option<&Path>) -> Result<String> {
    let cfg = run.mining()?;
    let out = run.out_dir()?;
    let rules = match sequences {
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
            let db = SequenceDatabase::parse_jsonl(BufReader::new(file))?;
            if db.is_empty() {
                return Err(Error::EmptyInput("sequence database is empty".into()));
            }
            mine(&db, &cfg)?
        }
        None => {
            let lex = run.lexicons()?;
            mine_rules_for(run, &run.corpus()?, &lex)?
        }
    };
    let mut w = create(&out.join("rules.json"))?;
    write_rules(&rules, &mut w)?;
    w.flush().map_err(|e| Error::io("writing rules.json", e))?;
    log_run(out, "mine-csr", run)?;
    Ok(format!("{} rules\n", rules.len()))
}

#[derive(Debug, Serialize)]
struct DegradedRow<'a> {
    id: &'a str,
    #[serde(flatten)]
    flags: crate::features::Degraded,
}

fn featurize(run: &RunArgs, rules_path: Option<&Path>) -> Result<String> {
    let task = run.task()?;
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let out = run.out_dir()?;
    let mut rows: Vec<(String, FeatureVector)> = Vec::with_capacity(docs.len());
    let mut degraded = String::new();
    match task {
        Task::Ambiguous => {
            let rules = match rules_path {
                Some(path) => {
                    let file = fs::File::open(path)
                        .map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
                    read_rules(BufReader::new(file))?
                }
                None => mine_rules_for(run, &docs, &lex)?,
            };
            let inv = run.inventory(&lex)?;
            for d in &docs {
                rows.push((
                    d.id.clone(),
                    crate::features::ambiguous_vector(d, &lex, &inv, &rules),
                ));
            }
            let mut w = create(&out.join("rules.json"))?;
            write_rules(&rules, &mut w)?;
            w.flush().map_err(|e| Error::io("writing rules.json", e))?;
        }
        Task::Misleading => {
            let emb = run.embeddings()?;
            let featurizer = MisleadingFeaturizer::fit(&docs);
            for d in &docs {
                let (x, flags) = featurizer.joint(d, &lex, &emb);
                if flags.any() {
                    let row = DegradedRow { id: &d.id, flags };
                    degraded.push_str(
                        &serde_json::to_string(&row).map_err(|e| Error::json("degraded", e))?,
                    );
                    degraded.push('\n');
                }
                rows.push((d.id.clone(), x));
            }
        }
    }
    let mut w = create(&out.join("features.csv"))?;
    write_matrix(&rows, &mut w)?;
    w.flush()
        .map_err(|e| Error::io("writing features.csv", e))?;
    write_file(&out.join("degraded.jsonl"), &degraded)?;
    log_run(out, "featurize", run)?;
    Ok(format!(
        "{} documents, {} features, {} degraded\n",
        rows.len(),
        rows.first().map_or(0, |r| r.1.len()),
        degraded.lines().count()
    ))
}

#[derive(Debug, Serialize)]
struct TrainReport {
    task: Task,
    train_size: usize,
    test_size: usize,
    prevalence_baseline: f64,
    test: EvalReport,
}

fn report_text(title: &str, r: &EvalReport) -> String {
    format!("{title}\n{}", r.to_text())
}

fn train(run: &RunArgs) -> Result<String> {
    let task = run.task()?;
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let tcfg = run.training()?;
    let out = run.out_dir()?;
    let (train, test) = run.labeled_split(&docs, task)?;
    let gold = labels(&test, task)?;
    let pred = match task {
        Task::Ambiguous => {
            let pipeline =
                AmbiguityPipeline::fit(&train, &lex, &run.inventory(&lex)?, &run.mining()?, &tcfg)?;
            save_json(&pipeline, &out.join("model.json"))?;
            pipeline.predict(&test, &lex)?
        }
        Task::Misleading => {
            let emb = run.embeddings()?;
            let pipeline = MisleadingPipeline::fit_joint(&train, &lex, &emb, &tcfg)?;
            save_json(&pipeline, &out.join("model.json"))?;
            pipeline.predict(&test, &lex, &emb)?
        }
    };
    let eval = precision_recall_f(&pred, &gold)?;
    let report = TrainReport {
        task,
        train_size: train.len(),
        test_size: test.len(),
        prevalence_baseline: prevalence_baseline(&gold),
        test: eval,
    };
    let text = report_text(
        &format!(
            "{task} detector, {} train / {} test",
            train.len(),
            test.len()
        ),
        &eval,
    );
    write_file(&out.join("report.json"), &pretty(&report)?)?;
    write_file(&out.join("report.txt"), &text)?;
    log_run(out, "train", run)?;
    Ok(text)
}

#[derive(Debug, Serialize)]
struct CoTrainReport {
    config: CoTrainConfig,
    gold_size: usize,
    pool_size: usize,
    test_size: usize,
    iterations_run: usize,
    final_labeled: usize,
    final_unlabeled: usize,
    supervised: EvalReport,
    cotrained: EvalReport,
}

fn cotrain(run: &RunArgs) -> Result<String> {
    if run.task.is_some_and(|t| t != Task::Misleading) {
        return Err(Error::InvalidConfig(
            "co-training applies to the misleading task only".into(),
        ));
    }
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let emb = run.embeddings()?;
    let tcfg = run.training()?;
    let grid = run.sweep_grid()?;
    let out = run.out_dir()?;
    let (train, test) = run.labeled_split(&docs, Task::Misleading)?;
    let pool_docs: Vec<Document> = docs
        .iter()
        .filter(|d| d.label_misleading.is_none())
        .cloned()
        .collect();
    let gold_labels = labels(&train, Task::Misleading)?;
    let cfg = run.cotraining(&gold_labels)?;

    let featurizer = MisleadingFeaturizer::fit(&[train.as_slice(), pool_docs.as_slice()].concat());
    let views = |ds: &[Document]| -> Vec<ViewPair> {
        ds.iter()
            .map(|d| featurizer.views(d, &lex, &emb).0)
            .collect()
    };
    let gold: Vec<(ViewPair, bool)> = views(&train).into_iter().zip(gold_labels).collect();
    let test_set: Vec<(ViewPair, bool)> = views(&test)
        .into_iter()
        .zip(labels(&test, Task::Misleading)?)
        .collect();
    let pool = views(&pool_docs);

    let mut trainer = CoTrainer::new(gold.clone(), pool.clone(), cfg, tcfg)?;
    let supervised = {
        let (h, b) = trainer.models();
        evaluate_views(h, b, &test_set)?
    };
    while trainer.step()?.is_some() {}
    let result = trainer.into_result();
    let cotrained = evaluate_views(&result.model_h, &result.model_b, &test_set)?;

    save_json(&result.model_h, &out.join("model_head.json"))?;
    save_json(&result.model_b, &out.join("model_body.json"))?;
    let pipeline = featurizer.clone().with_model(MisleadingModel::CoTrained {
        head: result.model_h.clone(),
        body: result.model_b.clone(),
    });
    save_json(&pipeline, &out.join("model.json"))?;
    let mut w = create(&out.join("history.jsonl"))?;
    result.state.write_history(&mut w)?;
    w.flush()
        .map_err(|e| Error::io("writing history.jsonl", e))?;
    save_json(&result.state.labeled, &out.join("labeled.json"))?;

    let report = CoTrainReport {
        config: cfg,
        gold_size: gold.len(),
        pool_size: pool.len(),
        test_size: test_set.len(),
        iterations_run: result.state.iteration,
        final_labeled: result.state.labeled.len(),
        final_unlabeled: result.state.unlabeled.len(),
        supervised,
        cotrained,
    };
    let mut text = format!(
        "co-training p={} n={} iterations={} ({} run), gold {}, pool {}, test {}\n",
        cfg.p,
        cfg.n,
        cfg.iterations,
        result.state.iteration,
        gold.len(),
        pool.len(),
        test_set.len()
    );
    text.push_str(&report_text("gold only", &supervised));
    text.push_str(&report_text("co-trained", &cotrained));
    write_file(&out.join("report.json"), &pretty(&report)?)?;
    write_file(&out.join("report.txt"), &text)?;

    if let Some(grid) = grid {
        let rows = sweep(&gold, &pool, &test_set, &grid, cfg.iterations, &tcfg)?;
        write_file(&out.join("sweep.json"), &pretty(&rows)?)?;
        let table = format_sweep(&rows);
        write_file(&out.join("sweep.txt"), &table)?;
        let _ = writeln!(text, "sweep: {} rows written", rows.len());
    }
    log_run(out, "cotrain", run)?;
    Ok(text)
}

/// Either kind of trained detector.
enum Detector {
    Ambiguous(AmbiguityPipeline),
    Misleading(MisleadingPipeline),
}

impl Detector {
    fn load(path: &Path, task: Task) -> Result<Detector> {
        Ok(match task {
            Task::Ambiguous => Detector::Ambiguous(load_json(path)?),
            Task::Misleading => Detector::Misleading(load_json(path)?),
        })
    }

    fn predict(
        &self,
        docs: &[Document],
        lex: &LexiconSet,
        emb: &EmbeddingTable,
    ) -> Result<Vec<bool>> {
        match self {
            Detector::Ambiguous(p) => p.predict(docs, lex),
            Detector::Misleading(p) => p.predict(docs, lex, emb),
        }
    }
}

#[derive(Debug, Serialize)]
struct Comparison {
    compare: EvalReport,
    only_model_correct: u64,
    only_compare_correct: u64,
    sign_test_p: f64,
}

#[derive(Debug, Serialize)]
struct EvaluationReport {
    task: Task,
    prevalence_baseline: f64,
    model: EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

fn evaluate(run: &RunArgs, model: &Path, compare: Option<&Path>) -> Result<String> {
    let task = run.task()?;
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let emb = run.embeddings()?;
    let gold = labels(&docs, task)?;
    let pred = Detector::load(model, task)?.predict(&docs, &lex, &emb)?;
    let report = precision_recall_f(&pred, &gold)?;
    let mut text = report_text(
        &format!("{task} detector on {} documents", docs.len()),
        &report,
    );
    let comparison = match compare {
        Some(path) => {
            let other = Detector::load(path, task)?.predict(&docs, &lex, &emb)?;
            let (a, b) = discordant_counts(&pred, &other, &gold)?;
            let c = Comparison {
                compare: precision_recall_f(&other, &gold)?,
                only_model_correct: a,
                only_compare_correct: b,
                sign_test_p: sign_test(&pred, &other, &gold)?,
            };
            text.push_str(&report_text("compared detector", &c.compare));
            let _ = writeln!(
                text,
                "sign test: {a} vs {b} discordant, p = {:.6}",
                c.sign_test_p
            );
            Some(c)
        }
        None => None,
    };
    let full = EvaluationReport {
        task,
        prevalence_baseline: prevalence_baseline(&gold),
        model: report,
        comparison,
    };
    if run.out.is_some() {
        let out = run.out_dir()?;
        write_file(&out.join("evaluation.json"), &pretty(&full)?)?;
        write_file(&out.join("evaluation.txt"), &text)?;
        log_run(out, "evaluate", run)?;
    }
    Ok(text)
}

fn analyze(run: &RunArgs, ambiguous_model: &Path, misleading_model: &Path) -> Result<String> {
    let docs = run.corpus()?;
    let lex = run.lexicons()?;
    let emb = run.embeddings()?;
    let out = run.out_dir()?;
    let amb: AmbiguityPipeline = load_json(ambiguous_model)?;
    let mis: MisleadingPipeline = load_json(misleading_model)?;
    let breakdown = domain_breakdown(
        &docs,
        &amb.predict(&docs, &lex)?,
        &mis.predict(&docs, &lex, &emb)?,
    )?;
    write_file(&out.join("breakdown.json"), &pretty(&breakdown)?)?;
    write_file(&out.join("breakdown.csv"), &breakdown.to_csv())?;
    let table = breakdown.to_table();
    write_file(&out.join("breakdown.txt"), &table)?;
    log_run(out, "analyze", run)?;
    Ok(table)
}

/// Runs one parsed command, returning the text to print.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::IngestCheck(run) => {
            let run = run.resolve()?;
            run.check_inputs()?;
            ingest_check(&run)
        }
        Command::MineCsr { run, sequences } => {
            let run = run.resolve()?;
            run.check_inputs()?;
            if sequences.is_none() {
                run.seed()?;
            }
            mine_csr(&run, sequences.as_deref())
        }
        Command::Featurize { run, rules } => {
            let run = run.resolve()?;
            run.check_inputs()?;
            featurize(&run, rules.as_deref())
        }
        Command::Train(run) => {
            let run = run.resolve()?;
            run.check_inputs()?;
            run.seed()?;
            train(&run)
        }
        Command::Cotrain(run) => {
            let run = run.resolve()?;
            run.check_inputs()?;
            run.seed()?;
            cotrain(&run)
        }
        Command::Evaluate {
            run,
            model,
            compare,
        } => {
            let run = run.resolve()?;
            run.check_inputs()?;
            evaluate(&run, &model, compare.as_deref())
        }
        Command::Analyze {
            run,
            ambiguous_model,
            misleading_model,
        } => {
            let run = run.resolve()?;
            run.check_inputs()?;
            analyze(&run, &ambiguous_model, &misleading_model)
        }
    }
}

/// Parses arguments, runs the command, and returns the process exit code:
/// 0 on success, 1 for usage errors, 2 for data errors.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}
