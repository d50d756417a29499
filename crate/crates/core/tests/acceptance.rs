//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report prints in order; exits non-zero if any check fails.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::panic;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{brute_force_rules, example_db, random_db, run_cli, seeded, strings, write_fixture};
use headcheck::classifier::{fit, loss_and_gradient, predict, predict_score, TrainConfig};
use headcheck::corpus::{split_train_test, LexiconSet, SplitRatio, Task};
use headcheck::cotrain::{co_train, evaluate_views, CoTrainConfig, CoTrainer, ViewPair};
use headcheck::csr::{confidence, mine, support, MiningConfig};
use headcheck::encoder::{encode_headline, Class, ItemInventory};
use headcheck::eval::{precision_recall_f, prevalence_baseline, sign_test};
use headcheck::pipeline::{labels, AmbiguityPipeline, MisleadingFeaturizer};
use headcheck::synth::{self, joint, two_view, SynthConfig, TwoViewConfig};
use rand::Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    ensure!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    Ok(format!("{elapsed:.2?}"))
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let db = example_db();
    let pattern = strings(&["1", "4", "7"]);
    let sup = support(&db, &pattern, Class::Positive).map_err(|e| e.to_string())?;
    let conf = confidence(&db, &pattern, Class::Positive).map_err(|e| e.to_string())?;
    ensure!(sup == 0.4, "support {sup}");
    ensure!((conf - 2.0 / 3.0).abs() < 1e-12, "confidence {conf}");
    let rules = mine(&db, &MiningConfig::new(0.2, 0.4, 5).unwrap()).map_err(|e| e.to_string())?;
    let mined = rules
        .iter()
        .find(|r| r.pattern == pattern && r.class == Class::Positive);
    ensure!(mined.is_some(), "<1, 4, 7> -> c1 not mined");
    ensure!(mined.unwrap().support == 0.4, "mined support differs");
    within(start.elapsed(), Duration::from_secs(1))
}

fn miner_matches_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(2024);
    let databases = 250;
    let mut compared = 0;
    for _ in 0..databases {
        let alphabet = rng.gen_range(1..=10);
        let db = random_db(&mut rng, 8, 6, alphabet);
        for minsup in [0.1, 0.2, 0.4] {
            for minconf in [0.4, 0.6, 0.8, 1.0] {
                let cfg = MiningConfig::new(minsup, minconf, 6).unwrap();
                let mined = mine(&db, &cfg).map_err(|e| e.to_string())?;
                let oracle = brute_force_rules(&db, &cfg);
                ensure!(
                    mined == oracle,
                    "mismatch at minsup {minsup}, minconf {minconf} on {db:?}"
                );
                compared += 1;
            }
        }
    }
    let t = within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{databases} databases, {compared} configurations, {t}"
    ))
}

fn encoder_example() -> Outcome {
    let lex = LexiconSet::builtin();
    let inv = ItemInventory::default_for(&lex);
    let items = encode_headline(&["她", "曾经", "发愁", "但", "现在"], &inv);
    ensure!(
        items == ["Ref", "Past", "But", "Present"],
        "encoded {items:?}"
    );
    Ok(format!("{items:?}"))
}

fn document_views(cfg: &SynthConfig) -> (Vec<(ViewPair, bool)>, Vec<ViewPair>) {
    let docs = synth::corpus(cfg);
    let lex = LexiconSet::builtin();
    let emb = synth::embeddings(&docs, 16, cfg.seed);
    let f = MisleadingFeaturizer::fit(&docs);
    let mut gold = Vec::new();
    let mut pool = Vec::new();
    for d in &docs {
        let pair = f.views(d, &lex, &emb).0;
        match d.label_misleading {
            Some(y) => gold.push((pair, y)),
            None => pool.push(pair),
        }
    }
    (gold, pool)
}

fn cotrain_bookkeeping() -> Outcome {
    // 600 documents, a sixth labeled: 100 gold, about 500 in the pool.
    let (gold, pool) = document_views(&SynthConfig {
        documents: 600,
        unlabeled_fraction: 5.0 / 6.0,
        label_noise: 0.1,
        seed: 41,
        ..SynthConfig::default()
    });
    ensure!(
        (450..=550).contains(&pool.len()),
        "pool size {}",
        pool.len()
    );
    let (p, n) = (10, 20);
    let cfg = CoTrainConfig {
        p,
        n,
        iterations: 50,
    };
    let tcfg = TrainConfig::default();
    let mut trainer =
        CoTrainer::new(gold.clone(), pool.clone(), cfg, tcfg).map_err(|e| e.to_string())?;
    let mut excluded: HashSet<String> = HashSet::new();
    let mut prev_l = trainer.state().labeled.len();
    let mut conflicts = 0;
    while let Some(rec) = trainer.step().map_err(|e| e.to_string())?.cloned() {
        let s = trainer.state();
        let labeled: HashSet<&str> = s.labeled.iter().map(|e| e.id.as_str()).collect();
        ensure!(
            labeled.len() == s.labeled.len(),
            "duplicate id in L at iteration {}",
            rec.iteration
        );
        ensure!(
            labeled.iter().all(|id| !s.unlabeled.contains(*id)),
            "L and U overlap at iteration {}",
            rec.iteration
        );
        ensure!(
            rec.l_size - prev_l <= 2 * (p + n),
            "L grew by {} at iteration {}",
            rec.l_size - prev_l,
            rec.iteration
        );
        ensure!(
            rec.conflicts == rec.conflict_ids.len(),
            "conflict count not logged consistently"
        );
        excluded.extend(rec.conflict_ids.iter().cloned());
        for id in &excluded {
            ensure!(
                !labeled.contains(id.as_str()) && !s.unlabeled.contains(id),
                "conflict {id} reappeared"
            );
        }
        conflicts += rec.conflicts;
        prev_l = rec.l_size;
    }
    let iterations = trainer.state().iteration;

    let empty = co_train(gold.clone(), vec![], cfg, tcfg).map_err(|e| e.to_string())?;
    ensure!(
        empty.state.history.is_empty(),
        "empty pool produced history"
    );
    let head = fit(gold.iter().map(|(x, y)| (&x.head, *y)), &tcfg).map_err(|e| e.to_string())?;
    let body = fit(gold.iter().map(|(x, y)| (&x.body, *y)), &tcfg).map_err(|e| e.to_string())?;
    for x in pool.iter().chain(gold.iter().map(|(x, _)| x)) {
        let same = predict_score(&empty.model_h, &x.head).unwrap().to_bits()
            == predict_score(&head, &x.head).unwrap().to_bits()
            && predict_score(&empty.model_b, &x.body).unwrap().to_bits()
                == predict_score(&body, &x.body).unwrap().to_bits();
        ensure!(same, "empty-pool scores differ from supervised on {}", x.id);
    }
    Ok(format!(
        "pool {}, {iterations} iterations until exhausted, {conflicts} conflicts excluded",
        pool.len()
    ))
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

fn classifier_sanity() -> Outcome {
    let docs = synth::corpus(&SynthConfig {
        documents: 200,
        seed: 17,
        ..SynthConfig::default()
    });
    let lex = LexiconSet::builtin();
    let inv = ItemInventory::default_for(&lex);
    let (train, test) =
        split_train_test(&docs, SplitRatio::default(), 17).map_err(|e| e.to_string())?;
    let pipeline = AmbiguityPipeline::fit(
        &train,
        &lex,
        &inv,
        &MiningConfig::default(),
        &TrainConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let pred = pipeline.predict(&test, &lex).map_err(|e| e.to_string())?;
    let gold = labels(&test, Task::Ambiguous).map_err(|e| e.to_string())?;
    let f = precision_recall_f(&pred, &gold)
        .map_err(|e| e.to_string())?
        .f_score;
    ensure!(f >= 0.95, "held-out F {f:.4}");

    let mut rng = seeded(99);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (n, d) = (rng.gen_range(4..16), rng.gen_range(1..8));
        let z: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect())
            .collect();
        let y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.35)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.5)).collect();
        let params: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let lambda = rng.gen_range(0.0..0.3);
        let (_, grad) = loss_and_gradient(&params, &z, &y, &s, lambda);
        let h = 1e-5;
        for k in 0..=d {
            let (mut up, mut down) = (params.clone(), params.clone());
            up[k] += h;
            down[k] -= h;
            let numeric = (loss_and_gradient(&up, &z, &y, &s, lambda).0
                - loss_and_gradient(&down, &z, &y, &s, lambda).0)
                / (2.0 * h);
            worst = worst.max(relative_error(grad[k], numeric));
        }
    }
    ensure!(worst < 1e-4, "gradient relative error {worst:e}");
    Ok(format!(
        "held-out F {f:.4} on {} documents, worst gradient error {worst:.1e}",
        test.len()
    ))
}

fn metric_identities() -> Outcome {
    let mut checked = 0;
    for tp in 0..=5 {
        for fp in 0..=5 {
            for fn_ in 0..=5 {
                let mut pred = vec![false];
                let mut gold = vec![false];
                pred.extend(std::iter::repeat_n(true, tp + fp));
                gold.extend(std::iter::repeat_n(true, tp));
                gold.extend(std::iter::repeat_n(false, fp));
                pred.extend(std::iter::repeat_n(false, fn_));
                gold.extend(std::iter::repeat_n(true, fn_));
                let r = precision_recall_f(&pred, &gold).map_err(|e| e.to_string())?;
                let p = if tp + fp == 0 {
                    0.0
                } else {
                    tp as f64 / (tp + fp) as f64
                };
                let rc = if tp + fn_ == 0 {
                    0.0
                } else {
                    tp as f64 / (tp + fn_) as f64
                };
                let f = if p + rc == 0.0 {
                    0.0
                } else {
                    2.0 * p * rc / (p + rc)
                };
                ensure!(
                    r.precision == p && r.recall == rc && (r.f_score - f).abs() < 1e-15,
                    "TP={tp} FP={fp} FN={fn_}: {r:?}"
                );
                checked += 1;
            }
        }
    }
    let mut gold = vec![true; 843];
    gold.extend(vec![false; 1765]);
    let base = prevalence_baseline(&gold);
    ensure!((base - 0.323).abs() <= 0.0005, "prevalence {base}");
    Ok(format!(
        "{checked} confusion matrices, prevalence {base:.4}"
    ))
}

/// Two-sided tail from Pascal's triangle.
fn pascal_p_value(k: usize, n: usize) -> f64 {
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    let m = k.min(n - k);
    let tail: f64 = row[..=m].iter().sum::<f64>() / 2f64.powi(n as i32);
    (2.0 * tail).min(1.0)
}

/// Predictions with `a_only` instances only A gets right, `b_only` only B
/// gets right, plus a few ties of each kind.
fn discordant(a_only: usize, b_only: usize) -> (Vec<bool>, Vec<bool>, Vec<bool>) {
    let (mut a, mut b, mut g) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..a_only + b_only {
        let truth = i % 2 == 0;
        g.push(truth);
        a.push(if i < a_only { truth } else { !truth });
        b.push(if i < a_only { !truth } else { truth });
    }
    for (x, y, t) in [
        (true, true, true),
        (false, false, true),
        (true, true, false),
    ] {
        a.push(x);
        b.push(y);
        g.push(t);
    }
    (a, b, g)
}

fn sign_test_exactness() -> Outcome {
    let (a, b, g) = discordant(2, 8);
    let p1 = sign_test(&a, &b, &g).map_err(|e| e.to_string())?;
    ensure!(
        (p1 - 0.109375).abs() < 1e-12,
        "10 discordant, 8 for B: {p1}"
    );
    let (a, b, g) = discordant(8, 0);
    let p2 = sign_test(&a, &b, &g).map_err(|e| e.to_string())?;
    ensure!(
        (p2 - 0.0078125).abs() < 1e-12,
        "8 discordant, all for A: {p2}"
    );
    let mut cases = 0;
    for n in 0..=12 {
        for k in 0..=n {
            let (a, b, g) = discordant(k, n - k);
            let got = sign_test(&a, &b, &g).map_err(|e| e.to_string())?;
            let want = if n == 0 { 1.0 } else { pascal_p_value(k, n) };
            ensure!((got - want).abs() < 1e-12, "n={n} k={k}: {got} vs {want}");
            cases += 1;
        }
    }
    Ok(format!(
        "worked values {p1} and {p2}, {cases} exhaustive cases"
    ))
}

fn cotraining_lift() -> Outcome {
    let view_cfg = |seed| TwoViewConfig {
        seed,
        ..TwoViewConfig::default()
    };
    let gold = two_view(100, "g", &view_cfg(101));
    let pool: Vec<ViewPair> = two_view(2000, "u", &view_cfg(102))
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let test = two_view(2000, "t", &view_cfg(103));
    let tcfg = TrainConfig::default();

    let joint_gold: Vec<_> = gold.iter().map(|(p, y)| (joint(p), *y)).collect();
    let model = fit(joint_gold.iter().map(|(x, y)| (x, *y)), &tcfg).map_err(|e| e.to_string())?;
    let pred: Vec<bool> = test
        .iter()
        .map(|(p, _)| predict(&model, &joint(p)).unwrap())
        .collect();
    let truth: Vec<bool> = test.iter().map(|(_, y)| *y).collect();
    let supervised = precision_recall_f(&pred, &truth)
        .map_err(|e| e.to_string())?
        .f_score;

    let cfg = CoTrainConfig {
        p: 10,
        n: 20,
        iterations: 50,
    };
    let res = co_train(gold, pool, cfg, tcfg).map_err(|e| e.to_string())?;
    let cotrained = evaluate_views(&res.model_h, &res.model_b, &test)
        .map_err(|e| e.to_string())?
        .f_score;
    ensure!(
        cotrained >= supervised - 0.01,
        "co-trained F {cotrained:.4} below supervised all-features F {supervised:.4}"
    );
    Ok(format!(
        "co-trained F {cotrained:.4} vs supervised all-features F {supervised:.4} after {} iterations",
        res.state.iteration
    ))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name != "run.log" {
            files.insert(name, fs::read(&path).unwrap());
        }
    }
    files
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let labeled = SynthConfig {
        documents: 200,
        label_noise: 0.05,
        seed: 5,
        ..SynthConfig::default()
    };
    let (corpus, emb) = write_fixture(root, &labeled);
    // Co-training needs documents without a misleading label.
    let partial = root.join("partial");
    fs::create_dir(&partial).map_err(|e| e.to_string())?;
    let (pool_corpus, pool_emb) = write_fixture(
        &partial,
        &SynthConfig {
            unlabeled_fraction: 0.5,
            ..labeled
        },
    );
    let seqs = root.join("seqs.jsonl");
    example_db()
        .write_jsonl(fs::File::create(&seqs).unwrap())
        .unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    let (corpus, emb) = (s(&corpus), s(&emb));
    let (pool_corpus, pool_emb) = (s(&pool_corpus), s(&pool_emb));

    let commands: Vec<(&str, Vec<String>)> = vec![
        (
            "ingest",
            vec![
                "ingest-check".into(),
                "--corpus".into(),
                corpus.clone(),
                "--embeddings".into(),
                emb.clone(),
            ],
        ),
        (
            "mine-seq",
            vec![
                "mine-csr".into(),
                "--sequences".into(),
                s(&seqs),
                "--minsup".into(),
                "0.2".into(),
                "--minconf".into(),
                "0.4".into(),
            ],
        ),
        (
            "mine",
            vec![
                "mine-csr".into(),
                "--corpus".into(),
                corpus.clone(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "feat-amb",
            vec![
                "featurize".into(),
                "--task".into(),
                "ambiguous".into(),
                "--corpus".into(),
                corpus.clone(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "feat-mis",
            vec![
                "featurize".into(),
                "--task".into(),
                "misleading".into(),
                "--corpus".into(),
                corpus.clone(),
                "--embeddings".into(),
                emb.clone(),
            ],
        ),
        (
            "train-amb",
            vec![
                "train".into(),
                "--task".into(),
                "ambiguous".into(),
                "--corpus".into(),
                corpus.clone(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "train-mis",
            vec![
                "train".into(),
                "--task".into(),
                "misleading".into(),
                "--corpus".into(),
                corpus.clone(),
                "--embeddings".into(),
                emb.clone(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "cotrain",
            vec![
                "cotrain".into(),
                "--corpus".into(),
                pool_corpus,
                "--embeddings".into(),
                pool_emb,
                "--seed".into(),
                "3".into(),
                "--iterations".into(),
                "5".into(),
                "--sweep".into(),
                "2,5".into(),
            ],
        ),
    ];
    let mut checked = 0;
    for round in ["a", "b"] {
        for (name, args) in &commands {
            let out = root.join(round).join(name);
            let mut full = args.clone();
            full.extend(["--out".to_owned(), s(&out)]);
            let (code, _, err) = run_cli(&full);
            ensure!(code == 0, "{name} failed: {err}");
        }
        let base = root.join(round);
        let follow_ups: Vec<(&str, Vec<String>)> = vec![
            (
                "evaluate",
                vec![
                    "evaluate".into(),
                    "--task".into(),
                    "misleading".into(),
                    "--corpus".into(),
                    corpus.clone(),
                    "--embeddings".into(),
                    emb.clone(),
                    "--model".into(),
                    s(&base.join("train-mis/model.json")),
                    "--compare".into(),
                    s(&base.join("cotrain/model.json")),
                ],
            ),
            (
                "analyze",
                vec![
                    "analyze".into(),
                    "--corpus".into(),
                    corpus.clone(),
                    "--embeddings".into(),
                    emb.clone(),
                    "--ambiguous-model".into(),
                    s(&base.join("train-amb/model.json")),
                    "--misleading-model".into(),
                    s(&base.join("train-mis/model.json")),
                ],
            ),
        ];
        for (name, args) in follow_ups {
            let mut full = args;
            full.extend(["--out".to_owned(), s(&base.join(name))]);
            let (code, _, err) = run_cli(&full);
            ensure!(code == 0, "{name} failed: {err}");
        }
    }
    for name in [
        "ingest",
        "mine-seq",
        "mine",
        "feat-amb",
        "feat-mis",
        "train-amb",
        "train-mis",
        "cotrain",
        "evaluate",
        "analyze",
    ] {
        let (a, b) = (
            snapshot(&root.join("a").join(name)),
            snapshot(&root.join("b").join(name)),
        );
        ensure!(!a.is_empty(), "{name} wrote nothing");
        ensure!(
            a == b,
            "{name} outputs differ: {:?}",
            a.keys()
                .filter(|k| a.get(*k) != b.get(*k))
                .collect::<Vec<_>>()
        );
        checked += a.len();
    }
    Ok(format!(
        "10 command runs, {checked} output files identical across reruns"
    ))
}

fn main() {
    let criteria: [Check; 9] = [
        (
            "worked example: support 0.4, confidence 2/3, rule mined",
            worked_example,
        ),
        ("miner equals brute-force enumeration", miner_matches_oracle),
        ("encoder example headline", encoder_example),
        ("co-training bookkeeping", cotrain_bookkeeping),
        ("classifier sanity and gradient check", classifier_sanity),
        (
            "metric identities and prevalence baseline",
            metric_identities,
        ),
        ("sign test exactness", sign_test_exactness),
        ("co-training lift direction", cotraining_lift),
        ("command-line determinism", cli_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  {}. {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
