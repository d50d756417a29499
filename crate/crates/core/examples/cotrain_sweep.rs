//! Sweeps the per-iteration promotion count on two-view data with a weak
//! signal in each view, where unlabeled data has room to help.

use headcheck::classifier::{fit, predict, TrainConfig};
use headcheck::cotrain::{format_sweep, sweep, ViewPair};
use headcheck::eval::precision_recall_f;
use headcheck::synth::{joint, two_view, TwoViewConfig};

fn main() -> headcheck::Result<()> {
    let data = |n, prefix, seed| {
        two_view(
            n,
            prefix,
            &TwoViewConfig {
                seed,
                ..TwoViewConfig::default()
            },
        )
    };
    let gold = data(100, "g", 1);
    let pool: Vec<ViewPair> = data(2000, "u", 2).into_iter().map(|(p, _)| p).collect();
    let test = data(2000, "t", 3);
    let tcfg = TrainConfig::default();

    let joint_gold: Vec<_> = gold.iter().map(|(p, y)| (joint(p), *y)).collect();
    let model = fit(joint_gold.iter().map(|(x, y)| (x, *y)), &tcfg)?;
    let pred: Vec<bool> = test
        .iter()
        .map(|(p, _)| predict(&model, &joint(p)))
        .collect::<Result<_, _>>()?;
    let truth: Vec<bool> = test.iter().map(|(_, y)| *y).collect();
    println!(
        "supervised, both views joined: F {:.4}\n",
        precision_recall_f(&pred, &truth)?.f_score
    );

    let rows = sweep(&gold, &pool, &test, &[5, 10, 20], 30, &tcfg)?;
    let checkpoints: Vec<_> = rows.into_iter().filter(|r| r.iteration % 10 == 0).collect();
    print!("{}", format_sweep(&checkpoints));
    Ok(())
}
