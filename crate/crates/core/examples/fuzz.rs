//! Differential trials of the two inclusion tests against the oracles.
//!
//! cargo run --release --example fuzz -- [trials] [seed] [depth]

use regtypes::harness::{run_trials_with, summarize, Classification, GenConfig, Instance};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().map_or(200, |s| s.parse().expect("trials"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let depth: usize = args.next().map_or(6, |s| s.parse().expect("depth"));

    let cfg = GenConfig::default().with_seed(seed);
    let reports = run_trials_with(&cfg, trials, depth, &[Instance::left_skewed()]);
    for (class, count) in summarize(&reports) {
        println!("{class:20} {count}");
    }
    let routine = [Classification::AgreeInclude, Classification::AgreeExclude];
    for r in reports
        .iter()
        .filter(|r| !routine.contains(&r.classification))
    {
        println!(
            "\ntrial {} ({}): {} vs {}",
            r.trial, r.classification, r.tau1, r.tau2
        );
        println!(
            "  regular witness: {:?}, td witness: {:?}",
            r.regular_witness, r.td_witness
        );
        print!("{}", r.grammar);
    }
}
