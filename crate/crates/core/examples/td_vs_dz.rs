//! A pair on which the two inclusion tests disagree.
//!
//! `f(a,a)` is not in `crossed`, but it is in its tuple-distributive
//! closure, so only the term-wise test accepts `pair ⊆ crossed`.

use regtypes::{
    corpus, dz_subset, find_regular_counterexample, find_td_counterexample, td_subset, PureTerm,
};

fn main() {
    let g = corpus::crossed_pairs();
    println!("{g}");
    let (pair, crossed) = (PureTerm::ty("pair"), PureTerm::ty("crossed"));
    println!(
        "dz_subset(pair, crossed) = {:?}",
        dz_subset(&g, &pair, &crossed)
    );
    println!(
        "td_subset(pair, crossed) = {:?}",
        td_subset(&g, &pair, &crossed)
    );
    println!(
        "regular oracle: {}",
        find_regular_counterexample(&g, &pair, &crossed, 4)
    );
    println!(
        "closure oracle: {}",
        find_td_counterexample(&g, &pair, &crossed, 4)
    );
}
