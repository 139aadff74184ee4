//! The left-skewed tree grammar: Dart-Zobel accepts `alpha ⊆ beta`, the
//! bounded oracle refutes it.

use regtypes::{corpus, dz_subset, find_regular_counterexample, member, PureTerm};

fn main() {
    let g = corpus::left_skewed();
    println!("{g}");
    let (alpha, beta) = (PureTerm::ty("alpha"), PureTerm::ty("beta"));
    println!(
        "dz_subset(alpha, beta) = {:?}",
        dz_subset(&g, &alpha, &beta)
    );
    for depth in 2..=4 {
        println!(
            "oracle at depth {depth}: {}",
            find_regular_counterexample(&g, &alpha, &beta, depth)
        );
    }
    let t = g.parse_ground("g(h(h(a,b),a))").unwrap();
    println!(
        "{t} in alpha: {}, in beta: {}",
        member(&g, &t, &alpha),
        member(&g, &t, &beta)
    );
}
