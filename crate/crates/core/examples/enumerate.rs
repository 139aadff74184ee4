//! Members of a type by depth, in canonical order.
//!
//! cargo run --example enumerate -- [depth]

use regtypes::{corpus, enumerate, PureTerm};

fn main() {
    let depth: usize = std::env::args()
        .nth(1)
        .map_or(4, |s| s.parse().expect("depth"));
    let g = corpus::nat_lists();
    let all = enumerate(&g, &PureTerm::ty("Natlist"), depth);
    println!("{} members of Natlist up to depth {depth}", all.len());
    for t in &all {
        println!("  {t}");
    }
}
