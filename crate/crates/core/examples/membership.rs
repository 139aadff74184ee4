//! Exact membership against membership in the tuple-distributive closure.

use std::collections::BTreeSet;

use regtypes::{corpus, member, member_td, PureTerm};

fn main() {
    let nat = corpus::nat_lists();
    for text in ["cons(s(0),nil)", "cons(nil,nil)", "s(s(0))"] {
        let t = nat.parse_ground(text).unwrap();
        println!(
            "{t}: Nat {}, Natlist {}",
            member(&nat, &t, &PureTerm::ty("Nat")),
            member(&nat, &t, &PureTerm::ty("Natlist"))
        );
    }

    let g = corpus::crossed_pairs();
    let crossed = PureTerm::ty("crossed");
    let t = g.parse_ground("f(a,a)").unwrap();
    println!(
        "{t}: in crossed {}, in the closure of crossed {}",
        member(&g, &t, &crossed),
        member_td(&g, &t, &BTreeSet::from([crossed.clone()]))
    );
}
