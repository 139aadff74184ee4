//! Removing empty type symbols and inlining chain rules.

use regtypes::parse_grammar;

fn main() {
    let g = parse_grammar(
        "%sig a/0 b/0 f/2
        # List is a chain to Cons or Nil; Loop never terminates
        List -> Nil | Cons
        Nil -> a
        Cons -> f(b, List)
        Loop -> f(Loop, Loop)
        Bad -> f(a, Loop) | b",
    )
    .unwrap();
    println!("before:\n{g}");
    println!("after:\n{}", g.simplify(&["List"]).unwrap());
    println!("{}", g.simplify(&["Loop"]).unwrap_err());
}
