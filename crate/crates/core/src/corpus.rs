//! Small grammars used throughout the tests and examples.

use crate::grammar::Grammar;

pub const NAT_LISTS: &str = include_str!("../data/nat_lists.rtg");
pub const LEFT_SKEWED: &str = include_str!("../data/left_skewed.rtg");
pub const CROSSED_PAIRS: &str = include_str!("../data/crossed_pairs.rtg");

/// `Nat -> 0 | s(Nat)`, `Natlist -> nil | cons(Nat,Natlist)`.
pub fn nat_lists() -> Grammar {
    NAT_LISTS.parse().expect("bundled grammar parses")
}

/// The left-skewed tree grammar on which the Dart-Zobel test is unsound.
pub fn left_skewed() -> Grammar {
    LEFT_SKEWED.parse().expect("bundled grammar parses")
}

/// Two rules whose tuple-distributive closures coincide but whose regular
/// languages do not.
pub fn crossed_pairs() -> Grammar {
    CROSSED_PAIRS.parse().expect("bundled grammar parses")
}
