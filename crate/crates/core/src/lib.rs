//! Regular types given by regular term grammars, and two inclusion tests
//! over them: the Dart-Zobel algorithm on sequences of pure type terms and
//! a term-wise variant for tuple-distributive regular types.
//!
//! Around them sit exact membership, membership in the tuple-distributive
//! closure, bounded enumeration with least-witness refutation oracles, and a
//! randomized differential harness.
//!
//! ```
//! use regtypes::{corpus, dz_subset, find_regular_counterexample, PureTerm};
//!
//! let g = corpus::left_skewed();
//! let (alpha, beta) = (PureTerm::ty("alpha"), PureTerm::ty("beta"));
//! assert_eq!(dz_subset(&g, &alpha, &beta), Ok(true));
//! let w = find_regular_counterexample(&g, &alpha, &beta, 4);
//! assert_eq!(w.witness().unwrap().to_string(), "g(h(a,b))");
//! ```

pub mod cli;
pub mod corpus;
pub mod dartzobel;
pub mod error;
pub mod grammar;
pub mod harness;
pub mod semantics;
pub mod sequence;
pub mod tdsubset;
pub mod term;
pub mod trace;

mod search;

pub use dartzobel::{dz_subset, dz_subsetv, AssumptionSet, CoverCheck, DartZobel, DEFAULT_FUEL};
pub use error::{EmptyTypeError, FuelExhausted, ParseError};
pub use grammar::{parse_grammar, Grammar};
pub use semantics::{
    enumerate, find_regular_counterexample, find_td_counterexample, member, member_td, Enumerator,
    Membership, Refutation,
};
pub use sequence::{SeqSet, Sequence};
pub use tdsubset::{td_subset, td_subset_term, td_subsetv_seq, TdAssumptionSet, TdSubset};
pub use term::{GroundTerm, PureTerm, Symbol};
