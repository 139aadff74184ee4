//! Sequences of pure type terms and sets of equal-length sequences.

use std::collections::BTreeSet;
use std::fmt;

use crate::grammar::Grammar;
use crate::term::PureTerm;

/// `τ1 τ2 … τn`, possibly empty (ε). Printed as `<τ1,…,τn>`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequence(Vec<PureTerm>);

impl Sequence {
    pub fn new(items: Vec<PureTerm>) -> Self {
        Sequence(items)
    }

    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn single(t: PureTerm) -> Self {
        Sequence(vec![t])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn items(&self) -> &[PureTerm] {
        &self.0
    }

    pub fn head(&self) -> Option<&PureTerm> {
        self.0.first()
    }

    /// Everything after the head. Panics on ε.
    pub fn tail(&self) -> Sequence {
        assert!(!self.is_empty(), "tail of the empty sequence");
        Sequence(self.0[1..].to_vec())
    }

    /// `⟨t⟩ + tail(self)`
    fn with_head(&self, t: PureTerm) -> Sequence {
        let mut items = Vec::with_capacity(self.0.len());
        items.push(t);
        items.extend_from_slice(&self.0[1..]);
        Sequence(items)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<PureTerm> for Sequence {
    fn from_iter<I: IntoIterator<Item = PureTerm>>(iter: I) -> Self {
        Sequence(iter.into_iter().collect())
    }
}

/// A set of sequences, all of the same length.
pub type SeqSet = BTreeSet<Sequence>;

/// Set of heads of a set of non-empty sequences.
pub fn heads(set: &SeqSet) -> BTreeSet<PureTerm> {
    set.iter()
        .map(|s| s.head().expect("heads of an empty sequence").clone())
        .collect()
}

/// Set of tails of a set of non-empty sequences.
pub fn tails(set: &SeqSet) -> SeqSet {
    set.iter().map(Sequence::tail).collect()
}

/// `{ψ}` if the head is not a type symbol, otherwise one sequence per rule
/// of the head with the head replaced by the rule's right-hand side.
pub fn expand_seq(g: &Grammar, psi: &Sequence) -> SeqSet {
    match psi.head() {
        Some(PureTerm::Type(alpha)) => g
            .rules_for(alpha)
            .iter()
            .map(|rhs| psi.with_head(rhs.clone()))
            .collect(),
        Some(PureTerm::App(..)) => BTreeSet::from([psi.clone()]),
        None => panic!("expand of the empty sequence"),
    }
}

/// Union of [`expand_seq`] over the set.
pub fn expands_set(g: &Grammar, set: &SeqSet) -> SeqSet {
    set.iter().flat_map(|psi| expand_seq(g, psi)).collect()
}

/// Sequences whose head has the same root function symbol as `tau`.
///
/// Contract: `tau` and every head in `set` are function-rooted.
pub fn selects(tau: &PureTerm, set: &SeqSet) -> SeqSet {
    assert!(!tau.is_type_symbol(), "selects on type symbol {tau}");
    set.iter()
        .filter(|psi| {
            let h = psi.head().expect("selects on an empty sequence");
            assert!(!h.is_type_symbol(), "selects over unexpanded head {h}");
            h.root() == tau.root() && h.args().len() == tau.args().len()
        })
        .cloned()
        .collect()
}

/// Replaces a function-rooted head `f(τ1..τn)` by `τ1 … τn`.
///
/// Contract: `psi` is non-empty and its head is not a type symbol.
pub fn open_seq(psi: &Sequence) -> Sequence {
    let head = psi.head().expect("open of the empty sequence");
    assert!(!head.is_type_symbol(), "open on type symbol head {head}");
    head.args()
        .iter()
        .chain(&psi.items()[1..])
        .cloned()
        .collect()
}

/// Elementwise [`open_seq`].
pub fn opens_set(set: &SeqSet) -> SeqSet {
    set.iter().map(open_seq).collect()
}
