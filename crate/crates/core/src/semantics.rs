//! Ground-term semantics: membership in `⟦τ⟧`, membership in the
//! tuple-distributive closure, bounded enumeration, and the bounded
//! refutation oracles.
//!
//! All functions expect a simplified grammar (no chain rules, no empty type
//! symbols).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::grammar::Grammar;
use crate::search::{first_witness, Mode};
use crate::term::{GroundTerm, PureTerm, Symbol};

/// Memoized membership test `t ∈ ⟦τ⟧` for one grammar.
pub struct Membership<'g> {
    grammar: &'g Grammar,
    memo: HashMap<(usize, PureTerm), bool>,
    // Keeps memo keys (node addresses) from being reused.
    pinned: Vec<GroundTerm>,
}

impl<'g> Membership<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        debug_assert!(
            grammar.rules().all(|(_, r)| !r.is_type_symbol()),
            "membership needs a grammar without chain rules"
        );
        Membership {
            grammar,
            memo: HashMap::new(),
            pinned: Vec::new(),
        }
    }

    pub fn member(&mut self, t: &GroundTerm, tau: &PureTerm) -> bool {
        self.pinned.push(t.clone());
        self.go(t, tau)
    }

    fn go(&mut self, t: &GroundTerm, tau: &PureTerm) -> bool {
        match tau {
            PureTerm::App(f, args) => {
                f == t.head()
                    && args.len() == t.args().len()
                    && t.args()
                        .iter()
                        .zip(args.iter())
                        .all(|(ti, si)| self.go(ti, si))
            }
            PureTerm::Type(alpha) => {
                let key = (t.node_id(), tau.clone());
                if let Some(&hit) = self.memo.get(&key) {
                    return hit;
                }
                let g = self.grammar;
                let found = g
                    .rules_for(alpha)
                    .iter()
                    .filter(|r| r.root() == t.head())
                    .any(|r| self.go(t, r));
                self.memo.insert(key, found);
                found
            }
        }
    }
}

/// `t ∈ ⟦τ⟧`, i.e. `τ` derives `t`.
pub fn member(g: &Grammar, t: &GroundTerm, tau: &PureTerm) -> bool {
    Membership::new(g).member(t, tau)
}

/// Replaces type symbols by their right-hand sides until every root is a
/// function symbol.
pub(crate) fn expand_to_function_roots(
    g: &Grammar,
    upsilon: &BTreeSet<PureTerm>,
) -> BTreeSet<PureTerm> {
    let mut out = BTreeSet::new();
    let mut seen: BTreeSet<&Symbol> = BTreeSet::new();
    let mut stack: Vec<&PureTerm> = upsilon.iter().collect();
    while let Some(t) = stack.pop() {
        match t {
            PureTerm::App(..) => {
                out.insert(t.clone());
            }
            PureTerm::Type(alpha) => {
                if seen.insert(alpha) {
                    stack.extend(g.rules_for(alpha).iter());
                }
            }
        }
    }
    out
}

/// `t ∈ (⋃_{τ∈Υ} ⟦τ⟧)*`: membership in the tuple-distributive closure.
///
/// A constant is a member iff it occurs among the expansions of `upsilon`.
/// For `f(t1..tn)`, the `f`-rooted expansions are selected and each `ti` is
/// checked against the set of their `i`-th arguments.
pub fn member_td(g: &Grammar, t: &GroundTerm, upsilon: &BTreeSet<PureTerm>) -> bool {
    let expanded = expand_to_function_roots(g, upsilon);
    let selected: Vec<&PureTerm> = expanded
        .iter()
        .filter(|s| s.root() == t.head() && s.args().len() == t.args().len())
        .collect();
    if selected.is_empty() {
        return false;
    }
    t.args().iter().enumerate().all(|(i, ti)| {
        let projection: BTreeSet<PureTerm> = selected.iter().map(|s| s.args()[i].clone()).collect();
        member_td(g, ti, &projection)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration exceeds {limit} terms")]
pub struct EnumerationLimit {
    pub limit: usize,
}

type TermSet = Arc<BTreeSet<GroundTerm>>;

/// Bottom-up enumeration of `⟦τ⟧` by depth, memoized on `(τ, depth)`.
///
/// Works level by level: the terms of depth at most `k` for every type
/// symbol are built from level `k - 1`, and chain rules (if any) are closed
/// within a level.
pub struct Enumerator<'g> {
    grammar: &'g Grammar,
    limit: Option<usize>,
    levels: Vec<HashMap<Symbol, TermSet>>,
    cache: HashMap<(PureTerm, usize), TermSet>,
}

impl<'g> Enumerator<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        let empty = grammar
            .pi()
            .map(|s| (s.clone(), TermSet::default()))
            .collect();
        Enumerator {
            grammar,
            limit: None,
            levels: vec![empty],
            cache: HashMap::new(),
        }
    }

    /// Fails instead of building any intermediate set larger than `limit`.
    pub fn with_limit(grammar: &'g Grammar, limit: usize) -> Self {
        Enumerator {
            limit: Some(limit),
            ..Enumerator::new(grammar)
        }
    }

    /// `{t ∈ ⟦τ⟧ | depth(t) ≤ depth}` in canonical order.
    pub fn enumerate(&mut self, tau: &PureTerm, depth: usize) -> Result<TermSet, EnumerationLimit> {
        if let Some(hit) = self.cache.get(&(tau.clone(), depth)) {
            return Ok(hit.clone());
        }
        let out = match tau {
            PureTerm::Type(alpha) => {
                self.fill_levels(depth)?;
                self.levels[depth].get(alpha).cloned().unwrap_or_default()
            }
            PureTerm::App(f, args) => {
                if depth == 0 {
                    TermSet::default()
                } else {
                    let mut parts = Vec::with_capacity(args.len());
                    for a in args.iter() {
                        parts.push(self.enumerate(a, depth - 1)?);
                    }
                    Arc::new(self.product(f, &parts)?)
                }
            }
        };
        self.cache.insert((tau.clone(), depth), out.clone());
        Ok(out)
    }

    fn check(&self, n: usize) -> Result<(), EnumerationLimit> {
        match self.limit {
            Some(limit) if n > limit => Err(EnumerationLimit { limit }),
            _ => Ok(()),
        }
    }

    fn product(
        &self,
        f: &Symbol,
        parts: &[TermSet],
    ) -> Result<BTreeSet<GroundTerm>, EnumerationLimit> {
        let size = parts
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.len()))
            .unwrap_or(usize::MAX);
        self.check(size)?;
        let mut out = BTreeSet::new();
        if size == 0 {
            return Ok(out);
        }
        let pools: Vec<Vec<&GroundTerm>> = parts.iter().map(|p| p.iter().collect()).collect();
        let mut idx = vec![0usize; pools.len()];
        loop {
            let args = idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect();
            out.insert(GroundTerm::new(f.clone(), args));
            // odometer, last position fastest
            let mut pos = pools.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < pools[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    fn fill_levels(&mut self, depth: usize) -> Result<(), EnumerationLimit> {
        while self.levels.len() <= depth {
            let k = self.levels.len();
            let g = self.grammar;
            let mut level: HashMap<Symbol, BTreeSet<GroundTerm>> = HashMap::new();
            for alpha in g.pi() {
                let mut acc = BTreeSet::new();
                for rhs in g.rules_for(alpha) {
                    if let PureTerm::App(f, args) = rhs {
                        let mut parts = Vec::with_capacity(args.len());
                        for a in args.iter() {
                            parts.push(self.enumerate(a, k - 1)?);
                        }
                        acc.extend(self.product(f, &parts)?);
                        self.check(acc.len())?;
                    }
                }
                level.insert(alpha.clone(), acc);
            }
            // chain rules within the level
            loop {
                let mut changed = false;
                for (alpha, rhs) in g.rules() {
                    if let PureTerm::Type(beta) = rhs {
                        let add: Vec<GroundTerm> = level[beta]
                            .iter()
                            .filter(|t| !level[alpha].contains(*t))
                            .cloned()
                            .collect();
                        if !add.is_empty() {
                            changed = true;
                            let set = level.get_mut(alpha).expect("type symbol");
                            set.extend(add);
                            let n = set.len();
                            self.check(n)?;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            self.levels.push(
                level
                    .into_iter()
                    .map(|(s, set)| (s, Arc::new(set)))
                    .collect(),
            );
        }
        Ok(())
    }
}

/// `{t ∈ ⟦τ⟧ | depth(t) ≤ depth}` in canonical order. Unbounded in size;
/// use [`Enumerator::with_limit`] when the grammar may be large.
pub fn enumerate(g: &Grammar, tau: &PureTerm, depth: usize) -> BTreeSet<GroundTerm> {
    let set = Enumerator::new(g)
        .enumerate(tau, depth)
        .expect("no limit set");
    Arc::try_unwrap(set).unwrap_or_else(|arc| (*arc).clone())
}

/// Result of a bounded refutation search. `Inconclusive` never proves
/// inclusion: it only says no witness exists up to `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    Witness(GroundTerm),
    Inconclusive { depth: usize },
}

impl Refutation {
    pub fn witness(&self) -> Option<&GroundTerm> {
        match self {
            Refutation::Witness(t) => Some(t),
            Refutation::Inconclusive { .. } => None,
        }
    }

    pub fn is_witness(&self) -> bool {
        matches!(self, Refutation::Witness(_))
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Witness(t) => write!(f, "witness {t}"),
            Refutation::Inconclusive { depth } => write!(f, "inconclusive at depth {depth}"),
        }
    }
}

/// The first `t` of `enumerate(τ1, depth)` (canonical order) with
/// `t ∉ ⟦τ2⟧`.
///
/// Does not materialise the enumeration: terms are grouped by which
/// grammar positions accept them, and only the least term of each group is
/// kept per depth.
pub fn find_regular_counterexample(
    g: &Grammar,
    tau1: &PureTerm,
    tau2: &PureTerm,
    depth: usize,
) -> Refutation {
    match first_witness(g, tau1, tau2, depth, Mode::Regular) {
        Some(t) => Refutation::Witness(t),
        None => Refutation::Inconclusive { depth },
    }
}

/// The first `t` of `enumerate(τ1, depth)` with `t ∉ ⟦τ2⟧*`. Since the
/// closure is monotone and idempotent such a `t` also refutes
/// `⟦τ1⟧* ⊆ ⟦τ2⟧*`.
pub fn find_td_counterexample(
    g: &Grammar,
    tau1: &PureTerm,
    tau2: &PureTerm,
    depth: usize,
) -> Refutation {
    match first_witness(g, tau1, tau2, depth, Mode::TupleDistributive) {
        Some(t) => Refutation::Witness(t),
        None => Refutation::Inconclusive { depth },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ty(s: &str) -> PureTerm {
        PureTerm::ty(s)
    }

    fn set(items: &[&str]) -> BTreeSet<PureTerm> {
        items.iter().map(|s| ty(s)).collect()
    }

    fn printed(s: &BTreeSet<GroundTerm>) -> Vec<String> {
        s.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn membership_examples() {
        let g = corpus::nat_lists();
        let t = g.parse_ground("cons(s(0),nil)").unwrap();
        assert!(member(&g, &t, &ty("Natlist")));
        assert!(!member(&g, &g.parse_ground("0").unwrap(), &ty("Natlist")));

        let g = corpus::left_skewed();
        let t = g.parse_ground("g(h(h(a,b),a))").unwrap();
        assert!(member(&g, &t, &ty("alpha")));
        assert!(!member(&g, &t, &ty("beta")));
        assert!(member(&g, &t, &g.parse_term("g(omega)").unwrap()));
    }

    #[test]
    fn closure_membership_examples() {
        let g = corpus::left_skewed();
        assert!(member_td(
            &g,
            &g.parse_ground("a").unwrap(),
            &set(&["theta"])
        ));
        assert!(member_td(
            &g,
            &g.parse_ground("g(h(h(a,b),a))").unwrap(),
            &set(&["beta"])
        ));
        assert!(!member_td(
            &g,
            &g.parse_ground("h(b,a)").unwrap(),
            &set(&["theta"])
        ));
        assert!(!member_td(
            &g,
            &g.parse_ground("a").unwrap(),
            &BTreeSet::new()
        ));

        let g = corpus::crossed_pairs();
        let faa = g.parse_ground("f(a,a)").unwrap();
        assert!(!member(&g, &faa, &ty("crossed")));
        assert!(member_td(&g, &faa, &set(&["crossed"])));
    }

    #[test]
    fn enumeration_examples() {
        let g = corpus::nat_lists();
        assert_eq!(printed(&enumerate(&g, &ty("Nat"), 1)), ["0"]);
        assert_eq!(
            printed(&enumerate(&g, &ty("Nat"), 3)),
            ["0", "s(0)", "s(s(0))"]
        );
        assert_eq!(
            printed(&enumerate(&g, &ty("Natlist"), 2)),
            ["cons(0,nil)", "nil"]
        );
        assert!(enumerate(&g, &ty("Nat"), 0).is_empty());
    }

    #[test]
    fn enumeration_follows_chain_rules() {
        let g: Grammar = "%sig a/0 f/1\nA -> B | f(A)\nB -> A | a".parse().unwrap();
        let s = g.simplify(&[]).unwrap();
        for d in 0..5 {
            assert_eq!(enumerate(&g, &ty("A"), d), enumerate(&s, &ty("A"), d));
            assert_eq!(enumerate(&g, &ty("B"), d), enumerate(&s, &ty("B"), d));
        }
        assert_eq!(
            printed(&enumerate(&g, &ty("B"), 3)),
            ["a", "f(a)", "f(f(a))"]
        );
    }

    #[test]
    fn enumeration_limit() {
        let g: Grammar = "%sig a/0 b/0 h/2\nT -> a | b | h(T,T)".parse().unwrap();
        let mut e = Enumerator::with_limit(&g, 100);
        assert_eq!(e.enumerate(&ty("T"), 3).unwrap().len(), 38);
        assert_eq!(
            e.enumerate(&ty("T"), 4),
            Err(EnumerationLimit { limit: 100 })
        );
    }

    #[test]
    fn regular_counterexamples() {
        let g = corpus::left_skewed();
        let (alpha, beta) = (ty("alpha"), ty("beta"));
        assert_eq!(
            find_regular_counterexample(&g, &alpha, &beta, 3)
                .witness()
                .map(ToString::to_string),
            Some("g(h(a,b))".to_string())
        );
        assert!(find_regular_counterexample(&g, &alpha, &beta, 2)
            .witness()
            .is_none());
        let nat = corpus::nat_lists();
        assert_eq!(
            find_regular_counterexample(&nat, &ty("Nat"), &ty("Nat"), 5),
            Refutation::Inconclusive { depth: 5 }
        );
    }

    #[test]
    fn td_counterexamples() {
        let g = corpus::left_skewed();
        assert!(!find_td_counterexample(&g, &ty("alpha"), &ty("beta"), 6).is_witness());
        assert_eq!(
            find_td_counterexample(&g, &ty("omega"), &ty("theta"), 1)
                .witness()
                .map(ToString::to_string),
            Some("b".to_string())
        );
        let nat = corpus::nat_lists();
        assert!(!find_td_counterexample(&nat, &ty("Nat"), &ty("Nat"), 5).is_witness());
        assert_eq!(
            find_td_counterexample(&nat, &ty("Nat"), &ty("Natlist"), 4)
                .witness()
                .map(ToString::to_string),
            Some("0".to_string())
        );
    }
}
