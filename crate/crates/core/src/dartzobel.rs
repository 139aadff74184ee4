//! The Dart-Zobel inclusion test `subset(τ1, τ2)`.
//!
//! `subsetv(ψ, Ψ, C)` asks whether the sequence ψ is covered by the set of
//! sequences Ψ under the inclusion hypotheses in `C`. The first applicable
//! alternative wins:
//!
//! 1. `Ψ = ∅` → false
//! 2. `ψ = ε` → true
//! 3. `⟨head(ψ), Υ⟩ ∈ C` and `heads(Ψ) ⊇ Υ` → `subsetv(tail(ψ), tails(Ψ), C)`
//! 4. `head(ψ) ∈ Π` → every `ψ' ∈ expand(ψ)` passes against Ψ with
//!    `⟨head(ψ), heads(Ψ)⟩` added to `C`
//! 5. `head(ψ) = f(…)` → `subsetv(open(ψ), opens(selects(head(ψ), expands(Ψ))), C)`
//!
//! A false answer refutes `⟦τ1⟧ ⊆ ⟦τ2⟧`, but a true answer only
//! establishes inclusion of the tuple-distributive closures: alternative 3
//! treats the head independently of the tail. See
//! [`corpus::left_skewed`](crate::corpus::left_skewed).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::FuelExhausted;
use crate::grammar::Grammar;
use crate::sequence::{
    expand_seq, expands_set, heads, open_seq, opens_set, selects, tails, SeqSet, Sequence,
};
use crate::term::PureTerm;
use crate::trace::{braces, TraceStep};

/// Recursion budget used when none is given.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Inclusion hypotheses `⟨τ, Υ⟩`, read as `⟦τ⟧ ⊆ ⟦Υ⟧`. Set semantics;
/// each `Υ` is kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssumptionSet {
    pairs: Vec<(PureTerm, BTreeSet<PureTerm>)>,
}

impl AssumptionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a pair; returns false if it was already present.
    pub fn insert(&mut self, key: PureTerm, upsilon: BTreeSet<PureTerm>) -> bool {
        if self.pairs.iter().any(|(k, u)| *k == key && *u == upsilon) {
            return false;
        }
        self.pairs.push((key, upsilon));
        true
    }

    pub(crate) fn pop_last(&mut self) {
        self.pairs.pop();
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PureTerm, &BTreeSet<PureTerm>)> {
        self.pairs.iter().map(|(k, u)| (k, u))
    }

    /// Whether some `⟨key, Υ⟩` has `Υ` related to `cover` by `check`.
    pub(crate) fn covers(
        &self,
        key: &PureTerm,
        cover: &BTreeSet<PureTerm>,
        check: CoverCheck,
    ) -> bool {
        self.pairs.iter().any(|(k, u)| {
            k == key
                && match check {
                    CoverCheck::Superset => cover.is_superset(u),
                    CoverCheck::Subset => cover.is_subset(u),
                }
        })
    }
}

impl fmt::Display for AssumptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self
            .pairs
            .iter()
            .map(|(k, u)| format!("<{k},{}>", braces(u)));
        f.write_str(&braces(pairs))
    }
}

/// How alternative 3 compares `heads(Ψ)` with a stored `Υ`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoverCheck {
    /// `heads(Ψ) ⊇ Υ`, the correct condition.
    #[default]
    Superset,
    /// `heads(Ψ) ⊆ Υ`, the misprinted condition of the original
    /// presentation. Only for demonstrating how the two differ.
    Subset,
}

/// A configured run of the algorithm. Fuel is reset at every public entry.
pub struct DartZobel<'g> {
    grammar: &'g Grammar,
    budget: u64,
    fuel: u64,
    check: CoverCheck,
    trace: Option<Vec<TraceStep>>,
}

impl<'g> DartZobel<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        DartZobel {
            grammar,
            budget: DEFAULT_FUEL,
            fuel: DEFAULT_FUEL,
            check: CoverCheck::Superset,
            trace: None,
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.budget = fuel;
        self
    }

    pub fn with_cover_check(mut self, check: CoverCheck) -> Self {
        self.check = check;
        self
    }

    /// Records one [`TraceStep`] per `subsetv` call.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<TraceStep> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Steps consumed by the last run.
    pub fn steps_used(&self) -> u64 {
        self.budget - self.fuel
    }

    /// `subsetv(⟨τ1⟩, {⟨τ2⟩}, ∅)`
    pub fn subset(&mut self, tau1: &PureTerm, tau2: &PureTerm) -> Result<bool, FuelExhausted> {
        let psi = Sequence::single(tau1.clone());
        let big = BTreeSet::from([Sequence::single(tau2.clone())]);
        self.subsetv(&psi, &big, &mut AssumptionSet::new())
    }

    /// Runs `subsetv` from an explicit state. `c` is restored on return.
    pub fn subsetv(
        &mut self,
        psi: &Sequence,
        big: &SeqSet,
        c: &mut AssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        debug_assert!(
            big.iter().all(|s| s.len() == psi.len()),
            "sequence lengths differ"
        );
        self.fuel = self.budget;
        self.step(psi, big, c)
    }

    fn record(
        &mut self,
        alternative: &'static str,
        psi: &Sequence,
        big: &SeqSet,
        c: &AssumptionSet,
    ) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                algo: "dz",
                alternative,
                subject: psi.to_string(),
                against: braces(big),
                assumptions: c.len(),
            });
        }
    }

    fn step(
        &mut self,
        psi: &Sequence,
        big: &SeqSet,
        c: &mut AssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        if self.fuel == 0 {
            return Err(FuelExhausted {
                budget: self.budget,
            });
        }
        self.fuel -= 1;

        if big.is_empty() {
            self.record("1", psi, big, c);
            return Ok(false);
        }
        let Some(head) = psi.head() else {
            self.record("2", psi, big, c);
            return Ok(true);
        };
        let hs = heads(big);
        if c.covers(head, &hs, self.check) {
            self.record("3", psi, big, c);
            return self.step(&psi.tail(), &tails(big), c);
        }
        match head {
            PureTerm::Type(_) => {
                self.record("4", psi, big, c);
                let pushed = c.insert(head.clone(), hs);
                let mut all = Ok(true);
                for expanded in expand_seq(self.grammar, psi) {
                    match self.step(&expanded, big, c) {
                        Ok(true) => {}
                        other => {
                            all = other;
                            break;
                        }
                    }
                }
                if pushed {
                    c.pop_last();
                }
                all
            }
            PureTerm::App(..) => {
                self.record("5", psi, big, c);
                let next = opens_set(&selects(head, &expands_set(self.grammar, big)));
                self.step(&open_seq(psi), &next, c)
            }
        }
    }
}

/// `subset(τ1, τ2)` with the default fuel.
pub fn dz_subset(g: &Grammar, tau1: &PureTerm, tau2: &PureTerm) -> Result<bool, FuelExhausted> {
    DartZobel::new(g).subset(tau1, tau2)
}

/// `subsetv(ψ, Ψ, C)` with an explicit fuel budget.
pub fn dz_subsetv(
    g: &Grammar,
    psi: &Sequence,
    big: &SeqSet,
    c: &mut AssumptionSet,
    fuel: u64,
) -> Result<bool, FuelExhausted> {
    DartZobel::new(g).with_fuel(fuel).subsetv(psi, big, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ty(s: &str) -> PureTerm {
        PureTerm::ty(s)
    }

    fn seq(items: &[&str]) -> Sequence {
        items.iter().map(|s| ty(s)).collect()
    }

    fn seqs(g: &Grammar, items: &[&[&str]]) -> SeqSet {
        items
            .iter()
            .map(|s| s.iter().map(|t| g.parse_term(t).unwrap()).collect())
            .collect()
    }

    #[test]
    fn unsound_on_left_skewed_trees() {
        let g = corpus::left_skewed();
        assert_eq!(dz_subset(&g, &ty("alpha"), &ty("beta")), Ok(true));
        assert_eq!(dz_subset(&g, &ty("beta"), &ty("alpha")), Ok(true));
        assert_eq!(dz_subset(&g, &ty("omega"), &ty("theta")), Ok(false));
        assert_eq!(dz_subset(&g, &ty("theta"), &ty("omega")), Ok(true));
        let nat = corpus::nat_lists();
        assert_eq!(dz_subset(&nat, &ty("Nat"), &ty("Nat")), Ok(true));
        assert_eq!(dz_subset(&nat, &ty("Nat"), &ty("Natlist")), Ok(false));
    }

    #[test]
    fn subsetv_examples() {
        let g = corpus::left_skewed();
        let eps = BTreeSet::from([Sequence::empty()]);
        let mut c1 = AssumptionSet::new();
        c1.insert(ty("alpha"), BTreeSet::from([ty("beta")]));
        c1.insert(ty("omega"), BTreeSet::from([ty("theta"), ty("sigma")]));

        assert_eq!(
            dz_subsetv(&g, &Sequence::empty(), &eps, &mut c1.clone(), 10),
            Ok(true)
        );
        assert_eq!(
            dz_subsetv(&g, &Sequence::empty(), &eps, &mut AssumptionSet::new(), 10),
            Ok(true)
        );
        let theta_sigma = seqs(&g, &[&["theta"], &["sigma"]]);
        let a = Sequence::single(g.parse_term("a").unwrap());
        assert_eq!(dz_subsetv(&g, &a, &theta_sigma, &mut c1, 100), Ok(true));
        assert_eq!(c1.len(), 2, "state restored");

        let b = Sequence::single(g.parse_term("b").unwrap());
        let theta = seqs(&g, &[&["theta"]]);
        assert_eq!(
            dz_subsetv(&g, &b, &theta, &mut AssumptionSet::new(), 100),
            Ok(false)
        );

        let omega_a = Sequence::new(vec![ty("omega"), g.parse_term("a").unwrap()]);
        let pairs = seqs(&g, &[&["theta", "a"], &["sigma", "b"]]);
        assert_eq!(dz_subsetv(&g, &omega_a, &pairs, &mut c1, 100), Ok(true));
        assert_eq!(
            dz_subsetv(&g, &omega_a, &pairs, &mut AssumptionSet::new(), 100),
            Ok(false)
        );
    }

    #[test]
    fn empty_cover_fails_first() {
        let g = corpus::left_skewed();
        let mut dz = DartZobel::new(&g).with_trace();
        assert_eq!(
            dz.subsetv(
                &Sequence::empty(),
                &SeqSet::new(),
                &mut AssumptionSet::new()
            ),
            Ok(false)
        );
        assert_eq!(dz.take_trace()[0].alternative, "1");
    }

    #[test]
    fn fuel_is_reported() {
        let g = corpus::left_skewed();
        let mut dz = DartZobel::new(&g).with_fuel(3);
        assert_eq!(
            dz.subset(&ty("alpha"), &ty("beta")),
            Err(FuelExhausted { budget: 3 })
        );
        let mut dz = DartZobel::new(&g).with_fuel(15);
        assert_eq!(dz.subset(&ty("alpha"), &ty("beta")), Ok(true));
        assert_eq!(dz.steps_used(), 15);
        let mut dz = DartZobel::new(&g).with_fuel(14);
        assert!(dz.subset(&ty("alpha"), &ty("beta")).is_err());
    }

    #[test]
    fn trace_follows_the_worked_derivation() {
        let g = corpus::left_skewed();
        let mut dz = DartZobel::new(&g).with_trace();
        assert_eq!(dz.subset(&ty("alpha"), &ty("beta")), Ok(true));
        let alts: Vec<&str> = dz.take_trace().iter().map(|s| s.alternative).collect();
        assert_eq!(
            alts,
            ["4", "5", "4", "5", "2", "5", "2", "5", "3", "5", "2", "5", "3", "5", "2"]
        );
    }

    #[test]
    fn irrelevant_assumptions_do_not_matter() {
        let g = corpus::left_skewed();
        let psi = seq(&["alpha"]);
        let big = seqs(&g, &[&["beta"]]);
        let mut extra = AssumptionSet::new();
        extra.insert(ty("sigma"), BTreeSet::from([ty("alpha")]));
        assert_eq!(
            dz_subsetv(&g, &psi, &big, &mut extra, DEFAULT_FUEL),
            dz_subsetv(&g, &psi, &big, &mut AssumptionSet::new(), DEFAULT_FUEL)
        );
    }

    #[test]
    fn misprinted_condition_differs() {
        // With ⊆, an assumption ⟨omega,{theta,sigma}⟩ also matches the smaller
        // head set {theta}, so omega passes against theta alone.
        let g = corpus::left_skewed();
        let mut c = AssumptionSet::new();
        c.insert(ty("omega"), BTreeSet::from([ty("theta"), ty("sigma")]));
        let psi = Sequence::new(vec![ty("omega"), g.parse_term("a").unwrap()]);
        let big = seqs(&g, &[&["theta", "a"]]);
        let run = |check| {
            DartZobel::new(&g)
                .with_cover_check(check)
                .subsetv(&psi, &big, &mut c.clone())
        };
        assert_eq!(run(CoverCheck::Superset), Ok(false));
        assert_eq!(run(CoverCheck::Subset), Ok(true));
    }
}
