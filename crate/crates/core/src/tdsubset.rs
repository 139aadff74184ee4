//! Inclusion of tuple-distributive regular types, `⟦τ1⟧* ⊆ ⟦τ2⟧*`.
//!
//! Works on single terms instead of sequences: under the closure the
//! argument positions of a term are independent, so a sequence is checked
//! one component at a time against the set of corresponding components.
//!
//! `subset'(τ, Υ, C)`, first applicable alternative:
//!
//! 1. `Υ = ∅` → false
//! 2. `⟨τ, Υ'⟩ ∈ C` with `Υ ⊇ Υ'` → true
//! 3. `τ ∈ Π` → every rule right-hand side of τ passes against Υ with
//!    `⟨τ, Υ⟩` added to `C`
//! 4. `τ = f(τ1..τn)` → `subsetv'(τ1…τn, {σ1…σn | f(σ1..σn) ∈ expands'(Υ)}, C)`
//!
//! `subsetv'(ε, {ε}, C)` is true, `subsetv'(ε, ∅, C)` is false, and
//! otherwise the head and the tail are checked separately.

use std::collections::BTreeSet;

use crate::dartzobel::{AssumptionSet, CoverCheck, DEFAULT_FUEL};
use crate::error::FuelExhausted;
use crate::grammar::Grammar;
use crate::sequence::{heads, tails, SeqSet, Sequence};
use crate::term::PureTerm;
use crate::trace::{braces, TraceStep};

/// Assumption pairs keyed by arbitrary pure terms. Only type symbols are
/// ever inserted, so lookups with other terms never hit.
pub type TdAssumptionSet = AssumptionSet;

/// `{τ}` if τ is function-rooted, otherwise the right-hand sides of τ.
pub fn td_expand(g: &Grammar, tau: &PureTerm) -> BTreeSet<PureTerm> {
    match tau {
        PureTerm::Type(alpha) => g.rules_for(alpha).clone(),
        PureTerm::App(..) => BTreeSet::from([tau.clone()]),
    }
}

/// Union of [`td_expand`] over `upsilon`.
pub fn td_expands(g: &Grammar, upsilon: &BTreeSet<PureTerm>) -> BTreeSet<PureTerm> {
    upsilon.iter().flat_map(|t| td_expand(g, t)).collect()
}

pub struct TdSubset<'g> {
    grammar: &'g Grammar,
    budget: u64,
    fuel: u64,
    trace: Option<Vec<TraceStep>>,
}

impl<'g> TdSubset<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        TdSubset {
            grammar,
            budget: DEFAULT_FUEL,
            fuel: DEFAULT_FUEL,
            trace: None,
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.budget = fuel;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<TraceStep> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn steps_used(&self) -> u64 {
        self.budget - self.fuel
    }

    /// `subset'(τ1, {τ2}, ∅)`
    pub fn subset(&mut self, tau1: &PureTerm, tau2: &PureTerm) -> Result<bool, FuelExhausted> {
        self.subset_term(
            tau1,
            &BTreeSet::from([tau2.clone()]),
            &mut TdAssumptionSet::new(),
        )
    }

    pub fn subset_term(
        &mut self,
        tau: &PureTerm,
        upsilon: &BTreeSet<PureTerm>,
        c: &mut TdAssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        self.fuel = self.budget;
        self.term(tau, upsilon, c)
    }

    pub fn subsetv_seq(
        &mut self,
        psi: &Sequence,
        big: &SeqSet,
        c: &mut TdAssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        self.fuel = self.budget;
        self.seq(psi, big, c)
    }

    fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.fuel == 0 {
            return Err(FuelExhausted {
                budget: self.budget,
            });
        }
        self.fuel -= 1;
        Ok(())
    }

    fn record(
        &mut self,
        alternative: &'static str,
        subject: String,
        against: String,
        c: &TdAssumptionSet,
    ) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                algo: "td",
                alternative,
                subject,
                against,
                assumptions: c.len(),
            });
        }
    }

    fn term(
        &mut self,
        tau: &PureTerm,
        upsilon: &BTreeSet<PureTerm>,
        c: &mut TdAssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        self.tick()?;
        if upsilon.is_empty() {
            self.record("1", tau.to_string(), braces(upsilon), c);
            return Ok(false);
        }
        if c.covers(tau, upsilon, CoverCheck::Superset) {
            self.record("2", tau.to_string(), braces(upsilon), c);
            return Ok(true);
        }
        match tau {
            PureTerm::Type(alpha) => {
                self.record("3", tau.to_string(), braces(upsilon), c);
                let pushed = c.insert(tau.clone(), upsilon.clone());
                let mut all = Ok(true);
                for rhs in self.grammar.rules_for(alpha) {
                    match self.term(rhs, upsilon, c) {
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
            PureTerm::App(f, args) => {
                self.record("4", tau.to_string(), braces(upsilon), c);
                let big: SeqSet = td_expands(self.grammar, upsilon)
                    .into_iter()
                    .filter(|s| s.root() == f && s.args().len() == args.len())
                    .map(|s| s.args().iter().cloned().collect())
                    .collect();
                self.seq(&args.iter().cloned().collect(), &big, c)
            }
        }
    }

    fn seq(
        &mut self,
        psi: &Sequence,
        big: &SeqSet,
        c: &mut TdAssumptionSet,
    ) -> Result<bool, FuelExhausted> {
        self.tick()?;
        if psi.is_empty() {
            // big is ∅ or {ε}; ε against ∅ is false, as for alternative 1
            let covered = !big.is_empty();
            self.record(
                if covered { "v1" } else { "v0" },
                psi.to_string(),
                braces(big),
                c,
            );
            return Ok(covered);
        }
        self.record("v2", psi.to_string(), braces(big), c);
        let head = psi.head().expect("non-empty");
        let (hs, ts) = if big.is_empty() {
            (BTreeSet::new(), SeqSet::new())
        } else {
            (heads(big), tails(big))
        };
        Ok(self.term(head, &hs, c)? && self.seq(&psi.tail(), &ts, c)?)
    }
}

/// `subset'(τ1, τ2)` with the default fuel.
pub fn td_subset(g: &Grammar, tau1: &PureTerm, tau2: &PureTerm) -> Result<bool, FuelExhausted> {
    TdSubset::new(g).subset(tau1, tau2)
}

/// `subset'(τ, Υ, C)` with an explicit fuel budget.
pub fn td_subset_term(
    g: &Grammar,
    tau: &PureTerm,
    upsilon: &BTreeSet<PureTerm>,
    c: &mut TdAssumptionSet,
    fuel: u64,
) -> Result<bool, FuelExhausted> {
    TdSubset::new(g)
        .with_fuel(fuel)
        .subset_term(tau, upsilon, c)
}

/// `subsetv'(ψ, Ψ, C)` with an explicit fuel budget.
pub fn td_subsetv_seq(
    g: &Grammar,
    psi: &Sequence,
    big: &SeqSet,
    c: &mut TdAssumptionSet,
    fuel: u64,
) -> Result<bool, FuelExhausted> {
    TdSubset::new(g).with_fuel(fuel).subsetv_seq(psi, big, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ty(s: &str) -> PureTerm {
        PureTerm::ty(s)
    }

    fn terms(g: &Grammar, items: &[&str]) -> BTreeSet<PureTerm> {
        items.iter().map(|s| g.parse_term(s).unwrap()).collect()
    }

    #[test]
    fn expand_examples() {
        let g = corpus::left_skewed();
        assert_eq!(
            td_expand(&g, &ty("omega")),
            terms(&g, &["a", "b", "h(omega,a)", "h(omega,b)"])
        );
        assert_eq!(
            td_expand(&g, &g.parse_term("g(omega)").unwrap()),
            terms(&g, &["g(omega)"])
        );
        let nat = corpus::nat_lists();
        assert_eq!(td_expand(&nat, &ty("Nat")), terms(&nat, &["0", "s(Nat)"]));

        assert_eq!(
            td_expands(&g, &terms(&g, &["beta"])),
            terms(&g, &["g(theta)", "g(sigma)"])
        );
        assert!(td_expands(&g, &BTreeSet::new()).is_empty());
        assert_eq!(
            td_expands(&g, &terms(&g, &["theta", "sigma"])),
            terms(&g, &["a", "h(theta,a)", "b", "h(sigma,b)"])
        );
    }

    #[test]
    fn subset_term_examples() {
        let g = corpus::left_skewed();
        let ts = terms(&g, &["theta", "sigma"]);
        assert_eq!(
            td_subset_term(
                &g,
                &ty("omega"),
                &ts,
                &mut TdAssumptionSet::new(),
                DEFAULT_FUEL
            ),
            Ok(true)
        );
        let b = g.parse_term("b").unwrap();
        assert_eq!(
            td_subset_term(
                &g,
                &b,
                &terms(&g, &["theta"]),
                &mut TdAssumptionSet::new(),
                DEFAULT_FUEL
            ),
            Ok(false)
        );

        let mut c = TdAssumptionSet::new();
        c.insert(ty("omega"), ts.clone());
        let mut tracer = TdSubset::new(&g).with_trace();
        assert_eq!(tracer.subset_term(&ty("omega"), &ts, &mut c), Ok(true));
        assert_eq!(tracer.take_trace()[0].alternative, "2");
    }

    #[test]
    fn subsetv_examples() {
        let g = corpus::left_skewed();
        let eps = SeqSet::from([Sequence::empty()]);
        assert_eq!(
            td_subsetv_seq(
                &g,
                &Sequence::empty(),
                &eps,
                &mut TdAssumptionSet::new(),
                10
            ),
            Ok(true)
        );
        assert_eq!(
            td_subsetv_seq(
                &g,
                &Sequence::empty(),
                &SeqSet::new(),
                &mut TdAssumptionSet::new(),
                10
            ),
            Ok(false)
        );

        let psi = Sequence::new(vec![ty("omega"), g.parse_term("a").unwrap()]);
        let big: SeqSet = [["theta", "a"], ["sigma", "b"]]
            .iter()
            .map(|s| s.iter().map(|t| g.parse_term(t).unwrap()).collect())
            .collect();
        assert_eq!(
            td_subsetv_seq(&g, &psi, &big, &mut TdAssumptionSet::new(), DEFAULT_FUEL),
            Ok(true)
        );

        let a = Sequence::single(g.parse_term("a").unwrap());
        assert_eq!(
            td_subsetv_seq(&g, &a, &SeqSet::new(), &mut TdAssumptionSet::new(), 10),
            Ok(false)
        );
    }

    #[test]
    fn top_level_examples() {
        let g = corpus::left_skewed();
        assert_eq!(td_subset(&g, &ty("alpha"), &ty("beta")), Ok(true));
        assert_eq!(td_subset(&g, &ty("theta"), &ty("omega")), Ok(true));
        assert_eq!(td_subset(&g, &ty("omega"), &ty("theta")), Ok(false));
        let nat = corpus::nat_lists();
        assert_eq!(td_subset(&nat, &ty("Nat"), &ty("Natlist")), Ok(false));
        assert_eq!(td_subset(&nat, &ty("Natlist"), &ty("Natlist")), Ok(true));
    }

    #[test]
    fn sees_through_recombined_arguments() {
        let g = corpus::crossed_pairs();
        assert_eq!(td_subset(&g, &ty("pair"), &ty("crossed")), Ok(true));
        assert_eq!(td_subset(&g, &ty("crossed"), &ty("pair")), Ok(false));
    }

    #[test]
    fn fuel_is_reported() {
        let g = corpus::left_skewed();
        let err = TdSubset::new(&g)
            .with_fuel(2)
            .subset(&ty("alpha"), &ty("beta"));
        assert_eq!(err, Err(FuelExhausted { budget: 2 }));
    }
}
