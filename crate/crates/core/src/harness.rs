//! Random grammars, inclusion instances, and differential trials of the two
//! inclusion tests against the bounded oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dartzobel::DartZobel;
use crate::error::FuelExhausted;
use crate::grammar::Grammar;
use crate::semantics::{find_regular_counterexample, find_td_counterexample, Refutation};
use crate::tdsubset::TdSubset;
use crate::term::{GroundTerm, PureTerm, Symbol};

const CONSTANT_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "i", "j", "l"];
const FUNCTION_NAMES: [&str; 8] = ["f", "g", "h", "k", "m", "n", "p", "q"];
const TYPE_NAMES: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

/// Bounds for random grammars. Counts are upper bounds; the generator
/// draws below them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub max_type_symbols: usize,
    pub max_function_symbols: usize,
    pub max_arity: usize,
    pub max_rules_per_symbol: usize,
    pub max_rhs_depth: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_type_symbols: 5,
            max_function_symbols: 5,
            max_arity: 3,
            max_rules_per_symbol: 3,
            max_rhs_depth: 2,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        GenConfig { seed, ..self }
    }

    fn validate(&self) {
        assert!(
            self.max_type_symbols >= 1
                && self.max_function_symbols >= 1
                && self.max_rules_per_symbol >= 1
                && self.max_rhs_depth >= 1,
            "generator bounds must be positive: {self:?}"
        );
        assert!(self.max_type_symbols <= TYPE_NAMES.len());
        assert!(self.max_function_symbols <= CONSTANT_NAMES.len());
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Short hex digest of the canonical rendering.
pub fn grammar_digest(g: &Grammar) -> String {
    let hash = Sha256::digest(g.render().as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct Shape<'a> {
    functions: &'a [(Symbol, usize)],
    types: &'a [Symbol],
}

impl Shape<'_> {
    fn constant(&self, rng: &mut ChaCha8Rng) -> PureTerm {
        let consts: Vec<&(Symbol, usize)> =
            self.functions.iter().filter(|(_, a)| *a == 0).collect();
        PureTerm::App(
            consts.choose(rng).expect("a constant").0.clone(),
            Vec::new().into(),
        )
    }

    /// A function-rooted term of depth at most `depth`, type symbols
    /// counting as depth 1.
    fn function_rooted(&self, rng: &mut ChaCha8Rng, depth: usize) -> PureTerm {
        if depth <= 1 {
            return self.constant(rng);
        }
        let (f, arity) = self
            .functions
            .choose(rng)
            .expect("signature is non-empty")
            .clone();
        let args = (0..arity)
            .map(|_| self.argument(rng, depth - 1))
            .collect::<Vec<_>>();
        PureTerm::App(f, args.into())
    }

    fn argument(&self, rng: &mut ChaCha8Rng, depth: usize) -> PureTerm {
        if depth <= 1 || rng.gen_bool(0.65) {
            if rng.gen_bool(0.85) {
                return PureTerm::Type(self.types.choose(rng).expect("types").clone());
            }
            return self.constant(rng);
        }
        self.function_rooted(rng, depth)
    }
}

fn draw_signature(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Vec<(Symbol, usize)> {
    let n = rng.gen_range(2.min(cfg.max_function_symbols)..=cfg.max_function_symbols);
    // small arities dominate
    let weights = [3u32, 3, 3, 1];
    let mut consts = 0;
    let mut funs = 0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let arity = if i == 0 {
            0
        } else {
            let total: u32 = weights[..=cfg.max_arity.min(3)].iter().sum();
            let mut pick = rng.gen_range(0..total);
            let mut a = 0;
            while pick >= weights[a] {
                pick -= weights[a];
                a += 1;
            }
            a
        };
        let name = if arity == 0 {
            consts += 1;
            CONSTANT_NAMES[consts - 1]
        } else {
            funs += 1;
            FUNCTION_NAMES[funs - 1]
        };
        out.push((Symbol::new(name), arity));
    }
    out
}

fn draw_grammar(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Grammar {
    cfg.validate();
    loop {
        let functions = draw_signature(cfg, rng);
        let n_types = rng.gen_range(1..=cfg.max_type_symbols);
        let types: Vec<Symbol> = TYPE_NAMES[..n_types]
            .iter()
            .map(|s| Symbol::new(s))
            .collect();
        let shape = Shape {
            functions: &functions,
            types: &types,
        };
        let mut rules = Vec::new();
        for alpha in &types {
            for _ in 0..rng.gen_range(1..=cfg.max_rules_per_symbol) {
                let rhs = if n_types > 1 && rng.gen_bool(0.08) {
                    PureTerm::Type(types.choose(rng).expect("types").clone())
                } else {
                    shape.function_rooted(rng, cfg.max_rhs_depth)
                };
                rules.push((alpha.clone(), rhs));
            }
        }
        let g = Grammar::from_parts(functions.iter().cloned(), rules)
            .expect("generated grammar is well-formed");
        let s = g.simplify(&[]).expect("no roots");
        if s.type_symbol_count() > 0 {
            return s;
        }
    }
}

/// A simplified grammar with only nonempty type symbols, deterministic in
/// `cfg.seed`.
pub fn gen_grammar(cfg: &GenConfig) -> Grammar {
    draw_grammar(cfg, &mut cfg.rng())
}

/// A grammar and two pure type terms to compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub grammar: Grammar,
    pub tau1: PureTerm,
    pub tau2: PureTerm,
}

impl Instance {
    pub fn new(grammar: Grammar, tau1: PureTerm, tau2: PureTerm) -> Self {
        Instance {
            grammar,
            tau1,
            tau2,
        }
    }

    /// `alpha` against `beta` on the left-skewed tree grammar: the Dart-Zobel
    /// test says included, the regular languages say otherwise.
    pub fn left_skewed() -> Self {
        let g = crate::corpus::left_skewed()
            .simplify(&[])
            .expect("nonempty");
        Instance::new(g, PureTerm::ty("alpha"), PureTerm::ty("beta"))
    }
}

fn random_query(g: &Grammar, rng: &mut ChaCha8Rng) -> PureTerm {
    let types: Vec<Symbol> = g.pi().cloned().collect();
    if rng.gen_bool(0.85) {
        return PureTerm::Type(types.choose(rng).expect("types").clone());
    }
    let functions: Vec<(Symbol, usize)> = g.sigma().iter().map(|(s, &a)| (s.clone(), a)).collect();
    Shape {
        functions: &functions,
        types: &types,
    }
    .function_rooted(rng, 3)
}

/// A random grammar with two random query terms (mostly type symbols).
pub fn gen_instance(cfg: &GenConfig) -> Instance {
    let mut rng = cfg.rng();
    let grammar = draw_grammar(cfg, &mut rng);
    let tau1 = random_query(&grammar, &mut rng);
    let tau2 = random_query(&grammar, &mut rng);
    Instance {
        grammar,
        tau1,
        tau2,
    }
}

/// Name for the fresh supertype symbol.
pub const SUPERTYPE: &str = "Sup";

/// Adds a fresh type symbol `Sup` to `base` whose rules are those of `tau1`
/// (each occurrence of `tau1` inside them independently renamed to `Sup`
/// or kept) plus `extras` generated rules, so `⟦tau1⟧ ⊆ ⟦Sup⟧` holds.
pub fn extend_with_supertype(
    base: &Grammar,
    tau1: &Symbol,
    extras: usize,
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> Instance {
    assert!(
        base.is_type_symbol(tau1.as_str()),
        "{tau1} is not a type symbol"
    );
    assert!(!base.is_type_symbol(SUPERTYPE) && base.arity(SUPERTYPE).is_none());
    let sup = Symbol::new(SUPERTYPE);
    let mut rules = Vec::new();
    for rhs in base.rules_for(tau1) {
        let renamed = rhs.map_type_symbols(&mut |s| {
            if s == tau1 && rng.gen_bool(0.5) {
                PureTerm::Type(sup.clone())
            } else {
                PureTerm::Type(s.clone())
            }
        });
        rules.push((sup.clone(), renamed));
    }
    let functions: Vec<(Symbol, usize)> =
        base.sigma().iter().map(|(s, &a)| (s.clone(), a)).collect();
    let types: Vec<Symbol> = base.pi().cloned().chain([sup.clone()]).collect();
    let shape = Shape {
        functions: &functions,
        types: &types,
    };
    for _ in 0..extras {
        rules.push((sup.clone(), shape.function_rooted(rng, cfg.max_rhs_depth)));
    }
    let grammar = base
        .simplify(&[])
        .expect("no roots")
        .with_rules(rules)
        .expect("supertype rules are well-formed");
    debug_assert!(grammar.is_simplified());
    Instance {
        grammar,
        tau1: PureTerm::Type(tau1.clone()),
        tau2: PureTerm::Type(sup),
    }
}

/// An instance with `⟦τ1⟧ ⊆ ⟦τ2⟧` by construction, deterministic in
/// `cfg.seed`.
pub fn gen_inclusion_pair(cfg: &GenConfig) -> Instance {
    let mut rng = cfg.rng();
    let base = draw_grammar(cfg, &mut rng);
    let types: Vec<Symbol> = base.pi().cloned().collect();
    let tau1 = types.choose(&mut rng).expect("types").clone();
    let extras = rng.gen_range(0..=cfg.max_rules_per_symbol);
    extend_with_supertype(&base, &tau1, extras, cfg, &mut rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    AgreeInclude,
    AgreeExclude,
    /// dz answered true, but a regular witness refutes inclusion.
    DzUnsoundRegular,
    DzTdMismatch,
    /// Both answered false and the td oracle found nothing within the
    /// depth bound. Inconclusive, not a failure.
    IncompleteSuspect,
    FuelExhausted,
}

impl Classification {
    pub const ALL: [Classification; 6] = [
        Classification::AgreeInclude,
        Classification::AgreeExclude,
        Classification::DzUnsoundRegular,
        Classification::DzTdMismatch,
        Classification::IncompleteSuspect,
        Classification::FuelExhausted,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Classification::AgreeInclude => "agree-include",
            Classification::AgreeExclude => "agree-exclude",
            Classification::DzUnsoundRegular => "dz-unsound-regular",
            Classification::DzTdMismatch => "dz-td-mismatch",
            Classification::IncompleteSuspect => "incomplete-suspect",
            Classification::FuelExhausted => "fuel-exhausted",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of one differential trial. Terms are in canonical syntax; the
/// grammar text is included so every report reproduces on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    /// `None` for injected instances.
    pub seed: Option<u64>,
    pub grammar_digest: String,
    pub grammar: String,
    pub tau1: String,
    pub tau2: String,
    /// `None` when fuel ran out.
    pub dz: Option<bool>,
    pub td: Option<bool>,
    pub dz_steps: u64,
    pub td_steps: u64,
    pub oracle_depth: usize,
    pub regular_witness: Option<String>,
    pub td_witness: Option<String>,
    pub classification: Classification,
}

impl TrialReport {
    /// One JSON object with keys in sorted order.
    pub fn to_json_line(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string(&value).expect("value serializes")
    }
}

pub fn classify(
    dz: Result<bool, FuelExhausted>,
    td: Result<bool, FuelExhausted>,
    regular: &Refutation,
    closure: &Refutation,
) -> Classification {
    let (Ok(dz), Ok(td)) = (dz, td) else {
        return Classification::FuelExhausted;
    };
    if dz != td {
        Classification::DzTdMismatch
    } else if dz && regular.is_witness() {
        Classification::DzUnsoundRegular
    } else if dz {
        Classification::AgreeInclude
    } else if closure.is_witness() {
        Classification::AgreeExclude
    } else {
        Classification::IncompleteSuspect
    }
}

/// Runs both inclusion tests and both oracles on one instance.
pub fn run_instance(
    trial: usize,
    seed: Option<u64>,
    inst: &Instance,
    depth: usize,
    fuel: u64,
) -> TrialReport {
    let g = &inst.grammar;
    let mut dz_run = DartZobel::new(g).with_fuel(fuel);
    let dz = dz_run.subset(&inst.tau1, &inst.tau2);
    let mut td_run = TdSubset::new(g).with_fuel(fuel);
    let td = td_run.subset(&inst.tau1, &inst.tau2);
    let regular = find_regular_counterexample(g, &inst.tau1, &inst.tau2, depth);
    let closure = find_td_counterexample(g, &inst.tau1, &inst.tau2, depth);
    TrialReport {
        trial,
        seed,
        grammar_digest: grammar_digest(g),
        grammar: g.render(),
        tau1: inst.tau1.to_string(),
        tau2: inst.tau2.to_string(),
        dz: dz.ok(),
        td: td.ok(),
        dz_steps: dz_run.steps_used(),
        td_steps: td_run.steps_used(),
        oracle_depth: depth,
        regular_witness: regular.witness().map(ToString::to_string),
        td_witness: closure.witness().map(ToString::to_string),
        classification: classify(dz, td, &regular, &closure),
    }
}

/// `n` random trials; trial `i` uses seed `cfg.seed + i`. Reports come back
/// in trial order.
pub fn run_trials(cfg: &GenConfig, n: usize, depth: usize) -> Vec<TrialReport> {
    run_trials_with(cfg, n, depth, &[])
}

/// Like [`run_trials`], with `injected` instances occupying the first trial
/// slots. `n` counts all trials.
pub fn run_trials_with(
    cfg: &GenConfig,
    n: usize,
    depth: usize,
    injected: &[Instance],
) -> Vec<TrialReport> {
    assert!(n >= 1, "at least one trial");
    assert!(injected.len() <= n, "more injected instances than trials");
    (0..n)
        .into_par_iter()
        .map(|i| match injected.get(i) {
            Some(inst) => run_instance(i, None, inst, depth, crate::DEFAULT_FUEL),
            None => {
                let seed = cfg.seed.wrapping_add(i as u64);
                let inst = gen_instance(&cfg.with_seed(seed));
                run_instance(i, Some(seed), &inst, depth, crate::DEFAULT_FUEL)
            }
        })
        .collect()
}

pub fn write_jsonl<W: Write>(reports: &[TrialReport], mut out: W) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Counts per classification, in declaration order.
pub fn summarize(reports: &[TrialReport]) -> Vec<(Classification, usize)> {
    Classification::ALL
        .iter()
        .map(|&c| (c, reports.iter().filter(|r| r.classification == c).count()))
        .collect()
}

/// Distinct digests among the first `n` generated grammars from `cfg.seed`.
pub fn distinct_digests(cfg: &GenConfig, n: usize) -> usize {
    (0..n as u64)
        .map(|i| grammar_digest(&gen_grammar(&cfg.with_seed(cfg.seed.wrapping_add(i)))))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Least depth of a member of each nonempty type symbol.
pub fn min_depths(g: &Grammar) -> BTreeMap<Symbol, usize> {
    let mut known: BTreeMap<Symbol, usize> = BTreeMap::new();
    loop {
        let mut changed = false;
        for alpha in g.pi() {
            let best = g
                .rules_for(alpha)
                .iter()
                .filter_map(|r| term_min_depth(r, &known))
                .min();
            if let Some(d) = best {
                if !known.get(alpha).is_some_and(|&old| old <= d) {
                    known.insert(alpha.clone(), d);
                    changed = true;
                }
            }
        }
        if !changed {
            return known;
        }
    }
}

fn term_min_depth(t: &PureTerm, known: &BTreeMap<Symbol, usize>) -> Option<usize> {
    match t {
        PureTerm::Type(alpha) => known.get(alpha).copied(),
        PureTerm::App(_, args) => args
            .iter()
            .map(|a| term_min_depth(a, known))
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
            .map(|m| m + 1),
    }
}

/// A random member of `⟦tau⟧` of depth at most `depth`, or `None` if there
/// is none that shallow.
pub fn sample_member<R: Rng>(
    g: &Grammar,
    tau: &PureTerm,
    depth: usize,
    rng: &mut R,
) -> Option<GroundTerm> {
    let mins = min_depths(g);
    if term_min_depth(tau, &mins)? > depth {
        return None;
    }
    Some(derive(g, tau, depth, &mins, rng))
}

fn derive<R: Rng>(
    g: &Grammar,
    tau: &PureTerm,
    depth: usize,
    mins: &BTreeMap<Symbol, usize>,
    rng: &mut R,
) -> GroundTerm {
    match tau {
        PureTerm::Type(alpha) => {
            let fits: Vec<&PureTerm> = g
                .rules_for(alpha)
                .iter()
                .filter(|r| term_min_depth(r, mins).is_some_and(|d| d <= depth))
                .collect();
            let rhs = fits.choose(rng).expect("a rule within the depth bound");
            derive(g, rhs, depth, mins, rng)
        }
        PureTerm::App(f, args) => {
            let kids = args
                .iter()
                .map(|a| derive(g, a, depth - 1, mins, rng))
                .collect();
            GroundTerm::new(f.clone(), kids)
        }
    }
}

/// A uniformly shaped random ground term over the signature of `g`, of
/// depth at most `depth`.
pub fn random_ground<R: Rng>(g: &Grammar, depth: usize, rng: &mut R) -> GroundTerm {
    let symbols: Vec<(&Symbol, usize)> = g.sigma().iter().map(|(s, &a)| (s, a)).collect();
    let constants: Vec<&Symbol> = g.constants().collect();
    if depth <= 1 {
        return GroundTerm::new(
            (*constants.choose(rng).expect("a constant")).clone(),
            Vec::new(),
        );
    }
    let &(f, arity) = symbols.choose(rng).expect("a symbol");
    let kids = (0..arity)
        .map(|_| random_ground(g, depth - 1, rng))
        .collect();
    GroundTerm::new(f.clone(), kids)
}
