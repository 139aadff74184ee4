//! Least-witness search for the bounded refutation oracles.
//!
//! Every ground term gets a signature: the set of grammar positions (rule
//! subterms, type symbols, query terms) whose language contains it, plus,
//! in tuple-distributive mode, the set of projection families whose closure
//! contains it. The signature of `f(t1..tn)` depends only on the
//! signatures of the `ti`. Since the canonical order compares arguments
//! lexicographically, the least term with a given signature and depth bound
//! is `f` applied to the least representatives of its argument signatures.
//! Keeping one representative per signature and depth is therefore enough
//! to recover the first witness of the full enumeration.
//!
//! Levels are evaluated semi-naively: a level only combines argument tuples
//! in which some representative changed at the previous level.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::grammar::Grammar;
use crate::semantics::expand_to_function_roots;
use crate::term::{GroundTerm, PureTerm, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// witness: `t ∈ ⟦τ1⟧` and `t ∉ ⟦τ2⟧`
    Regular,
    /// witness: `t ∈ ⟦τ1⟧` and `t ∉ ⟦τ2⟧*`
    TupleDistributive,
}

/// Bottom-up recognizer for `⟦q⟧` over all positions `q` of the grammar.
struct Positions {
    ids: HashMap<PureTerm, u32>,
    by_root: HashMap<Symbol, Vec<(u32, Vec<u32>)>>,
    type_rules: Vec<(u32, Vec<u32>)>,
}

impl Positions {
    fn new(g: &Grammar, extra: &[&PureTerm]) -> Self {
        let mut p = Positions {
            ids: HashMap::new(),
            by_root: HashMap::new(),
            type_rules: Vec::new(),
        };
        for alpha in g.pi() {
            p.intern(&PureTerm::Type(alpha.clone()));
        }
        for (_, rhs) in g.rules() {
            p.intern(rhs);
        }
        for t in extra {
            p.intern(t);
        }
        for alpha in g.pi() {
            let id = p.ids[&PureTerm::Type(alpha.clone())];
            let rhs = g.rules_for(alpha).iter().map(|r| p.ids[r]).collect();
            p.type_rules.push((id, rhs));
        }
        p
    }

    fn intern(&mut self, t: &PureTerm) -> u32 {
        if let Some(&id) = self.ids.get(t) {
            return id;
        }
        let kids: Vec<u32> = t.args().iter().map(|a| self.intern(a)).collect();
        let id = self.ids.len() as u32;
        self.ids.insert(t.clone(), id);
        if let PureTerm::App(f, _) = t {
            self.by_root.entry(f.clone()).or_default().push((id, kids));
        }
        id
    }

    /// Adds the type symbols reachable through chain rules. Chain rules only
    /// occur in unsimplified grammars.
    fn close(&self, out: &mut Vec<u32>) {
        loop {
            let before = out.len();
            for (ty, rhs) in &self.type_rules {
                if let Err(at) = out.binary_search(ty) {
                    if rhs.iter().any(|r| out.binary_search(r).is_ok()) {
                        out.insert(at, *ty);
                    }
                }
            }
            if out.len() == before {
                return;
            }
        }
    }
}

/// The projection sets reachable from `{τ2}`, with their constants and
/// per-symbol projections.
struct Families {
    consts: Vec<HashSet<Symbol>>,
    proj: Vec<HashMap<Symbol, Vec<u32>>>,
}

impl Families {
    fn new(g: &Grammar, root: &PureTerm) -> Self {
        let mut index: HashMap<BTreeSet<PureTerm>, u32> = HashMap::new();
        let mut sets: Vec<BTreeSet<PureTerm>> = Vec::new();
        let mut fam = Families {
            consts: Vec::new(),
            proj: Vec::new(),
        };
        let start = BTreeSet::from([root.clone()]);
        index.insert(start.clone(), 0);
        sets.push(start);
        let mut next = 0;
        while next < sets.len() {
            let expanded = expand_to_function_roots(g, &sets[next]);
            let mut consts = HashSet::new();
            let mut grouped: HashMap<Symbol, Vec<&PureTerm>> = HashMap::new();
            for t in &expanded {
                if t.args().is_empty() {
                    consts.insert(t.root().clone());
                } else {
                    grouped.entry(t.root().clone()).or_default().push(t);
                }
            }
            let mut proj = HashMap::new();
            for (f, members) in grouped {
                let arity = members[0].args().len();
                let ids = (0..arity)
                    .map(|i| {
                        let s: BTreeSet<PureTerm> =
                            members.iter().map(|m| m.args()[i].clone()).collect();
                        *index.entry(s.clone()).or_insert_with(|| {
                            sets.push(s);
                            (sets.len() - 1) as u32
                        })
                    })
                    .collect();
                proj.insert(f, ids);
            }
            fam.consts.push(consts);
            fam.proj.push(proj);
            next += 1;
        }
        fam
    }
}

type Signature = (Vec<u32>, Vec<u32>);

/// Per-symbol recognizer. Bit `j < rules.len()` stands for the rule
/// position `rules[j]`, the remaining bits for the families in `fams`. The
/// bits set for `f(t1..tn)` are the intersection over `i` of the bits whose
/// `i`-th requirement is met by the signature of `ti`.
struct Shape<'a> {
    f: &'a Symbol,
    arity: usize,
    rules: Vec<(u32, Vec<u32>)>,
    fams: Vec<(u32, Vec<u32>)>,
    words: usize,
    masks: Vec<Vec<Box<[u64]>>>,
    results: HashMap<Box<[u64]>, u32>,
}

impl<'a> Shape<'a> {
    fn new(
        f: &'a Symbol,
        arity: usize,
        positions: &Positions,
        families: Option<&Families>,
    ) -> Self {
        let rules: Vec<(u32, Vec<u32>)> = positions
            .by_root
            .get(f)
            .into_iter()
            .flatten()
            .filter(|(_, need)| need.len() == arity)
            .cloned()
            .collect();
        let mut fams = Vec::new();
        if let Some(fam) = families {
            for u in 0..fam.consts.len() {
                if arity == 0 && fam.consts[u].contains(f) {
                    fams.push((u as u32, Vec::new()));
                } else if let Some(ps) = fam.proj[u]
                    .get(f)
                    .filter(|ps| arity > 0 && ps.len() == arity)
                {
                    fams.push((u as u32, ps.clone()));
                }
            }
        }
        let words = (rules.len() + fams.len()).div_ceil(64).max(1);
        Shape {
            f,
            arity,
            rules,
            fams,
            words,
            masks: vec![Vec::new(); arity],
            results: HashMap::new(),
        }
    }

    fn extend_masks(&mut self, sigs: &[Signature]) {
        for i in 0..self.arity {
            while self.masks[i].len() < sigs.len() {
                let (regular, closure) = &sigs[self.masks[i].len()];
                let mut bits = vec![0u64; self.words];
                let offset = self.rules.len();
                for (j, (_, need)) in self.rules.iter().enumerate() {
                    if regular.binary_search(&need[i]).is_ok() {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                }
                for (m, (_, proj)) in self.fams.iter().enumerate() {
                    if closure.binary_search(&proj[i]).is_ok() {
                        bits[(offset + m) / 64] |= 1 << ((offset + m) % 64);
                    }
                }
                self.masks[i].push(bits.into());
            }
        }
    }

    fn all_bits(&self) -> Vec<u64> {
        let n = self.rules.len() + self.fams.len();
        (0..self.words)
            .map(|w| match n.saturating_sub(w * 64) {
                0 => 0,
                k if k >= 64 => !0,
                k => (1u64 << k) - 1,
            })
            .collect()
    }

    fn decode(&self, bits: &[u64], positions: &Positions) -> Signature {
        let on = |j: usize| bits[j / 64] >> (j % 64) & 1 == 1;
        let mut regular: Vec<u32> = (0..self.rules.len())
            .filter(|&j| on(j))
            .map(|j| self.rules[j].0)
            .collect();
        regular.sort_unstable();
        positions.close(&mut regular);
        let offset = self.rules.len();
        let mut closure: Vec<u32> = (0..self.fams.len())
            .filter(|&m| on(offset + m))
            .map(|m| self.fams[m].0)
            .collect();
        closure.sort_unstable();
        (regular, closure)
    }
}

struct Table {
    sigs: Vec<Signature>,
    ids: HashMap<Signature, u32>,
}

impl Table {
    fn intern(&mut self, sig: Signature) -> u32 {
        if let Some(&id) = self.ids.get(&sig) {
            return id;
        }
        let id = self.sigs.len() as u32;
        self.sigs.push(sig.clone());
        self.ids.insert(sig, id);
        id
    }
}

/// Argument tuples over `all` with at least one component in `new`.
struct Tuples<'a> {
    masks: &'a [Vec<Box<[u64]>>],
    old: &'a [u32],
    new: &'a [u32],
    all: &'a [u32],
}

impl Tuples<'_> {
    /// Visits each tuple with the intersection of its argument masks.
    /// Tuples whose bits vanish are skipped: no term built on them is in
    /// any language of interest.
    fn walk(
        &self,
        pos: usize,
        seen: bool,
        kids: &mut [u32],
        bufs: &mut [Vec<u64>],
        visit: &mut dyn FnMut(&[u32], &[u64]),
    ) {
        let n = self.masks.len();
        if pos == n {
            visit(kids, &bufs[n]);
            return;
        }
        let choices: &[(&[u32], bool)] = if seen {
            &[(self.all, true)]
        } else if pos + 1 == n {
            &[(self.new, true)]
        } else {
            &[(self.old, false), (self.new, true)]
        };
        for &(list, now_seen) in choices {
            for &k in list {
                let (head, rest) = bufs.split_at_mut(pos + 1);
                let (src, dst) = (&head[pos], &mut rest[0]);
                let mut any = 0;
                for ((d, s), m) in dst
                    .iter_mut()
                    .zip(src)
                    .zip(self.masks[pos][k as usize].iter())
                {
                    *d = s & m;
                    any |= *d;
                }
                if any == 0 {
                    continue;
                }
                kids[pos] = k;
                self.walk(pos + 1, now_seen, kids, bufs, visit);
            }
        }
    }
}

/// Orders `f(args)` against `t` without building the term.
fn cmp_candidate(f: &Symbol, args: &[&GroundTerm], t: &GroundTerm) -> Ordering {
    f.cmp(t.head())
        .then_with(|| args.iter().copied().cmp(t.args().iter()))
}

/// Least term (canonical order) of depth at most `depth` in `⟦τ1⟧` and
/// outside `⟦τ2⟧` (or `⟦τ2⟧*`).
pub(crate) fn first_witness(
    g: &Grammar,
    tau1: &PureTerm,
    tau2: &PureTerm,
    depth: usize,
    mode: Mode,
) -> Option<GroundTerm> {
    let positions = Positions::new(g, &[tau1, tau2]);
    let want = positions.ids[tau1];
    let avoid = positions.ids[tau2];
    let families = (mode == Mode::TupleDistributive).then(|| Families::new(g, tau2));
    let mut shapes: Vec<Shape> = g
        .sigma()
        .iter()
        .map(|(f, &arity)| Shape::new(f, arity, &positions, families.as_ref()))
        .collect();
    let mut table = Table {
        sigs: Vec::new(),
        ids: HashMap::new(),
    };

    // best[sig]: least term of the current depth bound with that signature
    let mut best: Vec<Option<GroundTerm>> = Vec::new();
    let mut changed: Vec<u32> = Vec::new();
    for level in 1..=depth {
        let prev = best.clone();
        let propose = |sig: u32, f: &Symbol, kids: &[u32], best: &mut Vec<Option<GroundTerm>>| {
            if best.len() <= sig as usize {
                best.resize(sig as usize + 1, None);
            }
            let args: Vec<&GroundTerm> = kids
                .iter()
                .map(|&k| prev[k as usize].as_ref().expect("live key"))
                .collect();
            let better = match &best[sig as usize] {
                None => true,
                Some(cur) => cmp_candidate(f, &args, cur) == Ordering::Less,
            };
            if better {
                best[sig as usize] = Some(GroundTerm::new(
                    f.clone(),
                    args.into_iter().cloned().collect(),
                ));
            }
        };
        if level == 1 {
            for shape in shapes.iter().filter(|s| s.arity == 0) {
                let bits = shape.all_bits();
                if bits.iter().all(|&w| w == 0) {
                    continue;
                }
                let sig = table.intern(shape.decode(&bits, &positions));
                propose(sig, shape.f, &[], &mut best);
            }
        } else {
            let all: Vec<u32> = (0..prev.len() as u32)
                .filter(|&k| prev[k as usize].is_some())
                .collect();
            let old: Vec<u32> = all
                .iter()
                .copied()
                .filter(|k| changed.binary_search(k).is_err())
                .collect();
            for shape in shapes.iter_mut().filter(|s| s.arity > 0) {
                shape.extend_masks(&table.sigs);
                let mut kids = vec![0u32; shape.arity];
                let mut bufs = vec![vec![0u64; shape.words]; shape.arity + 1];
                bufs[0] = shape.all_bits();
                let Shape {
                    f, masks, results, ..
                } = &mut *shape;
                let f: &Symbol = f;
                let mut fresh: Vec<(Box<[u64]>, Vec<u32>)> = Vec::new();
                let tuples = Tuples {
                    masks,
                    old: &old,
                    new: &changed,
                    all: &all,
                };
                tuples.walk(
                    0,
                    false,
                    &mut kids,
                    &mut bufs,
                    &mut |kids, bits| match results.get(bits) {
                        Some(&sig) => propose(sig, f, kids, &mut best),
                        None => fresh.push((bits.into(), kids.to_vec())),
                    },
                );
                for (bits, kids) in fresh {
                    let sig = match shape.results.get(&bits) {
                        Some(&sig) => sig,
                        None => {
                            let sig = table.intern(shape.decode(&bits, &positions));
                            shape.results.insert(bits, sig);
                            sig
                        }
                    };
                    propose(sig, shape.f, &kids, &mut best);
                }
            }
        }
        changed = (0..best.len() as u32)
            .filter(|&k| {
                match (
                    prev.get(k as usize).and_then(Option::as_ref),
                    &best[k as usize],
                ) {
                    (Some(a), Some(b)) => a.node_id() != b.node_id(),
                    (None, Some(_)) => true,
                    _ => false,
                }
            })
            .collect();
        if changed.is_empty() {
            break;
        }
    }

    best.iter()
        .enumerate()
        .filter_map(|(sig, t)| t.as_ref().map(|t| (sig, t)))
        .filter(|&(sig, _)| {
            let (regular, closure) = &table.sigs[sig];
            let inside_first = regular.binary_search(&want).is_ok();
            let inside_second = match mode {
                Mode::Regular => regular.binary_search(&avoid).is_ok(),
                Mode::TupleDistributive => closure.binary_search(&0).is_ok(),
            };
            inside_first && !inside_second
        })
        .map(|(_, t)| t)
        .min()
        .cloned()
}
