//! Regular term grammars: representation, the text format, nonemptiness and
//! simplification.
//!
//! ```text
//! # natural numbers and lists of them
//! %sig 0/0 s/1 nil/0 cons/2
//! Nat -> 0 | s(Nat)
//! Natlist -> nil | cons(Nat,Natlist)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{EmptyTypeError, ParseError};
use crate::term::{is_ident_char, GroundTerm, PureTerm, RawTerm, Symbol};

/// A regular term grammar: a ranked alphabet, type symbols and productions.
///
/// Immutable once built. Every type symbol has an entry in the rule map,
/// and every rule is well-formed over the declared symbols.
#[derive(Clone)]
pub struct Grammar {
    sigma: BTreeMap<Symbol, usize>,
    rules: BTreeMap<Symbol, BTreeSet<PureTerm>>,
    simplified: bool,
}

impl PartialEq for Grammar {
    /// Compares the grammar tuple; the simplified flag is metadata.
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.rules == other.rules
    }
}

impl Eq for Grammar {}

impl fmt::Debug for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Grammar {
    /// Builds and validates a grammar. Type symbols are exactly the
    /// left-hand sides; duplicate rules collapse.
    pub fn from_parts<S, R>(sigma: S, rules: R) -> Result<Grammar, ParseError>
    where
        S: IntoIterator<Item = (Symbol, usize)>,
        R: IntoIterator<Item = (Symbol, PureTerm)>,
    {
        let mut sig = BTreeMap::new();
        for (name, arity) in sigma {
            if let Some(old) = sig.insert(name.clone(), arity) {
                if old != arity {
                    return Err(ParseError::Redeclared {
                        line: 0,
                        name: name.to_string(),
                    });
                }
            }
        }
        let mut map: BTreeMap<Symbol, BTreeSet<PureTerm>> = BTreeMap::new();
        for (lhs, rhs) in rules {
            map.entry(lhs).or_default().insert(rhs);
        }
        let g = Grammar {
            sigma: sig,
            rules: map,
            simplified: false,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), ParseError> {
        if !self.sigma.values().any(|&a| a == 0) {
            return Err(ParseError::NoConstant);
        }
        if let Some(name) = self.rules.keys().find(|s| self.sigma.contains_key(*s)) {
            return Err(ParseError::Collision {
                name: name.to_string(),
            });
        }
        for rhs in self.rules.values().flatten() {
            self.check_term(rhs, 0)?;
        }
        Ok(())
    }

    /// Checks that a pure term only uses declared symbols at their arities.
    pub fn check_term(&self, t: &PureTerm, line: usize) -> Result<(), ParseError> {
        match t {
            PureTerm::Type(s) => {
                if self.rules.contains_key(s) {
                    Ok(())
                } else if self.sigma.contains_key(s) {
                    Err(ParseError::Arity {
                        line,
                        name: s.to_string(),
                        expected: self.sigma[s],
                        found: 0,
                    })
                } else {
                    Err(ParseError::Undeclared {
                        line,
                        name: s.to_string(),
                    })
                }
            }
            PureTerm::App(f, args) => {
                let Some(&arity) = self.sigma.get(f) else {
                    return Err(if self.rules.contains_key(f) && args.is_empty() {
                        ParseError::syntax(line, format!("`{f}` is a type symbol"))
                    } else {
                        ParseError::Undeclared {
                            line,
                            name: f.to_string(),
                        }
                    });
                };
                if arity != args.len() {
                    return Err(ParseError::Arity {
                        line,
                        name: f.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a, line))
            }
        }
    }

    /// Function symbols with their arities, ordered by name.
    pub fn sigma(&self) -> &BTreeMap<Symbol, usize> {
        &self.sigma
    }

    /// Type symbols, ordered by name.
    pub fn pi(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.rules.keys()
    }

    pub fn type_symbol_count(&self) -> usize {
        self.rules.len()
    }

    pub fn arity(&self, f: &str) -> Option<usize> {
        self.sigma.get(f).copied()
    }

    pub fn is_type_symbol(&self, name: &str) -> bool {
        self.rules.contains_key(name)
    }

    /// Right-hand sides of the rules for `alpha` (empty if `alpha` is not a
    /// type symbol).
    pub fn rules_for(&self, alpha: &Symbol) -> &BTreeSet<PureTerm> {
        static EMPTY: BTreeSet<PureTerm> = BTreeSet::new();
        self.rules.get(alpha).unwrap_or(&EMPTY)
    }

    /// All productions `(lhs, rhs)` in canonical order.
    pub fn rules(&self) -> impl Iterator<Item = (&Symbol, &PureTerm)> + '_ {
        self.rules
            .iter()
            .flat_map(|(lhs, rhss)| rhss.iter().map(move |r| (lhs, r)))
    }

    pub fn rule_count(&self) -> usize {
        self.rules.values().map(BTreeSet::len).sum()
    }

    pub fn is_simplified(&self) -> bool {
        self.simplified
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.sigma.iter().filter(|(_, &a)| a == 0).map(|(s, _)| s)
    }

    /// Resolves prefix-syntax text to a pure type term over this grammar.
    pub fn parse_term(&self, text: &str) -> Result<PureTerm, ParseError> {
        let raw = RawTerm::parse(text, 1)?;
        self.resolve(&raw, 1)
    }

    /// Resolves prefix-syntax text to a ground term over this signature.
    pub fn parse_ground(&self, text: &str) -> Result<GroundTerm, ParseError> {
        let t = self.parse_term(text)?;
        t.to_ground()
            .ok_or_else(|| ParseError::NotGround(text.trim().to_string()))
    }

    fn resolve(&self, raw: &RawTerm, line: usize) -> Result<PureTerm, ParseError> {
        let name = Symbol::new(&raw.name);
        if self.rules.contains_key(&name) {
            if raw.args.is_some() {
                return Err(ParseError::TypeWithArguments {
                    line,
                    name: raw.name.clone(),
                });
            }
            return Ok(PureTerm::Type(name));
        }
        let args = raw
            .args
            .iter()
            .flatten()
            .map(|a| self.resolve(a, line))
            .collect::<Result<Vec<_>, _>>()?;
        let t = PureTerm::App(name, args.into());
        self.check_term(&t, line)?;
        Ok(t)
    }

    /// `{α ∈ Π | ⟦α⟧ ≠ ∅}` as a least fixpoint: α becomes nonempty once some
    /// rule for α has only nonempty type symbols in its right-hand side.
    pub fn nonempty_symbols(&self) -> BTreeSet<Symbol> {
        let mut nonempty = BTreeSet::new();
        loop {
            let before = nonempty.len();
            for (lhs, rhss) in &self.rules {
                if nonempty.contains(lhs) {
                    continue;
                }
                if rhss.iter().any(|r| all_type_symbols_in(r, &nonempty)) {
                    nonempty.insert(lhs.clone());
                }
            }
            if nonempty.len() == before {
                return nonempty;
            }
        }
    }

    /// Removes empty type symbols and the rules mentioning them, then
    /// inlines chain rules `α → β` through the reachability closure of the
    /// chain graph. Fails if one of `roots` turns out to be empty.
    pub fn simplify(&self, roots: &[&str]) -> Result<Grammar, EmptyTypeError> {
        let nonempty = self.nonempty_symbols();
        if let Some(r) = roots.iter().find(|r| !nonempty.contains(**r)) {
            return Err(EmptyTypeError(r.to_string()));
        }
        let live: BTreeMap<&Symbol, Vec<&PureTerm>> = self
            .rules
            .iter()
            .filter(|(lhs, _)| nonempty.contains(*lhs))
            .map(|(lhs, rhss)| {
                let kept = rhss
                    .iter()
                    .filter(|r| all_type_symbols_in(r, &nonempty))
                    .collect();
                (lhs, kept)
            })
            .collect();

        let mut rules: BTreeMap<Symbol, BTreeSet<PureTerm>> = BTreeMap::new();
        for &alpha in live.keys() {
            let mut seen = BTreeSet::from([alpha]);
            let mut stack = vec![alpha];
            let out = rules.entry(alpha.clone()).or_default();
            while let Some(beta) = stack.pop() {
                for rhs in &live[beta] {
                    match rhs {
                        PureTerm::Type(gamma) => {
                            if seen.insert(gamma) {
                                stack.push(gamma);
                            }
                        }
                        PureTerm::App(..) => {
                            out.insert((*rhs).clone());
                        }
                    }
                }
            }
        }
        debug_assert!(rules.values().all(|r| !r.is_empty()));
        Ok(Grammar {
            sigma: self.sigma.clone(),
            rules,
            simplified: true,
        })
    }

    /// The same grammar with extra productions. New left-hand sides become
    /// type symbols. The result is marked simplified only if `self` was and
    /// the additions keep it so.
    pub fn with_rules<R>(&self, extra: R) -> Result<Grammar, ParseError>
    where
        R: IntoIterator<Item = (Symbol, PureTerm)>,
    {
        let g = Grammar::from_parts(
            self.sigma.iter().map(|(s, &a)| (s.clone(), a)),
            self.rules()
                .map(|(l, r)| (l.clone(), r.clone()))
                .chain(extra),
        )?;
        let simplified = self.simplified
            && g.rules().all(|(_, r)| !r.is_type_symbol())
            && g.nonempty_symbols().len() == g.type_symbol_count();
        Ok(Grammar { simplified, ..g })
    }

    /// Canonical text: one `%sig` line, then one line per type symbol with
    /// its alternatives in canonical order.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn all_type_symbols_in(t: &PureTerm, set: &BTreeSet<Symbol>) -> bool {
    let mut ok = true;
    t.for_each_type_symbol(&mut |s| ok &= set.contains(s));
    ok
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("%sig")?;
        for (s, a) in &self.sigma {
            write!(f, " {s}/{a}")?;
        }
        writeln!(f)?;
        for (lhs, rhss) in &self.rules {
            write!(f, "{lhs} ->")?;
            for (i, r) in rhss.iter().enumerate() {
                if i > 0 {
                    f.write_str(" |")?;
                }
                write!(f, " {r}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Grammar {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_grammar(text)
    }
}

/// Parses the line-oriented grammar format. The result is validated but not
/// simplified.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut sigma: BTreeMap<Symbol, usize> = BTreeMap::new();
    let mut raw_rules: Vec<(usize, Symbol, RawTerm)> = Vec::new();

    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(decls) = content.strip_prefix("%sig") {
            if decls.chars().next().is_some_and(|c| !c.is_whitespace()) {
                return Err(ParseError::syntax(line, "expected whitespace after `%sig`"));
            }
            for decl in decls.split_whitespace() {
                let (name, arity) = parse_decl(decl, line)?;
                if let Some(old) = sigma.insert(name.clone(), arity) {
                    if old != arity {
                        return Err(ParseError::Redeclared {
                            line,
                            name: name.to_string(),
                        });
                    }
                }
            }
            continue;
        }
        let Some((lhs, rhs)) = content.split_once("->") else {
            return Err(ParseError::syntax(
                line,
                format!("expected `%sig` or `Type -> rhs`, found `{content}`"),
            ));
        };
        let lhs = lhs.trim();
        if lhs.is_empty() || !lhs.chars().all(is_ident_char) {
            return Err(ParseError::syntax(
                line,
                format!("invalid type symbol `{lhs}`"),
            ));
        }
        let lhs = Symbol::new(lhs);
        for alt in rhs.split('|') {
            raw_rules.push((line, lhs.clone(), RawTerm::parse(alt, line)?));
        }
    }

    let skeleton = Grammar {
        sigma,
        rules: raw_rules
            .iter()
            .map(|(_, lhs, _)| (lhs.clone(), BTreeSet::new()))
            .collect(),
        simplified: false,
    };
    if !skeleton.sigma.values().any(|&a| a == 0) {
        return Err(ParseError::NoConstant);
    }
    if let Some(name) = skeleton
        .rules
        .keys()
        .find(|s| skeleton.sigma.contains_key(*s))
    {
        return Err(ParseError::Collision {
            name: name.to_string(),
        });
    }
    let mut rules = skeleton.rules.clone();
    for (line, lhs, raw) in &raw_rules {
        let rhs = skeleton.resolve(raw, *line)?;
        rules.get_mut(lhs).expect("lhs registered").insert(rhs);
    }
    Ok(Grammar { rules, ..skeleton })
}

fn parse_decl(decl: &str, line: usize) -> Result<(Symbol, usize), ParseError> {
    let bad = || {
        ParseError::syntax(
            line,
            format!("malformed declaration `{decl}`, expected name/arity"),
        )
    };
    let (name, arity) = decl.split_once('/').ok_or_else(bad)?;
    if name.is_empty() || !name.chars().all(is_ident_char) {
        return Err(bad());
    }
    let arity = arity.parse::<usize>().map_err(|_| bad())?;
    Ok((Symbol::new(name), arity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(set: &BTreeSet<Symbol>) -> Vec<&str> {
        set.iter().map(Symbol::as_str).collect()
    }

    #[test]
    fn parses_nat_lists() {
        let g = corpus::nat_lists();
        assert_eq!(g.type_symbol_count(), 2);
        assert_eq!(g.sigma().len(), 4);
        assert_eq!(g.rule_count(), 4);
        assert!(!g.is_simplified());
        assert_eq!(g.arity("cons"), Some(2));
    }

    #[test]
    fn minimal_grammar() {
        let g: Grammar = "%sig a/0\nT -> a".parse().unwrap();
        assert_eq!(g.rule_count(), 1);
    }

    #[test]
    fn rejects_bad_sources() {
        let cases = [
            ("%sig g/1\nT -> g(T)", ParseError::NoConstant),
            (
                "%sig a/0 f/1\nT -> f(a,a)",
                ParseError::Arity {
                    line: 2,
                    name: "f".into(),
                    expected: 1,
                    found: 2,
                },
            ),
            (
                "%sig a/0\nT -> b",
                ParseError::Undeclared {
                    line: 2,
                    name: "b".into(),
                },
            ),
            (
                "%sig a/0\na -> a",
                ParseError::Collision { name: "a".into() },
            ),
            (
                "%sig a/0 a/1\nT -> a",
                ParseError::Redeclared {
                    line: 1,
                    name: "a".into(),
                },
            ),
            (
                "%sig a/0\nT -> T(a)",
                ParseError::TypeWithArguments {
                    line: 2,
                    name: "T".into(),
                },
            ),
        ];
        for (src, want) in cases {
            assert_eq!(src.parse::<Grammar>().unwrap_err(), want, "{src}");
        }
        assert!(matches!(
            "%sig a/0\nT = a".parse::<Grammar>(),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            "%sig a/x".parse::<Grammar>(),
            Err(ParseError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn comments_and_duplicates() {
        let g: Grammar = "# header\n%sig a/0 b/0 # trailing\nT -> a | b\nT -> a\n\n"
            .parse()
            .unwrap();
        assert_eq!(g.rule_count(), 2);
    }

    #[test]
    fn nonempty_fixpoint() {
        assert_eq!(
            names(&corpus::nat_lists().nonempty_symbols()),
            ["Nat", "Natlist"]
        );
        let g: Grammar = "%sig a/0 f/1\nalpha -> f(alpha)".parse().unwrap();
        assert!(g.nonempty_symbols().is_empty());
        assert_eq!(
            names(&corpus::left_skewed().nonempty_symbols()),
            ["alpha", "beta", "omega", "sigma", "theta"]
        );
    }

    #[test]
    fn simplify_examples() {
        let nat = corpus::nat_lists();
        let s = nat.simplify(&[]).unwrap();
        assert_eq!(s, nat);
        assert!(s.is_simplified());

        let g: Grammar = "%sig a/0\nalpha -> beta\nbeta -> a".parse().unwrap();
        let want: Grammar = "%sig a/0\nalpha -> a\nbeta -> a".parse().unwrap();
        assert_eq!(g.simplify(&[]).unwrap(), want);

        let g: Grammar = "%sig a/0\nalpha -> beta\nbeta -> alpha | a"
            .parse()
            .unwrap();
        assert_eq!(g.simplify(&[]).unwrap(), want);
    }

    #[test]
    fn simplify_drops_empty_symbols() {
        let g: Grammar = "%sig a/0 f/1 h/2\nT -> a | h(T,E)\nE -> f(E)\nU -> E"
            .parse()
            .unwrap();
        let s = g.simplify(&["T"]).unwrap();
        assert_eq!(s.render(), "%sig a/0 f/1 h/2\nT -> a\n");
        assert_eq!(g.simplify(&["E"]), Err(EmptyTypeError("E".into())));
        assert_eq!(g.simplify(&["U"]), Err(EmptyTypeError("U".into())));
    }

    #[test]
    fn render_round_trips() {
        for g in [corpus::nat_lists(), corpus::left_skewed()] {
            let text = g.render();
            assert_eq!(text.parse::<Grammar>().unwrap(), g);
        }
        assert_eq!(
            corpus::left_skewed().render(),
            "%sig a/0 b/0 g/1 h/2\n\
             alpha -> g(omega)\n\
             beta -> g(sigma) | g(theta)\n\
             omega -> a | b | h(omega,a) | h(omega,b)\n\
             sigma -> b | h(sigma,b)\n\
             theta -> a | h(theta,a)\n"
        );
    }

    #[test]
    fn term_resolution() {
        let g = corpus::nat_lists();
        let t = g.parse_term("cons(Nat, Natlist)").unwrap();
        assert_eq!(
            t,
            PureTerm::app("cons", vec![PureTerm::ty("Nat"), PureTerm::ty("Natlist")])
        );
        assert_eq!(g.parse_ground("s(0)").unwrap().to_string(), "s(0)");
        assert!(matches!(
            g.parse_ground("s(Nat)"),
            Err(ParseError::NotGround(_))
        ));
        assert!(g.parse_term("s(0,0)").is_err());
        assert!(g.parse_term("zero").is_err());
    }
}
