//! Symbols, pure type terms and ground terms.
//!
//! Both term kinds print in prefix syntax (`cons(s(0),nil)`) and their `Ord`
//! impls agree with byte-wise comparison of the printed form, which is what
//! every canonical ordering in the crate relies on. That holds because
//! identifiers never contain `(`, `)` or `,`, all of which sort below any
//! identifier character.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::ParseError;

/// An interned-by-`Arc` identifier, ordered by its text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// A term over function symbols and type symbols. Type symbols only occur
/// as leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum PureTerm {
    Type(Symbol),
    App(Symbol, Arc<[PureTerm]>),
}

impl PureTerm {
    pub fn ty(name: &str) -> Self {
        PureTerm::Type(Symbol::new(name))
    }

    pub fn app(name: &str, args: Vec<PureTerm>) -> Self {
        PureTerm::App(Symbol::new(name), args.into())
    }

    pub fn constant(name: &str) -> Self {
        PureTerm::app(name, Vec::new())
    }

    /// The root symbol, whether it is a type symbol or a function symbol.
    pub fn root(&self) -> &Symbol {
        match self {
            PureTerm::Type(s) | PureTerm::App(s, _) => s,
        }
    }

    pub fn args(&self) -> &[PureTerm] {
        match self {
            PureTerm::Type(_) => &[],
            PureTerm::App(_, args) => args,
        }
    }

    pub fn is_type_symbol(&self) -> bool {
        matches!(self, PureTerm::Type(_))
    }

    pub fn type_symbol(&self) -> Option<&Symbol> {
        match self {
            PureTerm::Type(s) => Some(s),
            PureTerm::App(..) => None,
        }
    }

    /// Calls `f` on every type symbol occurrence, left to right.
    pub fn for_each_type_symbol(&self, f: &mut impl FnMut(&Symbol)) {
        match self {
            PureTerm::Type(s) => f(s),
            PureTerm::App(_, args) => args.iter().for_each(|a| a.for_each_type_symbol(f)),
        }
    }

    /// Every subterm, including `self`, in pre-order.
    pub fn subterms(&self) -> Vec<&PureTerm> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let t = out[i];
            out.extend(t.args().iter());
            i += 1;
        }
        out
    }

    /// Replaces type symbol occurrences according to `f`.
    pub fn map_type_symbols(&self, f: &mut impl FnMut(&Symbol) -> PureTerm) -> PureTerm {
        match self {
            PureTerm::Type(s) => f(s),
            PureTerm::App(g, args) => PureTerm::App(
                g.clone(),
                args.iter().map(|a| a.map_type_symbols(f)).collect(),
            ),
        }
    }

    /// Height of the term tree; a leaf has height 1.
    pub fn height(&self) -> usize {
        1 + self.args().iter().map(PureTerm::height).max().unwrap_or(0)
    }

    /// A ground term is a pure term without type symbols.
    pub fn to_ground(&self) -> Option<GroundTerm> {
        match self {
            PureTerm::Type(_) => None,
            PureTerm::App(f, args) => {
                let args = args
                    .iter()
                    .map(PureTerm::to_ground)
                    .collect::<Option<Vec<_>>>()?;
                Some(GroundTerm::new(f.clone(), args))
            }
        }
    }
}

impl Ord for PureTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.root()
            .cmp(other.root())
            .then_with(|| self.is_type_symbol().cmp(&other.is_type_symbol()).reverse())
            .then_with(|| self.args().cmp(other.args()))
    }
}

impl PartialOrd for PureTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root())?;
        write_args(f, self.args())
    }
}

impl fmt::Debug for PureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

struct GroundNode {
    head: Symbol,
    args: Vec<GroundTerm>,
    depth: usize,
}

/// A term over function symbols only. Cheap to clone; subterms are shared.
#[derive(Clone)]
pub struct GroundTerm(Arc<GroundNode>);

impl GroundTerm {
    pub fn new(head: Symbol, args: Vec<GroundTerm>) -> Self {
        let depth = 1 + args.iter().map(GroundTerm::depth).max().unwrap_or(0);
        GroundTerm(Arc::new(GroundNode { head, args, depth }))
    }

    pub fn constant(name: &str) -> Self {
        GroundTerm::new(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<GroundTerm>) -> Self {
        GroundTerm::new(Symbol::new(name), args)
    }

    pub fn head(&self) -> &Symbol {
        &self.0.head
    }

    pub fn args(&self) -> &[GroundTerm] {
        &self.0.args
    }

    /// Constants have depth 1; `f(t1..tn)` has depth one more than its
    /// deepest argument.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    /// Address of the shared node, stable for as long as the term is alive.
    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn to_pure(&self) -> PureTerm {
        PureTerm::App(
            self.head().clone(),
            self.args().iter().map(GroundTerm::to_pure).collect(),
        )
    }

    /// Parses prefix syntax without consulting a signature.
    pub fn parse_untyped(text: &str) -> Result<Self, ParseError> {
        let raw = RawTerm::parse(text, 1)?;
        Ok(raw.to_ground())
    }
}

impl PartialEq for GroundTerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.depth == other.0.depth
                && self.0.head == other.0.head
                && self.0.args == other.0.args)
    }
}

impl Eq for GroundTerm {}

impl Hash for GroundTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.head.hash(state);
        self.0.args.hash(state);
    }
}

impl Ord for GroundTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.head()
            .cmp(other.head())
            .then_with(|| self.args().cmp(other.args()))
    }
}

impl PartialOrd for GroundTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head())?;
        write_args(f, self.args())
    }
}

impl fmt::Debug for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A parsed but unresolved term: names are not yet classified as function
/// or type symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawTerm {
    pub name: String,
    /// `None` for a bare identifier, `Some` when parentheses were written.
    pub args: Option<Vec<RawTerm>>,
}

impl RawTerm {
    pub fn parse(text: &str, line: usize) -> Result<RawTerm, ParseError> {
        let mut p = TermParser {
            chars: text.char_indices().peekable(),
            text,
            line,
        };
        let t = p.term()?;
        p.skip_ws();
        if let Some(&(i, c)) = p.chars.peek() {
            return Err(ParseError::syntax(
                line,
                format!("unexpected `{c}` at column {} in `{}`", i + 1, text.trim()),
            ));
        }
        Ok(t)
    }

    fn to_ground(&self) -> GroundTerm {
        let args = self.args.iter().flatten().map(RawTerm::to_ground).collect();
        GroundTerm::new(Symbol::new(&self.name), args)
    }
}

struct TermParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(
            self.line,
            format!("{} in `{}`", msg.into(), self.text.trim()),
        )
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !is_ident_char(c) {
                break;
            }
            name.push(c);
            self.chars.next();
        }
        if name.is_empty() {
            return Err(match self.chars.peek() {
                Some(&(_, c)) => self.err(format!("expected identifier, found `{c}`")),
                None => self.err("expected identifier, found end of input"),
            });
        }
        self.skip_ws();
        if !matches!(self.chars.peek(), Some((_, '('))) {
            return Ok(RawTerm { name, args: None });
        }
        self.chars.next();
        let mut args = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.chars.next() {
                Some((_, ',')) => args.push(self.term()?),
                Some((_, ')')) => break,
                Some((_, c)) => return Err(self.err(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.err("unclosed `(`")),
            }
        }
        Ok(RawTerm {
            name,
            args: Some(args),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ground_strategy() -> impl Strategy<Value = GroundTerm> {
        // Each name has a single arity, as in any signature.
        let leaf = prop::sample::select(vec!["a", "ab", "b", "gh", "a0", "Z", "\u{3b1}"])
            .prop_map(GroundTerm::constant);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (prop::sample::select(vec!["g", "fg"]), inner.clone())
                    .prop_map(|(n, a)| GroundTerm::app(n, vec![a])),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| GroundTerm::app("h", vec![a, b])),
                (inner.clone(), inner.clone(), inner)
                    .prop_map(|(a, b, c)| GroundTerm::app("f", vec![a, b, c])),
            ]
        })
    }

    #[test]
    fn prints_prefix_syntax() {
        let t = GroundTerm::app(
            "cons",
            vec![
                GroundTerm::app("s", vec![GroundTerm::constant("0")]),
                GroundTerm::constant("nil"),
            ],
        );
        assert_eq!(t.to_string(), "cons(s(0),nil)");
        assert_eq!(t.depth(), 3);
        assert_eq!(
            GroundTerm::parse_untyped(" cons( s(0) , nil ) ").unwrap(),
            t
        );
    }

    #[test]
    fn rejects_malformed_terms() {
        assert!(GroundTerm::parse_untyped("f(a").is_err());
        assert!(GroundTerm::parse_untyped("f(a,)").is_err());
        assert!(GroundTerm::parse_untyped("f(a) b").is_err());
        assert!(GroundTerm::parse_untyped("").is_err());
    }

    proptest! {
        #[test]
        fn order_matches_printed_form(a in ground_strategy(), b in ground_strategy()) {
            let by_text = a.to_string().cmp(&b.to_string());
            prop_assert_eq!(a.cmp(&b), by_text);
            prop_assert_eq!(a.to_pure().cmp(&b.to_pure()), by_text);
        }

        #[test]
        fn print_parse_round_trip(a in ground_strategy()) {
            prop_assert_eq!(GroundTerm::parse_untyped(&a.to_string()).unwrap(), a);
        }
    }
}
