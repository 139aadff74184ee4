//! Step traces of the inclusion algorithms.
//!
//! One line per recursive call, tab separated:
//! `algo  alternative  subject  against  |C|`.
//! For `dz` the subject is the sequence ψ and `against` the set Ψ. For `td`
//! the alternatives `1`-`4` belong to calls on a single term τ against a
//! term set Υ, while `v0` (ε against ∅), `v1` (ε against {ε}) and `v2`
//! (split into head and tail) belong to calls on sequences.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub algo: &'static str,
    pub alternative: &'static str,
    pub subject: String,
    pub against: String,
    pub assumptions: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.algo, self.alternative, self.subject, self.against, self.assumptions
        )
    }
}

/// Renders a whole trace, one step per line with a trailing newline.
pub fn render(steps: &[TraceStep]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}

/// Writes a brace-delimited, comma-separated list.
pub(crate) fn braces<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
