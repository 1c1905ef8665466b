//! Sources and sub-sources with exact rational probabilities.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, ClosedForm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    /// `Symbol::indexed("x", 2)` is `x2`.
    pub fn indexed(prefix: &str, index: usize) -> Self {
        Symbol(format!("{prefix}{index}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn has_prefix(&self, prefix: &str) -> bool {
        self.0
            .strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol(s.to_string())
    }
}

/// Symbols with known probabilities; the probabilities need not sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubSource {
    entries: Vec<(Symbol, Rational)>,
}

impl SubSource {
    pub fn new(entries: Vec<(Symbol, Rational)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (sym, p) in &entries {
            if !p.is_positive() || p > &Rational::one() {
                return Err(Error::InvalidProbability(format!("{sym} = {p}")));
            }
            if !seen.insert(sym) {
                return Err(Error::DuplicateSymbol(sym.to_string()));
            }
            total += p;
        }
        if total > Rational::one() {
            return Err(Error::SumExceedsOne(total.to_string()));
        }
        Ok(SubSource { entries })
    }

    pub fn empty() -> Self {
        SubSource { entries: Vec::new() }
    }

    /// Known symbols named `x1 … xm`.
    pub fn known(probs: &[Rational]) -> Result<Self> {
        Self::with_prefix("x", probs)
    }

    pub fn with_prefix(prefix: &str, probs: &[Rational]) -> Result<Self> {
        SubSource::new(
            probs
                .iter()
                .enumerate()
                .map(|(i, p)| (Symbol::indexed(prefix, i + 1), p.clone()))
                .collect(),
        )
    }

    /// Parses a comma-separated list such as `49/100,0.5`.
    pub fn parse_known(text: &str) -> Result<Self> {
        Self::known(&parse_probability_list(text)?)
    }

    pub fn entries(&self) -> &[(Symbol, Rational)] {
        &self.entries
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn probabilities(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|(_, p)| p)
    }

    pub fn probability(&self, sym: &Symbol) -> Option<&Rational> {
        self.entries.iter().find(|(s, _)| s == sym).map(|(_, p)| p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.probabilities().fold(Rational::zero(), |a, p| a + p)
    }

    /// `1 − Σ p(x_i)`: the probability mass left for unknown symbols.
    pub fn remaining(&self) -> Rational {
        Rational::one() - self.total()
    }

    pub fn min_probability(&self) -> Option<&Rational> {
        self.probabilities().min()
    }

    pub fn is_complete(&self) -> bool {
        self.total().is_one()
    }

    /// Converts to a [`Source`] when the probabilities sum to exactly one.
    pub fn into_source(self) -> Result<Source> {
        Source::new(self.entries)
    }

    /// `self` followed by `other`; symbol names must not collide.
    pub fn concat(&self, other: &SubSource) -> Result<SubSource> {
        SubSource::new(self.entries.iter().chain(other.entries.iter()).cloned().collect())
    }
}

/// A sub-source whose probabilities sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source(SubSource);

impl Source {
    pub fn new(entries: Vec<(Symbol, Rational)>) -> Result<Self> {
        let sub = SubSource::new(entries)?;
        let total = sub.total();
        if !total.is_one() {
            return Err(Error::NotNormalized(total.to_string()));
        }
        Ok(Source(sub))
    }

    /// Symbols named `a1 … an`.
    pub fn from_probs(probs: &[Rational]) -> Result<Self> {
        SubSource::with_prefix("a", probs)?.into_source()
    }

    pub fn as_sub_source(&self) -> &SubSource {
        &self.0
    }

    pub fn entries(&self) -> &[(Symbol, Rational)] {
        self.0.entries()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = &Rational> {
        self.0.probabilities()
    }

    pub fn probability(&self, sym: &Symbol) -> Option<&Rational> {
        self.0.probability(sym)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `−Σ p·log2 p`, exact.
    pub fn entropy(&self) -> ClosedForm {
        let sum: ClosedForm = self
            .probabilities()
            .map(|p| ClosedForm::x_log2_x(p).expect("probabilities are positive"))
            .sum();
        -sum
    }
}

/// The symbols of `b` that are not in `x`.
pub fn complement(x: &SubSource, b: &Source) -> Result<SubSource> {
    for (sym, p) in x.entries() {
        match b.probability(sym) {
            Some(q) if q == p => {}
            Some(q) => return Err(Error::Containment(format!("{sym} has {p} but the source has {q}"))),
            None => return Err(Error::Containment(format!("{sym} is not a symbol of the source"))),
        }
    }
    SubSource::new(
        b.entries()
            .iter()
            .filter(|(s, _)| x.probability(s).is_none())
            .cloned()
            .collect(),
    )
}

/// Parses `p1,p2,…` where each item is `num/den` or an exact decimal.
pub fn parse_probability_list(text: &str) -> Result<Vec<Rational>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}
