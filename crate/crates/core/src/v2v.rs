//! Variable-to-variable codes: a prefix-free dictionary of words over a
//! memoryless base source, each word then Huffman coded.
//!
//! The redundancy per base symbol is `R_H(W) / Σ p(w)·|w|`. When only some
//! words `X` are fixed and words are at most `L` symbols long, no dictionary
//! can do better than `R*(X) / (L + Σ_{w∈X} p(w)·(|w| − L))`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{ClosedForm, Rational};
use crate::huffman::{huffman_tree, redundancy};
use crate::prune::r_min_star;
use crate::source::{Source, SubSource, Symbol};
use crate::tree::CodeTree;

/// A sequence of base symbols, by 1-based index; written `a1a2a1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn probability(&self, base: &Source) -> Result<Rational> {
        let probs: Vec<&Rational> = base.probabilities().collect();
        self.0.iter().try_fold(Rational::one(), |acc, &i| {
            probs
                .get(i.wrapping_sub(1))
                .map(|p| acc * *p)
                .ok_or_else(|| Error::Domain(format!("word {self} uses a{i}, base has {} symbols", probs.len())))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|i| write!(f, "a{i}"))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a word of a<index> symbols: {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        s.split('a')
            .skip(1)
            .map(|digits| digits.parse::<usize>().ok().filter(|&i| i > 0).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()
            .and_then(|v| if s.starts_with('a') && !v.is_empty() { Ok(Word(v)) } else { Err(bad()) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    words: Vec<Word>,
}

impl Dictionary {
    /// Words must be distinct and no word may be a prefix of another.
    pub fn new(words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        let sorted: BTreeSet<&Word> = words.iter().collect();
        if sorted.len() != words.len() {
            return Err(Error::DuplicateSymbol("repeated dictionary word".into()));
        }
        // in lexicographic order a prefix sorts right before its extensions
        let sorted: Vec<&Word> = sorted.into_iter().collect();
        for pair in sorted.windows(2) {
            if pair[0].is_prefix_of(pair[1]) {
                return Err(Error::Structural(format!("{} is a prefix of {}", pair[0], pair[1])));
            }
        }
        Ok(Dictionary { words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Kraft equality over the `k`-ary tree of base symbols.
    pub fn is_exhaustive(&self, k: usize) -> bool {
        let k = BigInt::from(k);
        let sum = self
            .words
            .iter()
            .fold(Rational::zero(), |acc, w| acc + Rational::new(BigInt::one(), num_traits::pow(k.clone(), w.len())));
        sum.is_one()
    }

    /// All `k^len` words of a fixed length.
    pub fn full(k: usize, len: usize) -> Result<Self> {
        let mut words = vec![Word(Vec::new())];
        for _ in 0..len {
            words = words
                .into_iter()
                .flat_map(|w| (1..=k).map(move |i| Word(w.0.iter().copied().chain([i]).collect())))
                .collect();
        }
        Dictionary::new(words)
    }
}

impl FromStr for Dictionary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dictionary::new(s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?)
    }
}

/// The words as symbols (named by their text) with product probabilities.
pub fn word_source(w: &Dictionary, base: &Source) -> Result<SubSource> {
    known_words(w.words(), base)
}

pub fn known_words(words: &[Word], base: &Source) -> Result<SubSource> {
    let entries = words
        .iter()
        .map(|word| Ok((Symbol::new(word.to_string()), word.probability(base)?)))
        .collect::<Result<Vec<_>>>()?;
    SubSource::new(entries)
}

fn expected_length(entries: &[(Symbol, Rational)], words: &[Word]) -> Rational {
    entries.iter().zip(words).fold(Rational::zero(), |acc, ((_, p), w)| acc + p * Rational::from_integer(w.len().into()))
}

/// The Huffman code of the word source and its redundancy per base symbol.
pub fn v2v_code(w: &Dictionary, base: &Source) -> Result<(CodeTree, ClosedForm)> {
    if !w.is_exhaustive(base.len()) {
        return Err(Error::NonExhaustive(format!("Kraft sum over the {}-ary tree is below 1", base.len())));
    }
    let words = word_source(w, base)?;
    let denom = expected_length(words.entries(), w.words());
    let source = words.into_source()?;
    let code = huffman_tree(&source)?;
    let r = redundancy(&code, &source)?;
    Ok((code, r.scale(&denom.recip())))
}

pub fn v2v_redundancy(w: &Dictionary, base: &Source) -> Result<ClosedForm> {
    v2v_code(w, base).map(|(_, r)| r)
}

/// Lower bound on the redundancy of every exhaustive dictionary with words of
/// at most `max_len` symbols that contains the known words.
pub fn v2v_prune_bound(known: &[(Word, Rational)], max_len: usize) -> Result<ClosedForm> {
    if let Some((w, _)) = known.iter().find(|(w, _)| w.len() > max_len) {
        return Err(Error::LengthViolation { word: w.to_string(), max_len });
    }
    let x = SubSource::new(known.iter().map(|(w, p)| (Symbol::new(w.to_string()), p.clone())).collect())?;
    let l = Rational::from_integer(max_len.into());
    let denom = known
        .iter()
        .fold(l.clone(), |acc, (w, p)| acc + p * (Rational::from_integer(w.len().into()) - &l));
    if !denom.is_positive() {
        return Err(Error::Invariant(format!("non-positive expected length {denom}")));
    }
    Ok(r_min_star(&x)?.value.scale(&denom.recip()))
}

/// [`v2v_prune_bound`] with word probabilities taken from the base source.
pub fn v2v_prune_bound_for(words: &[Word], base: &Source, max_len: usize) -> Result<ClosedForm> {
    let known = words.iter().map(|w| Ok((w.clone(), w.probability(base)?))).collect::<Result<Vec<_>>>()?;
    v2v_prune_bound(&known, max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::huffman::huffman_redundancy;

    fn base(ps: &[(i64, i64)]) -> Source {
        Source::from_probs(&ps.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>()).unwrap()
    }

    fn words(s: &str) -> Vec<Word> {
        s.split(',').map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn parsing() {
        assert_eq!("a1a12a3".parse::<Word>().unwrap(), Word(vec![1, 12, 3]));
        assert_eq!(Word(vec![2, 1]).to_string(), "a2a1");
        for bad in ["", "a", "a0", "b1", "1a1", "a1b", "a1a"] {
            assert!(bad.parse::<Word>().is_err(), "{bad}");
        }
        assert!("a1a1,a1a2,a2".parse::<Dictionary>().is_ok());
        assert!(matches!("a1,a1a2".parse::<Dictionary>(), Err(Error::Structural(_))));
        assert!(matches!("a1,a1".parse::<Dictionary>(), Err(Error::DuplicateSymbol(_))));
        assert!(matches!(Dictionary::new(vec![]), Err(Error::EmptyDictionary)));
    }

    #[test]
    fn word_probabilities() {
        let b = base(&[(9, 10), (1, 10)]);
        let w: Dictionary = "a1a1,a1a2,a2".parse().unwrap();
        assert!(w.is_exhaustive(2));
        let ws = word_source(&w, &b).unwrap();
        assert_eq!(ws.probabilities().cloned().collect::<Vec<_>>(), vec![rat(81, 100), rat(9, 100), rat(1, 10)]);
        assert!(ws.is_complete());

        let identity: Dictionary = "a1,a2".parse().unwrap();
        assert_eq!(word_source(&identity, &b).unwrap().probabilities().cloned().collect::<Vec<_>>(), vec![rat(9, 10), rat(1, 10)]);

        let t = base(&[(7, 10), (2, 10), (1, 10)]);
        let full = Dictionary::full(3, 2).unwrap();
        assert_eq!(full.words().len(), 9);
        let ps: Vec<Rational> = word_source(&full, &t).unwrap().probabilities().cloned().collect();
        assert_eq!(ps[5], rat(2, 100)); // a2a3
        assert!(!"a1,a2a1".parse::<Dictionary>().unwrap().is_exhaustive(2));
        assert!(Word(vec![3]).probability(&b).is_err());
    }

    #[test]
    fn binary_example_code() {
        let b = base(&[(9, 10), (1, 10)]);
        let w: Dictionary = "a1a1,a1a2,a2".parse().unwrap();
        let (code, r) = v2v_code(&w, &b).unwrap();
        let lengths = code.lengths();
        assert_eq!(lengths[&Symbol::from("a1a1")], 1);
        assert_eq!(lengths[&Symbol::from("a1a2")], 2);
        assert_eq!(lengths[&Symbol::from("a2")], 2);
        // (1.19 − H(0.81, 0.09, 0.1)) / 1.9
        let src = word_source(&w, &b).unwrap().into_source().unwrap();
        assert_eq!(r, huffman_redundancy(&src).unwrap().scale(&rat(10, 19)));
        assert!(r > ClosedForm::zero());
    }

    #[test]
    fn identity_dictionary_matches_plain_huffman() {
        let b = base(&[(1, 2), (3, 10), (1, 5)]);
        let w: Dictionary = "a1,a2,a3".parse().unwrap();
        assert_eq!(v2v_redundancy(&w, &b).unwrap(), huffman_redundancy(&b).unwrap());
        assert!(matches!(v2v_redundancy(&"a1,a2".parse().unwrap(), &b), Err(Error::NonExhaustive(_))));
    }

    #[test]
    fn ternary_pairs() {
        let t = base(&[(7, 10), (2, 10), (1, 10)]);
        let r = v2v_redundancy(&Dictionary::full(3, 2).unwrap(), &t).unwrap();
        let expect: ClosedForm = "73/200 + (-1)·log2(5) + (7/10)·log2(7)".parse().unwrap();
        assert_eq!(r, expect);
        assert_eq!(r.to_decimal(3), "0.008");
    }

    #[test]
    fn prune_bounds() {
        let b = base(&[(9, 10), (1, 10)]);
        let v = v2v_prune_bound_for(&words("a1a1,a1a2"), &b, 10).unwrap();
        let expect: ClosedForm = "-71/280 + (342/280)·log2(3) + (-190/280)·log2(5)".parse().unwrap();
        assert_eq!(v, expect);
        assert_eq!(v.to_decimal(3), "0.107");

        let t = base(&[(7, 10), (2, 10), (1, 10)]);
        let v = v2v_prune_bound_for(&words("a1,a3"), &t, 3).unwrap();
        let expect: ClosedForm = "8/14 + (-2/14)·log2(3) + (-10/14)·log2(5) + (7/14)·log2(7)".parse().unwrap();
        assert_eq!(v, expect);
        assert_eq!(v.to_decimal(2), "0.09");

        assert!(matches!(v2v_prune_bound_for(&words("a1a1a1"), &b, 2), Err(Error::LengthViolation { .. })));
    }

    #[test]
    fn exhaustive_known_words_reduce_to_the_redundancy() {
        let b = base(&[(9, 10), (1, 10)]);
        let w: Dictionary = "a1a1,a1a2,a2".parse().unwrap();
        let bound = v2v_prune_bound_for(w.words(), &b, w.max_len()).unwrap();
        // with every word known and |w| = L only for the first two, the bound
        // divides by L + Σ p(w)(|w| − L) = Σ p(w)|w|
        assert_eq!(bound, v2v_redundancy(&w, &b).unwrap());
    }
}
