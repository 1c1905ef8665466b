//! Binary merge trees, equivalent to full prefix-free codes.
//!
//! The textual form nests brackets the way merges are written, e.g.
//! `[[a2,a5],[a4,[a1,a3]]]`; a leaf's codeword length is its depth.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::source::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CodeTree {
    Leaf(Symbol),
    Node(Arc<CodeTree>, Arc<CodeTree>),
}

impl CodeTree {
    pub fn leaf(sym: impl Into<Symbol>) -> Self {
        CodeTree::Leaf(sym.into())
    }

    pub fn node(left: CodeTree, right: CodeTree) -> Self {
        CodeTree::Node(Arc::new(left), Arc::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, CodeTree::Leaf(_))
    }

    /// Builds the canonical tree whose leaves have the given depths (shallow
    /// leaves first, left to right). The depths must satisfy Kraft equality.
    pub fn from_depths(depths: &[(Symbol, usize)]) -> Result<CodeTree> {
        let kraft = depths
            .iter()
            .fold(Rational::zero(), |a, (_, d)| a + Rational::new(BigInt::one(), BigInt::one() << *d));
        if depths.is_empty() || !kraft.is_one() {
            return Err(Error::Structural(format!("depths do not satisfy Kraft equality (sum {kraft})")));
        }
        let mut sorted: Vec<&(Symbol, usize)> = depths.iter().collect();
        sorted.sort_by_key(|(_, d)| *d);
        fn build<'a>(level: usize, rest: &mut std::iter::Peekable<impl Iterator<Item = &'a (Symbol, usize)>>) -> CodeTree {
            match rest.peek() {
                Some((s, d)) if *d == level => {
                    let leaf = CodeTree::leaf(s.clone());
                    rest.next();
                    leaf
                }
                _ => {
                    let l = build(level + 1, rest);
                    let r = build(level + 1, rest);
                    CodeTree::node(l, r)
                }
            }
        }
        Ok(build(0, &mut sorted.into_iter().peekable()))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        self.visit_leaves(0, &mut |s, _| out.push(s));
        out
    }

    /// `(symbol, depth)` from left to right.
    pub fn depths(&self) -> Vec<(&Symbol, usize)> {
        let mut out = Vec::new();
        self.visit_leaves(0, &mut |s, d| out.push((s, d)));
        out
    }

    /// Codeword length per symbol.
    pub fn lengths(&self) -> BTreeMap<Symbol, usize> {
        self.depths().into_iter().map(|(s, d)| (s.clone(), d)).collect()
    }

    fn visit_leaves<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a Symbol, usize)) {
        match self {
            CodeTree::Leaf(s) => f(s, depth),
            CodeTree::Node(l, r) => {
                l.visit_leaves(depth + 1, f);
                r.visit_leaves(depth + 1, f);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            CodeTree::Leaf(_) => 1,
            CodeTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            CodeTree::Leaf(_) => 0,
            CodeTree::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    /// `Σ 2^-depth` over the leaves; one for every tree built from merges.
    pub fn kraft_sum(&self) -> Rational {
        self.depths()
            .into_iter()
            .map(|(_, d)| Rational::new(BigInt::one(), BigInt::one() << d))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn has_distinct_leaves(&self) -> bool {
        let leaves = self.leaves();
        leaves.iter().collect::<BTreeSet<_>>().len() == leaves.len()
    }

    /// Codewords with `0` for the left branch and `1` for the right branch.
    ///
    /// This is the labelling produced by scanning the bracket string to the
    /// right of a symbol, emitting `0` for a `]` reached right after a `,` and
    /// `1` otherwise, then reversing.
    pub fn codewords(&self) -> BTreeMap<Symbol, String> {
        fn walk(t: &CodeTree, prefix: &mut String, out: &mut BTreeMap<Symbol, String>) {
            match t {
                CodeTree::Leaf(s) => {
                    out.insert(s.clone(), prefix.clone());
                }
                CodeTree::Node(l, r) => {
                    prefix.push('0');
                    walk(l, prefix, out);
                    prefix.pop();
                    prefix.push('1');
                    walk(r, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(self, &mut String::new(), &mut out);
        out
    }

    /// Swaps the children of every node.
    pub fn mirror(&self) -> CodeTree {
        match self {
            CodeTree::Leaf(_) => self.clone(),
            CodeTree::Node(l, r) => CodeTree::node(r.mirror(), l.mirror()),
        }
    }

    pub fn relabel(&self, f: &mut impl FnMut(&Symbol) -> Symbol) -> CodeTree {
        match self {
            CodeTree::Leaf(s) => CodeTree::Leaf(f(s)),
            CodeTree::Node(l, r) => {
                let l = l.relabel(f);
                let r = r.relabel(f);
                CodeTree::node(l, r)
            }
        }
    }

    /// Representative of the tree up to swapping children: at every node the
    /// children are ordered by (height, leaf multiset, string).
    pub fn canonical(&self) -> CodeTree {
        self.canonical_keyed(&|_| false).0
    }

    pub fn canonical_string(&self) -> String {
        self.canonical().to_string()
    }

    /// Canonicalizes while treating every leaf with `is_anonymous` as
    /// interchangeable, then names those leaves `{prefix}1, {prefix}2, …` in
    /// left-to-right order. Returns the tree and the old → new renaming.
    pub fn canonical_anonymized(
        &self,
        is_anonymous: &impl Fn(&Symbol) -> bool,
        prefix: &str,
    ) -> (CodeTree, BTreeMap<Symbol, Symbol>) {
        let (tree, _) = self.canonical_keyed(is_anonymous);
        let mut renaming = BTreeMap::new();
        let mut next = 0;
        let renamed = tree.relabel(&mut |s| {
            if is_anonymous(s) {
                next += 1;
                let fresh = Symbol::indexed(prefix, next);
                renaming.insert(s.clone(), fresh.clone());
                fresh
            } else {
                s.clone()
            }
        });
        (renamed, renaming)
    }

    fn canonical_keyed(&self, is_anonymous: &impl Fn(&Symbol) -> bool) -> (CodeTree, SortKey) {
        match self {
            CodeTree::Leaf(s) => {
                let label = if is_anonymous(s) { "?".to_string() } else { s.to_string() };
                (self.clone(), SortKey { height: 0, leaves: vec![label.clone()], text: label })
            }
            CodeTree::Node(l, r) => {
                let a = l.canonical_keyed(is_anonymous);
                let b = r.canonical_keyed(is_anonymous);
                let ((lt, lk), (rt, rk)) = if b.1 < a.1 { (b, a) } else { (a, b) };
                let mut leaves: Vec<String> = lk.leaves.iter().chain(rk.leaves.iter()).cloned().collect();
                leaves.sort();
                let key = SortKey {
                    height: 1 + lk.height.max(rk.height),
                    leaves,
                    text: format!("[{},{}]", lk.text, rk.text),
                };
                (CodeTree::node(lt, rt), key)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SortKey {
    height: usize,
    leaves: Vec<String>,
    text: String,
}

impl fmt::Display for CodeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeTree::Leaf(s) => write!(f, "{s}"),
            CodeTree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl FromStr for CodeTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&compact, &mut pos)?;
        if pos != compact.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        if !tree.has_distinct_leaves() {
            return Err(Error::Parse(format!("repeated leaf in tree {s:?}")));
        }
        Ok(tree)
    }
}

fn parse_tree(chars: &[char], pos: &mut usize) -> Result<CodeTree> {
    let err = |what: &str, at: usize| Error::Parse(format!("{what} at offset {at} in code tree"));
    match chars.get(*pos) {
        Some('[') => {
            *pos += 1;
            let left = parse_tree(chars, pos)?;
            if chars.get(*pos) != Some(&',') {
                return Err(err("expected ','", *pos));
            }
            *pos += 1;
            let right = parse_tree(chars, pos)?;
            if chars.get(*pos) != Some(&']') {
                return Err(err("expected ']'", *pos));
            }
            *pos += 1;
            Ok(CodeTree::node(left, right))
        }
        Some(_) => {
            let start = *pos;
            while let Some(c) = chars.get(*pos) {
                if matches!(c, '[' | ']' | ',') {
                    break;
                }
                *pos += 1;
            }
            if start == *pos {
                return Err(err("expected a symbol", start));
            }
            Ok(CodeTree::Leaf(Symbol::new(chars[start..*pos].iter().collect::<String>())))
        }
        None => Err(err("unexpected end", *pos)),
    }
}
