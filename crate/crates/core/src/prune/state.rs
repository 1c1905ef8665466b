//! Extended states `(K, s, Z)` and their two transition functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::source::{SubSource, Symbol};
use crate::tree::CodeTree;

/// Prefix of the leaves standing for symbols of unknown probability.
pub const UNKNOWN_PREFIX: &str = "u";

pub fn unknown_leaf(k: usize) -> Symbol {
    Symbol::indexed(UNKNOWN_PREFIX, k)
}

/// `constant + Σ p(u_k)` over a set of unknown indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct AffineProb {
    pub constant: Rational,
    pub unknown: BTreeSet<usize>,
}

impl AffineProb {
    pub fn constant(c: Rational) -> Self {
        AffineProb { constant: c, unknown: BTreeSet::new() }
    }

    pub fn unknown(k: usize) -> Self {
        AffineProb { constant: Rational::zero(), unknown: BTreeSet::from([k]) }
    }

    /// Sum of the probabilities of two disjoint subtrees.
    pub fn merge(&self, other: &AffineProb) -> AffineProb {
        AffineProb {
            constant: &self.constant + &other.constant,
            unknown: self.unknown.union(&other.unknown).copied().collect(),
        }
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        self.unknown.iter().fold(self.constant.clone(), |acc, &k| acc + &u[k])
    }
}

impl fmt::Display for AffineProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for k in &self.unknown {
            write!(f, " + u{k}")?;
        }
        Ok(())
    }
}

/// `constant + Σ c_k·p(u_k) ≥ 0` with every `c_k ∈ {−1, +1}` (zero
/// coefficients are not stored).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearInequality {
    pub constant: Rational,
    pub coeffs: BTreeMap<usize, i8>,
}

impl LinearInequality {
    /// `lhs ≤ rhs`, normalized as `rhs − lhs ≥ 0`.
    pub fn le(lhs: &AffineProb, rhs: &AffineProb) -> Self {
        let mut coeffs = BTreeMap::new();
        for &k in rhs.unknown.symmetric_difference(&lhs.unknown) {
            coeffs.insert(k, if rhs.unknown.contains(&k) { 1 } else { -1 });
        }
        LinearInequality { constant: &rhs.constant - &lhs.constant, coeffs }
    }

    /// True for constant inequalities that hold.
    pub fn is_tautology(&self) -> bool {
        self.coeffs.is_empty() && !self.constant.is_negative()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn holds_at(&self, u: &[Rational]) -> bool {
        let v = self
            .coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (&k, &c)| acc + Rational::from_integer(c.into()) * &u[k]);
        !v.is_negative()
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (k, c) in &self.coeffs {
            write!(f, " {} u{k}", if *c > 0 { '+' } else { '-' })?;
        }
        write!(f, " >= 0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedState {
    /// Partial trees over known symbols and drawn unknowns, with their
    /// probabilities.
    pub k: Vec<(CodeTree, AffineProb)>,
    /// Number of unknown symbols drawn so far (`u_0 … u_{s−1}`).
    pub s: usize,
    /// Accumulated merge constraints, normalized; constant inequalities that
    /// hold are not stored.
    pub z: BTreeSet<LinearInequality>,
}

pub type StateKey = (Vec<String>, usize, BTreeSet<LinearInequality>);

impl ExtendedState {
    /// Canonical identity: canonical tree strings of `K` as a multiset, `s`
    /// and `Z`.
    pub fn key(&self) -> StateKey {
        let mut trees: Vec<String> = self.k.iter().map(|(t, _)| t.canonical_string()).collect();
        trees.sort();
        (trees, self.s, self.z.clone())
    }

    pub fn is_complete(&self) -> bool {
        self.k.len() == 1
    }

    /// The single tree of a complete state.
    pub fn code(&self) -> Option<&CodeTree> {
        match self.k.as_slice() {
            [(t, _)] => Some(t),
            _ => None,
        }
    }

    fn add_all(&mut self, ineqs: Vec<LinearInequality>) {
        self.z.extend(ineqs.into_iter().filter(|q| !q.is_tautology()));
    }
}

impl fmt::Display for ExtendedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trees: Vec<String> = self.k.iter().map(|(t, p)| format!("{t}@{p}")).collect();
        write!(f, "K={{{}}} s={} |Z|={}", trees.join(", "), self.s, self.z.len())
    }
}

/// `({x_1 … x_m}, 0, {0 ≤ p(u_0)})`.
pub fn initial_state(x: &SubSource) -> Result<ExtendedState> {
    if x.is_empty() {
        return Err(Error::Precondition("empty sub-source; its bound is 0".into()));
    }
    if let Some(sym) = x.symbols().find(|s| s.has_prefix(UNKNOWN_PREFIX)) {
        return Err(Error::Precondition(format!(
            "known symbol {sym} clashes with the reserved unknown-leaf names"
        )));
    }
    let k = x.entries().iter().map(|(s, p)| (CodeTree::leaf(s.clone()), AffineProb::constant(p.clone()))).collect();
    let mut st = ExtendedState { k, s: 0, z: BTreeSet::new() };
    st.add_all(vec![LinearInequality::le(&AffineProb::default(), &AffineProb::unknown(0))]);
    Ok(st)
}

/// Constraints of merging `κ_i` and `κ_j` (`i < j`, 0-based): both are no
/// larger than every other element of `K` and than `u_s`. Tautologies are
/// included, so there are `2(|K| − 2) + 2` of them.
pub fn omega(st: &ExtendedState, i: usize, j: usize) -> Vec<LinearInequality> {
    let next = AffineProb::unknown(st.s);
    let mut out = Vec::with_capacity(2 * st.k.len());
    for me in [i, j] {
        let p = &st.k[me].1;
        for (l, (_, q)) in st.k.iter().enumerate() {
            if l != i && l != j {
                out.push(LinearInequality::le(p, q));
            }
        }
        out.push(LinearInequality::le(p, &next));
    }
    out
}

/// Constraints of merging `κ_i` with the new unknown `u_s`: `κ_i` is no larger
/// than every other element, `u_s` no larger than every other element, and
/// both no larger than `u_{s+1}`.
pub fn upsilon(st: &ExtendedState, i: usize) -> Vec<LinearInequality> {
    let cur = AffineProb::unknown(st.s);
    let next = AffineProb::unknown(st.s + 1);
    let p = &st.k[i].1;
    let mut out = Vec::with_capacity(2 * st.k.len() + 2);
    for (l, (_, q)) in st.k.iter().enumerate() {
        if l != i {
            out.push(LinearInequality::le(p, q));
            out.push(LinearInequality::le(&cur, q));
        }
    }
    out.push(LinearInequality::le(p, &next));
    out.push(LinearInequality::le(&cur, &next));
    out
}

/// Merges two known-side elements (0-based, `i < j`); the merged tree is
/// appended to `K`.
pub fn h_a(st: &ExtendedState, i: usize, j: usize) -> Result<ExtendedState> {
    if !(i < j && j < st.k.len()) {
        return Err(Error::Precondition(format!("h_a({i}, {j}) on |K| = {}", st.k.len())));
    }
    let mut next = st.clone();
    next.add_all(omega(st, i, j));
    let (tj, pj) = next.k.remove(j);
    let (ti, pi) = next.k.remove(i);
    next.k.push((CodeTree::node(ti, tj), pi.merge(&pj)));
    Ok(next)
}

/// Merges `κ_i` (0-based) with a freshly drawn unknown `u_s`, in place.
pub fn h_b(st: &ExtendedState, i: usize) -> Result<ExtendedState> {
    if i >= st.k.len() {
        return Err(Error::Precondition(format!("h_b({i}) on |K| = {}", st.k.len())));
    }
    let mut next = st.clone();
    next.add_all(upsilon(st, i));
    let (t, p) = &st.k[i];
    next.k[i] = (CodeTree::node(t.clone(), CodeTree::leaf(unknown_leaf(st.s))), p.merge(&AffineProb::unknown(st.s)));
    next.s += 1;
    Ok(next)
}
