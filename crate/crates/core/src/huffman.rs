//! The Huffman merge state machine and code redundancy.
//!
//! The state is an ordered list of (tree, probability). Each step merges the
//! two least probable elements `j < k` into `[θj,θk]`, appended at the end.
//! Among tied candidates the lexicographically smallest `(j, k)` is taken.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{ClosedForm, Rational};
use crate::source::Source;
use crate::tree::CodeTree;

/// All index pairs `j < k` that may be merged next: neither element has a
/// larger probability than any element other than its partner.
pub fn admissible_merges(probs: &[Rational]) -> Vec<(usize, usize)> {
    let n = probs.len();
    let mut sorted: Vec<&Rational> = probs.iter().collect();
    sorted.sort();
    if n < 2 {
        return Vec::new();
    }
    let (m1, m2) = (sorted[0], sorted[1]);
    let mut out = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let (a, b) = if probs[j] <= probs[k] { (&probs[j], &probs[k]) } else { (&probs[k], &probs[j]) };
            if a == m1 && b == m2 {
                out.push((j, k));
            }
        }
    }
    out
}

/// Applies the merge `(j, k)`, `j < k`, to a state.
pub fn merge_step(state: &mut Vec<(CodeTree, Rational)>, j: usize, k: usize) {
    debug_assert!(j < k && k < state.len());
    let (tk, pk) = state.remove(k);
    let (tj, pj) = state.remove(j);
    state.push((CodeTree::node(tj, tk), pj + pk));
}

/// Runs the state machine on arbitrary weighted trees.
pub fn huffman_merge(mut state: Vec<(CodeTree, Rational)>) -> Result<CodeTree> {
    if state.len() < 2 {
        return Err(Error::Size { min: 2, got: state.len() });
    }
    while state.len() > 1 {
        let probs: Vec<Rational> = state.iter().map(|(_, p)| p.clone()).collect();
        let (j, k) = admissible_merges(&probs)[0];
        merge_step(&mut state, j, k);
    }
    Ok(state.pop().expect("one element left").0)
}

pub fn huffman_tree(a: &Source) -> Result<CodeTree> {
    huffman_merge(
        a.entries()
            .iter()
            .map(|(s, p)| (CodeTree::Leaf(s.clone()), p.clone()))
            .collect(),
    )
}

/// `Σ p·l`.
pub fn average_length(t: &CodeTree, a: &Source) -> Result<Rational> {
    check_cover(t, a)?;
    Ok(t.depths()
        .into_iter()
        .map(|(s, d)| a.probability(s).expect("checked") * Rational::from_integer(d.into()))
        .fold(Rational::zero(), |x, y| x + y))
}

/// `Σ p·l + Σ p·log2 p`, exact.
pub fn redundancy(t: &CodeTree, a: &Source) -> Result<ClosedForm> {
    let avg = average_length(t, a)?;
    Ok(&ClosedForm::from_rational(avg) - &a.entropy())
}

pub fn huffman_redundancy(a: &Source) -> Result<ClosedForm> {
    redundancy(&huffman_tree(a)?, a)
}

fn check_cover(t: &CodeTree, a: &Source) -> Result<()> {
    let leaves: Vec<_> = t.leaves();
    let set: BTreeSet<_> = leaves.iter().copied().collect();
    let ok = set.len() == leaves.len()
        && leaves.len() == a.len()
        && a.entries().iter().all(|(s, _)| set.contains(s));
    if ok {
        Ok(())
    } else {
        Err(Error::SymbolMismatch(format!("tree {t} vs {} source symbols", a.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::source::Symbol;
    use proptest::prelude::*;

    fn src(ps: &[(i64, i64)]) -> Source {
        Source::from_probs(&ps.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>()).unwrap()
    }

    fn five_symbol_source() -> Source {
        src(&[(1, 10), (21, 100), (15, 100), (3, 10), (24, 100)])
    }

    /// Codewords by scanning the bracket string to the right of each symbol:
    /// other symbols are skipped, a nested `[...]` is skipped whole, and each
    /// `]` contributes `0` when the last significant character before it was
    /// `,` and `1` otherwise. The bits come out in reverse.
    fn scan_codeword(text: &str, symbol: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let start = text.find(symbol).unwrap() + symbol.len();
        let mut bits = Vec::new();
        let mut prev = ' ';
        let mut i = start;
        while i < chars.len() {
            match chars[i] {
                '[' => {
                    let mut depth = 0;
                    loop {
                        match chars[i] {
                            '[' => depth += 1,
                            ']' => depth -= 1,
                            _ => {}
                        }
                        if depth == 0 {
                            break;
                        }
                        i += 1;
                    }
                }
                ']' => {
                    bits.push(if prev == ',' { '0' } else { '1' });
                    prev = ']';
                }
                ',' => prev = ',',
                _ => {}
            }
            i += 1;
        }
        bits.iter().rev().collect()
    }

    #[test]
    fn five_symbol_tree_lengths_and_codewords() {
        let a = five_symbol_source();
        let t = huffman_tree(&a).unwrap();
        assert_eq!(t.to_string(), "[[a2,a5],[a4,[a1,a3]]]");
        let lengths: Vec<usize> = (1..=5).map(|i| t.lengths()[&Symbol::indexed("a", i)]).collect();
        assert_eq!(lengths, vec![3, 2, 3, 2, 2]);
        let words = t.codewords();
        let got: Vec<&str> = (1..=5).map(|i| words[&Symbol::indexed("a", i)].as_str()).collect();
        assert_eq!(got, vec!["110", "00", "111", "10", "01"]);
        let text = t.to_string();
        for i in 1..=5 {
            let sym = format!("a{i}");
            assert_eq!(scan_codeword(&text, &sym), words[&Symbol::from(sym.as_str())]);
        }
        assert_eq!(average_length(&t, &a).unwrap(), rat(9, 4));
        let r = redundancy(&t, &a).unwrap();
        assert_eq!(r, &ClosedForm::from_rational(rat(9, 4)) - &a.entropy());
        assert_eq!(r.to_decimal(4), "0.0192");
    }

    #[test]
    fn small_sources() {
        let t = huffman_tree(&src(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(t.to_string(), "[a1,a2]");
        let words = t.codewords();
        assert_eq!(words[&Symbol::from("a1")], "0");
        assert_eq!(words[&Symbol::from("a2")], "1");

        let a = src(&[(1, 2), (1, 4), (1, 4)]);
        let t = huffman_tree(&a).unwrap();
        let l = t.lengths();
        assert_eq!((l[&Symbol::from("a1")], l[&Symbol::from("a2")], l[&Symbol::from("a3")]), (1, 2, 2));
        assert!(redundancy(&t, &a).unwrap().is_zero());

        let a = src(&[(49, 100), (51, 100)]);
        let r = huffman_redundancy(&a).unwrap();
        assert_eq!(r.to_decimal(5), "0.00029");

        assert!(matches!(huffman_tree(&src(&[(1, 1)])), Err(Error::Size { .. })));
    }

    #[test]
    fn redundancy_rejects_mismatched_trees() {
        let a = src(&[(1, 2), (1, 2)]);
        let t: CodeTree = "[a1,a3]".parse().unwrap();
        assert!(matches!(redundancy(&t, &a), Err(Error::SymbolMismatch(_))));
        let t: CodeTree = "[a1,[a2,a3]]".parse().unwrap();
        assert!(matches!(redundancy(&t, &a), Err(Error::SymbolMismatch(_))));
    }

    #[test]
    fn tie_breaking_is_lowest_pair() {
        assert_eq!(admissible_merges(&[rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]).len(), 6);
        assert_eq!(admissible_merges(&[rat(1, 2), rat(1, 4), rat(1, 4)]), vec![(1, 2)]);
        assert_eq!(admissible_merges(&[rat(1, 3), rat(1, 6), rat(1, 3), rat(1, 6)]), vec![(1, 3)]);
        assert_eq!(admissible_merges(&[rat(2, 5), rat(1, 5), rat(1, 5), rat(1, 5)]), vec![(1, 2), (1, 3), (2, 3)]);
    }

    /// Every admissible trajectory, not just the lowest-index one.
    fn all_tie_averages(a: &Source) -> BTreeSet<Rational> {
        fn go(state: Vec<(CodeTree, Rational)>, a: &Source, out: &mut BTreeSet<Rational>) {
            if state.len() == 1 {
                out.insert(average_length(&state[0].0, a).unwrap());
                return;
            }
            let probs: Vec<Rational> = state.iter().map(|(_, p)| p.clone()).collect();
            for (j, k) in admissible_merges(&probs) {
                let mut next = state.clone();
                merge_step(&mut next, j, k);
                go(next, a, out);
            }
        }
        let mut out = BTreeSet::new();
        go(a.entries().iter().map(|(s, p)| (CodeTree::Leaf(s.clone()), p.clone())).collect(), a, &mut out);
        out
    }

    fn arb_source(min: usize, max: usize, den: i64) -> impl Strategy<Value = Source> {
        proptest::collection::vec(1i64..den, min..=max).prop_map(|w| {
            let total: i64 = w.iter().sum();
            Source::from_probs(&w.iter().map(|&x| rat(x, total)).collect::<Vec<_>>()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ties_never_change_average_length(a in arb_source(2, 4, 4)) {
            prop_assert_eq!(all_tie_averages(&a).len(), 1);
        }

        #[test]
        fn kraft_equality_and_nonnegative_redundancy(a in arb_source(2, 8, 30)) {
            let t = huffman_tree(&a).unwrap();
            prop_assert!(num_traits::One::is_one(&t.kraft_sum()));
            prop_assert!(redundancy(&t, &a).unwrap() >= ClosedForm::zero());
        }

        #[test]
        fn merging_the_first_pair_never_increases_redundancy(a in arb_source(3, 7, 20)) {
            let probs: Vec<Rational> = a.probabilities().cloned().collect();
            let (j, k) = admissible_merges(&probs)[0];
            let mut merged: Vec<Rational> = probs.iter().enumerate()
                .filter(|&(i, _)| i != j && i != k).map(|(_, p)| p.clone()).collect();
            merged.push(&probs[j] + &probs[k]);
            let b = Source::from_probs(&merged).unwrap();
            prop_assert!(huffman_redundancy(&b).unwrap() <= huffman_redundancy(&a).unwrap());
        }
    }
}
