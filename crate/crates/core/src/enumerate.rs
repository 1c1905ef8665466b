//! Exhaustive generation of every merge trajectory on `n` symbols.
//!
//! This is the brute-force oracle: trajectory counts grow like
//! `n!·(n−1)!/2^(n−1)`, so sizes above [`DEFAULT_CAP`] need an explicit opt-in.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::source::Symbol;
use crate::tree::CodeTree;

pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Keep only distinct trees (up to child order) instead of one tree per
    /// trajectory.
    pub dedup: bool,
    pub allow_above_cap: bool,
    pub exec: Exec,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { dedup: true, allow_above_cap: false, exec: Exec::default() }
    }
}

/// `n!·(n−1)!/2^(n−1)`.
pub fn trajectory_count(n: usize) -> BigUint {
    if n < 2 {
        return BigUint::one();
    }
    let fact = |k: usize| (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    (fact(n) * fact(n - 1)) >> (n - 1)
}

/// Codes on symbols `a1 … an`; see [`all_codes_with`].
pub fn all_codes(n: usize, dedup: bool) -> Result<Vec<CodeTree>> {
    all_codes_with(n, EnumOptions { dedup, ..EnumOptions::default() })
}

/// Applies every merge `(j, k)`, `j < k`, level by level until one tree is
/// left. Without dedup the output has one entry per trajectory, in expansion
/// order; with dedup it holds each distinct tree once, in canonical order.
pub fn all_codes_with(n: usize, opts: EnumOptions) -> Result<Vec<CodeTree>> {
    if n < 2 {
        return Err(Error::Size { min: 2, got: n });
    }
    if n > DEFAULT_CAP && !opts.allow_above_cap {
        return Err(Error::CapExceeded { n, cap: DEFAULT_CAP });
    }
    let initial: Vec<CodeTree> = (1..=n).map(|i| CodeTree::Leaf(Symbol::indexed("a", i))).collect();
    let mut level = vec![initial];
    for _ in 1..n {
        let next = opts.exec.flat_map(&level, |state| {
            let mut out = Vec::with_capacity(state.len() * (state.len() - 1) / 2);
            for j in 0..state.len() {
                for k in j + 1..state.len() {
                    let mut s = state.clone();
                    let tk = s.remove(k);
                    let tj = s.remove(j);
                    s.push(CodeTree::node(tj, tk));
                    out.push(s);
                }
            }
            out
        });
        level = if opts.dedup { dedup_states(next) } else { next };
    }
    let trees = level.into_iter().map(|mut s| s.pop().expect("single tree"));
    if opts.dedup {
        let distinct: BTreeMap<String, CodeTree> = trees.map(|t| (t.canonical_string(), t)).collect();
        Ok(distinct.into_values().collect())
    } else {
        Ok(trees.collect())
    }
}

fn dedup_states(states: Vec<Vec<CodeTree>>) -> Vec<Vec<CodeTree>> {
    let mut seen = BTreeMap::new();
    for s in states {
        let mut key: Vec<String> = s.iter().map(CodeTree::canonical_string).collect();
        key.sort();
        seen.entry(key).or_insert(s);
    }
    seen.into_values().collect()
}
