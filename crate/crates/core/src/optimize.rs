//! Per-code convex minimization in closed form and the exhaustive bounds.
//!
//! For a code `C` and known sub-source `X`, the least redundancy of `C` over
//! every completion of `X` is
//!
//! ```text
//! F(X, C) = β0 + βT · log2(βT / Σ 2^-βi)
//! β0 = Σ p(x)·(l(x) + log2 p(x)),   βi = depth of the i-th unknown leaf,
//! βT = 1 − Σ p(x)
//! ```
//!
//! reached at `p(yi) = 2^-βi · βT / Σ 2^-βj`. Minimizing `F` over the codes
//! produced by [`crate::enumerate`] gives the bound for alphabets of exactly
//! `n` symbols; the other bounds are minima of that.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::{all_codes_with, EnumOptions, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{ceil_rational, ClosedForm, Rational};
use crate::exec::Exec;
use crate::huffman::redundancy;
use crate::source::{Source, SubSource, Symbol};
use crate::tree::CodeTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaDecomposition {
    pub beta0: ClosedForm,
    /// Codeword lengths of the unknown-probability leaves.
    pub beta_unknown: Vec<usize>,
    /// Total probability left for the unknown leaves.
    pub beta_t: Rational,
}

/// A tight bound together with a code and a completion that attain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub value: ClosedForm,
    /// Known leaves are named after the sub-source symbols, unknown leaves
    /// `y1, y2, …` in left-to-right order of the canonical tree.
    pub best_code: CodeTree,
    /// Probabilities of the unknown leaves; empty when no mass is left.
    pub witness: Vec<(Symbol, Rational)>,
}

impl BoundResult {
    /// The source formed by the known symbols plus the witness.
    pub fn completed_source(&self, x: &SubSource) -> Result<Source> {
        x.concat(&SubSource::new(self.witness.clone())?)?.into_source()
    }

    /// Recomputes the redundancy of `best_code` on the completed source.
    pub fn check_tightness(&self, x: &SubSource) -> Result<bool> {
        let b = self.completed_source(x)?;
        Ok(redundancy(&self.best_code, &b)? == self.value)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleOptions {
    pub allow_above_cap: bool,
    pub exec: Exec,
}

fn pow2_inv(d: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << d)
}

/// Splits `F` for the code `c` where `assignment[i]` is the left-to-right
/// leaf index carrying the `i`-th known symbol.
pub fn decompose(x: &SubSource, c: &CodeTree, assignment: &[usize]) -> Result<BetaDecomposition> {
    let depths: Vec<usize> = c.depths().into_iter().map(|(_, d)| d).collect();
    if assignment.len() != x.len() {
        return Err(Error::Dimension { expected: x.len(), got: assignment.len() });
    }
    let mut taken = vec![false; depths.len()];
    for &leaf in assignment {
        if leaf >= depths.len() {
            return Err(Error::Precondition(format!("leaf index {leaf} out of range for {c}")));
        }
        if std::mem::replace(&mut taken[leaf], true) {
            return Err(Error::Precondition(format!("assignment collision at leaf {leaf}")));
        }
    }
    let known: Vec<usize> = assignment.iter().map(|&leaf| depths[leaf]).collect();
    let unknown: Vec<usize> = depths.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&d, _)| d).collect();
    decompose_lengths(x, &known, unknown)
}

/// [`decompose`] for a tree whose leaves already carry the symbols of `x`;
/// every other leaf is unknown. Also returns the unknown leaves in order.
pub fn decompose_labeled(x: &SubSource, c: &CodeTree) -> Result<(BetaDecomposition, Vec<Symbol>)> {
    let depths = c.depths();
    let mut known = Vec::with_capacity(x.len());
    for sym in x.symbols() {
        let d = depths
            .iter()
            .find(|(s, _)| *s == sym)
            .ok_or_else(|| Error::SymbolMismatch(format!("{sym} is not a leaf of {c}")))?;
        known.push(d.1);
    }
    let (unknown_syms, unknown): (Vec<Symbol>, Vec<usize>) = depths
        .iter()
        .filter(|(s, _)| x.probability(s).is_none())
        .map(|(s, d)| ((*s).clone(), *d))
        .unzip();
    Ok((decompose_lengths(x, &known, unknown)?, unknown_syms))
}

pub fn decompose_lengths(x: &SubSource, known: &[usize], unknown: Vec<usize>) -> Result<BetaDecomposition> {
    let mut beta0 = ClosedForm::zero();
    for (p, &l) in x.probabilities().zip(known) {
        beta0 = &beta0 + &(&ClosedForm::x_log2_x(p)? + &(p * Rational::from_integer(l.into())));
    }
    Ok(BetaDecomposition { beta0, beta_unknown: unknown, beta_t: x.remaining() })
}

/// `F(X, C)` and the minimizing unknown probabilities (in `beta_unknown`
/// order; `None` when `βT = 0`).
pub fn min_redundancy_for_code(b: &BetaDecomposition) -> Result<(ClosedForm, Option<Vec<Rational>>)> {
    if b.beta_t.is_negative() {
        return Err(Error::Structural(format!("negative remaining mass {}", b.beta_t)));
    }
    if b.beta_t.is_zero() {
        return Ok((b.beta0.clone(), None));
    }
    if b.beta_unknown.is_empty() {
        return Err(Error::Structural(format!(
            "remaining mass {} but no unknown leaves to carry it",
            b.beta_t
        )));
    }
    let kraft: Rational = b.beta_unknown.iter().map(|&d| pow2_inv(d)).fold(Rational::zero(), |a, v| a + v);
    let value = &b.beta0 + &ClosedForm::log2(&(&b.beta_t / &kraft))?.scale(&b.beta_t);
    let scale = &b.beta_t / &kraft;
    let witness = b.beta_unknown.iter().map(|&d| pow2_inv(d) * &scale).collect();
    Ok((value, Some(witness)))
}

/// Evaluates `F` on a tree labelled with the symbols of `x` (other leaves are
/// unknown) and packages it as a [`BoundResult`] with canonical naming.
pub fn evaluate_labeled(x: &SubSource, c: &CodeTree) -> Result<BoundResult> {
    let is_unknown = |s: &Symbol| x.probability(s).is_none();
    let (code, renaming) = c.canonical_anonymized(&is_unknown, "y");
    let (beta, unknown_syms) = decompose_labeled(x, &code)?;
    let (value, witness) = min_redundancy_for_code(&beta)?;
    debug_assert!(renaming.len() == unknown_syms.len());
    let witness = match witness {
        Some(w) => unknown_syms.into_iter().zip(w).collect(),
        None => Vec::new(),
    };
    Ok(BoundResult { value, best_code: code, witness })
}

/// Orders candidates by value, then fewer leaves, then canonical string.
pub fn better(a: &BoundResult, b: &BoundResult) -> Ordering {
    a.value
        .cmp(&b.value)
        .then_with(|| a.best_code.leaf_count().cmp(&b.best_code.leaf_count()))
        .then_with(|| a.best_code.to_string().cmp(&b.best_code.to_string()))
}

pub fn select_best(candidates: impl IntoIterator<Item = BoundResult>) -> Option<BoundResult> {
    candidates.into_iter().min_by(better)
}

/// The bound for `X` inside the unique two-symbol source with both
/// probabilities unknown.
pub fn zero_bound() -> BoundResult {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    BoundResult {
        value: ClosedForm::zero(),
        best_code: CodeTree::node(CodeTree::leaf("y1"), CodeTree::leaf("y2")),
        witness: vec![(Symbol::from("y1"), half.clone()), (Symbol::from("y2"), half)],
    }
}

/// `T(X) = |X| + ⌈(1 − Σ p(x)) / min p(x)⌉`.
pub fn threshold(x: &SubSource) -> Result<usize> {
    let min = x
        .min_probability()
        .ok_or_else(|| Error::Precondition("threshold of an empty sub-source; the bound is 0".into()))?;
    let extra = ceil_rational(&(x.remaining() / min));
    let extra = extra.to_usize().ok_or_else(|| Error::Invariant(format!("threshold overflow: {extra}")))?;
    Ok(x.len() + extra)
}

fn check_alphabet_size(x: &SubSource, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("alphabet size {n} is below 2")));
    }
    if x.len() > n {
        return Err(Error::Precondition(format!("{} known symbols do not fit in {n}", x.len())));
    }
    if x.is_complete() && n > x.len() {
        return Err(Error::Precondition(format!(
            "known probabilities sum to 1, so {} further symbols would need zero probability",
            n - x.len()
        )));
    }
    if !x.is_complete() && n == x.len() {
        return Err(Error::Precondition(format!(
            "known probabilities sum to {} but no symbol is left to carry the rest",
            x.total()
        )));
    }
    Ok(())
}

fn injective_assignments(m: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(m: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for leaf in 0..n {
            if !used[leaf] {
                used[leaf] = true;
                cur.push(leaf as u8);
                go(m, n, used, cur, out);
                cur.pop();
                used[leaf] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(m, n, &mut vec![false; n], &mut Vec::with_capacity(m), &mut out);
    out
}

/// Least redundancy of a Huffman code over all sources of exactly `n`
/// symbols containing `x`: the minimum of `F` over every distinct code on
/// `n` leaves and every placement of the known symbols on its leaves.
pub fn r_min_n(x: &SubSource, n: usize) -> Result<BoundResult> {
    r_min_n_with(x, n, OracleOptions::default())
}

pub fn r_min_n_with(x: &SubSource, n: usize, opts: OracleOptions) -> Result<BoundResult> {
    check_alphabet_size(x, n)?;
    let codes = all_codes_with(
        n,
        EnumOptions { dedup: true, allow_above_cap: opts.allow_above_cap, exec: opts.exec },
    )?;
    let assignments = injective_assignments(x.len(), n);

    // F only depends on the known lengths and the multiset of unknown lengths
    type Key = (Vec<usize>, Vec<usize>);
    let keys_per_code: Vec<Vec<Key>> = opts.exec.map(&codes, |code| {
        let depths: Vec<usize> = code.depths().into_iter().map(|(_, d)| d).collect();
        assignments
            .iter()
            .map(|assign| {
                let known: Vec<usize> = assign.iter().map(|&l| depths[l as usize]).collect();
                let mut unknown: Vec<usize> =
                    (0..n).filter(|l| !assign.contains(&(*l as u8))).map(|l| depths[l]).collect();
                unknown.sort_unstable();
                (known, unknown)
            })
            .collect()
    });
    let mut distinct: Vec<Key> = keys_per_code.iter().flatten().cloned().collect();
    distinct.sort();
    distinct.dedup();
    let values: Vec<ClosedForm> = opts
        .exec
        .map(&distinct, |(known, unknown)| {
            let beta = decompose_lengths(x, known, unknown.clone())?;
            Ok(min_redundancy_for_code(&beta)?.0)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let best_value = values.iter().min().expect("at least one code").clone();
    let winners: std::collections::HashSet<&Key> =
        distinct.iter().zip(&values).filter(|(_, v)| **v == best_value).map(|(k, _)| k).collect();

    let mut candidates: BTreeMap<String, CodeTree> = BTreeMap::new();
    for (code, keys) in codes.iter().zip(&keys_per_code) {
        for (assign, key) in assignments.iter().zip(keys) {
            if winners.contains(key) {
                let labeled = label_leaves(code, assign, x);
                let is_unknown = |s: &Symbol| x.probability(s).is_none();
                let (canon, _) = labeled.canonical_anonymized(&is_unknown, "y");
                candidates.entry(canon.to_string()).or_insert(canon);
            }
        }
    }
    let (_, code) = candidates.into_iter().next().expect("a winning code");
    let result = evaluate_labeled(x, &code)?;
    debug_assert_eq!(result.value, best_value);
    Ok(result)
}

fn label_leaves(code: &CodeTree, assign: &[u8], x: &SubSource) -> CodeTree {
    let names: HashMap<usize, Symbol> =
        assign.iter().zip(x.symbols()).map(|(&leaf, s)| (leaf as usize, s.clone())).collect();
    let mut idx = 0;
    code.relabel(&mut |_| {
        let out = names.get(&idx).cloned().unwrap_or_else(|| Symbol::indexed("u", idx));
        idx += 1;
        out
    })
}

/// Alphabet sizes admissible for `x` when sizes up to `n` are allowed.
fn admissible_sizes(x: &SubSource, n: usize) -> Vec<usize> {
    if x.is_complete() {
        if x.len() >= 2 && x.len() <= n {
            vec![x.len()]
        } else {
            Vec::new()
        }
    } else {
        ((x.len() + 1).max(2)..=n).collect()
    }
}

/// Least redundancy over sources of 2 up to `n` symbols containing `x`.
pub fn r_min_upto(x: &SubSource, n: usize) -> Result<BoundResult> {
    r_min_upto_with(x, n, OracleOptions::default())
}

pub fn r_min_upto_with(x: &SubSource, n: usize, opts: OracleOptions) -> Result<BoundResult> {
    let sizes = admissible_sizes(x, n);
    if sizes.is_empty() {
        return Err(Error::Precondition(format!(
            "no alphabet of at most {n} symbols can contain the {} known symbols (sum {})",
            x.len(),
            x.total()
        )));
    }
    let results = sizes.into_iter().map(|k| r_min_n_with(x, k, opts)).collect::<Result<Vec<_>>>()?;
    Ok(select_best(results).expect("non-empty"))
}

/// The general bound by exhaustive enumeration up to `T(X)` symbols.
pub fn r_min_star_oracle(x: &SubSource) -> Result<BoundResult> {
    r_min_star_oracle_with(x, OracleOptions::default())
}

pub fn r_min_star_oracle_with(x: &SubSource, opts: OracleOptions) -> Result<BoundResult> {
    if x.is_empty() {
        return Ok(zero_bound());
    }
    let t = threshold(x)?;
    if t > DEFAULT_CAP && !opts.allow_above_cap {
        return Err(Error::ThresholdTooLarge { threshold: t, cap: DEFAULT_CAP });
    }
    r_min_upto_with(x, t, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn known(ps: &[(i64, i64)]) -> SubSource {
        SubSource::known(&ps.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>()).unwrap()
    }

    fn cf(q: Rational) -> ClosedForm {
        ClosedForm::from_rational(q)
    }

    fn log2(n: i64, d: i64) -> ClosedForm {
        ClosedForm::log2(&rat(n, d)).unwrap()
    }

    #[test]
    fn decompositions() {
        let t: CodeTree = "[a1,[a2,a3]]".parse().unwrap();
        let b = decompose(&SubSource::empty(), &t, &[]).unwrap();
        assert!(b.beta0.is_zero());
        assert_eq!(b.beta_unknown, vec![1, 2, 2]);
        assert_eq!(b.beta_t, int(1));
        let (v, w) = min_redundancy_for_code(&b).unwrap();
        assert!(v.is_zero());
        assert_eq!(w.unwrap(), vec![rat(1, 2), rat(1, 4), rat(1, 4)]);

        let t: CodeTree = "[x1,y0]".parse().unwrap();
        let x = known(&[(1, 3)]);
        let b = decompose(&x, &t, &[0]).unwrap();
        assert_eq!(b.beta0, &cf(rat(1, 3)) + &log2(1, 3).scale(&rat(1, 3)));
        assert_eq!(b.beta_unknown, vec![1]);
        assert_eq!(b.beta_t, rat(2, 3));
        let (v, w) = min_redundancy_for_code(&b).unwrap();
        // 1/3·(1 + log2 1/3) + 2/3·(1 + log2 2/3) = 5/3 − log2 3
        assert_eq!(v, &cf(rat(5, 3)) - &log2(3, 1));
        assert_eq!(v.to_decimal(4), "0.0817");
        assert_eq!(w.unwrap(), vec![rat(2, 3)]);

        let t: CodeTree = "[x1,x2]".parse().unwrap();
        let x = known(&[(49, 100), (1, 2)]);
        let b = decompose(&x, &t, &[0, 1]).unwrap();
        assert_eq!(b.beta_t, rat(1, 100));
        assert!(matches!(min_redundancy_for_code(&b), Err(Error::Structural(_))));
        assert!(matches!(decompose(&x, &t, &[1, 1]), Err(Error::Precondition(_))));
        assert!(matches!(decompose(&x, &t, &[0, 2]), Err(Error::Precondition(_))));

        let full = known(&[(1, 2), (1, 2)]);
        let b = decompose(&full, &t, &[0, 1]).unwrap();
        let (v, w) = min_redundancy_for_code(&b).unwrap();
        assert_eq!(v, b.beta0);
        assert!(w.is_none());
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(&known(&[(1, 100)])).unwrap(), 100);
        assert_eq!(threshold(&known(&[(2, 5)])).unwrap(), 3);
        assert_eq!(threshold(&known(&[(2, 5), (2, 5)])).unwrap(), 3);
        assert_eq!(threshold(&known(&[(1, 2), (1, 2)])).unwrap(), 2);
        assert!(threshold(&SubSource::empty()).is_err());
    }

    #[test]
    fn fixed_size_bounds() {
        assert!(r_min_n(&SubSource::empty(), 2).unwrap().value.is_zero());
        assert!(matches!(r_min_n(&known(&[(1, 2), (1, 2)]), 3), Err(Error::Precondition(_))));
        assert!(matches!(r_min_n(&known(&[(1, 4)]), 1), Err(Error::Precondition(_))));
        assert!(matches!(r_min_n(&known(&[(1, 4), (1, 4)]), 2), Err(Error::Precondition(_))));
        assert!(matches!(r_min_n(&known(&[(1, 4)]), 9), Err(Error::CapExceeded { .. })));

        let x = known(&[(2, 5), (2, 5)]);
        let r = r_min_n(&x, 3).unwrap();
        assert!(r.value > ClosedForm::zero());
        assert_ne!(r.best_code.canonical(), "[y1,[x1,x2]]".parse::<CodeTree>().unwrap().canonical());
        // brute force over the three-leaf shapes: x1 or x2 at the root
        let expect = &(&cf(rat(6, 5)) + &log2(2, 5).scale(&rat(4, 5))) + &log2(4, 5).scale(&rat(1, 5));
        assert_eq!(r.value, expect);
        assert!(r.check_tightness(&x).unwrap());
    }

    #[test]
    fn complete_sub_source_uses_direct_redundancy() {
        let x = known(&[(1, 2), (1, 4), (1, 4)]);
        let r = r_min_upto(&x, 5).unwrap();
        assert!(r.value.is_zero());
        assert!(r.witness.is_empty());
        assert!(r.check_tightness(&x).unwrap());
    }

    #[test]
    fn upto_bounds() {
        assert!(r_min_upto(&known(&[(1, 2)]), 4).unwrap().value.is_zero());
        assert!(r_min_upto(&SubSource::empty(), 5).unwrap().value.is_zero());
        let x = known(&[(49, 100)]);
        let t = threshold(&x).unwrap();
        assert_eq!(t, 3);
        let r = r_min_upto(&x, t).unwrap();
        assert_eq!(r.value.to_decimal(4), "0.0003");
        assert!(matches!(r_min_upto(&known(&[(1, 1)]), 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn oracle_general_bound() {
        assert!(r_min_star_oracle(&known(&[(1, 2)])).unwrap().value.is_zero());
        let x = known(&[(49, 100), (1, 2)]);
        let r = r_min_star_oracle(&x).unwrap();
        let expect = &(&cf(rat(49, 50)) + &log2(7, 10).scale(&rat(49, 50))) - &log2(5, 1).scale(&rat(1, 50));
        assert_eq!(r.value, expect);
        assert!(r.check_tightness(&x).unwrap());
        assert!(matches!(r_min_star_oracle(&known(&[(1, 100)])), Err(Error::ThresholdTooLarge { .. })));
        let z = r_min_star_oracle(&SubSource::empty()).unwrap();
        assert!(z.value.is_zero());
        assert!(z.check_tightness(&SubSource::empty()).unwrap());
    }

    #[test]
    fn modes_agree() {
        let x = known(&[(1, 5), (3, 10)]);
        let a = r_min_upto_with(&x, 5, OracleOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let b = r_min_upto_with(&x, 5, OracleOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(a, b);
    }
}
