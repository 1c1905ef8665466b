//! Closed-form candidate for the bound with two known probabilities, and a
//! grid checker comparing it against the pruned enumeration.
//!
//! * `p1 + p2 = 1`: the redundancy of `[x1,x2]`.
//! * `p1 ≥ 1/2` (or `p2`): `R*({p1}) + (1 − p1)·R*({p2 / (1 − p1)})`.
//! * otherwise: the least `F` over the anchor codes `C(a, b)` with `a`, `b`
//!   the floor and ceiling of `−log2 p1`, `−log2 p2`, excluding `[x1,x2]`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactnum::{ClosedForm, Rational};
use crate::exec::Exec;
use crate::huffman::redundancy;
use crate::optimize::evaluate_labeled;
use crate::prune::{r_min_star, r_min_star_with, PruneOptions};
use crate::source::{SubSource, Symbol};
use crate::tree::CodeTree;

/// The code with `x1` at depth `a`, `x2` at depth `b`, and one unknown leaf
/// per set bit of the binary expansion of `1 − 2^-a − 2^-b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicAnchorCode {
    pub a: usize,
    pub b: usize,
    pub tree: CodeTree,
}

impl DyadicAnchorCode {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || (a == 1 && b == 1) {
            return Err(Error::Precondition(format!("no unknown capacity left for anchor ({a}, {b})")));
        }
        let top = a.max(b);
        // (1 − 2^-a − 2^-b)·2^top as an integer; bit j is a leaf at depth top − j
        let rest = (BigInt::one() << top) - (BigInt::one() << (top - a)) - (BigInt::one() << (top - b));
        let mut depths = vec![(Symbol::from("x1"), a), (Symbol::from("x2"), b)];
        let mut k = 0;
        for j in (0..top).rev() {
            if rest.bit(j as u64) {
                k += 1;
                depths.push((Symbol::indexed("y", k), top - j));
            }
        }
        Ok(DyadicAnchorCode { a, b, tree: CodeTree::from_depths(&depths)? })
    }

    /// Kraft sum of the unknown leaves.
    pub fn unknown_capacity(&self) -> Rational {
        let half = |d: usize| Rational::new(BigInt::one(), BigInt::one() << d);
        Rational::one() - half(self.a) - half(self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjectureCase {
    /// The two known probabilities sum to one.
    Complete,
    /// One known probability is at least one half.
    Dominant,
    /// Minimum over the neighbouring anchor codes.
    Anchors,
}

/// `(⌊−log2 p⌋, ⌈−log2 p⌉)` for `0 < p ≤ 1`.
fn neg_log2_bounds(p: &Rational) -> (usize, usize) {
    let q = p.recip();
    let mut k = q.to_integer().bits() as usize - 1;
    // q ≥ 1, so 2^k ≤ ⌊q⌋ ≤ q < 2^(k+1)
    while Rational::from_integer(BigInt::one() << (k + 1)) <= q {
        k += 1;
    }
    if Rational::from_integer(BigInt::one() << k) == q {
        (k, k)
    } else {
        (k, k + 1)
    }
}

fn single(p: &Rational) -> Result<ClosedForm> {
    Ok(r_min_star(&SubSource::known(std::slice::from_ref(p))?)?.value)
}

pub fn conjecture_value(p1: &Rational, p2: &Rational) -> Result<ClosedForm> {
    conjecture_eval(p1, p2).map(|(v, _)| v)
}

pub fn conjecture_eval(p1: &Rational, p2: &Rational) -> Result<(ClosedForm, ConjectureCase)> {
    let x = SubSource::known(&[p1.clone(), p2.clone()])?;
    if x.is_complete() {
        let code = CodeTree::node(CodeTree::leaf("x1"), CodeTree::leaf("x2"));
        return Ok((redundancy(&code, &x.into_source()?)?, ConjectureCase::Complete));
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (major, minor) in [(p1, p2), (p2, p1)] {
        if *major >= half {
            let rest = Rational::one() - major;
            let value = &single(major)? + &single(&(minor / &rest))?.scale(&rest);
            return Ok((value, ConjectureCase::Dominant));
        }
    }
    let (a0, a1) = neg_log2_bounds(p1);
    let (b0, b1) = neg_log2_bounds(p2);
    let mut best: Option<ClosedForm> = None;
    for a in [a0, a1] {
        for b in [b0, b1] {
            let Ok(code) = DyadicAnchorCode::new(a, b) else { continue };
            let v = evaluate_labeled(&x, &code.tree)?.value;
            if best.as_ref().is_none_or(|cur| v < *cur) {
                best = Some(v);
            }
        }
    }
    let best = best.ok_or_else(|| Error::Invariant(format!("no anchor code for ({p1}, {p2})")))?;
    Ok((best, ConjectureCase::Anchors))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub p1: Rational,
    pub p2: Rational,
    pub conjecture: ClosedForm,
    pub engine: ClosedForm,
}

#[derive(Debug, Clone, Default)]
pub struct GridReport {
    pub points: usize,
    pub mismatches: Vec<Mismatch>,
    /// States dropped with verified certificates across all engine runs.
    pub pruned: usize,
    /// Infeasibility claims whose certificate did not verify.
    pub unverified: usize,
}

impl GridReport {
    /// `p1,p2,conjecture,engine` with decimal values; header only when
    /// there are no mismatches.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("p1,p2,conjecture,engine\n");
        for m in &self.mismatches {
            let _ = writeln!(out, "{},{},{},{}", m.p1, m.p2, m.conjecture.to_decimal(digits), m.engine.to_decimal(digits));
        }
        out
    }
}

/// Points `(p1, p2)` with both coordinates in `lo, lo + step, …, ≤ hi` and
/// `p1 + p2 ≤ 1`, ordered by `(p1, p2)`.
pub fn grid_points(step: &Rational, lo: &Rational, hi: &Rational) -> Result<Vec<(Rational, Rational)>> {
    if !step.is_positive() {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    if !lo.is_positive() || *hi > Rational::one() || lo > hi {
        return Err(Error::Domain(format!("grid range [{lo}, {hi}] must lie in (0, 1]")));
    }
    let count = ((hi - lo) / step).floor().to_integer().to_usize().unwrap_or(0) + 1;
    let axis: Vec<Rational> = (0..count).map(|i| lo + step * Rational::from_integer(i.into())).collect();
    let mut out = Vec::new();
    for p1 in &axis {
        for p2 in &axis {
            if p1 + p2 <= Rational::one() {
                out.push((p1.clone(), p2.clone()));
            }
        }
    }
    Ok(out)
}

/// Compares the candidate against the pruned enumeration at every grid point.
pub fn check_grid(step: &Rational, lo: &Rational, hi: &Rational, exec: Exec) -> Result<GridReport> {
    let points = grid_points(step, lo, hi)?;
    let results = exec.map(&points, |(p1, p2)| compare(p1, p2));
    let mut report = GridReport { points: points.len(), ..GridReport::default() };
    for r in results {
        let (mismatch, pruned, unverified) = r?;
        report.mismatches.extend(mismatch);
        report.pruned += pruned;
        report.unverified += unverified;
    }
    Ok(report)
}

fn compare(p1: &Rational, p2: &Rational) -> Result<(Option<Mismatch>, usize, usize)> {
    let conjecture = conjecture_value(p1, p2)?;
    let x = SubSource::known(&[p1.clone(), p2.clone()])?;
    let opts = PruneOptions { exec: Exec::Sequential, ..PruneOptions::default() };
    let (engine, run) = r_min_star_with(&x, opts)?;
    let engine = engine.value;
    let mismatch = (conjecture != engine).then(|| Mismatch { p1: p1.clone(), p2: p2.clone(), conjecture, engine });
    Ok((mismatch, run.stats.pruned, run.stats.unverified))
}

pub fn check_point(p1: &Rational, p2: &Rational) -> Result<Option<Mismatch>> {
    compare(p1, p2).map(|(m, _, _)| m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn anchor_codes() {
        let c = DyadicAnchorCode::new(2, 3).unwrap();
        assert_eq!(c.unknown_capacity(), rat(5, 8));
        assert_eq!(c.tree.kraft_sum(), Rational::one());
        let lengths = c.tree.lengths();
        assert_eq!(lengths[&Symbol::from("x1")], 2);
        assert_eq!(lengths[&Symbol::from("x2")], 3);
        // 5/8 = 1/2 + 1/8
        assert_eq!(lengths[&Symbol::from("y1")], 1);
        assert_eq!(lengths[&Symbol::from("y2")], 3);
        assert_eq!(c.tree.leaf_count(), 4);
        assert!(DyadicAnchorCode::new(1, 1).is_err());
        assert_eq!(DyadicAnchorCode::new(1, 2).unwrap().tree.leaf_count(), 3);
    }

    #[test]
    fn log_bounds() {
        assert_eq!(neg_log2_bounds(&rat(1, 4)), (2, 2));
        assert_eq!(neg_log2_bounds(&rat(1, 5)), (2, 3));
        assert_eq!(neg_log2_bounds(&rat(49, 100)), (1, 2));
        assert_eq!(neg_log2_bounds(&rat(1, 1)), (0, 0));
        assert_eq!(neg_log2_bounds(&rat(3, 4)), (0, 1));
    }

    #[test]
    fn cases() {
        let (v, case) = conjecture_eval(&rat(1, 2), &rat(1, 2)).unwrap();
        assert!(v.is_zero());
        assert_eq!(case, ConjectureCase::Complete);

        let (v, case) = conjecture_eval(&rat(7, 10), &rat(1, 10)).unwrap();
        assert_eq!(case, ConjectureCase::Dominant);
        let expect = &single(&rat(7, 10)).unwrap() + &single(&rat(1, 3)).unwrap().scale(&rat(3, 10));
        assert_eq!(v, expect);

        let (v, case) = conjecture_eval(&rat(1, 4), &rat(1, 8)).unwrap();
        assert_eq!(case, ConjectureCase::Anchors);
        assert!(v.is_zero());

        let (v, _) = conjecture_eval(&rat(49, 100), &rat(1, 2)).unwrap();
        assert_eq!(v.to_decimal(4), "0.4293");
    }

    #[test]
    fn dyadic_anchors_are_zero_with_sibling_witness() {
        for a in 1..5usize {
            for b in 1..5usize {
                let Ok(code) = DyadicAnchorCode::new(a, b) else { continue };
                let (p1, p2) = (rat(1, 1 << a), rat(1, 1 << b));
                assert!(conjecture_value(&p1, &p2).unwrap().is_zero(), "({a}, {b})");
                let x = SubSource::known(&[p1, p2]).unwrap();
                let r = evaluate_labeled(&x, &code.tree).unwrap();
                assert!(r.value.is_zero());
                let lengths = r.best_code.lengths();
                for (leaf, p) in &r.witness {
                    assert_eq!(*p, rat(1, 1 << lengths[leaf]));
                }
            }
        }
    }

    #[test]
    fn small_grid_matches_engine() {
        let report = check_grid(&rat(1, 10), &rat(1, 10), &rat(9, 10), Exec::default()).unwrap();
        assert_eq!(report.points, 45);
        assert!(report.mismatches.is_empty(), "{}", report.to_csv(6));
        assert_eq!(report.to_csv(6), "p1,p2,conjecture,engine\n");
        assert!(check_point(&rat(49, 100), &rat(1, 2)).unwrap().is_none());
        assert!(check_point(&rat(1, 4), &rat(1, 8)).unwrap().is_none());
    }

    #[test]
    fn grid_validation() {
        assert!(grid_points(&rat(0, 1), &rat(1, 10), &rat(1, 2)).is_err());
        assert!(grid_points(&rat(1, 10), &rat(0, 1), &rat(1, 2)).is_err());
        assert_eq!(grid_points(&rat(1, 4), &rat(1, 4), &rat(3, 4)).unwrap().len(), 6);
    }
}
