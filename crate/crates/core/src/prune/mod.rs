//! Extended-state enumeration with exact consistency pruning.
//!
//! Starting from the known symbols alone, states are grown level by level by
//! merging two known-side elements ([`h_a`]) or a known-side element with a
//! newly drawn unknown symbol ([`h_b`]). Each merge records the inequalities
//! a Huffman code would have to satisfy; states whose inequalities are proved
//! inconsistent (with a verified certificate) are dropped. Complete states
//! (a single tree) are harvested and still extended, up to `T(X)` symbols.

pub mod state;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use state::{h_a, h_b, initial_state, omega, upsilon, AffineProb, ExtendedState, LinearInequality};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::feasibility::{build_system, check, verify, Decision};
use crate::optimize::{evaluate_labeled, select_best, threshold, zero_bound, BoundResult};
use crate::source::SubSource;

#[derive(Debug, Clone, Copy)]
pub struct PruneOptions {
    /// Merge states with identical canonical forms within each level.
    pub dedup: bool,
    pub exec: Exec,
}

impl Default for PruneOptions {
    fn default() -> Self {
        PruneOptions { dedup: true, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PruneStats {
    pub threshold: usize,
    pub levels: usize,
    /// States generated by the transition functions (after dedup).
    pub generated: usize,
    /// States dropped with a certificate that verified.
    pub pruned: usize,
    /// Infeasibility claims whose certificate failed to verify; such states
    /// are kept.
    pub unverified: usize,
    /// Complete states harvested before dedup.
    pub psi_raw: usize,
}

#[derive(Debug, Clone)]
pub struct PruneRun {
    pub psi: Vec<ExtendedState>,
    pub stats: PruneStats,
}

enum Outcome {
    Keep(ExtendedState),
    Pruned,
    Unverified(ExtendedState),
}

fn successors(st: &ExtendedState, m: usize, t: usize) -> Vec<ExtendedState> {
    let n = st.k.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(h_a(st, i, j).expect("indices in range"));
        }
    }
    if m + st.s < t {
        for i in 0..n {
            out.push(h_b(st, i).expect("index in range"));
        }
    }
    out
}

fn decide(st: ExtendedState, x: &SubSource) -> Outcome {
    let sys = build_system(&st, x);
    match check(&sys) {
        Decision::Feasible(_) => Outcome::Keep(st),
        Decision::Infeasible(cert) => match verify(&sys, &cert) {
            Ok(true) => Outcome::Pruned,
            _ => Outcome::Unverified(st),
        },
    }
}

fn dedup_states(states: Vec<ExtendedState>) -> Vec<ExtendedState> {
    let mut seen = BTreeMap::new();
    states.into_iter().filter(|st| seen.insert(st.key(), ()).is_none()).collect()
}

/// Runs the enumeration and returns the harvested complete states `Ψ`.
pub fn run_algorithm3(x: &SubSource) -> Result<PruneRun> {
    run_algorithm3_with(x, PruneOptions::default())
}

pub fn run_algorithm3_with(x: &SubSource, opts: PruneOptions) -> Result<PruneRun> {
    let t = threshold(x)?;
    let m = x.len();
    let mut stats = PruneStats { threshold: t, ..Default::default() };
    let mut psi = Vec::new();
    let mut frontier = vec![initial_state(x)?];
    while !frontier.is_empty() {
        let mut children = opts.exec.flat_map(&frontier, |st| successors(st, m, t));
        if opts.dedup {
            children = dedup_states(children);
        }
        stats.generated += children.len();
        let outcomes = opts.exec.map(&children, |st| decide(st.clone(), x));
        let mut next = Vec::with_capacity(outcomes.len());
        for outcome in outcomes {
            match outcome {
                Outcome::Keep(st) => next.push(st),
                Outcome::Pruned => stats.pruned += 1,
                Outcome::Unverified(st) => {
                    stats.unverified += 1;
                    next.push(st);
                }
            }
        }
        let complete: Vec<ExtendedState> =
            next.iter().filter(|st| st.is_complete() && is_code_for_a_source(st, x)).cloned().collect();
        stats.psi_raw += complete.len();
        psi.extend(complete);
        stats.levels += 1;
        frontier = next;
    }
    if opts.dedup {
        psi = dedup_states(psi);
    }
    Ok(PruneRun { psi, stats })
}

// A single tree over the known symbols alone is not a code of any source
// while mass is left over; it is still extended, but never harvested.
fn is_code_for_a_source(st: &ExtendedState, x: &SubSource) -> bool {
    st.s > 0 || x.remaining().is_zero()
}

/// The bound of a complete state, or `None` when its code has no unknown
/// leaf to carry the remaining mass.
pub fn evaluate_state(st: &ExtendedState, x: &SubSource) -> Result<Option<BoundResult>> {
    let code = st.code().ok_or_else(|| Error::Structural(format!("state is not complete: {st}")))?;
    if !is_code_for_a_source(st, x) {
        return Ok(None);
    }
    evaluate_labeled(x, code).map(Some)
}

/// Least redundancy of a Huffman code over all sources containing `x`.
pub fn r_min_star(x: &SubSource) -> Result<BoundResult> {
    r_min_star_with(x, PruneOptions::default()).map(|(r, _)| r)
}

pub fn r_min_star_with(x: &SubSource, opts: PruneOptions) -> Result<(BoundResult, PruneRun)> {
    if x.is_empty() {
        let run = PruneRun { psi: Vec::new(), stats: PruneStats::default() };
        return Ok((zero_bound(), run));
    }
    if x.is_complete() && x.len() < 2 {
        return Err(Error::Precondition("a single symbol of probability 1 has no binary code".into()));
    }
    let run = run_algorithm3_with(x, opts)?;
    let values = opts.exec.map(&run.psi, |st| evaluate_state(st, x));
    let mut candidates = Vec::with_capacity(values.len());
    for v in values {
        candidates.extend(v?);
    }
    let best = select_best(candidates)
        .ok_or_else(|| Error::Invariant(format!("no admissible code for {:?}", x.entries())))?;
    Ok((best, run))
}

/// One line per member of `Ψ`: canonical tree, `s`, `|Z|`, bound (or `-`).
pub fn dump_psi(run: &PruneRun, x: &SubSource, digits: usize) -> Result<String> {
    let mut out = String::new();
    for st in &run.psi {
        let code = st.code().expect("complete state");
        let value = match evaluate_state(st, x)? {
            Some(r) => r.value.to_decimal(digits),
            None => "-".into(),
        };
        out.push_str(&format!("{}\t{}\t{}\t{}\n", code.canonical_string(), st.s, st.z.len(), value));
    }
    Ok(out)
}
