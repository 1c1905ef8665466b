//! Exact consistency decisions for the linear systems attached to extended
//! states, with infeasibility certificates that can be checked independently.
//!
//! A system `A x ≤ b` is infeasible iff some `λ ≥ 0` has `Aᵀλ = 0`,
//! `1ᵀλ = 1` and `bᵀλ < 0` (Farkas). [`check`] always returns either a
//! rational point or such a `λ`; [`verify`] re-checks a `λ` exactly.

mod simplex;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::prune::state::ExtendedState;
use crate::source::SubSource;

/// `rows[i] · x ≤ rhs[i]` over `d` free variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub d: usize,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(d: usize) -> Self {
        LinearSystem { d, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        if row.len() != self.d {
            return Err(Error::Dimension { expected: self.d, got: row.len() });
        }
        self.rows.push(row);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.d
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| dot(row, x) <= *b)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (p, q)| acc + p * q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    /// One non-negative multiplier per row of the system.
    pub lambda: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Feasible(Vec<Rational>),
    Infeasible(InfeasibilityCertificate),
}

impl Decision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible(_))
    }
}

/// Decides the system exactly.
///
/// Identical coefficient rows are collapsed to the tightest right-hand side
/// before the simplex runs; the certificate is expanded back to the original
/// rows.
pub fn check(sys: &LinearSystem) -> Decision {
    let mut groups: BTreeMap<&[Rational], usize> = BTreeMap::new();
    let mut kept: Vec<usize> = Vec::new();
    for (i, row) in sys.rows.iter().enumerate() {
        if row.iter().all(Zero::is_zero) {
            if sys.rhs[i].is_negative() {
                let mut lambda = vec![Rational::zero(); sys.len()];
                lambda[i] = Rational::one();
                return Decision::Infeasible(InfeasibilityCertificate { lambda });
            }
            continue;
        }
        match groups.get(row.as_slice()) {
            Some(&slot) => {
                if sys.rhs[i] < sys.rhs[kept[slot]] {
                    kept[slot] = i;
                }
            }
            None => {
                groups.insert(row, kept.len());
                kept.push(i);
            }
        }
    }
    let rows: Vec<Vec<Rational>> = kept.iter().map(|&i| sys.rows[i].clone()).collect();
    let rhs: Vec<Rational> = kept.iter().map(|&i| sys.rhs[i].clone()).collect();
    match simplex::phase_one(sys.d, &rows, &rhs) {
        simplex::PhaseOne::Feasible(x) => {
            debug_assert!(sys.satisfied_by(&x));
            Decision::Feasible(x)
        }
        simplex::PhaseOne::Infeasible(reduced) => {
            let total: Rational = reduced.iter().fold(Rational::zero(), |a, v| a + v);
            let mut lambda = vec![Rational::zero(); sys.len()];
            for (&i, l) in kept.iter().zip(reduced) {
                lambda[i] = l / &total;
            }
            Decision::Infeasible(InfeasibilityCertificate { lambda })
        }
    }
}

/// Exact check of `λ ≥ 0`, `Aᵀλ = 0`, `1ᵀλ = 1` and `−bᵀλ > 0`.
pub fn verify(sys: &LinearSystem, cert: &InfeasibilityCertificate) -> Result<bool> {
    if cert.lambda.len() != sys.len() {
        return Err(Error::Dimension { expected: sys.len(), got: cert.lambda.len() });
    }
    if cert.lambda.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let sum = cert.lambda.iter().fold(Rational::zero(), |a, v| a + v);
    if !sum.is_one() {
        return Ok(false);
    }
    for k in 0..sys.d {
        let col = sys.rows.iter().zip(&cert.lambda).fold(Rational::zero(), |a, (row, l)| a + &row[k] * l);
        if !col.is_zero() {
            return Ok(false);
        }
    }
    Ok(dot(&sys.rhs, &cert.lambda).is_negative())
}

/// The consistency system of a state: the merge constraints, the mass
/// constraint `Σ p(x) + Σ_{i<s} p(u_i) ≤ 1`, and `p(u_s) = 1` substituted
/// into every constraint mentioning `u_s`. Variables are `u_0 … u_{s−1}`.
pub fn build_system(st: &ExtendedState, x: &SubSource) -> LinearSystem {
    let d = st.s;
    let mut sys = LinearSystem::new(d);
    for ineq in &st.z {
        // constant + Σ c_k u_k ≥ 0   ⇔   −Σ_{k<s} c_k u_k ≤ constant + c_s
        let mut row = vec![Rational::zero(); d];
        let mut b = ineq.constant.clone();
        for (&k, &c) in &ineq.coeffs {
            let c = Rational::from_integer(c.into());
            if k == d {
                b += c;
            } else {
                row[k] = -c;
            }
        }
        sys.rows.push(row);
        sys.rhs.push(b);
    }
    sys.rows.push(vec![Rational::one(); d]);
    sys.rhs.push(x.remaining());
    sys
}
