//! Dense-tableau Phase-I simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

pub(super) enum PhaseOne {
    Feasible(Vec<Rational>),
    /// Optimal Phase-I duals mapped back to the original rows.
    Infeasible(Vec<Rational>),
}

/// Decides `A x ≤ b` with `x` free.
///
/// Columns are `x⁺`, `x⁻`, one slack per row and one artificial per row;
/// rows with a negative right-hand side are negated so that the artificial
/// basis is feasible. At a Phase-I optimum with value `γ > 0` the duals `y`
/// satisfy `yᵀA = 0` and `y_i·sign_i ≤ 0`, so `λ_i = −y_i·sign_i` is a Farkas
/// certificate with `bᵀλ = −γ`.
pub(super) fn phase_one(d: usize, rows: &[Vec<Rational>], rhs: &[Rational]) -> PhaseOne {
    let m = rows.len();
    let slack0 = 2 * d;
    let art0 = slack0 + m;
    let width = art0 + m;

    let sign: Vec<bool> = rhs.iter().map(|b| b.is_negative()).collect();
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut beta: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = |q: &Rational| if sign[i] { -q } else { q.clone() };
        let mut row = vec![Rational::zero(); width];
        for k in 0..d {
            row[k] = flip(&rows[i][k]);
            row[d + k] = -&row[k];
        }
        row[slack0 + i] = flip(&Rational::one());
        row[art0 + i] = Rational::one();
        tab.push(row);
        beta.push(flip(&rhs[i]));
    }
    let mut basis: Vec<usize> = (art0..width).collect();

    // reduced costs: c_j − Σ_i tab[i][j] with c = 1 on artificials
    let mut cost = vec![Rational::zero(); width];
    for j in 0..art0 {
        cost[j] = -tab.iter().map(|row| &row[j]).fold(Rational::zero(), |a, v| a + v);
    }

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &beta[i] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // the Phase-I objective is bounded below by 0, so a pivot row exists
        let (r, _) = leave.expect("bounded phase-one objective");
        pivot(&mut tab, &mut beta, &mut cost, r, enter);
        basis[r] = enter;
    }

    let gamma: Rational = basis
        .iter()
        .zip(&beta)
        .filter(|(&j, _)| j >= art0)
        .fold(Rational::zero(), |a, (_, v)| a + v);
    if gamma.is_zero() {
        let mut x = vec![Rational::zero(); d];
        for (i, &j) in basis.iter().enumerate() {
            if j < d {
                x[j] += &beta[i];
            } else if j < 2 * d {
                x[j - d] -= &beta[i];
            }
        }
        PhaseOne::Feasible(x)
    } else {
        let lambda = (0..m)
            .map(|i| {
                let y = Rational::one() - &cost[art0 + i];
                if sign[i] { y } else { -y }
            })
            .collect();
        PhaseOne::Infeasible(lambda)
    }
}

fn pivot(tab: &mut [Vec<Rational>], beta: &mut [Rational], cost: &mut [Rational], r: usize, c: usize) {
    let p = tab[r][c].clone();
    if !p.is_one() {
        for v in tab[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        beta[r] /= &p;
    }
    let pivot_row = tab[r].clone();
    let pivot_beta = beta[r].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nonzero {
            row[j] -= &f * &pivot_row[j];
        }
        beta[i] -= &f * &pivot_beta;
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for &j in &nonzero {
            cost[j] -= &f * &pivot_row[j];
        }
    }
}
