use num_traits::{One, Zero};
use proptest::prelude::*;

use huffbound::exactnum::{int, rat, Rational};
use huffbound::feasibility::{build_system, check, verify, Decision, LinearSystem};
use huffbound::prune::{h_a, h_b, initial_state};
use huffbound::SubSource;

const BOX: i64 = 10_000;

/// Solves a square system exactly; `None` when singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n, k - 1)
                .into_iter()
                .filter(move |rest| rest.iter().all(|&r| r > first))
                .map(move |rest| std::iter::once(first).chain(rest).collect())
        })
        .collect()
}

/// Feasibility by vertex enumeration of the system intersected with a large
/// box (small integer data keeps every relevant vertex well inside it).
fn feasible_by_vertices(sys: &LinearSystem) -> bool {
    let d = sys.d;
    let mut rows = sys.rows.clone();
    let mut rhs = sys.rhs.clone();
    for k in 0..d {
        for sign in [1, -1] {
            let mut row = vec![Rational::zero(); d];
            row[k] = int(sign);
            rows.push(row);
            rhs.push(int(BOX));
        }
    }
    if d == 0 {
        return rhs.iter().all(|b| *b >= Rational::zero());
    }
    subsets(rows.len(), d).into_iter().any(|pick| {
        let a = pick.iter().map(|&i| rows[i].clone()).collect();
        let b = pick.iter().map(|&i| rhs[i].clone()).collect();
        solve(a, b).is_some_and(|x| {
            rows.iter().zip(&rhs).all(|(row, b)| row.iter().zip(&x).fold(Rational::zero(), |s, (p, q)| s + p * q) <= *b)
        })
    })
}

fn system() -> impl Strategy<Value = LinearSystem> {
    (0usize..=3).prop_flat_map(|d| {
        prop::collection::vec((prop::collection::vec(-2i64..=2, d), -3i64..=3), 0..7).prop_map(move |rows| {
            let mut sys = LinearSystem::new(d);
            for (row, b) in rows {
                sys.push(row.into_iter().map(int).collect(), int(b)).unwrap();
            }
            sys
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decision_agrees_with_vertex_enumeration(sys in system()) {
        let decision = check(&sys);
        prop_assert_eq!(decision.is_feasible(), feasible_by_vertices(&sys));
        match decision {
            Decision::Feasible(x) => prop_assert!(sys.satisfied_by(&x)),
            Decision::Infeasible(cert) => prop_assert!(verify(&sys, &cert).unwrap()),
        }
    }

    #[test]
    fn perturbed_certificates_are_rejected(sys in system(), k in 0usize..7) {
        if let Decision::Infeasible(mut cert) = check(&sys) {
            let k = k % cert.lambda.len();
            cert.lambda[k] = -Rational::one();
            prop_assert!(!verify(&sys, &cert).unwrap());
        }
    }
}

#[test]
fn merged_equal_pair_system_is_inconsistent() {
    let x = SubSource::known(&[rat(2, 5), rat(2, 5)]).unwrap();
    let st = h_b(&h_a(&initial_state(&x).unwrap(), 0, 1).unwrap(), 0).unwrap();
    assert_eq!(st.code().unwrap().to_string(), "[[x1,x2],u0]");
    let sys = build_system(&st, &x);
    let Decision::Infeasible(cert) = check(&sys) else { panic!("expected an inconsistent system") };
    assert!(verify(&sys, &cert).unwrap());
    let zero = huffbound::feasibility::InfeasibilityCertificate { lambda: vec![Rational::zero(); sys.len()] };
    assert!(!verify(&sys, &zero).unwrap());
}

#[test]
fn initial_state_system_is_trivially_feasible() {
    let x = SubSource::known(&[rat(1, 3)]).unwrap();
    let sys = build_system(&initial_state(&x).unwrap(), &x);
    assert_eq!(sys.d, 0);
    assert_eq!(check(&sys), Decision::Feasible(vec![]));
}
