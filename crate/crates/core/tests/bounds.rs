use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use huffbound::exactnum::{rat, ClosedForm, Rational};
use huffbound::huffman::huffman_redundancy;
use huffbound::optimize::{r_min_star_oracle, r_min_upto, threshold};
use huffbound::prune::r_min_star;
use huffbound::{Source, SubSource, Symbol};

fn small_sub_source(max_t: usize) -> impl Strategy<Value = SubSource> {
    prop::collection::vec((1i64..12, 2i64..13), 1..=3)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n.min(d - 1).max(1), d)).collect::<Vec<_>>())
        .prop_filter_map("valid, small threshold", move |ps| {
            let x = SubSource::known(&ps).ok()?;
            if x.is_complete() && x.len() < 2 {
                return None;
            }
            (threshold(&x).ok()? <= max_t).then_some(x)
        })
}

/// Splits `mass` into `k` positive rationals from the given weights.
fn split(mass: &Rational, weights: &[u32]) -> Vec<Rational> {
    let total: u32 = weights.iter().sum();
    weights.iter().map(|&w| mass * rat(w as i64, total as i64)).collect()
}

fn completion(x: &SubSource, ys: Vec<Rational>) -> Source {
    let mut entries = x.entries().to_vec();
    entries.extend(ys.into_iter().enumerate().map(|(i, p)| (Symbol::indexed("y", i + 1), p)));
    Source::new(entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pruned_bound_matches_exhaustive(x in small_sub_source(5)) {
        let a = r_min_star_oracle(&x).unwrap();
        let b = r_min_star(&x).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn witness_lies_on_the_bound(x in small_sub_source(6)) {
        let r = r_min_star(&x).unwrap();
        let total = r.witness.iter().fold(Rational::zero(), |a, (_, p)| a + p);
        prop_assert_eq!(total, x.remaining());
        prop_assert!(r.witness.iter().all(|(_, p)| p.is_positive() && *p <= Rational::one()));
        prop_assert!(r.check_tightness(&x).unwrap());
        prop_assert!(r.value >= ClosedForm::zero());
    }

    #[test]
    fn no_completion_beats_the_bound(
        x in small_sub_source(6),
        weights in prop::collection::vec(1u32..20, 1..6),
    ) {
        prop_assume!(!x.is_complete());
        let b = completion(&x, split(&x.remaining(), &weights));
        let r = r_min_star(&x).unwrap();
        prop_assert!(huffman_redundancy(&b).unwrap() >= r.value);
    }

    #[test]
    fn larger_alphabets_never_hurt(x in small_sub_source(4)) {
        prop_assume!(!x.is_complete());
        let lo = x.len() + 1;
        let mut prev = r_min_upto(&x, lo.max(2)).unwrap().value;
        for n in lo.max(2) + 1..=6 {
            let cur = r_min_upto(&x, n).unwrap().value;
            prop_assert!(cur <= prev);
            prev = cur;
        }
    }

    #[test]
    fn sizes_beyond_threshold_do_not_help(x in small_sub_source(4)) {
        let t = threshold(&x).unwrap();
        prop_assume!(!x.is_complete());
        let at = r_min_upto(&x, t).unwrap().value;
        prop_assert_eq!(r_min_upto(&x, t + 2).unwrap().value, at);
    }

    // a source larger than T(X) has two unknown symbols below min p(x)
    #[test]
    fn oversized_completions_have_two_small_unknowns(
        x in small_sub_source(8),
        weights in prop::collection::vec(1u32..30, 1..12),
    ) {
        prop_assume!(!x.is_complete());
        let t = threshold(&x).unwrap();
        prop_assume!(x.len() + weights.len() > t);
        let min = x.min_probability().unwrap().clone();
        let ys = split(&x.remaining(), &weights);
        prop_assert!(ys.iter().filter(|p| **p < min).count() >= 2);
    }
}

#[test]
fn reference_values() {
    let x = SubSource::known(&[rat(49, 100)]).unwrap();
    let r = r_min_star(&x).unwrap();
    let expect = &(&ClosedForm::from_rational(rat(49, 100))
        + &ClosedForm::log2(&rat(7, 10)).unwrap().scale(&rat(49, 50)))
        + &ClosedForm::log2(&rat(51, 50)).unwrap().scale(&rat(51, 100));
    assert_eq!(r.value, expect);
    assert_eq!(r.value, r_min_star_oracle(&x).unwrap().value);
    assert!(r_min_star(&SubSource::known(&[rat(1, 3)]).unwrap()).unwrap().value
        == r_min_star_oracle(&SubSource::known(&[rat(1, 3)]).unwrap()).unwrap().value);
}
