use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use sumset_density::greedy;
use sumset_density::oracle::{naive_greedy, naive_jfold, naive_sumset};
use sumset_density::{DensityTarget, FiniteSet, GroundSet, IrrationalNumber, PeriodicSet};

const DIGITS: u32 = 50;

/// `nθ · 10^DIGITS` truncated, from a 60-digit decimal expansion of √d.
/// Returns `None` when the expansion cannot decide the floor.
fn decimal_floor(theta: &IrrationalNumber, n: u64) -> Option<(BigInt, BigInt)> {
    let (u, v, w, d) = theta.parts();
    let guard = BigInt::from(10u32).pow(10);
    let scale = BigInt::from(10u32).pow(DIGITS) * &guard;
    let root = (BigInt::from(d) * &scale * &scale).sqrt();
    let n = BigInt::from(n);
    let numer = &n * BigInt::from(u) * &scale + &n * BigInt::from(v) * &root;
    let value = numer.div_floor(&BigInt::from(w));
    let (int, frac) = value.div_mod_floor(&scale);
    // the expansion is off by at most |nv| units in the last place
    let slack = (&n * BigInt::from(v)).abs() + 2;
    if frac < slack || &scale - &frac < slack {
        return None;
    }
    Some((int, frac / guard))
}

fn theta_strategy() -> impl Strategy<Value = IrrationalNumber> {
    prop_oneof![
        Just(IrrationalNumber::sqrt(2).unwrap()),
        Just(IrrationalNumber::sqrt(3).unwrap()),
        Just(IrrationalNumber::golden_ratio()),
        (1i64..50, 1i64..20, 1i64..20, 2i64..500).prop_filter_map("square", |(u, v, w, d)| {
            IrrationalNumber::new(u, v, w, d).ok()
        }),
    ]
}

#[test]
fn floor_mul_matches_decimal_oracle() {
    let thetas = [
        IrrationalNumber::sqrt(2).unwrap(),
        IrrationalNumber::sqrt(3).unwrap(),
        IrrationalNumber::golden_ratio(),
    ];
    for theta in &thetas {
        for n in (1..=1_000_000u64).step_by(97).chain(999_000..=1_000_000) {
            let (int, _) = decimal_floor(theta, n).expect("50 digits decide the floor");
            assert_eq!(
                BigInt::from(theta.floor_mul(n).unwrap()),
                int,
                "{theta} n={n}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frac_compare_agrees_with_decimal_oracle(theta in theta_strategy(), n in 1u64..1_000_000, p in 1u64..1000, q in 1u64..1000) {
        prop_assume!(p < q);
        let t = DensityTarget::new(p, q).unwrap();
        let decided = decimal_floor(&theta, n);
        prop_assume!(decided.is_some());
        let (int, frac) = decided.unwrap();
        prop_assert_eq!(theta.floor_multiple(n), int);
        let scaled_t = BigInt::from(t.numer()) * BigInt::from(10u32).pow(DIGITS) / BigInt::from(t.denom());
        let expected = if frac < scaled_t { Ordering::Less } else { Ordering::Greater };
        prop_assume!((&frac - &scaled_t).abs() > BigInt::from(1));
        prop_assert_eq!(theta.frac_compare(n, t), expected);
    }

    #[test]
    fn frac_compare_is_monotone_in_t(theta in theta_strategy(), n in 1u64..100_000, p in 1u64..200, q in 2u64..200, bump in 1u64..200) {
        prop_assume!(p < q);
        let t = DensityTarget::new(p, q).unwrap();
        let t2 = DensityTarget::new((p * 200 + bump).min(q * 200), q * 200).unwrap();
        prop_assert!(t2 >= t);
        prop_assert_ne!(theta.frac_compare(n, t), Ordering::Equal);
        if theta.frac_compare(n, t) == Ordering::Less {
            prop_assert_eq!(theta.frac_compare(n, t2), Ordering::Less);
        }
    }

    #[test]
    fn sumset_kernels_match_oracle(
        horizon in 1u64..2000,
        a in prop::collection::vec(0u64..2000, 0..120),
        b in prop::collection::vec(0u64..300, 1..=6),
        j in 1u32..=4,
    ) {
        let a: Vec<u64> = a.into_iter().filter(|&x| x <= horizon).collect();
        let set = GroundSet::from_elements(horizon, a.iter().copied()).unwrap();
        let bset = FiniteSet::new(b.clone()).unwrap();
        prop_assert_eq!(set.sumset(&bset).elements(), naive_sumset(&a, &b, horizon));
        prop_assert_eq!(set.iterated_sumset(j).unwrap().elements(), naive_jfold(&a, j, horizon));
    }

    #[test]
    fn dense_iterated_sumset_matches_oracle(horizon in 500u64..3000, seed in any::<u64>(), j in 2u32..=4) {
        // dense enough that the convolution path is taken
        let a: Vec<u64> = (0..=horizon).filter(|x| (x.wrapping_mul(seed | 1) >> 7) % 3 == 0).collect();
        let set = GroundSet::from_elements(horizon, a.iter().copied()).unwrap();
        prop_assert_eq!(set.iterated_sumset(j).unwrap().elements(), naive_jfold(&a, j, horizon));
    }

    #[test]
    fn counting_is_consistent(horizon in 1u64..3000, a in prop::collection::vec(0u64..3000, 0..300)) {
        let set = GroundSet::from_elements(horizon, a.iter().copied().filter(|&x| x <= horizon)).unwrap();
        let mut running = 0;
        prop_assert_eq!(set.counting(-5).unwrap(), 0);
        for x in 0..=horizon {
            if x >= 1 && set.contains(x) {
                running += 1;
            }
            prop_assert_eq!(set.counting(x as i64).unwrap(), running);
        }
        prop_assert!(set.counting(horizon as i64 + 1).is_err());
    }

    #[test]
    fn storage_round_trips(horizon in 0u64..1000, a in prop::collection::vec(0u64..1000, 0..100)) {
        let set = GroundSet::from_elements(horizon, a.into_iter().filter(|&x| x <= horizon)).unwrap();
        prop_assert_eq!(GroundSet::from_bytes(&set.to_bytes()).unwrap().elements(), set.elements());
        let text = set.to_text();
        prop_assert_eq!(GroundSet::read_text(text.as_bytes()).unwrap().elements(), set.elements());
    }

    #[test]
    fn greedy_is_prefix_closed(b in prop::collection::vec(0u64..8, 1..4), p in 1u64..10, q in 2u64..11, n in 20u64..200) {
        prop_assume!(p < q);
        let b = FiniteSet::new(b).unwrap();
        let alpha = DensityTarget::new(p, q).unwrap();
        let long = greedy::build_greedy(&b, alpha, 2 * n).unwrap();
        let short = greedy::build_greedy(&b, alpha, n).unwrap();
        prop_assert_eq!(long.restrict(n).unwrap().elements(), short.elements());
    }

    #[test]
    fn greedy_matches_literal_oracle(b in prop::collection::vec(0u64..8, 1..4), p in 1u64..10, q in 2u64..11) {
        prop_assume!(p < q);
        let alpha = DensityTarget::new(p, q).unwrap();
        let fast = greedy::build_greedy(&FiniteSet::new(b.clone()).unwrap(), alpha, 150).unwrap();
        prop_assert_eq!(fast.elements(), naive_greedy(&b, alpha.numer(), alpha.denom(), 150));
    }

    #[test]
    fn greedy_never_exceeds_target(b in prop::collection::vec(0u64..20, 1..5), p in 1u64..20, q in 2u64..21, horizon in 1u64..2000) {
        prop_assume!(p < q);
        let b = FiniteSet::new(b).unwrap();
        let alpha = DensityTarget::new(p, q).unwrap();
        let sums = greedy::build_greedy(&b, alpha, horizon).unwrap().sumset(&b);
        for n in 1..=horizon {
            prop_assert!(sums.counting(n as i64).unwrap() * q <= p * n);
        }
    }

    #[test]
    fn periodic_counting_matches_materialized(modulus in 1u64..40, residues in prop::collection::vec(0u64..40, 1..10), horizon in 0u64..500) {
        let residues: Vec<u64> = residues.into_iter().map(|r| r % modulus).collect();
        let set = PeriodicSet::new(modulus, residues).unwrap();
        let materialized = set.materialize(horizon);
        for x in 0..=horizon {
            prop_assert_eq!(set.counting(x as i64), materialized.counting(x as i64).unwrap());
        }
    }
}

#[test]
fn decimal_oracle_sanity() {
    let root2 = IrrationalNumber::sqrt(2).unwrap();
    let (int, frac) = decimal_floor(&root2, 1).unwrap();
    assert_eq!(int, BigInt::from(1));
    assert!(frac.to_string().starts_with("41421356237309504880"));
    assert!(!frac.is_zero());
}
