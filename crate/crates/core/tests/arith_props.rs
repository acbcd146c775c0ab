use lresonance::arith::{batch_character, factorize, is_fundamental_discriminant, kronecker, orthogonality_mass_of};
use lresonance::summation::NeumaierSum;
use proptest::prelude::*;

fn discriminant() -> impl Strategy<Value = i64> {
    (-200_000i64..200_000).prop_filter("fundamental", |&d| d != 0 && is_fundamental_discriminant(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kronecker_completely_multiplicative(d in discriminant(), m in 1u64..5000, n in 1u64..5000) {
        prop_assert_eq!(kronecker(d, m * n).unwrap(), kronecker(d, m).unwrap() * kronecker(d, n).unwrap());
    }

    #[test]
    fn kronecker_vanishes_off_coprime(d in discriminant(), n in 1u64..100_000) {
        let g = lresonance::arith::factor::gcd_u64(d.unsigned_abs(), n);
        prop_assert_eq!(kronecker(d, n).unwrap() == 0, g > 1);
    }

    #[test]
    fn kronecker_is_periodic_mod_abs_d(d in discriminant(), n in 1u64..100_000) {
        prop_assert_eq!(kronecker(d, n).unwrap(), kronecker(d, n + d.unsigned_abs()).unwrap());
    }

    #[test]
    fn batch_agrees_with_scalar(ds in proptest::collection::vec(discriminant(), 1..50), n in 1u64..1_000_000) {
        let b = batch_character(&ds, n).unwrap();
        for (&d, &v) in ds.iter().zip(&b) {
            prop_assert_eq!(v, kronecker(d, n).unwrap());
        }
    }

    #[test]
    fn mass_is_multiplicative_on_coprimes(m in 1u64..10_000, n in 1u64..10_000) {
        prop_assume!(lresonance::arith::factor::gcd_u64(m, n) == 1);
        let lhs = orthogonality_mass_of(m * n).unwrap();
        let rhs = orthogonality_mass_of(m).unwrap() * orthogonality_mass_of(n).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn factorization_round_trips(n in 1u64..1u64 << 44) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), Some(n as u128));
    }

    #[test]
    fn split_merge_matches_single_pass(xs in proptest::collection::vec(-1e6f64..1e6, 0..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let whole: NeumaierSum = xs.iter().copied().collect();
        let mut a: NeumaierSum = xs[..cut].iter().copied().collect();
        let b: NeumaierSum = xs[cut..].iter().copied().collect();
        a.merge(&b);
        prop_assert!((a.value() - whole.value()).abs() <= whole.rounding_bound(1e6) + 1e-9);
    }
}
