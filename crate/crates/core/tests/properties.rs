//! Cross-module invariants at random positions.

use fibseries::engine::{coefficient, trace, Subintervals};
use fibseries::expand::{expand_with, Budget};
use fibseries::fib::{fib, locate, NaturalIndex};
use fibseries::oracle::{product_expand_raw, PartitionOracle};
use fibseries::{Coeff, Sign, StepCase};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::sync::OnceLock;

fn reference() -> &'static Vec<i64> {
    static R: OnceLock<Vec<i64>> = OnceLock::new();
    R.get_or_init(|| product_expand_raw(200_000))
}

fn big_below(limit: &BigUint, seed: &[u8]) -> BigUint {
    BigUint::from_bytes_le(seed) % limit
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn engine_matches_product(m in 0u64..=200_000) {
        prop_assert_eq!(coefficient(&m.into()).value() as i64, reference()[m as usize]);
    }

    #[test]
    fn engine_matches_tally(m in 0u64..=5000) {
        let t = PartitionOracle::default().tally(m).unwrap();
        prop_assert_eq!(t.difference(), coefficient(&m.into()).value() as i64);
    }

    #[test]
    fn expansion_prefix_matches_engine(n in 0usize..20_000) {
        let arr = expand_with(n, Budget::unlimited()).unwrap();
        prop_assert_eq!(arr[n], coefficient(&NaturalIndex::from(n)));
    }

    // identities at intervals far beyond dense expansion
    #[test]
    fn interval_identities_at_scale(n in 30usize..600, seed in proptest::collection::vec(any::<u8>(), 1..128)) {
        let s = Subintervals::new(n).unwrap();
        let f_n = fib(n);
        let f_n2 = fib(n - 2);
        let f_n3 = fib(n - 3);

        let width = s.mid.end.checked_sub(&s.mid.start).unwrap();
        let m = &s.mid.start + &NaturalIndex::from(big_below(width.as_biguint(), &seed));
        prop_assert_eq!(coefficient(&m), Coeff::Zero);
        prop_assert_eq!(s.case_of(&m), Some(StepCase::Mid));

        let j = NaturalIndex::from(big_below(f_n3.as_biguint(), &seed));
        let high = &(&f_n + &f_n2) + &j;
        prop_assert_eq!(coefficient(&high), coefficient(&j));

        let low_width = f_n3.checked_sub(&NaturalIndex::from(1u64)).unwrap();
        let j = NaturalIndex::from(big_below(low_width.as_biguint(), &seed));
        let low = &f_n + &j;
        let mirror = f_n3.checked_sub(&NaturalIndex::from(2u64)).unwrap().checked_sub(&j).unwrap();
        prop_assert_eq!(coefficient(&low), Sign::power_of_minus_one(n - 1) * coefficient(&mirror));

        for m in [m, high, low] {
            prop_assert!(trace(&m).len() <= locate(&m).unwrap());
        }
    }
}
