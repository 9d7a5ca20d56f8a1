mod common;

use fuzzylp::io::{parse_problem, serialize_problem};
use proptest::prelude::*;

#[test]
fn seeded_round_trip() {
    println!("{}", common::problem_file_round_trip(23, 500).unwrap());
}

proptest! {
    #[test]
    fn round_trip_is_stable(seed in any::<u64>()) {
        let (p, cfg) = common::random_problem_file(&mut common::rng(seed));
        let text = serialize_problem(&p, &cfg);
        let (q, cfg2) = parse_problem(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(&cfg2, &cfg);
    }

    #[test]
    fn membership_rows_agree_with_eval(seed in any::<u64>()) {
        prop_assert!(common::membership_row_consistency(seed, 20).is_ok());
    }
}
