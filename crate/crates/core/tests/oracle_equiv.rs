//! Index queries against brute-force window enumeration.

use proptest::prelude::*;
use rauzylab_core::complexity::{complexity_profile, recurrence_split};
use rauzylab_core::{FactorIndex, FiniteWord, WordSource};
use rauzylab_oracle as oracle;

fn word_strategy(max_len: usize) -> impl Strategy<Value = FiniteWord> {
    (2u8..=3u8, 1usize..max_len).prop_flat_map(|(b, len)| {
        proptest::collection::vec(0u8..b, len)
            .prop_map(move |letters| FiniteWord::new(letters, b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distinct_counts_match(w in word_strategy(220)) {
        let ix = FactorIndex::build(&w).unwrap();
        for n in 1..=w.len() {
            prop_assert_eq!(ix.distinct_count(n), oracle::distinct_count(w.letters(), n));
        }
    }

    #[test]
    fn repetition_matches(w in word_strategy(160)) {
        let ix = FactorIndex::build(&w).unwrap();
        for n in 1..w.len() {
            prop_assert_eq!(ix.repetition(n).unwrap(), oracle::repetition(w.letters(), n));
        }
    }

    #[test]
    fn extensions_and_occurrences_match(w in word_strategy(120)) {
        let ix = FactorIndex::build(&w).unwrap();
        for n in 1..=w.len().min(12) {
            for f in ix.factors_at(n).unwrap() {
                prop_assert_eq!(
                    ix.occurrences(&f.factor),
                    oracle::occurrences(w.letters(), &f.factor)
                );
                prop_assert_eq!(
                    ix.right_extensions(&f.factor),
                    oracle::right_extensions(w.letters(), &f.factor)
                );
                prop_assert_eq!(
                    ix.left_extensions(&f.factor),
                    oracle::left_extensions(w.letters(), &f.factor)
                );
            }
        }
    }

    #[test]
    fn special_sets_match(w in word_strategy(120)) {
        let ix = FactorIndex::build(&w).unwrap();
        for n in 1..=w.len().min(10) {
            let rs: Vec<Vec<u8>> = oracle::right_special(w.letters(), n).into_iter().collect();
            prop_assert_eq!(ix.right_special_at(n), rs);
            let ls: Vec<Vec<u8>> = oracle::left_special(w.letters(), n).into_iter().collect();
            prop_assert_eq!(ix.left_special_at(n), ls);
        }
    }

    #[test]
    fn splits_match(w in word_strategy(120)) {
        let ix = FactorIndex::build(&w).unwrap();
        for n in 1..=w.len() / 4 {
            let split = recurrence_split(&ix, n, 4).unwrap();
            prop_assert_eq!(split.s as usize, oracle::split_s(w.letters(), n));
        }
    }

    #[test]
    fn prefix_of_longer_prefix(w in word_strategy(150), extra in 1usize..60) {
        // materializations of the same periodic source are nested
        let src = WordSource::periodic(w.clone()).unwrap();
        let short = src.materialize(w.len()).unwrap();
        let long = src.materialize(w.len() + extra).unwrap();
        prop_assert_eq!(short.letters(), &long.letters()[..w.len()]);
    }
}

#[test]
fn corpus_profiles_match_naive() {
    let specs = [
        "subst:0->01,1->0",
        "subst:0->01,1->10",
        "subst:0->01,1->02,2->0",
        "sturmian:2,2,rep",
        "sturmian:1,3,rep",
        "periodic:0110",
        "eventually:11010|0110",
        "rational:1/7@10",
        "concat:11|subst:0->01,1->0",
        "subst:0->0000001,1->000000001",
    ];
    for spec in specs {
        let w = WordSource::parse(spec).unwrap().materialize(1500).unwrap();
        let ix = FactorIndex::build(&w).unwrap();
        let profile = complexity_profile(&ix, 25).unwrap();
        for n in 1..=25 {
            assert_eq!(
                profile.p[n],
                oracle::distinct_count(w.letters(), n),
                "{spec}: p({n})"
            );
            assert_eq!(profile.r[n], oracle::repetition(w.letters(), n), "{spec}: r({n})");
            assert_eq!(
                profile.right_special_count[n] as usize,
                oracle::right_special(w.letters(), n).len(),
                "{spec}: rs({n})"
            );
            assert_eq!(
                profile.left_special_count[n] as usize,
                oracle::left_special(w.letters(), n).len(),
                "{spec}: ls({n})"
            );
            if let Some(r) = profile.r[n] {
                assert!(profile.p[n] >= r as u64, "{spec}: p >= r at {n}");
            }
        }
    }
}

#[test]
fn repetition_undefined_at_horizon() {
    // all windows distinct: no repetition anywhere
    let w = FiniteWord::from_digit_str("0123456789").unwrap();
    let ix = FactorIndex::build(&w).unwrap();
    for n in 1..w.len() {
        assert_eq!(ix.repetition(n).unwrap(), None);
    }
}
