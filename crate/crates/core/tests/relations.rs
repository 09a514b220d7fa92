mod common;

use common::{compare_with_naive, q, qi, random_window, tail, Q};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wkdyn::relations::*;
use wkdyn::sequence::{transitive_symbol, SeqWindow};
use wkdyn::{Ladder64, Rational};

fn window(values: Vec<Q>) -> WindowOrbit {
    WindowOrbit::new(&SeqWindow::new(BigUint::zero(), values).unwrap(), "w")
}

#[test]
fn random_pairs_match_naive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..60 {
        let k = rng.gen_range(1..=16);
        let to = rng.gen_range(0..=400u64);
        let from = rng.gen_range(0..=to);
        let len = to as usize + k + 1;
        let (a, b) = (random_window(&mut rng, len), random_window(&mut rng, len));
        compare_with_naive(&a, &b, from, to, k).unwrap_or_else(|e| panic!("case {case}: {e}"));
    }
}

#[test]
fn long_horizons_cross_segment_boundaries() {
    // Horizons spanning several internal segments, with the optimum placed
    // late so that the wave reduction has to carry it.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let len = 70_000;
    let a: Vec<Q> = (0..len).map(|_| qi(rng.gen_range(0..=1))).collect();
    let mut b: Vec<Q> = a.iter().map(|v| qi(1) - v).collect();
    b[60_000..60_012].clone_from_slice(&a[60_000..60_012]);
    let (wa, wb) = (window(a), window(b));
    let f = prox_defect(View::new(&wa), View::new(&wb), 0, 69_000, 12).unwrap();
    assert_eq!((f.time, f.bracket.lo.clone()), (60_000, Rational::zero()));
    let s = sep_sup(View::new(&wa), View::new(&wb), 0, 69_000, 12).unwrap();
    assert_eq!(s.time, 0);
}

#[test]
fn alpha_against_one_matches_naive_scan() {
    let orbit = AlphaOrbit::new(Ladder64::default_minimal(2).unwrap(), BigUint::zero());
    let a = orbit.values(0, 1200).unwrap();
    let ones = vec![qi(1); 1200];
    compare_with_naive(&a, &ones, 0, 1000, 16).unwrap();
    compare_with_naive(&a, &a[1..], 0, 1000, 9).unwrap();
}

#[test]
fn shifted_sources_read_shifted_coordinates() {
    let orbit = AlphaOrbit::new(Ladder64::default_minimal(1).unwrap(), BigUint::from(41u32));
    assert_eq!(orbit.value(0).unwrap(), q(14, 27));
    let x = FullShiftOrbit;
    let v = View::shifted(&x, 5);
    assert_eq!(v.values(0, 10).unwrap(), (5..15).map(|i| qi(i64::from(transitive_symbol(i)))).collect::<Vec<_>>());
}

fn bits(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((0i64..=2).prop_map(|v| q(v, 2)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_pair_bracket(a in bits(80), k in 1usize..=16, to in 0u64..=60) {
        let w = window(a);
        let f = prox_defect(View::new(&w), View::new(&w), 0, to, k).unwrap();
        prop_assert_eq!(f.time, 0);
        prop_assert_eq!(f.bracket.lo, Rational::zero());
        prop_assert_eq!(f.bracket.hi, tail(k));
    }

    #[test]
    fn separation_never_exceeds_diameter(a in bits(80), b in bits(80), k in 1usize..=16) {
        let (wa, wb) = (window(a), window(b));
        let s = sep_sup(View::new(&wa), View::new(&wb), 0, 60, k).unwrap();
        prop_assert!(s.bracket.lo <= qi(2) - tail(k));
        prop_assert!(s.bracket.hi <= qi(2));
    }

    #[test]
    fn longer_horizons_and_smaller_tau_keep_witnesses(a in bits(120), b in bits(120), h in 0u64..=50, extra in 0u64..=50) {
        let (wa, wb) = (window(a), window(b));
        let (va, vb) = (View::new(&wa), View::new(&wb));
        let tau = q(1, 4);
        let short = classify_pair(va, vb, &qi(1), 0, h, 8, &tau).unwrap();
        let long = classify_pair(va, vb, &qi(1), 0, h + extra, 8, &tau).unwrap();
        for label in [Label::ProximalWitnessed, Label::DeltaSeparatedWitnessed, Label::PairRecurrentWitnessed] {
            prop_assert!(!short.has(label) || long.has(label));
        }
        let tight = classify_pair(va, vb, &qi(1), 0, h, 8, &q(1, 8)).unwrap();
        prop_assert!(!tight.has(Label::ProximalWitnessed) || short.has(Label::ProximalWitnessed));
        prop_assert!(long.searches.prox.unwrap().bracket.lo <= short.searches.prox.unwrap().bracket.lo);
        prop_assert!(long.searches.sep.unwrap().bracket.lo >= short.searches.sep.unwrap().bracket.lo);
    }
}
