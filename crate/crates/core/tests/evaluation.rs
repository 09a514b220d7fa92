mod common;

use common::{a1_breakpoints, q, qi, Oracle, Q};
use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use proptest::prelude::*;
use wkdyn::sequence::{alpha, alpha_window};
use wkdyn::{BigLadder, Ladder128, Ladder64, PLFunc};

fn alpha_q(ladder: &BigLadder, i: u64) -> Q {
    alpha(ladder, &BigUint::from(i)).unwrap()
}

#[test]
fn alpha_spot_values_match_oracle() {
    let ladder = BigLadder::default_minimal(2).unwrap();
    let oracle = Oracle::new(2);
    let head: Vec<Q> = (0..10).map(|i| alpha_q(&ladder, i)).collect();
    assert_eq!(head, [0, 0, 1, 1, 1, 0, 0, 0, 1, 1].map(qi).to_vec());
    assert_eq!(alpha_q(&ladder, 40), qi(1));
    assert_eq!(alpha_q(&ladder, 41), q(14, 27));
    assert_eq!(alpha_q(&ladder, 161), qi(0));
    assert!((54..=81).all(|i| alpha_q(&ladder, i) == qi(1)));
    for i in 0..3000 {
        assert_eq!(alpha_q(&ladder, i), oracle.ainf(&qi(i as i64)), "alpha({i})");
    }
}

#[test]
fn first_maximal_run_of_ones() {
    let ladder = BigLadder::default_minimal(1).unwrap();
    let w = alpha_window(&ladder, &BigUint::from(0u32), 200).unwrap();
    let is_one = |i: usize| w.values()[i] == qi(1);
    // First maximal run of at least p1/9 = 27 ones.
    let mut i = 0;
    let (start, end) = loop {
        if is_one(i) {
            let e = (i..).take_while(|&j| is_one(j)).last().unwrap();
            if e + 1 - i >= 27 {
                break (i, e);
            }
            i = e;
        }
        i += 1;
    };
    assert_eq!((start, end), (54, 111));
    assert_eq!(w.values()[112], Oracle::new(1).ainf(&qi(112)));
    assert_eq!(w.values()[112], q(23, 27));
}

#[test]
fn alpha_far_out_matches_oracle() {
    let ladder = BigLadder::default_minimal(0).unwrap();
    let oracle = Oracle::new(5);
    let t: BigInt = BigInt::from(10).pow(30);
    for d in [0i64, 1, 7, 1000] {
        let x = Q::from_integer(&t + d);
        assert_eq!(ladder.eval_ainf(&x).unwrap(), oracle.ainf(&x));
    }
    assert!(ladder.depth() >= 4);
}

#[test]
fn a1_matches_explicit_piecewise_linear_construction() {
    let pl = PLFunc::new(a1_breakpoints()).unwrap();
    let ladder = BigLadder::default_minimal(1).unwrap();
    for h in -486..=486 {
        let t = q(h, 2);
        assert_eq!(ladder.eval_a(1, &t).unwrap(), pl.eval(&t), "a_1({t})");
    }
}

#[test]
fn fixed_width_scalars_agree_with_big_integers() {
    let big = BigLadder::default_minimal(2).unwrap();
    let l64 = Ladder64::default_minimal(2).unwrap();
    let l128 = Ladder128::default_minimal(2).unwrap();
    for t in (-129_140_163i64..=129_140_163).step_by(9_999_991) {
        for d in [1i64, 3, 7] {
            let x = wkdyn::Rational64::new(t, d);
            let want = big.eval_a(2, &q(t, d)).unwrap();
            let got = l64.eval_a(2, &x).unwrap();
            assert_eq!(q(*got.numer(), *got.denom()), want);
            let got = l128.eval_a(2, &wkdyn::Rational128::new(t as i128, d as i128)).unwrap();
            assert_eq!(Q::new((*got.numer()).into(), (*got.denom()).into()), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn level_two_matches_oracle(num in -129_140_163i64 * 5..=129_140_163 * 5, den in 1i64..=5) {
        let ladder = BigLadder::default_minimal(2).unwrap();
        let oracle = Oracle::new(2);
        let t = q(num, den);
        if t.abs() <= oracle.p[2] {
            prop_assert_eq!(ladder.eval_a(2, &t).unwrap(), oracle.a(2, &t));
        } else {
            prop_assert!(ladder.eval_a(2, &t).is_err());
        }
        prop_assert_eq!(ladder.eval_b(2, &(&t * qi(3))).unwrap(), oracle.b(2, &(&t * qi(3))));
    }

    #[test]
    fn ainf_matches_oracle(num in 0i64..=i64::MAX / 4, den in 1i64..=9) {
        let ladder = BigLadder::default_minimal(0).unwrap();
        let oracle = Oracle::new(4);
        let t = q(num, den);
        prop_assert_eq!(ladder.eval_ainf(&t).unwrap(), oracle.ainf(&t));
    }

    #[test]
    fn returns_and_rigidity_hold_on_random_points(n in 0usize..=1, t in 0i64..=243) {
        let ladder = BigLadder::default_minimal(3).unwrap();
        let oracle = Oracle::new(3);
        let p = oracle.p[n].clone();
        let t = qi(t).min(p.clone());
        let shift = qi(2) * qi(3) * &oracle.l[n + 1] * &p;
        let v = ladder.eval_ainf(&t).unwrap();
        prop_assert_eq!(ladder.eval_ainf(&(&t - &shift)).unwrap(), v.clone());
        prop_assert_eq!(ladder.eval_ainf(&(&t + &shift - qi(1))).unwrap(), v);
    }
}
