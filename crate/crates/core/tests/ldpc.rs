use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use cfidd::ldpc::{boxplus, build_parity_check, decode_boxplus, BoxPlusDecoder, FrameSource, LlrFrame};
use cfidd::rng::SimRng;
use cfidd::ParityCheck;

fn code() -> ParityCheck {
    build_parity_check(64, 32, 4).unwrap()
}

proptest! {
    #[test]
    fn encoder_is_linear(a in proptest::collection::vec(0u8..2, 32), b in proptest::collection::vec(0u8..2, 32)) {
        let pc = code();
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ca = pc.encode(&a).unwrap();
        let cb = pc.encode(&b).unwrap();
        let cs = pc.encode(&sum).unwrap();
        prop_assert!(pc.is_codeword(&ca));
        prop_assert_eq!(cs, ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect::<Vec<_>>());
        prop_assert_eq!(pc.extract_message(&ca), a);
    }

    #[test]
    fn boxplus_is_commutative_and_associative(a in -30.0f64..30.0, b in -30.0f64..30.0, c in -30.0f64..30.0) {
        prop_assert_eq!(boxplus(a, b), boxplus(b, a));
        prop_assert!((boxplus(boxplus(a, b), c) - boxplus(a, boxplus(b, c))).abs() < 1e-9);
    }

    #[test]
    fn boxplus_magnitude_and_sign(a in -30.0f64..30.0, b in -30.0f64..30.0) {
        let r = boxplus(a, b);
        prop_assert!(r.abs() <= a.abs().min(b.abs()) + 1e-12);
        if a != 0.0 && b != 0.0 && r != 0.0 {
            prop_assert_eq!(r.signum(), a.signum() * b.signum());
        }
    }

    #[test]
    fn alist_round_trip(seed in 0u64..50) {
        let pc = build_parity_check(24, 12, seed).unwrap();
        let back = ParityCheck::from_alist(&pc.to_alist()).unwrap();
        prop_assert_eq!(back.to_dense(), pc.to_dense());
    }
}

#[test]
fn saturated_codewords_decode_without_errors() {
    let pc = build_parity_check(256, 128, 1).unwrap();
    let mut dec = BoxPlusDecoder::new(&pc);
    let mut rng = SimRng::seed_from_u64(9);
    let mut errors = 0;
    for _ in 0..10_000 {
        let msg: Vec<u8> = (0..pc.k()).map(|_| rng.random_range(0..2u8)).collect();
        let word = pc.encode(&msg).unwrap();
        let frame = LlrFrame::from_bits(&word, 40.0, 0, FrameSource::Cpu);
        let out = dec.decode(frame.values(), 10, None);
        errors += pc.extract_message(&out.hard_bits).iter().zip(&msg).filter(|(a, b)| a != b).count();
    }
    assert_eq!(errors, 0);
}

#[test]
fn weight_three_toy_code_has_repeated_columns() {
    // Only four distinct weight-3 columns exist over four checks, so the
    // (8,4) construction always contains a weight-2 codeword.
    let pc = build_parity_check(8, 4, 1).unwrap();
    let mut cols = pc.columns().to_vec();
    cols.iter_mut().for_each(|c| c.sort());
    cols.sort();
    cols.dedup();
    assert!(cols.len() <= 4);
}

#[test]
fn single_flip_on_toy_code_matches_maximum_likelihood() {
    // Extended Hamming (8,4,4): every single flip has a unique ML codeword.
    let pc = ParityCheck::from_columns(
        4,
        vec![vec![0, 1, 2, 3], vec![0, 1, 3], vec![0, 2, 3], vec![0, 3], vec![1, 2, 3], vec![1, 3], vec![2, 3], vec![3]],
    )
    .unwrap();
    assert!(pc.is_full_rank());
    let codewords: Vec<Vec<u8>> = (0..16u32)
        .map(|m| pc.encode(&(0..4).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>()).unwrap())
        .collect();
    for word in &codewords {
        for flip in 0..8 {
            let mut llr: Vec<f64> = word.iter().map(|&b| if b == 0 { 8.0 } else { -8.0 }).collect();
            llr[flip] = -llr[flip];
            let ml = codewords
                .iter()
                .max_by(|a, b| {
                    let score = |c: &Vec<u8>| c.iter().zip(&llr).map(|(&x, l)| if x == 0 { *l } else { -l }).sum::<f64>();
                    score(a).total_cmp(&score(b))
                })
                .unwrap();
            let out = decode_boxplus(&pc, &LlrFrame::new(llr.clone(), 0, FrameSource::Cpu), 50, None);
            assert_eq!(&out.hard_bits, ml);
            assert_eq!(&out.hard_bits, word);
        }
    }
}
