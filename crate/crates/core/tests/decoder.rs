use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ud_cdma::decoder::{
    fda_decode_traced, left_decode, lr_decode, quantize, residual, right_decode, sub_decode8,
    CountSplit, LeafCounts,
};
use ud_cdma::{build_codebook, fda_decode, spread, AntipodalWord, ChipVector, MlDecoder};

fn minus(bits: &[i8], positions: &[usize]) -> u32 {
    positions.iter().filter(|&&p| bits[p - 1] == -1).count() as u32
}

/// Counts read straight off a seed word (1-based positions).
fn leaf_oracle(bits: &[i8]) -> (CountSplit, LeafCounts) {
    let split = CountSplit {
        n: minus(bits, &[1, 2, 3, 4, 5, 6, 7, 8]),
        n_l: minus(bits, &[1, 2, 3, 4]),
        n_r: minus(bits, &[6, 7, 8]),
    };
    let counts = LeafCounts {
        m1: minus(bits, &[1, 2]),
        m2: minus(bits, &[4]),
        m3: minus(bits, &[3]),
        m11: minus(bits, &[1]),
        k1: minus(bits, &[6]),
        k2: minus(bits, &[8]),
        k3: minus(bits, &[7]),
    };
    (split, counts)
}

fn level2_words() -> impl Iterator<Item = (AntipodalWord, Vec<f64>)> {
    let c = build_codebook(2).unwrap();
    (0..256).map(move |i| {
        let x = AntipodalWord::from_index(8, i);
        let y = spread(&c, &x, 1.0f64).unwrap().chips;
        (x, y)
    })
}

#[test]
fn leaf_decoder_recovers_every_count() {
    for (x, y) in level2_words() {
        let (split, counts) = leaf_oracle(x.bits());
        let d = sub_decode8(&y, split).unwrap();
        assert_eq!(d.word, x.bits(), "{:?}", x.bits());
        let partial = matches!(split.n_l, 0 | 4) || matches!(split.n_r, 0 | 3);
        if !partial {
            assert_eq!(d.counts, counts);
        }
    }
}

#[test]
fn branch_decoders_on_their_own_inputs() {
    let mut seen = [0; 3];
    for (x, y) in level2_words() {
        let (s, want) = leaf_oracle(x.bits());
        let left_fixed = matches!(s.n_l, 0 | 4);
        let right_fixed = matches!(s.n_r, 0 | 3);
        if left_fixed && !right_fixed {
            let (k1, k2, k3, _) = right_decode(&y, s.n_r, want.m1, want.m2);
            assert_eq!((k1, k2, k3), (want.k1, want.k2, want.k3));
            seen[0] += 1;
        } else if right_fixed && !left_fixed {
            let (got, _) = left_decode(&y, s.n_l, want.k1, want.k2);
            assert_eq!(
                (got.m1, got.m2, got.m3, got.m11),
                (want.m1, want.m2, want.m3, want.m11)
            );
            seen[1] += 1;
        } else if !left_fixed && !right_fixed {
            assert_eq!(lr_decode(&y, s.n_l, s.n_r).0, want);
            seen[2] += 1;
        }
    }
    // C(4,k) for the left half times C(3,k) for the right, times 2 for the middle
    assert_eq!(seen, [2 * 2 * 6, 2 * 14 * 2, 2 * 14 * 6]);
}

#[test]
fn level_three_round_trip_is_exact() {
    let c = build_codebook(3).unwrap();
    for i in 0..1u64 << 17 {
        let x = AntipodalWord::from_index(17, i);
        let y = spread(&c, &x, 1.0f64).unwrap();
        assert_eq!(fda_decode(&c, &y, 1.0).unwrap().word, x, "word {i}");
    }
}

#[test]
fn level_four_random_round_trip() {
    let c = build_codebook(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..20_000 {
        let x = AntipodalWord::from_index(35, rng.random_range(0..1u64 << 35));
        let y = spread(&c, &x, 1.0f64).unwrap();
        assert_eq!(fda_decode(&c, &y, 1.0).unwrap().word, x);
    }
}

#[test]
fn splits_are_consistent_with_the_word() {
    let c = build_codebook(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2_000 {
        let x = AntipodalWord::from_index(35, rng.random_range(0..1u64 << 35));
        let y = spread(&c, &x, 1.0f64).unwrap();
        let mut trace = Vec::new();
        fda_decode_traced(&c, &y, 1.0, Some(&mut trace)).unwrap();
        for r in &trace {
            let s = r.split;
            assert_eq!(
                s.n as i32,
                (s.n_l + s.n_r) as i32 + (1 - r.middle as i32) / 2
            );
        }
        // outermost split against the word itself
        if let Some(top) = trace.first() {
            let b = x.bits();
            let count = |r: &[i8]| r.iter().filter(|&&v| v == -1).count() as u32;
            assert_eq!(top.split.n, count(b));
            assert_eq!(top.split.n_l, count(&b[..17]));
            assert_eq!(top.split.n_r, count(&b[18..]));
        }
    }
}

#[test]
fn first_quantizer_cost_law() {
    for (x, y) in level2_words() {
        let j = x.bits().iter().filter(|&&b| b == -1).count() as u32;
        let q = quantize(y[0], -8, 8, 2).unwrap();
        if j <= 4 {
            assert_eq!(q.comparisons, j + 1);
        } else {
            assert_eq!(q.comparisons, 9 - j);
        }
    }
}

#[test]
fn ml_matches_fda_without_noise() {
    let c = build_codebook(2).unwrap();
    let ml = MlDecoder::new(&c).unwrap();
    for (x, y) in level2_words() {
        let y = ChipVector::new(y).unwrap();
        assert_eq!(
            ml.decode(&y, 1.0).unwrap().word,
            fda_decode(&c, &y, 1.0).unwrap().word
        );
        assert_eq!(ml.decode(&y, 1.0).unwrap().word, x);
    }
}

#[test]
fn ml_matches_fda_on_sampled_level_three() {
    let c = build_codebook(3).unwrap();
    let ml = MlDecoder::new(&c).unwrap();
    for i in (0..1u64 << 17).step_by(1009) {
        let x = AntipodalWord::from_index(17, i);
        let y = spread(&c, &x, 1.0f64).unwrap();
        let m = ml.decode(&y, 1.0).unwrap();
        assert_eq!(m.word, x);
        assert_eq!(m.comparisons, 1 << 17);
    }
}

#[test]
fn single_precision_decodes_identically() {
    let c = build_codebook(3).unwrap();
    for i in (0..1u64 << 17).step_by(331) {
        let x = AntipodalWord::from_index(17, i);
        let y = spread(&c, &x, 1.0f32).unwrap();
        assert_eq!(fda_decode(&c, &y, 1.0f32).unwrap().word, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn ml_residual_never_exceeds_fda(idx in 0u64..256, noise in prop::collection::vec(-2.0f64..2.0, 4)) {
        let c = build_codebook(2).unwrap();
        let clean = spread(&c, &AntipodalWord::from_index(8, idx), 1.0f64).unwrap();
        let y = ChipVector::new(clean.chips.iter().zip(&noise).map(|(a, b)| a + b).collect()).unwrap();
        let f = fda_decode(&c, &y, 1.0).unwrap().word;
        let m = ud_cdma::ml_decode(&c, &y, 1.0).unwrap().word;
        prop_assert!(residual(&c, &y, &m, 1.0).unwrap() <= residual(&c, &y, &f, 1.0).unwrap());
    }

    #[test]
    fn fda_always_emits_a_word(noise in prop::collection::vec(-20.0f64..20.0, 8)) {
        let c = build_codebook(3).unwrap();
        let y = ChipVector::new(noise).unwrap();
        let out = fda_decode(&c, &y, 1.0).unwrap();
        prop_assert_eq!(out.word.len(), 17);
        prop_assert!(out.comparisons >= 1);
    }
}
