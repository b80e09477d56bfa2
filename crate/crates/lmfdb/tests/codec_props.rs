use abvar_lmfdb::{decode_code, encode_code, label_to_polynomial, IsogenyClassLabel};
use proptest::prelude::*;

const BOUND: i64 = 26 * 26 * 26 * 26;

#[test]
fn exhaustive_round_trip_within_bound() {
    for m in -BOUND..=BOUND {
        let code = encode_code(m);
        assert_eq!(decode_code(&code).unwrap(), m, "{code}");
    }
}

#[test]
fn every_short_code_is_canonical_or_rejected() {
    let mut codes: Vec<String> = vec![String::new()];
    let mut accepted = 0usize;
    for _ in 0..4 {
        codes = codes.iter().flat_map(|c| ('a'..='z').map(move |l| format!("{c}{l}"))).collect();
        for c in &codes {
            match decode_code(c) {
                Ok(v) => {
                    accepted += 1;
                    assert_eq!(&encode_code(v), c);
                }
                // only a zero digit right after the sign is refused
                Err(_) => assert!(c.starts_with("aa"), "{c}"),
            }
        }
    }
    assert_eq!(accepted, 26 + 25 * 26 + 25 * 26 * 26 + 25 * 26 * 26 * 26 + (25 + 25 * 26 + 25 * 26 * 26));
}

proptest! {
    #[test]
    fn decode_inverts_encode(m in -BOUND..=BOUND) {
        prop_assert_eq!(decode_code(&encode_code(m)).unwrap(), m);
    }

    #[test]
    fn negation_is_a_prefix(m in 1..=BOUND) {
        prop_assert_eq!(encode_code(-m), format!("a{}", encode_code(m)));
    }

    #[test]
    fn elliptic_labels_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 19, 25, 27, 32, 49, 64]),
                                  t in -16i64..=16) {
        // |a_1| <= 2 sqrt(q) keeps the class inside the Hasse interval
        prop_assume!(t * t <= 4 * q as i64);
        let label = IsogenyClassLabel::from_coefficients(1, q, &[t]);
        let parsed: IsogenyClassLabel = label.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &label);
        let weil = label_to_polynomial(&parsed).unwrap();
        prop_assert_eq!(abvar_lmfdb::polynomial_to_label(&weil).unwrap(), label);
    }
}
