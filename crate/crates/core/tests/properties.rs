use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abvar_core::classify::audit::{audit_record, sample_frobenius_polynomial, SMALL_FIELDS};
use abvar_core::classify::classify;
use abvar_core::newton::NPType;
use abvar_core::w2d::{atlas, w_stabilizer, Weighting};
use abvar_core::wpr::{angle_rank, hyperplane_rank, WeightedPermRep};

fn audit_sample(seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..count {
        let d = rng.gen_range(1..=3);
        let (p, n) = SMALL_FIELDS[rng.gen_range(0..SMALL_FIELDS.len())];
        let weil = sample_frobenius_polynomial(&mut rng, d, p, n);
        match classify(&weil) {
            Ok(rec) => {
                for issue in audit_record(&rec) {
                    failures.push(format!("#{i} {} over {p}^{n}: {issue}", weil.poly()));
                }
            }
            Err(e) => failures.push(format!("#{i} {} over {p}^{n}: {e}", weil.poly())),
        }
    }
    failures
}

#[test]
fn random_frobenius_polynomials_audit_clean() {
    let failures = audit_sample(0x5eed, 200);
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

fn atlas_pair() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=3).prop_flat_map(|d| {
        let groups = atlas(d).unwrap().subgroups.len();
        (Just(d), 0..NPType::tags(d).len(), 0..groups)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn angle_rank_is_a_w_conjugacy_invariant((d, t, h) in atlas_pair(), pick in any::<prop::sample::Index>()) {
        let np = NPType::tags(d)[t];
        let w = Weighting::from_slopes(&np.slopes(d).unwrap()).unwrap();
        let group = atlas(d).unwrap().subgroups[h].clone();
        let stab = w_stabilizer(&w);
        let g = pick.get(stab.elements());
        let before = angle_rank(&WeightedPermRep::new(w.clone(), group.clone()).unwrap()).unwrap();
        let after = angle_rank(&WeightedPermRep::new(w.clone(), group.conjugate_by(g)).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    /// Holds once complex conjugation is in the group; without it the
    /// all-ones column can fall outside the hyperplane span.
    #[test]
    fn rank_formulas_agree_with_conjugation((d, t, h) in atlas_pair()) {
        let np = NPType::tags(d)[t];
        let w = Weighting::from_slopes(&np.slopes(d).unwrap()).unwrap();
        let group = atlas(d).unwrap().subgroups[h].clone();
        prop_assume!(group.contains_iota());
        let rep = WeightedPermRep::new(w, group).unwrap();
        prop_assert_eq!(angle_rank(&rep).unwrap(), hyperplane_rank(&rep));
    }

    #[test]
    fn single_samples_audit_clean(seed in any::<u64>()) {
        let failures = audit_sample(seed, 1);
        prop_assert!(failures.is_empty(), "{}", failures.join("\n"));
    }
}
