//! Independent re-checks of a finished classification, and a sampler of
//! Frobenius polynomials to run them on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::intpoly::{factor_over_z, honda_tate_e, passes_trace_test, validate_weil, IntPolynomial, WeilPolynomial};
use crate::localfield::factor_over_qp;
use crate::splitting::block_cycle_types;
use crate::w2d::{w_stabilizer, SignedPerm};
use crate::wpr::{angle_rank, hyperplane_rank, WeightedPermRep};

use super::ClassRecord;

/// Prime powers `q = p^n <= 64` as `(p, n)`.
pub const SMALL_FIELDS: &[(u64, u32)] = &[
    (2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (17, 1), (19, 1), (23, 1),
    (5, 2), (3, 3), (29, 1), (31, 1), (2, 5), (37, 1), (41, 1), (43, 1), (47, 1), (7, 2), (53, 1), (59, 1), (61, 1),
    (2, 6),
];

/// `T^d P(T + q/T)` for a monic trace polynomial given by its elementary
/// symmetric coefficients `e_0 = 1, e_1, ..., e_d` (signs included).
fn lift_trace(elementary: &[BigInt], q: &BigInt) -> IntPolynomial {
    let d = elementary.len() - 1;
    let t2q = IntPolynomial::new(vec![q.clone(), BigInt::zero(), BigInt::one()]);
    elementary.iter().enumerate().fold(IntPolynomial::zero(), |acc, (j, e)| {
        acc.add(&t2q.pow((d - j) as u32).mul(&IntPolynomial::monomial(e.clone(), j)))
    })
}

/// Every irreducible factor occurs to a multiple of its Honda-Tate index,
/// i.e. the polynomial is the Frobenius polynomial of some isogeny class.
pub fn is_frobenius_polynomial(weil: &WeilPolynomial) -> bool {
    factor_over_z(weil.poly()).iter().all(|(h, mult)| match factor_over_qp(h, weil.p(), 8) {
        Ok(local) => (*mult as u32).is_multiple_of(honda_tate_e(h, &local.local_data(weil.n()))),
        Err(_) => false,
    })
}

/// Random Frobenius polynomial of dimension `d` over `F_{p^n}`: trace roots
/// drawn from `[-2 sqrt q, 2 sqrt q]`, symmetric functions rounded, and
/// the result kept once it is a genuine Weil polynomial of an isogeny class.
/// A root is repeated now and then so non-squarefree inputs show up.
pub fn sample_frobenius_polynomial<R: Rng>(rng: &mut R, d: usize, p: u64, n: u32) -> WeilPolynomial {
    let q = BigInt::from(p).pow(n);
    let bound = 2.0 * (p.pow(n) as f64).sqrt();
    loop {
        let mut roots: Vec<f64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
        if d > 1 && rng.gen_bool(0.15) {
            roots[1] = roots[0];
        }
        let mut elementary = vec![1.0f64];
        for r in &roots {
            let mut next = elementary.clone();
            next.push(0.0);
            for (k, e) in elementary.iter().enumerate() {
                next[k + 1] -= r * e;
            }
            elementary = next;
        }
        let coeffs: Vec<BigInt> = elementary.iter().map(|e| BigInt::from(e.round() as i64)).collect();
        let poly = lift_trace(&coeffs, &q);
        if !passes_trace_test(&poly, &q) {
            continue;
        }
        let Ok(weil) = validate_weil(&poly, p, n) else { continue };
        if is_frobenius_polynomial(&weil) {
            return weil;
        }
    }
}

/// `sum_k f_k r^k m'^(deg f - k)` reduced modulo `m`: zero exactly when
/// `f(r / m') = 0` in `Q[T]/(m)`.
fn homogenized_mod(f: &IntPolynomial, r: &IntPolynomial, dm: &IntPolynomial, m: &IntPolynomial) -> IntPolynomial {
    let deg = f.deg();
    let mut acc = IntPolynomial::zero();
    for k in 0..=deg {
        let term = r.pow(k as u32).mul(&dm.pow((deg - k) as u32)).scale(&f.coeff(k));
        acc = acc.add(&term).div_rem_monic(m).1;
    }
    acc
}

/// Everything wrong with `rec`, checked without reusing the pipeline's own
/// verdicts. Empty on a sound record.
pub fn audit_record(rec: &ClassRecord) -> Vec<String> {
    let mut out = Vec::new();
    let cert = &rec.certificate;
    let d = cert.d;

    // interpolant identities, exactly
    let m = &cert.min_poly;
    let dm = m.derivative();
    for b in &cert.blocks {
        for x in b.symbols(d) {
            if !homogenized_mod(&b.factor, &cert.interpolant_numerators[x], &dm, m).is_zero() {
                out.push(format!("interpolant of symbol {x} is not a root of its block factor"));
            }
        }
    }
    let theta = cert
        .theta_weights
        .iter()
        .zip(&cert.interpolant_numerators)
        .fold(IntPolynomial::zero(), |acc, (c, r)| acc.add(&r.scale(c)));
    let t_dm = dm.mul(&IntPolynomial::monomial(BigInt::one(), 1));
    if !theta.sub(&t_dm).div_rem_monic(m).1.is_zero() {
        out.push("weighted interpolants do not sum to T".into());
    }

    // Frobenius cycle types come from group elements
    let kinds: Vec<_> = cert.blocks.iter().map(|b| b.kind).collect();
    for (ell, types) in &cert.frobenius {
        if !cert.group.elements().iter().any(|g| block_cycle_types(g, &kinds) == *types) {
            out.push(format!("Frobenius at {ell} has cycle type {types:?}, absent from the group"));
        }
    }
    if !cert.group.contains(&cert.conjugation) {
        out.push("complex conjugation is not in the group".into());
    }

    // slopes pair up as s and 1 - s
    let mut slopes = rec.newton.slopes.clone();
    slopes.sort();
    let one = BigRational::one();
    if slopes.iter().zip(slopes.iter().rev()).any(|(a, b)| a + b != one) {
        out.push(format!("slopes {slopes:?} are not symmetric"));
    }
    let vals = &rec.valuations.values;
    let rd = rec.rep.d();
    if vals.len() == 2 * rd && (0..rd).any(|x| &vals[x] + &vals[x + rd] != one) {
        out.push("valuations of a root and its conjugate do not sum to 1".into());
    }

    // rank is a w-conjugacy invariant and both formulas agree
    if hyperplane_rank(&rec.rep) != rec.angle_rank {
        out.push(format!("hyperplane rank {} differs from angle rank {}", hyperplane_rank(&rec.rep), rec.angle_rank));
    }
    for g in w_stabilizer(&rec.rep.w).elements() {
        let moved = WeightedPermRep { w: rec.rep.w.clone(), group: rec.rep.group.conjugate_by(g) };
        match angle_rank(&moved) {
            Ok(r) if r == rec.angle_rank => {}
            Ok(r) => out.push(format!("conjugating by {g} changes the angle rank to {r}")),
            Err(e) => out.push(format!("conjugating by {g}: {e}")),
        }
    }
    if identity_relabel_rank(rec) != Some(rec.angle_rank) {
        out.push("relabelling symbols changes the angle rank".into());
    }

    out.extend(rec.coherence_violations());
    out
}

/// Rank after moving every symbol by the bar-swapping relabel, a
/// conjugation outside the stabilizer when the weighting is not constant.
fn identity_relabel_rank(rec: &ClassRecord) -> Option<usize> {
    let iota = SignedPerm::iota(rec.rep.d());
    let w = rec.rep.w.compose(&iota);
    let group = rec.rep.group.conjugate_by(&iota);
    angle_rank(&WeightedPermRep::new(w, group).ok()?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lift_of_single_trace_root() {
        // trace root a gives T^2 - aT + q
        let p = lift_trace(&[BigInt::one(), BigInt::from(-3)], &BigInt::from(5));
        assert_eq!(p, IntPolynomial::from_i64(&[5, -3, 1]));
    }

    #[test]
    fn samples_are_frobenius_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, n) in &SMALL_FIELDS[..6] {
            let w = sample_frobenius_polynomial(&mut rng, 2, p, n);
            assert_eq!(w.deg(), 4);
            assert!(is_frobenius_polynomial(&w));
        }
    }

    #[test]
    fn shioda_threefold_audits_clean() {
        let w = validate_weil(&IntPolynomial::from_i64(&[6859, 0, 171, -64, 9, 0, 1]), 19, 1).unwrap();
        assert_eq!(audit_record(&classify(&w).unwrap()), Vec::<String>::new());
    }

    #[test]
    fn lone_real_factor_is_not_frobenius() {
        // T^2 - 2 needs to be squared over F_2
        let w = validate_weil(&IntPolynomial::from_i64(&[-2, 0, 1]), 2, 1).unwrap();
        assert!(!is_frobenius_polynomial(&w));
    }
}
