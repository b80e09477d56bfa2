//! Factorization over Z: squarefree decomposition, modular factorization,
//! multifactor Hensel lifting and subset recombination.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{is_prime, FpPoly};
use super::poly::IntPolynomial;

/// Squarefree decomposition over Z of a primitive polynomial (Yun).
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let f = f.primitive_part();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    let mut a = f.gcd(&d);
    let mut b = f.exact_div(&a).expect("gcd divides");
    let mut c = d.exact_div(&a).expect("gcd divides derivative");
    let mut i = 1;
    loop {
        let db = b.derivative();
        let dd = c.sub(&db);
        if dd.is_zero() {
            if b.deg() > 0 {
                out.push((b.primitive_part(), i));
            }
            break;
        }
        a = b.gcd(&dd);
        if a.deg() > 0 {
            out.push((a.primitive_part(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = dd.exact_div(&a).expect("gcd divides");
        i += 1;
        if b.deg() == 0 {
            break;
        }
    }
    out
}

/// Irreducible factorization over Z. Factors are primitive with positive
/// leading coefficient, sorted by (degree, coefficients). The constant
/// content is dropped.
pub fn factor_over_z(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, m));
        }
    }
    out.sort();
    out
}

/// True iff the primitive part of `f` is irreducible over Q (degree ≥ 1).
pub fn is_irreducible(f: &IntPolynomial) -> bool {
    let fac = factor_over_z(f);
    fac.len() == 1 && fac[0].1 == 1
}

fn mignotte_bits(f: &IntPolynomial) -> u64 {
    // 2^deg * ||f||_2 * |lc|, as a bit count
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm_bits = norm2.bits() / 2 + 1;
    f.deg() as u64 + norm_bits + f.lc().bits() + 1
}

/// Choose a prime for which `f` stays squarefree, preferring few factors.
fn choose_prime(f: &IntPolynomial) -> Option<(u64, Vec<FpPoly>, Vec<BTreeSet<usize>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let lc = f.lc();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut patterns = Vec::new();
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 7 && p < 50_000 {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = FpPoly::from_int(f, p);
        if !fp.is_squarefree() {
            continue;
        }
        tried += 1;
        let degs = fp.factor_degrees();
        patterns.push(subset_sums(&degs));
        if degs.len() == 1 {
            return Some((p, vec![fp.monic()], patterns));
        }
        let better = match &best {
            None => true,
            Some((_, fs)) => degs.len() < fs.len(),
        };
        if better {
            best = Some((p, fp.monic().factor_squarefree(&mut rng)));
        }
    }
    best.map(|(p, fs)| (p, fs, patterns))
}

fn subset_sums(degs: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    s.insert(0);
    for &d in degs {
        let cur: Vec<usize> = s.iter().cloned().collect();
        for x in cur {
            s.insert(x + d);
        }
    }
    s
}

fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let f = f.primitive_part();
    if f.deg() <= 1 {
        return vec![f];
    }
    let Some((p, modfactors, patterns)) = choose_prime(&f) else {
        return vec![f];
    };
    if modfactors.len() == 1 {
        return vec![f];
    }
    let mut allowed: BTreeSet<usize> = (0..=f.deg()).collect();
    for pat in &patterns {
        allowed = allowed.intersection(pat).cloned().collect();
    }
    if allowed.len() == 2 {
        return vec![f];
    }
    let bound_bits = mignotte_bits(&f) + 2;
    let mut k = 1u32;
    while (k as f64) * (p as f64).log2() < bound_bits as f64 {
        k += 1;
    }
    let modulus = BigInt::from(BigUint::from(p).pow(k));
    let lifted = hensel_lift(&f, &modfactors, p, k);
    recombine(&f, lifted, &modulus, &allowed)
}

fn mod_sym(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn poly_mod(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn poly_mod_sym(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| mod_sym(c, m)).collect())
}

/// Division with remainder modulo m by a monic divisor.
fn div_rem_mod(a: &IntPolynomial, d: &IntPolynomial, m: &BigInt) -> (IntPolynomial, IntPolynomial) {
    let (q, r) = a.div_rem_monic(d);
    (poly_mod(&q, m), poly_mod(&r, m))
}

fn lift_int(f: &FpPoly) -> IntPolynomial {
    IntPolynomial::new(f.c.iter().map(|&a| BigInt::from(a)).collect())
}

/// Lift `f ≡ lc * Π g_i (mod p)` to modulus p^k; returned factors are monic.
pub fn hensel_lift(f: &IntPolynomial, factors: &[FpPoly], p: u64, k: u32) -> Vec<IntPolynomial> {
    let target = BigInt::from(BigUint::from(p).pow(k));
    let lc_inv = f.lc().modinv(&target).expect("leading coefficient invertible mod p");
    let fm = poly_mod(&f.scale(&lc_inv), &target);
    lift_tree(&fm, factors, p, k)
}

fn lift_tree(f: &IntPolynomial, factors: &[FpPoly], p: u64, k: u32) -> Vec<IntPolynomial> {
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let mid = factors.len() / 2;
    let left = factors[..mid].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let right = factors[mid..].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let (g, h) = lift_two(f, &left, &right, p, k);
    let mut out = lift_tree(&g, &factors[..mid], p, k);
    out.extend(lift_tree(&h, &factors[mid..], p, k));
    out
}

/// Quadratic Hensel lifting of a two-factor split of a monic f.
fn lift_two(f: &IntPolynomial, g0: &FpPoly, h0: &FpPoly, p: u64, k: u32) -> (IntPolynomial, IntPolynomial) {
    let (one, s0, t0) = g0.xgcd(h0);
    debug_assert!(one.is_one());
    let mut g = lift_int(g0);
    let mut h = lift_int(h0);
    let mut s = lift_int(&s0);
    let mut t = lift_int(&t0);
    let mut m = BigInt::from(p);
    let target = BigInt::from(BigUint::from(p).pow(k));
    while m < target {
        let m2 = (&m * &m).min(target.clone());
        let e = poly_mod(&f.sub(&g.mul(&h)), &m2);
        let (q, r) = div_rem_mod(&s.mul(&e), &h, &m2);
        let g1 = poly_mod(&g.add(&t.mul(&e)).add(&q.mul(&g)), &m2);
        let h1 = poly_mod(&h.add(&r), &m2);
        let b = poly_mod(&s.mul(&g1).add(&t.mul(&h1)).sub(&IntPolynomial::one()), &m2);
        let (c, d) = div_rem_mod(&s.mul(&b), &h1, &m2);
        s = poly_mod(&s.sub(&d), &m2);
        t = poly_mod(&t.sub(&t.mul(&b)).sub(&c.mul(&g1)), &m2);
        g = g1;
        h = h1;
        m = m2;
    }
    (g, h)
}

fn recombine(
    f: &IntPolynomial,
    mut lifted: Vec<IntPolynomial>,
    modulus: &BigInt,
    allowed: &BTreeSet<usize>,
) -> Vec<IntPolynomial> {
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let n = lifted.len();
        let mut found = false;
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| lifted[i].deg()).sum();
            if allowed.contains(&deg) {
                let lc = f.lc();
                // constant-term pretest
                let c0 = idx.iter().fold(lc.clone(), |acc, &i| (acc * lifted[i].coeff(0)).mod_floor(modulus));
                let c0 = mod_sym(&c0, modulus);
                let f0 = f.coeff(0) * &lc;
                if c0.is_zero() || (&f0 % &c0).is_zero() {
                    let cand = idx
                        .iter()
                        .fold(IntPolynomial::constant(lc.clone()), |acc, &i| poly_mod(&acc.mul(&lifted[i]), modulus));
                    let cand = poly_mod_sym(&cand, modulus).primitive_part();
                    if let Some(quot) = f.exact_div(&cand) {
                        out.push(cand);
                        f = quot;
                        let keep: Vec<IntPolynomial> = lifted
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| !idx.contains(i))
                            .map(|(_, g)| g.clone())
                            .collect();
                        lifted = keep;
                        found = true;
                    }
                }
            }
            if found || !next_combination(&mut idx, n) {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.deg() > 0 {
        out.push(f.primitive_part());
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Product of factors raised to multiplicities.
pub fn expand_factorization(fac: &[(IntPolynomial, usize)]) -> IntPolynomial {
    fac.iter()
        .fold(IntPolynomial::one(), |acc, (g, m)| acc.mul(&g.pow(*m as u32)))
}

/// Integer square root test.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn small_to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

pub fn is_unit(n: &BigInt) -> bool {
    n.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn shioda_product_splits_into_cited_factors() {
        let f = p(&[130321, 54872, 10108, 152, -170, 8, 28, 8, 1]);
        let fac = factor_over_z(&f);
        assert_eq!(
            fac,
            vec![(p(&[19, 8, 1]), 1), (p(&[6859, 0, 171, -64, 9, 0, 1]), 1)]
        );
    }

    #[test]
    fn repeated_linear_factors() {
        let f = p(&[-2, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(factor_over_z(&f), vec![(p(&[-2, 1]), 2), (p(&[2, 1]), 1)]);
        assert_eq!(factor_over_z(&p(&[-2, 0, 1])), vec![(p(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like_quartic_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        let fac = factor_over_z(&p(&[4, 0, 0, 0, 1]));
        assert_eq!(fac, vec![(p(&[2, -2, 1]), 1), (p(&[2, 2, 1]), 1)]);
    }

    #[test]
    fn nonmonic_input() {
        let f = p(&[3, 2]).mul(&p(&[-1, 0, 5]));
        let fac = factor_over_z(&f);
        assert_eq!(fac, vec![(p(&[3, 2]), 1), (p(&[-1, 0, 5]), 1)]);
    }

    #[test]
    fn many_modular_factors() {
        // product of eight linear factors with a degree-8 cyclotomic
        let mut f = IntPolynomial::one();
        for r in 1..=6 {
            f = f.mul(&p(&[-r, 1]));
        }
        let g = p(&[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = factor_over_z(&f.mul(&g));
        assert_eq!(fac.len(), 7);
        assert_eq!(expand_factorization(&fac), f.mul(&g));
    }
}
