//! q-Weil polynomials: validation, Frobenius decomposition, trace polynomials
//! and the Honda–Tate exponent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::{exact_sqrt, factor_over_z};
use super::modp::is_prime;
use super::poly::IntPolynomial;
use super::IntPolyError;
use crate::numeric::{isolate_roots, Mag};

/// Monic integer polynomial all of whose roots have absolute value `sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilPolynomial {
    poly: IntPolynomial,
    p: u64,
    n: u32,
    q: BigInt,
}

impl WeilPolynomial {
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn deg(&self) -> usize {
        self.poly.deg()
    }

    /// Rewrap a factor already known to divide a validated polynomial.
    pub fn with_poly(&self, poly: IntPolynomial) -> WeilPolynomial {
        WeilPolynomial { poly, p: self.p, n: self.n, q: self.q.clone() }
    }

    /// Product of two validated polynomials over the same field.
    pub fn product(&self, other: &WeilPolynomial) -> Result<WeilPolynomial, IntPolyError> {
        if self.q != other.q {
            return Err(IntPolyError::IncompatibleFields);
        }
        Ok(self.with_poly(self.poly.mul(&other.poly)))
    }
}

pub fn prime_power(p: u64, n: u32) -> BigInt {
    BigInt::from(p).pow(n)
}

/// Accept `poly` as a q-Weil polynomial for `q = p^n`, or say why not.
pub fn validate_weil(poly: &IntPolynomial, p: u64, n: u32) -> Result<WeilPolynomial, IntPolyError> {
    if poly.is_zero() || poly.deg() == 0 {
        return Err(IntPolyError::DegreeZero);
    }
    if !poly.is_monic() {
        return Err(IntPolyError::NotMonic);
    }
    if !is_prime(p) {
        return Err(IntPolyError::NotPrime(p));
    }
    if n == 0 {
        return Err(IntPolyError::BadExponent);
    }
    let q = prime_power(p, n);
    modulus_check(poly, &q)?;
    for (f, _) in factor_over_z(poly) {
        if !irreducible_factor_is_weil(&f, &q) {
            return Err(IntPolyError::NotWeil(f.to_string()));
        }
    }
    Ok(WeilPolynomial { poly: poly.clone(), p, n, q })
}

fn radical(poly: &IntPolynomial) -> IntPolynomial {
    let g = poly.gcd(&poly.derivative());
    poly.exact_div(&g).expect("gcd divides").primitive_part()
}

/// Interval check of `|alpha|^2 = q` on certified root enclosures.
fn modulus_check(poly: &IntPolynomial, q: &BigInt) -> Result<(), IntPolyError> {
    let rad = radical(poly);
    let roots = isolate_roots(rad.coeffs(), 40).map_err(|_| IntPolyError::RootIsolationFailed)?;
    let q_mag = Mag::from_bigint_down(q, 0);
    let q_up = Mag::from_bigint_up(q, 0);
    for (index, b) in roots.balls.iter().enumerate() {
        let lo = b.abs_down();
        let hi = b.abs_up();
        let lo2 = lo.mul_down(lo);
        let hi2 = hi.mul_up(hi);
        if hi2 < q_mag || lo2 > q_up {
            let (re, im) = crate::numeric::roots::approx_f64(b);
            return Err(IntPolyError::RootOffCircle {
                index,
                root: format!("{:.6}{:+.6}i", re, im),
                modulus_sq: (lo2.to_f64(), hi2.to_f64()),
            });
        }
    }
    Ok(())
}

fn irreducible_factor_is_weil(f: &IntPolynomial, q: &BigInt) -> bool {
    let d = f.deg();
    if d == 1 {
        // T - r with r^2 = q
        let r = -f.coeff(0);
        return &(&r * &r) == q;
    }
    if d == 2 && f.coeff(1).is_zero() && f.coeff(0) == -q.clone() {
        return true;
    }
    if d % 2 == 1 || !is_symmetric(f, q) {
        return false;
    }
    let trace = match symmetric_to_trace(f, q) {
        Some(t) => t,
        None => return false,
    };
    let count = sturm_count_in_window(&trace, q);
    count == trace.deg()
}

/// Cheap exact screen for enumeration: `f` is symmetric of even degree and
/// its trace polynomial has `deg/2` distinct roots in `[-2 sqrt q, 2 sqrt q]`.
/// Every such `f` is q-Weil; q-Weil polynomials with a repeated trace root
/// are missed, which is harmless when only irreducible ones are wanted.
pub fn passes_trace_test(f: &IntPolynomial, q: &BigInt) -> bool {
    if f.deg() == 0 || f.deg() % 2 == 1 || !f.is_monic() || !is_symmetric(f, q) {
        return false;
    }
    match symmetric_to_trace(f, q) {
        Some(trace) => sturm_count_in_window(&trace, q) == trace.deg(),
        None => false,
    }
}

/// `T^deg f(q/T) = q^(deg/2) f(T)` for even degree.
pub fn is_symmetric(f: &IntPolynomial, q: &BigInt) -> bool {
    let d = f.deg();
    if d % 2 == 1 {
        return false;
    }
    let half = d / 2;
    (0..=half).all(|j| f.coeff(j) == f.coeff(d - j) * q.pow((half - j) as u32))
}

/// Multiply in the real factors once more so every root comes with its
/// partner `q / alpha` (real roots get counted twice).
pub fn double_real_roots(h: &IntPolynomial, q: &BigInt) -> IntPolynomial {
    let real = h.gcd(&IntPolynomial::new(vec![-q.clone(), BigInt::zero(), BigInt::one()]));
    if real.deg() == 0 {
        h.clone()
    } else {
        h.mul(&real)
    }
}

/// Degree of the real part of `h` (roots `+-sqrt(q)`).
pub fn real_root_count(h: &IntPolynomial, q: &BigInt) -> usize {
    h.gcd(&IntPolynomial::new(vec![-q.clone(), BigInt::zero(), BigInt::one()])).deg()
}

/// `prod (T - (alpha + q/alpha))` over conjugate-pair representatives.
pub fn trace_polynomial(h: &WeilPolynomial) -> Result<IntPolynomial, IntPolyError> {
    let q = h.q();
    let full = double_real_roots(h.poly(), q);
    if full.deg() % 2 == 1 || !is_symmetric(&full, q) {
        return Err(IntPolyError::OddDegreeWithoutRealHandling);
    }
    symmetric_to_trace(&full, q).ok_or(IntPolyError::OddDegreeWithoutRealHandling)
}

/// For symmetric `f` of degree 2d: `f(T) = T^d g(T + q/T)`; returns g.
fn symmetric_to_trace(f: &IntPolynomial, q: &BigInt) -> Option<IntPolynomial> {
    let d = f.deg() / 2;
    // s_k = T^k + (q/T)^k as a polynomial in X = T + q/T
    let x = IntPolynomial::from_i64(&[0, 1]);
    let mut s: Vec<IntPolynomial> = vec![IntPolynomial::from_i64(&[2]), x.clone()];
    for k in 1..d {
        let next = x.mul(&s[k]).sub(&s[k - 1].scale(q));
        s.push(next);
    }
    let mut g = IntPolynomial::constant(f.coeff(d));
    for k in 1..=d {
        g = g.add(&s[k].scale(&f.coeff(d + k)));
    }
    if g.deg() != d {
        return None;
    }
    Some(g)
}

/// Sign of `a + b sqrt(q)`.
fn sign_with_sqrt(a: &BigRational, b: &BigRational, q: &BigInt) -> i32 {
    let sa = sgn(a);
    let sb = sgn(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(q.clone());
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

fn sgn(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

type RatPoly = Vec<BigRational>;

fn rat_trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let c = top / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bc;
        }
        r.pop();
        r = rat_trim(r);
    }
    r
}

/// Sign of a rational polynomial at `sign * 2 sqrt(q)`.
fn sign_at_window_edge(p: &RatPoly, q: &BigInt, edge: i32) -> i32 {
    // (2 sqrt q)^k = (4q)^(k/2) or (4q)^((k-1)/2) * 2 sqrt q
    let four_q = BigRational::from_integer(q * 4);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut pw = BigRational::one();
    for (k, c) in p.iter().enumerate() {
        let signed = if edge < 0 && k % 2 == 1 { -c.clone() } else { c.clone() };
        if k % 2 == 0 {
            a += &signed * &pw;
        } else {
            b += &signed * &pw * BigRational::from_integer(BigInt::from(2));
            pw = &pw * &four_q;
        }
    }
    sign_with_sqrt(&a, &b, q)
}

fn sign_changes(signs: &[i32]) -> usize {
    let nz: Vec<i32> = signs.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of a squarefree integer polynomial in the open window
/// `(-2 sqrt q, 2 sqrt q)`; roots on the boundary are not counted.
pub fn sturm_count_in_window(g: &IntPolynomial, q: &BigInt) -> usize {
    let to_rat = |p: &IntPolynomial| -> RatPoly {
        p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let mut seq: Vec<RatPoly> = vec![to_rat(g), to_rat(&g.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].len() <= 1 {
            break;
        }
        let r = rat_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let left: Vec<i32> = seq.iter().map(|p| sign_at_window_edge(p, q, -1)).collect();
    let right: Vec<i32> = seq.iter().map(|p| sign_at_window_edge(p, q, 1)).collect();
    let mut count = sign_changes(&left) as i64 - sign_changes(&right) as i64;
    // Sturm counts (a, b]; drop a root sitting exactly on the right edge
    if right[0] == 0 {
        count -= 1;
    }
    count.max(0) as usize
}

/// Distinct irreducible factors with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    pub factors: Vec<(WeilPolynomial, usize)>,
    /// Exactly one distinct irreducible factor.
    pub simple: bool,
    pub radical: WeilPolynomial,
}

impl FrobeniusDecomposition {
    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|(h, e)| h.deg() * e).sum::<usize>() / 2
    }
}

pub fn frobenius_decompose(p: &WeilPolynomial) -> FrobeniusDecomposition {
    let factors: Vec<(WeilPolynomial, usize)> =
        factor_over_z(p.poly()).into_iter().map(|(f, e)| (p.with_poly(f), e)).collect();
    let radical = factors.iter().fold(IntPolynomial::one(), |acc, (f, _)| acc.mul(f.poly()));
    FrobeniusDecomposition { simple: factors.len() == 1, radical: p.with_poly(radical), factors }
}

/// Smallest `e >= 1` with `h(0)^e > 0` and `e * deg * slope` integral for
/// every local factor `(deg, slope)` (slopes normalized so `v(q) = 1`).
pub fn honda_tate_e(h: &IntPolynomial, local_factors: &[(usize, BigRational)]) -> u32 {
    let negative_norm = h.coeff(0).is_negative();
    let mut e: u32 = 1;
    for (deg, slope) in local_factors {
        let v = slope * BigRational::from_integer(BigInt::from(*deg));
        let den = v.denom().to_u32().expect("small denominator");
        e = num_integer::lcm(e, den);
    }
    if negative_norm && e % 2 == 1 {
        e *= 2;
    }
    e
}

/// `sqrt(q)` when q is a perfect square.
pub fn sqrt_q(q: &BigInt) -> Option<BigInt> {
    exact_sqrt(q)
}

/// Floor of `C(deg, j) q^(j/2)`, the bound on the j-th coefficient.
pub fn coefficient_bound(deg: usize, j: usize, q: &BigInt) -> BigInt {
    let binom = num_integer::binomial(BigInt::from(deg), BigInt::from(j));
    let qj = q.pow(j as u32);
    (binom.clone() * binom * qj).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn accepts_and_rejects() {
        assert!(validate_weil(&p(&[19, 8, 1]), 19, 1).is_ok());
        match validate_weil(&p(&[2, -5, 1]), 2, 1) {
            Err(IntPolyError::RootOffCircle { modulus_sq, .. }) => {
                // one root is (5 - sqrt 17)/2, modulus^2 about 0.19
                assert!(modulus_sq.1 < 2.0 || modulus_sq.0 > 2.0);
            }
            other => panic!("unexpected {:?}", other),
        }
        assert!(validate_weil(&p(&[4, -4, 1]), 2, 2).is_ok());
        assert_eq!(validate_weil(&p(&[2, 1, 2]), 2, 1), Err(IntPolyError::NotMonic));
        assert_eq!(validate_weil(&p(&[3]), 2, 1), Err(IntPolyError::DegreeZero));
        // T - 2 with q = 2 is off the circle
        assert!(validate_weil(&p(&[-2, 1]), 2, 1).is_err());
    }

    #[test]
    fn trace_polynomials() {
        let h = validate_weil(&p(&[19, 8, 1]), 19, 1).unwrap();
        assert_eq!(trace_polynomial(&h).unwrap(), p(&[8, 1]));
        let h = validate_weil(&p(&[4, -4, 3, -2, 1]), 2, 1).unwrap();
        assert_eq!(trace_polynomial(&h).unwrap(), p(&[-1, -2, 1]));
        let h = validate_weil(&p(&[-2, 0, 1]), 2, 1).unwrap();
        assert_eq!(trace_polynomial(&h).unwrap(), p(&[-8, 0, 1]));
    }

    #[test]
    fn window_count_handles_irrational_edges() {
        let q = BigInt::from(2);
        // X^2 - 2X - 1 has roots 1 +- sqrt 2, both inside (-2.83, 2.83)
        assert_eq!(sturm_count_in_window(&p(&[-1, -2, 1]), &q), 2);
        // X - 3 lies outside
        assert_eq!(sturm_count_in_window(&p(&[-3, 1]), &q), 0);
        // X^2 - 8 sits on both edges
        assert_eq!(sturm_count_in_window(&p(&[-8, 0, 1]), &q), 0);
    }

    #[test]
    fn decomposition_and_exponent() {
        let shioda = p(&[130321, 54872, 10108, 152, -170, 8, 28, 8, 1]);
        let w = validate_weil(&shioda, 19, 1).unwrap();
        let dec = frobenius_decompose(&w);
        assert!(!dec.simple);
        assert_eq!(dec.factors.len(), 2);
        assert_eq!(dec.dimension(), 4);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        // T^2 - 2 over Q_2: one factor of degree 2, slope 1/2
        assert_eq!(honda_tate_e(&p(&[-2, 0, 1]), &[(2, half.clone())]), 2);
        // T - 2 with q = 4: negative constant term forces even e
        assert_eq!(honda_tate_e(&p(&[-2, 1]), &[(1, half)]), 2);
        let zero = BigRational::zero();
        let one = BigRational::one();
        assert_eq!(honda_tate_e(&p(&[4, -4, 3, -2, 1]), &[(1, zero.clone()), (1, zero), (1, one.clone()), (1, one)]), 1);
    }
}
