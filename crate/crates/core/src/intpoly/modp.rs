//! Polynomials over a prime field F_p with word-sized p.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::poly::IntPolynomial;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Polynomial over F_p, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1 % p])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect())
    }

    /// Lift with coefficients in the symmetric range.
    pub fn to_int_symmetric(&self) -> IntPolynomial {
        let half = self.p / 2;
        IntPolynomial::new(
            self.c
                .iter()
                .map(|&a| if a > half { BigInt::from(a) - BigInt::from(self.p) } else { BigInt::from(a) })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.lc(), self.p);
        Self::new(self.p, self.c.iter().map(|&a| mulmod(a, inv, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|k| addmod(*self.c.get(k).unwrap_or(&0), *o.c.get(k).unwrap_or(&0), p))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        Self::new(
            p,
            (0..n)
                .map(|k| submod(*self.c.get(k).unwrap_or(&0), *o.c.get(k).unwrap_or(&0), p))
                .collect(),
        )
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&a| mulmod(a, s, self.p)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        // Accumulate in u128 and reduce lazily while it is safe.
        let small = (p as u128) * (p as u128) < (u128::MAX >> 8);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                let t = a as u128 * b as u128;
                if small {
                    acc[i + j] += t;
                    if acc[i + j] >= (u128::MAX >> 2) {
                        acc[i + j] %= pp;
                    }
                } else {
                    acc[i + j] = (acc[i + j] + t % pp) % pp;
                }
            }
        }
        Self::new(p, acc.into_iter().map(|x| (x % pp) as u64).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (Self::zero(p), self.clone());
        }
        let dd = d.deg();
        let inv = invmod(d.lc(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dd], inv, p);
            if c != 0 {
                for (i, &b) in d.c.iter().enumerate() {
                    r[k + i] = submod(r[k + i], mulmod(c, b, p), p);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*o = g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invmod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.c.iter().enumerate().skip(1).map(|(k, &a)| mulmod(a, (k as u64) % p, p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = addmod(mulmod(acc, x, self.p), a, self.p);
        }
        acc
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).deg() == 0
    }

    /// Squarefree factorization of a monic polynomial: (factor, multiplicity).
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let f = self.monic();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let d = f.derivative();
        if d.is_zero() {
            // f = g(x^p)
            let g = Self::new(p, f.c.iter().step_by(p as usize).cloned().collect());
            for (h, m) in g.squarefree_decomposition() {
                out.push((h, m * p as usize));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while w.deg() > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.deg() > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_rem(&w).0;
        }
        if c.deg() > 0 {
            let g = Self::new(p, c.c.iter().step_by(p as usize).cloned().collect());
            for (h, m) in g.squarefree_decomposition() {
                out.push((h, m * p as usize));
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.c, a.1).cmp(&(b.0.deg(), &b.0.c, b.1)));
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(p);
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut i = 0;
        while f.deg() >= 2 * (i + 1) {
            i += 1;
            h = h.pow_mod(&pe, &f);
            let g = f.gcd(&h.sub(&x));
            if g.deg() > 0 {
                out.push((g.clone(), i));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let p = self.p;
        let f = self.monic();
        if f.deg() == d {
            return vec![f];
        }
        if f.deg() == 0 {
            return Vec::new();
        }
        loop {
            let a = Self::new(p, (0..f.deg()).map(|_| rng.gen_range(0..p)).collect());
            if a.deg() == 0 {
                continue;
            }
            let g = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(k-1)), k = d
                let mut t = a.rem(&f);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(&f);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
                a.pow_mod(&e, &f).sub(&Self::one(p))
            };
            let u = f.gcd(&g);
            if u.deg() > 0 && u.deg() < f.deg() {
                let v = f.div_rem(&u).0;
                let mut out = u.equal_degree(d, rng);
                out.extend(v.equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Irreducible factors of a monic squarefree polynomial, sorted.
    pub fn factor_squarefree(&self, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree() {
            out.extend(g.equal_degree(d, rng));
        }
        out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
        out
    }

    /// Full factorization with multiplicities.
    pub fn factor(&self, rng: &mut ChaCha8Rng) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for h in g.factor_squarefree(rng) {
                out.push((h, m));
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.c, a.1).cmp(&(b.0.deg(), &b.0.c, b.1)));
        out
    }

    /// Degrees of the irreducible factors of a squarefree polynomial.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree() {
            for _ in 0..g.deg() / d {
                out.push(d);
            }
        }
        out.sort_unstable();
        out
    }

    /// Roots in F_p of a polynomial (distinct, sorted).
    pub fn roots(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        let p = self.p;
        if self.deg() == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let x = Self::x(p);
        let xp = x.pow_mod(&BigUint::from(p), &f);
        let g = f.gcd(&xp.sub(&x));
        let mut out: Vec<u64> = if g.deg() == 0 {
            Vec::new()
        } else {
            g.equal_degree(1, rng).iter().map(|l| submod(0, l.c[0], p)).collect()
        };
        out.sort_unstable();
        out
    }
}

/// Helper for exponents of the form p^k.
pub fn big_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn factor_cyclotomic_mod_small_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // x^4 + 1 splits into quadratics mod 3, linears mod 17
        let f = fp(3, &[1, 0, 0, 0, 1]);
        let fac = f.factor(&mut rng);
        assert_eq!(fac.iter().map(|(g, _)| g.deg()).collect::<Vec<_>>(), vec![2, 2]);
        let f = fp(17, &[1, 0, 0, 0, 1]);
        assert_eq!(f.factor_degrees(), vec![1, 1, 1, 1]);
        assert_eq!(f.roots(&mut rng).len(), 4);
        // characteristic two path
        let f = fp(2, &[1, 1, 0, 0, 0, 1, 0, 0, 1]);
        let prod = f
            .factor(&mut rng)
            .iter()
            .fold(FpPoly::one(2), |acc, (g, m)| (0..*m).fold(acc, |a, _| a.mul(g)));
        assert_eq!(prod, f);
    }

    #[test]
    fn squarefree_decomposition_handles_pth_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = fp(3, &[1, 1]);
        let b = fp(3, &[1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b);
        let fac = f.factor(&mut rng);
        let prod = fac.iter().fold(FpPoly::one(3), |acc, (g, m)| (0..*m).fold(acc, |x, _| x.mul(g)));
        assert_eq!(prod, f);
        assert!(fac.iter().any(|(g, m)| *m == 3 && g.deg() == 1));
    }

    #[test]
    fn xgcd_identity() {
        let a = fp(7, &[1, 2, 3, 1]);
        let b = fp(7, &[5, 0, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
