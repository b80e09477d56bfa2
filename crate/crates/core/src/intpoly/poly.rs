//! Dense univariate polynomials over the integers, constant term first.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `T - root`
    pub fn linear(root: &BigInt) -> Self {
        Self::new(vec![-root.clone(), BigInt::one()])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// `self(inner(T))`
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `self(c*T)`
    pub fn scale_var(&self, c: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        Self::new(v)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Division by a divisor whose leading coefficient is a unit.
    pub fn div_rem_monic(&self, d: &Self) -> (Self, Self) {
        let lc = d.lc();
        assert!(lc.abs().is_one(), "divisor leading coefficient must be ±1");
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lc;
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Exact division over Z; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, b) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * b;
            }
            q[k] = c;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let t = Self::monomial(r.lc(), shift).mul(d);
            r = r.scale(&lc).sub(&t);
        }
        r
    }

    /// Greatest common divisor over Z (primitive, positive leading coefficient).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&content)
    }

    /// Rescale so that the leading coefficient is positive.
    pub fn normalize_sign(&self) -> Self {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Coefficients rendered as a comma-separated list, constant first.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_coeff_string(s: &str) -> Option<Self> {
        let mut v = Vec::new();
        for part in s.split(',') {
            v.push(part.trim().parse::<BigInt>().ok()?);
        }
        Some(Self::new(v))
    }
}

impl PartialOrd for IntPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients lexicographically from the constant term.
impl Ord for IntPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            match k {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{}", k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn display_and_degree() {
        let f = p(&[19, 8, 1]);
        assert_eq!(f.to_string(), "T^2 + 8T + 19");
        assert_eq!(f.deg(), 2);
        assert_eq!(p(&[-1, 0, -3]).to_string(), "-3T^2 - 1");
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-2, 1]).mul(&p(&[-2, 1])).mul(&p(&[2, 1]));
        let (q, r) = a.div_rem_monic(&p(&[-2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[-2, 1]).mul(&p(&[2, 1])));
        assert_eq!(a.gcd(&a.derivative()), p(&[-2, 1]));
        assert_eq!(a.exact_div(&p(&[3, 1])), None);
        assert_eq!(p(&[6, 4, 2]).content(), BigInt::from(2));
    }

    #[test]
    fn compose_and_scale() {
        let f = p(&[1, 0, 1]);
        assert_eq!(f.compose(&p(&[1, 1])), p(&[2, 2, 1]));
        assert_eq!(f.scale_var(&BigInt::from(3)), p(&[1, 0, 9]));
    }

    #[test]
    fn ordering_is_degree_then_constant_first() {
        let mut v = vec![p(&[2, 1]), p(&[0, 0, 1]), p(&[-2, 1])];
        v.sort();
        assert_eq!(v, vec![p(&[-2, 1]), p(&[2, 1]), p(&[0, 0, 1])]);
    }
}
