//! Isogeny-class labels `g.q.c1_..._cg`.
//!
//! Each code is a base-26 numeral in the letters `a..z` (a = 0), most
//! significant digit first. A leading `a` on a code of two or more letters
//! marks the value negative. Codes whose magnitude part has a leading zero
//! are rejected so that every accepted code is the encoding of its value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use abvar_core::intpoly::{validate_weil, IntPolynomial, WeilPolynomial};

use crate::LmfdbError;

const RADIX: i64 = 26;

pub fn decode_code(code: &str) -> Result<i64, LmfdbError> {
    let bad = |why: &str| LmfdbError::MalformedCode { code: code.to_string(), reason: why.to_string() };
    if code.is_empty() {
        return Err(bad("empty code"));
    }
    if !code.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(bad("codes use the letters a-z only"));
    }
    let (negative, digits) = match code.as_bytes() {
        [b'a', rest @ ..] if !rest.is_empty() => (true, rest),
        all => (false, all),
    };
    if digits.len() > 1 && digits[0] == b'a' {
        return Err(bad("leading zero digit"));
    }
    if negative && digits == b"a" {
        return Err(bad("negative zero"));
    }
    let mut value: i64 = 0;
    for &b in digits {
        value = value
            .checked_mul(RADIX)
            .and_then(|v| v.checked_add(i64::from(b - b'a')))
            .ok_or_else(|| bad("value overflows i64"))?;
    }
    Ok(if negative { -value } else { value })
}

pub fn encode_code(value: i64) -> String {
    if value == 0 {
        return "a".to_string();
    }
    let mut mag = value.unsigned_abs();
    let mut digits = Vec::new();
    while mag > 0 {
        digits.push(b'a' + (mag % RADIX as u64) as u8);
        mag /= RADIX as u64;
    }
    if value < 0 {
        digits.push(b'a');
    }
    digits.reverse();
    String::from_utf8(digits).expect("ascii")
}

/// Smallest prime `p` and exponent `n` with `q = p^n`, if `q` is a prime power.
pub fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut n) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsogenyClassLabel {
    pub g: usize,
    pub q: u64,
    pub coeff_codes: Vec<String>,
}

impl IsogenyClassLabel {
    pub fn from_coefficients(g: usize, q: u64, leading: &[i64]) -> Self {
        IsogenyClassLabel { g, q, coeff_codes: leading.iter().map(|&a| encode_code(a)).collect() }
    }

    /// The first `g` coefficients `a_1..a_g` after the leading 1.
    pub fn leading_coefficients(&self) -> Result<Vec<i64>, LmfdbError> {
        self.coeff_codes.iter().map(|c| decode_code(c)).collect()
    }

    pub fn field(&self) -> (u64, u32) {
        prime_power_parts(self.q).expect("checked at parse time")
    }

    /// Fixture directory name `g.q`.
    pub fn family(&self) -> String {
        format!("{}.{}", self.g, self.q)
    }
}

impl fmt::Display for IsogenyClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.g, self.q, self.coeff_codes.join("_"))
    }
}

impl FromStr for IsogenyClassLabel {
    type Err = LmfdbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: String| LmfdbError::MalformedLabel { label: s.to_string(), reason: why };
        let parts: Vec<&str> = s.split('.').collect();
        let [g, q, codes] = parts[..] else {
            return Err(bad("expected g.q.codes".into()));
        };
        let g: usize = g.parse().map_err(|_| bad(format!("dimension '{g}' is not a number")))?;
        if g == 0 {
            return Err(bad("dimension must be positive".into()));
        }
        let q: u64 = q.parse().map_err(|_| bad(format!("field size '{q}' is not a number")))?;
        if prime_power_parts(q).is_none() {
            return Err(bad(format!("{q} is not a prime power")));
        }
        let coeff_codes: Vec<String> = codes.split('_').map(str::to_string).collect();
        if coeff_codes.len() != g {
            return Err(bad(format!("dimension {g} needs {g} codes, found {}", coeff_codes.len())));
        }
        for c in &coeff_codes {
            decode_code(c).map_err(|e| bad(e.to_string()))?;
        }
        Ok(IsogenyClassLabel { g, q, coeff_codes })
    }
}

/// Coefficients of `P`, leading term first, completed by the functional
/// equation `a_{2g-j} = q^{g-j} a_j`.
pub fn full_coefficients(g: usize, q: u64, leading: &[i64]) -> Vec<BigInt> {
    assert_eq!(leading.len(), g);
    let q = BigInt::from(q);
    let mut a: Vec<BigInt> = Vec::with_capacity(2 * g + 1);
    a.push(BigInt::one());
    a.extend(leading.iter().map(|&x| BigInt::from(x)));
    for j in (0..g).rev() {
        let scale = num_traits::pow(q.clone(), g - j);
        a.push(&a[j] * scale);
    }
    a
}

pub fn label_to_polynomial(label: &IsogenyClassLabel) -> Result<WeilPolynomial, LmfdbError> {
    let leading = label.leading_coefficients()?;
    let descending = full_coefficients(label.g, label.q, &leading);
    let poly = IntPolynomial::new(descending.into_iter().rev().collect());
    let (p, n) = label.field();
    validate_weil(&poly, p, n).map_err(|e| LmfdbError::WeilValidationFailed {
        label: label.to_string(),
        reason: e.to_string(),
    })
}

/// Inverse of [`label_to_polynomial`] for a degree `2g` Weil polynomial.
pub fn polynomial_to_label(weil: &WeilPolynomial) -> Option<IsogenyClassLabel> {
    let poly = weil.poly();
    let deg = poly.deg();
    if deg % 2 == 1 || poly.coeff(0).is_zero() {
        return None;
    }
    let g = deg / 2;
    let q = u64::try_from(weil.q()).ok()?;
    let leading: Option<Vec<i64>> = (1..=g).map(|j| i64::try_from(poly.coeff(deg - j)).ok()).collect();
    Some(IsogenyClassLabel::from_coefficients(g, q, &leading?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(decode_code("acm").unwrap(), -64);
        assert_eq!(decode_code("i").unwrap(), 8);
        assert_eq!(decode_code("j").unwrap(), 9);
        assert_eq!(decode_code("a").unwrap(), 0);
        assert_eq!(decode_code("ba").unwrap(), 26);
        assert_eq!(decode_code("abw").unwrap(), -48);
        assert_eq!(encode_code(-64), "acm");
        assert_eq!(encode_code(-1), "ab");
    }

    #[test]
    fn rejects_noncanonical_codes() {
        for code in ["", "aa", "aab", "bA", "x1", "ab_"] {
            assert!(decode_code(code).is_err(), "{code}");
        }
    }

    #[test]
    fn completes_by_functional_equation() {
        let label: IsogenyClassLabel = "3.19.a_j_acm".parse().unwrap();
        let weil = label_to_polynomial(&label).unwrap();
        assert_eq!(weil.poly(), &IntPolynomial::from_i64(&[6859, 0, 171, -64, 9, 0, 1]));
        let ec = label_to_polynomial(&"1.19.i".parse().unwrap()).unwrap();
        assert_eq!(ec.poly(), &IntPolynomial::from_i64(&[19, 8, 1]));
        let small = label_to_polynomial(&"1.2.ab".parse().unwrap()).unwrap();
        assert_eq!(small.poly(), &IntPolynomial::from_i64(&[2, -1, 1]));
        assert_eq!(polynomial_to_label(&weil).unwrap(), label);
    }

    #[test]
    fn malformed_labels() {
        for s in ["9.2.x", "2.6.a_a", "0.2.", "2.2.a", "2.2.a_a_a", "x.2.a", "1.2"] {
            assert!(matches!(s.parse::<IsogenyClassLabel>(), Err(LmfdbError::MalformedLabel { .. })), "{s}");
        }
        // 1.2.z: a_1 = 25 breaks the Hasse bound
        let far: IsogenyClassLabel = "1.2.z".parse().unwrap();
        assert!(matches!(label_to_polynomial(&far), Err(LmfdbError::WeilValidationFailed { .. })));
    }
}
