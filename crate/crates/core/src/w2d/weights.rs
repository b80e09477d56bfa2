//! Weightings of `X_2d` and conjugacy by their stabilisers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::group::SignedSubgroup;
use super::perm::{all_elements, SignedPerm};
use super::W2dError;

/// `w: X_2d -> Q` with `w(i) + w(ib) = 1`, stored over the encoded symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weighting {
    values: Vec<BigRational>,
}

impl Weighting {
    pub fn new(values: Vec<BigRational>) -> Result<Weighting, W2dError> {
        let n = values.len();
        if n == 0 || n % 2 == 1 {
            return Err(W2dError::BadWeighting(format!("length {}", n)));
        }
        let d = n / 2;
        for i in 0..d {
            if values[i].is_negative() || values[i + d].is_negative() {
                return Err(W2dError::BadWeighting("negative weight".into()));
            }
            if &values[i] + &values[i + d] != BigRational::one() {
                return Err(W2dError::BadWeighting(format!("w({}) + w(b{}) != 1", i + 1, i + 1)));
            }
        }
        Ok(Weighting { values })
    }

    /// Weights of the unbarred symbols; bars are filled in as `1 - w`.
    pub fn from_unbarred(first: &[BigRational]) -> Result<Weighting, W2dError> {
        let mut values = first.to_vec();
        values.extend(first.iter().map(|x| BigRational::one() - x));
        Weighting::new(values)
    }

    pub fn from_i64_pairs(first: &[(i64, i64)]) -> Result<Weighting, W2dError> {
        let v: Vec<BigRational> =
            first.iter().map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect();
        Weighting::from_unbarred(&v)
    }

    /// Climbing weighting from a symmetric nondecreasing slope list of length 2d.
    pub fn from_slopes(slopes: &[BigRational]) -> Result<Weighting, W2dError> {
        let d = slopes.len() / 2;
        Weighting::from_unbarred(&slopes[..d])
    }

    pub fn constant_half(d: usize) -> Weighting {
        Weighting { values: vec![BigRational::new(BigInt::one(), BigInt::from(2)); 2 * d] }
    }

    pub fn d(&self) -> usize {
        self.values.len() / 2
    }

    pub fn get(&self, x: usize) -> &BigRational {
        &self.values[x]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// `w(1) <= ... <= w(d) <= w(db) <= ... <= w(1b)`.
    pub fn is_climbing(&self) -> bool {
        let d = self.d();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.values[..d].windows(2).all(|p| p[0] <= p[1]) && self.values[..d].iter().all(|x| *x <= half)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|x| *x == self.values[0])
    }

    /// `w o g`.
    pub fn compose(&self, g: &SignedPerm) -> Weighting {
        Weighting { values: (0..self.values.len()).map(|x| self.values[g.apply(x)].clone()).collect() }
    }

    pub fn sum_over(&self, symbols: &[usize]) -> BigRational {
        symbols.iter().fold(BigRational::zero(), |acc, &x| acc + &self.values[x])
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `{g in W_2d : w o g = w}`.
pub fn w_stabilizer(w: &Weighting) -> SignedSubgroup {
    let d = w.d();
    let elements: Vec<SignedPerm> =
        all_elements(d).into_iter().filter(|g| (0..2 * d).all(|x| w.get(g.apply(x)) == w.get(x))).collect();
    SignedSubgroup::from_elements(d, elements)
}

/// Some `g` in `Stab(w)` with `g^-1 H1 g = H2`.
pub fn w_conjugate(h1: &SignedSubgroup, h2: &SignedSubgroup, w: &Weighting) -> Option<SignedPerm> {
    if h1.d() != h2.d() || h1.order() != h2.order() || h1.cycle_types() != h2.cycle_types() {
        return None;
    }
    w_stabilizer(w).elements().iter().find(|g| h1.conjugate_by(g) == *h2).cloned()
}

/// Minimal member of the `Stab(w)`-conjugacy orbit of `H`.
pub fn canonicalize_rep(w: &Weighting, h: &SignedSubgroup) -> SignedSubgroup {
    let stab = w_stabilizer(w);
    let best = stab.elements().iter().map(|g| h.conjugate_by(g)).min().expect("identity in stabiliser");
    SignedSubgroup::from_elements(best.d(), best.elements().to_vec())
}

#[cfg(test)]
mod tests {
    use super::super::labels::{atlas, calibrated_group};
    use super::*;

    fn ordinary2() -> Weighting {
        Weighting::from_i64_pairs(&[(0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn stabilisers() {
        assert_eq!(w_stabilizer(&Weighting::constant_half(2)).order(), 8);
        let ord = w_stabilizer(&ordinary2());
        assert_eq!(ord.order(), 2);
        let swap = SignedPerm::parse_cycles(2, "(1 2)(b1 b2)").unwrap();
        assert!(ord.contains(&swap));
        let ao = w_stabilizer(&Weighting::from_i64_pairs(&[(0, 1), (1, 2)]).unwrap());
        let mut expect = [SignedPerm::identity(2), SignedPerm::parse_cycles(2, "(2 b2)").unwrap()];
        expect.sort();
        assert_eq!(ao.elements(), &expect[..]);
    }

    #[test]
    fn rejects_bad_weighting() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(Weighting::new(vec![BigRational::zero(), half.clone(), half, BigRational::zero()]).is_err());
    }

    #[test]
    fn w_conjugacy_examples() {
        let w = ordinary2();
        let b1 = calibrated_group("C2.4.nt.b.1").unwrap();
        let b2 = calibrated_group("C2.4.nt.b.2").unwrap();
        let c1 = calibrated_group("C2.4.nt.c.1").unwrap();
        let c2 = calibrated_group("C2.4.nt.c.2").unwrap();
        let g = w_conjugate(&b1, &b2, &w).unwrap();
        assert_eq!(b1.conjugate_by(&g), b2);
        assert!(w_conjugate(&c1, &c2, &w).is_none());
        assert!(w_conjugate(&c1, &c2, &Weighting::constant_half(2)).is_some());
        assert_eq!(canonicalize_rep(&w, &b1), canonicalize_rep(&w, &b2));
        let c4 = calibrated_group("C4.4.t.a.1").unwrap();
        assert_eq!(canonicalize_rep(&w, &c4).order(), 4);
        assert!(w_conjugate(&c4, &canonicalize_rep(&w, &c4), &w).is_some());
    }

    #[test]
    fn constant_weight_matches_full_conjugacy() {
        let a = atlas(2).unwrap();
        let w = Weighting::constant_half(2);
        for (i, h1) in a.subgroups.iter().enumerate() {
            for (j, h2) in a.subgroups.iter().enumerate() {
                assert_eq!(w_conjugate(h1, h2, &w).is_some(), a.class_of[i] == a.class_of[j]);
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let a = atlas(3).unwrap();
        let w = Weighting::from_i64_pairs(&[(0, 1), (0, 1), (1, 2)]).unwrap();
        for h in a.subgroups.iter().step_by(7) {
            let c = canonicalize_rep(&w, h);
            assert_eq!(canonicalize_rep(&w, &c), c);
        }
    }
}
