//! Complex balls: fixed-point center at scale 2^prec plus a magnitude radius.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::mag::Mag;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: Mag,
    pub prec: u32,
}

/// Outcome of testing whether a ball pins down a rational integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerTest {
    Integer(BigInt),
    NotInteger,
    Undecided,
}

fn shr_round(x: BigInt, k: u32) -> BigInt {
    // floor division; the error is charged to the radius by callers
    x >> k as usize
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball { re: BigInt::zero(), im: BigInt::zero(), rad: Mag::ZERO, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Ball {
        Ball { re: n << prec as usize, im: BigInt::zero(), rad: Mag::ZERO, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Ball {
        Self::from_int(&BigInt::from(n), prec)
    }

    /// Ball around an f64 complex value with the given radius.
    pub fn from_f64(re: f64, im: f64, rad: f64, prec: u32) -> Ball {
        let conv = |x: f64| -> BigInt {
            let s = 2f64.powi(52);
            let scaled = (x * s).round();
            let n = BigInt::from_f64(scaled).unwrap_or_default();
            if prec >= 52 {
                n << (prec - 52) as usize
            } else {
                n >> (52 - prec) as usize
            }
        };
        Ball {
            re: conv(re),
            im: conv(im),
            rad: Mag::from_f64(rad).add_up(Mag::pow2(-(prec as i64) + 1)),
            prec,
        }
    }

    pub fn ulp(&self) -> Mag {
        Mag::pow2(-(self.prec as i64))
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        if prec == self.prec {
            return self.clone();
        }
        if prec > self.prec {
            let s = (prec - self.prec) as usize;
            Ball { re: &self.re << s, im: &self.im << s, rad: self.rad, prec }
        } else {
            let s = self.prec - prec;
            Ball {
                re: shr_round(self.re.clone(), s),
                im: shr_round(self.im.clone(), s),
                rad: self.rad.add_up(Mag::pow2(-(prec as i64) + 1)),
                prec,
            }
        }
    }

    pub fn re_f64(&self) -> f64 {
        big_to_f64_scaled(&self.re, self.prec)
    }

    pub fn im_f64(&self) -> f64 {
        big_to_f64_scaled(&self.im, self.prec)
    }

    /// Upper bound of |center|.
    pub fn center_abs_up(&self) -> Mag {
        let s = -(self.prec as i64);
        let a = Mag::from_bigint_up(&self.re, s);
        let b = Mag::from_bigint_up(&self.im, s);
        a.mul_up(a).add_up(b.mul_up(b)).sqrt_up()
    }

    pub fn center_abs_down(&self) -> Mag {
        let s = -(self.prec as i64);
        let a = Mag::from_bigint_down(&self.re, s);
        let b = Mag::from_bigint_down(&self.im, s);
        a.mul_down(a).add_down(b.mul_down(b)).sqrt_down()
    }

    /// Upper bound of |z| over the ball.
    pub fn abs_up(&self) -> Mag {
        self.center_abs_up().add_up(self.rad)
    }

    /// Lower bound of |z| over the ball.
    pub fn abs_down(&self) -> Mag {
        self.center_abs_down().sub_down(self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_down().is_zero()
    }

    pub fn neg(&self) -> Ball {
        Ball { re: -&self.re, im: -&self.im, rad: self.rad, prec: self.prec }
    }

    pub fn conj(&self) -> Ball {
        Ball { re: self.re.clone(), im: -&self.im, rad: self.rad, prec: self.prec }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball { re: &self.re + &o.re, im: &self.im + &o.im, rad: self.rad.add_up(o.rad), prec: self.prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        Ball { re: &self.re - &o.re, im: &self.im - &o.im, rad: self.rad.add_up(o.rad), prec: self.prec }
    }

    pub fn add_int(&self, n: &BigInt) -> Ball {
        Ball { re: &self.re + (n << self.prec as usize), im: self.im.clone(), rad: self.rad, prec: self.prec }
    }

    pub fn mul_int(&self, n: &BigInt) -> Ball {
        let m = Mag::from_bigint_up(n, 0);
        Ball { re: &self.re * n, im: &self.im * n, rad: self.rad.mul_up(m), prec: self.prec }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let re = shr_round(&self.re * &o.re - &self.im * &o.im, p);
        let im = shr_round(&self.re * &o.im + &self.im * &o.re, p);
        let a = self.center_abs_up();
        let b = o.center_abs_up();
        let rad = a
            .mul_up(o.rad)
            .add_up(b.mul_up(self.rad))
            .add_up(self.rad.mul_up(o.rad))
            .add_up(Mag::pow2(-(p as i64) + 1));
        Ball { re, im, rad, prec: p }
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    /// Reciprocal; `None` when the ball may contain zero.
    pub fn inv(&self) -> Option<Ball> {
        let low = self.abs_down();
        if low.is_zero() {
            return None;
        }
        let p = self.prec as usize;
        let den = &self.re * &self.re + &self.im * &self.im;
        if den.is_zero() {
            return None;
        }
        let num_re = &self.re << (2 * p);
        let num_im = -(&self.im) << (2 * p);
        let re = num_re.div_floor(&den);
        let im = num_im.div_floor(&den);
        // |1/(c+e) - 1/c| <= r / (|c| (|c| - r))
        let c_low = self.center_abs_down();
        let rad = self
            .rad
            .div_up(c_low.mul_down(low))
            .add_up(Mag::pow2(-(self.prec as i64) + 1));
        Some(Ball { re, im, rad, prec: self.prec })
    }

    pub fn div(&self, o: &Ball) -> Option<Ball> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Ball {
        let mut acc = Ball::from_i64(1, self.prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// True when the two balls are certainly disjoint.
    pub fn disjoint(&self, o: &Ball) -> bool {
        let d = self.sub(&Ball { rad: Mag::ZERO, ..o.clone() });
        d.center_abs_down() > self.rad.add_up(o.rad)
    }

    pub fn overlaps(&self, o: &Ball) -> bool {
        !self.disjoint(o)
    }

    /// Does the ball certainly lie within distance `eps` of a point set? Used
    /// only through `integer_test` below.
    pub fn integer_test(&self) -> IntegerTest {
        let p = self.prec as usize;
        let s = -(self.prec as i64);
        // imaginary part must be able to vanish
        let im_low = Mag::from_bigint_down(&self.im, s).sub_down(self.rad);
        if !im_low.is_zero() {
            return IntegerTest::NotInteger;
        }
        let one = BigInt::one() << p;
        let half = BigInt::one() << (p - 1);
        let nearest = (&self.re + &half).div_floor(&one);
        let dist = &self.re - (&nearest << p);
        let dist_mag = Mag::from_bigint_down(&dist, s);
        let rad_ok = self.rad < Mag::pow2(-2);
        if dist_mag > self.rad {
            // nearest integer excluded; any other integer is further away
            if rad_ok {
                return IntegerTest::NotInteger;
            }
            return IntegerTest::Undecided;
        }
        if rad_ok && Mag::from_bigint_up(&dist, s).add_up(self.rad) < Mag::pow2(-1) {
            return IntegerTest::Integer(nearest);
        }
        IntegerTest::Undecided
    }

    /// Radius relative to the scale of the center; used for precision control.
    pub fn rad_log2(&self) -> f64 {
        self.rad.log2()
    }
}

pub fn big_to_f64_scaled(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    let shift = bits - 60;
    let top: BigInt = if shift > 0 { x >> shift as usize } else { x << (-shift) as usize };
    let t = num_traits::ToPrimitive::to_f64(&top).unwrap();
    t * 2f64.powi((shift - prec as i64) as i32)
}

/// Evaluate an integer polynomial on a ball (Horner).
pub fn eval_int_poly(coeffs: &[BigInt], z: &Ball) -> Ball {
    let mut acc = Ball::zero(z.prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add_int(c);
    }
    acc
}

/// Multiply polynomials with ball coefficients (constant first).
pub fn poly_mul(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
    let prec = a[0].prec;
    let mut out = vec![Ball::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Π (T - r_i) with ball coefficients.
pub fn poly_from_roots(roots: &[Ball], prec: u32) -> Vec<Ball> {
    let mut acc = vec![Ball::from_i64(1, prec)];
    for r in roots {
        let mut next = vec![Ball::zero(prec); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        acc = next;
    }
    acc
}

pub fn is_neg(x: &BigInt) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses_exact_results() {
        let prec = 128;
        let a = Ball::from_f64(1.5, -2.0, 0.0, prec);
        let b = Ball::from_f64(0.25, 3.0, 0.0, prec);
        let c = a.mul(&b);
        // (1.5 - 2i)(0.25 + 3i) = 6.375 + 4i
        assert!((c.re_f64() - 6.375).abs() < 1e-12);
        assert!((c.im_f64() - 4.0).abs() < 1e-12);
        let d = c.div(&b).unwrap();
        assert!((d.re_f64() - 1.5).abs() < 1e-12 && (d.im_f64() + 2.0).abs() < 1e-12);
        assert!(d.rad.log2() < -100.0);
    }

    #[test]
    fn integer_test_outcomes() {
        let prec = 64;
        let near = Ball::from_f64(7.0000001, 0.0, 1e-9, prec);
        assert_eq!(near.integer_test(), IntegerTest::NotInteger);
        let exact = Ball::from_f64(-3.0, 0.0, 1e-12, prec);
        assert_eq!(exact.integer_test(), IntegerTest::Integer(BigInt::from(-3)));
        let fuzzy = Ball::from_f64(2.3, 0.0, 0.4, prec);
        assert_eq!(fuzzy.integer_test(), IntegerTest::Undecided);
        let complex = Ball::from_f64(2.0, 0.5, 1e-9, prec);
        assert_eq!(complex.integer_test(), IntegerTest::NotInteger);
    }

    #[test]
    fn product_of_linear_factors() {
        let prec = 96;
        let r = [Ball::from_f64(1.0, 1.0, 0.0, prec), Ball::from_f64(1.0, -1.0, 0.0, prec)];
        let p = poly_from_roots(&r, prec);
        let ints: Vec<IntegerTest> = p.iter().map(|c| c.integer_test()).collect();
        assert_eq!(
            ints,
            vec![
                IntegerTest::Integer(BigInt::from(2)),
                IntegerTest::Integer(BigInt::from(-2)),
                IntegerTest::Integer(BigInt::from(1))
            ]
        );
    }
}
