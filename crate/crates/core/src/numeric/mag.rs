//! Directed-rounding magnitudes `m * 2^e` used as ball radii and bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const UP: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;
const DOWN: f64 = 1.0 - 1.0 / (1u64 << 50) as f64;

/// Nonnegative number `m * 2^e` with `m` in `[0.5, 1)` (or zero).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        // subnormal: scale into normal range first
        let (m, e) = frexp(x * (1u64 << 54) as f64);
        return (m, e - 54);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    fn norm(m: f64, e: i64) -> Mag {
        debug_assert!(m >= 0.0 && m.is_finite());
        if m == 0.0 {
            return Mag::ZERO;
        }
        let (fm, fe) = frexp(m);
        Mag { m: fm, e: e + fe }
    }

    pub fn from_f64(x: f64) -> Mag {
        assert!(x >= 0.0 && x.is_finite());
        Mag::norm(x, 0)
    }

    pub fn pow2(k: i64) -> Mag {
        Mag { m: 0.5, e: k + 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    /// Upper bound of |x| * 2^shift.
    pub fn from_bigint_up(x: &BigInt, shift: i64) -> Mag {
        Self::from_bigint(x, shift, true)
    }

    /// Lower bound of |x| * 2^shift.
    pub fn from_bigint_down(x: &BigInt, shift: i64) -> Mag {
        Self::from_bigint(x, shift, false)
    }

    fn from_bigint(x: &BigInt, shift: i64, up: bool) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let a = x.abs();
        let bits = a.bits() as i64;
        if bits <= 53 {
            return Mag::norm(a.to_f64().unwrap(), shift);
        }
        let drop = bits - 60;
        let top: BigInt = &a >> drop as usize;
        let t = top.to_u64().unwrap() as f64;
        let mut m = if up { (t + 1.0) * UP } else { t * DOWN };
        if !up && m < 0.0 {
            m = 0.0;
        }
        Mag::norm(m, shift + drop)
    }

    pub fn add_up(self, o: Mag) -> Mag {
        self.add(o, true)
    }

    pub fn add_down(self, o: Mag) -> Mag {
        self.add(o, false)
    }

    fn add(self, o: Mag, up: bool) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let diff = a.e - b.e;
        let m = if diff > 1000 {
            if up {
                a.m * UP
            } else {
                a.m
            }
        } else {
            let s = a.m + b.m * (2f64).powi(-(diff as i32));
            if up {
                s * UP
            } else {
                s * DOWN
            }
        };
        Mag::norm(m, a.e)
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * UP, self.e + o.e)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * DOWN, self.e + o.e)
    }

    pub fn mul_f64_up(self, x: f64) -> Mag {
        self.mul_up(Mag::from_f64(x))
    }

    pub fn mul_2exp(self, k: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag { m: self.m, e: self.e + k }
        }
    }

    /// Lower bound of `self - o`, clamped at zero.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self <= o {
            return Mag::ZERO;
        }
        let diff = self.e - o.e;
        if diff > 1000 {
            return Mag::norm(self.m * DOWN, self.e);
        }
        let s = (self.m - o.m * (2f64).powi(-(diff as i32))) * DOWN;
        if s <= 0.0 {
            Mag::ZERO
        } else {
            Mag::norm(s, self.e)
        }
    }

    /// Upper bound of `self / o` (o > 0).
    pub fn div_up(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "division by zero magnitude");
        if self.is_zero() {
            return self;
        }
        Mag::norm(self.m / o.m * UP, self.e - o.e)
    }

    pub fn div_down(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "division by zero magnitude");
        if self.is_zero() {
            return self;
        }
        Mag::norm(self.m / o.m * DOWN, self.e - o.e)
    }

    pub fn sqrt_up(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 { (self.m, self.e) } else { (self.m * 2.0, self.e - 1) };
        Mag::norm(m.sqrt() * UP, e / 2)
    }

    pub fn sqrt_down(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 { (self.m, self.e) } else { (self.m * 2.0, self.e - 1) };
        Mag::norm(m.sqrt() * DOWN, e / 2)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// Approximate log2; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.log2() + self.e as f64
        }
    }

    /// Nearest f64, saturating.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.e > 1000 {
            return f64::INFINITY;
        }
        if self.e < -1000 {
            return 0.0;
        }
        self.m * (2f64).powi(self.e as i32)
    }

    /// Smallest k with self <= 2^k.
    pub fn ceil_log2(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else if self.m == 0.5 {
            self.e - 1
        } else {
            self.e
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, o: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m).unwrap()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_bracket_exact_values() {
        let x = BigInt::from(3u64) << 200usize;
        let up = Mag::from_bigint_up(&x, -200);
        let down = Mag::from_bigint_down(&x, -200);
        assert!(down.to_f64() <= 3.0 && up.to_f64() >= 3.0);
        let s = Mag::from_f64(1.5).add_up(Mag::from_f64(2.25));
        assert!(s.to_f64() >= 3.75);
        let d = Mag::from_f64(5.0).sub_down(Mag::from_f64(2.0));
        assert!(d.to_f64() <= 3.0 && d.to_f64() > 2.99);
        assert!(Mag::pow2(-3000) < Mag::pow2(-2999));
        assert_eq!(Mag::pow2(10).ceil_log2(), 10);
        assert!(Mag::from_f64(4.0).sqrt_up().to_f64() >= 2.0);
    }
}
