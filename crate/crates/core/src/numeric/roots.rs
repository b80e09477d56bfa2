//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from an f64 Aberth iteration followed by fixed-point
//! Weierstrass refinement. Each root is then enclosed in the disk
//! `D(z_i, n |W_i|)` with `W_i` the Weierstrass correction; when those disks are
//! pairwise disjoint each of them holds exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::ball::{big_to_f64_scaled, eval_int_poly, Ball};
use super::mag::Mag;
use super::NumericError;

const MAX_PREC: u32 = 1 << 14;

/// Enclosures for all roots, one ball per root, in no particular order.
#[derive(Clone, Debug)]
pub struct RootBalls {
    pub balls: Vec<Ball>,
    pub prec: u32,
}

fn big_log2(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let b = x.bits() as i64;
    let s = (b - 60).max(0);
    let top: BigInt = x >> s as usize;
    top.to_f64().unwrap().abs().log2() + s as f64
}

/// Power-of-two scale S with all roots in |z| <= 2S (Fujiwara bound).
fn root_scale_log2(coeffs: &[BigInt]) -> i64 {
    let n = coeffs.len() - 1;
    let lc = big_log2(&coeffs[n]);
    let mut best = f64::NEG_INFINITY;
    for k in 1..=n {
        let c = &coeffs[n - k];
        if c.is_zero() {
            continue;
        }
        let mut v = (big_log2(c) - lc) / k as f64;
        if k == n {
            v -= 1.0 / n as f64;
        }
        best = best.max(v);
    }
    if best == f64::NEG_INFINITY {
        0
    } else {
        best.ceil() as i64 + 1
    }
}

fn aberth_f64(coeffs: &[BigInt], scale: i64) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    // coefficients of p(2^scale z) / (lc 2^(scale n))
    let lc = big_log2(&coeffs[n]);
    let b: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.is_zero() {
                0.0
            } else {
                let sign = if c.sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
                let e = big_log2(c) - lc + (k as f64 - n as f64) * scale as f64;
                if e < -1000.0 {
                    0.0
                } else {
                    sign * e.exp2()
                }
            }
        })
        .collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in b.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.9, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if k != i {
                    s += (z[i] - z[k]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    let s = (scale as f64).exp2();
    z.into_iter().map(|w| w * s).collect()
}

/// Weierstrass corrections `p(z_i) / (lc * prod_{k != i} (z_i - z_k))`.
fn weierstrass(coeffs: &[BigInt], z: &[Ball]) -> Option<Vec<Ball>> {
    let n = z.len();
    let lc = &coeffs[n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = Ball::from_int(lc, z[i].prec);
        for k in 0..n {
            if k != i {
                den = den.mul(&z[i].sub(&z[k]));
            }
        }
        out.push(eval_int_poly(coeffs, &z[i]).div(&den)?);
    }
    Some(out)
}

fn exact_center(b: &Ball) -> Ball {
    Ball { rad: Mag::ZERO, ..b.clone() }
}

/// Isolate all roots of a squarefree polynomial with radius at most
/// `2^-accuracy_bits`.
pub fn isolate_roots(coeffs: &[BigInt], accuracy_bits: u32) -> Result<RootBalls, NumericError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Err(NumericError::DegreeZero);
    }
    if n == 1 {
        // exact rational root; enclose it
        let prec = accuracy_bits + 8;
        let num = Ball::from_int(&-coeffs[0].clone(), prec);
        let den = Ball::from_int(&coeffs[1], prec);
        let r = num.div(&den).ok_or(NumericError::PrecisionExhausted)?;
        return Ok(RootBalls { balls: vec![r], prec });
    }
    let scale = root_scale_log2(coeffs);
    let start = aberth_f64(coeffs, scale);
    let guard = (scale.max(0) as u32) + 2 * (usize::BITS - n.leading_zeros()) + 32;
    let mut prec = (accuracy_bits + guard).max(128);
    let mut approx: Vec<Ball> = start.iter().map(|w| Ball::from_f64(w.re, w.im, 0.0, prec)).collect();
    // nudge exact collisions apart
    for i in 0..n {
        for k in 0..i {
            if approx[i].re == approx[k].re && approx[i].im == approx[k].im {
                approx[i].im += BigInt::from(k as u64 + 1) << (prec as usize - 20);
            }
        }
    }
    while prec <= MAX_PREC {
        approx = approx.iter().map(|b| exact_center(&b.with_prec(prec))).collect();
        let target = -(accuracy_bits as f64) - (n as f64).log2() - 4.0;
        let mut best = f64::INFINITY;
        let mut stall = 0;
        for _ in 0..400 {
            let w = match weierstrass(coeffs, &approx) {
                Some(w) => w,
                None => break,
            };
            let mut worst = f64::NEG_INFINITY;
            for (z, c) in approx.iter_mut().zip(&w) {
                *z = exact_center(&z.sub(c));
                worst = worst.max(c.center_abs_up().log2());
            }
            if worst < target.min(-(prec as f64) * 0.75) {
                break;
            }
            if worst < best - 0.5 {
                best = worst;
                stall = 0;
            } else {
                stall += 1;
                if stall > 8 && best < target {
                    break;
                }
                if stall > 40 {
                    break;
                }
            }
        }
        if let Some(balls) = certify(coeffs, &approx, accuracy_bits) {
            return Ok(RootBalls { balls, prec });
        }
        prec *= 2;
    }
    Err(NumericError::PrecisionExhausted)
}

/// Enclose one root of `coeffs` around each approximation; `None` unless the
/// disks are pairwise disjoint and within `2^-accuracy_bits`.
pub fn certify(coeffs: &[BigInt], approx: &[Ball], accuracy_bits: u32) -> Option<Vec<Ball>> {
    let n = approx.len();
    let w = weierstrass(coeffs, approx)?;
    let limit = Mag::pow2(-(accuracy_bits as i64));
    let mut balls = Vec::with_capacity(n);
    for (z, c) in approx.iter().zip(&w) {
        let rad = c.abs_up().mul_up(Mag::from_f64(n as f64));
        if !(rad <= limit) {
            return None;
        }
        balls.push(Ball { rad, ..z.clone() });
    }
    for i in 0..n {
        for k in 0..i {
            if !balls[i].disjoint(&balls[k]) {
                return None;
            }
        }
    }
    Some(balls)
}

/// Index of the conjugate root for every ball; `None` if ambiguous.
pub fn conjugate_pairing(balls: &[Ball]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(balls.len());
    for b in balls {
        let c = b.conj();
        let hits: Vec<usize> = (0..balls.len()).filter(|&k| c.overlaps(&balls[k])).collect();
        if hits.len() != 1 {
            return None;
        }
        out.push(hits[0]);
    }
    for (i, &j) in out.iter().enumerate() {
        if out[j] != i {
            return None;
        }
    }
    Some(out)
}

/// True when the ball certainly lies in the open upper half plane.
pub fn upper_half(b: &Ball) -> bool {
    b.im.sign() == num_bigint::Sign::Plus && Mag::from_bigint_down(&b.im, -(b.prec as i64)) > b.rad
}

pub fn approx_f64(b: &Ball) -> (f64, f64) {
    (big_to_f64_scaled(&b.re, b.prec), big_to_f64_scaled(&b.im, b.prec))
}
