//! p-adic valuations, Newton polygons and their type tags.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intpoly::{IntPolynomial, WeilPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NewtonError {
    #[error("slope multiset {0} is not one of the recognised shapes")]
    UnrecognizedSlopeMultiset(String),
}

/// `v_p(x)` for nonzero x.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (quo, rem) = y.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        y = quo;
        v += 1;
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices `(j, v(a_j))`, with `a_j` the coefficient of `T^(deg - j)`.
    pub vertices: Vec<(usize, BigRational)>,
    /// Nondecreasing, one entry per root.
    pub slopes: Vec<BigRational>,
    pub p: u64,
    pub n: u32,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.slopes.len()
    }

    /// Slopes with their multiplicities, in increasing order.
    pub fn segments(&self) -> Vec<(BigRational, usize)> {
        let mut out: Vec<(BigRational, usize)> = Vec::new();
        for s in &self.slopes {
            match out.last_mut() {
                Some((t, m)) if t == s => *m += 1,
                _ => out.push((s.clone(), 1)),
            }
        }
        out
    }

    pub fn is_ordinary(&self) -> bool {
        self.slopes.iter().all(|s| s.is_zero() || s.is_one())
    }

    pub fn is_supersingular(&self) -> bool {
        let half = rat(1, 2);
        self.slopes.iter().all(|s| *s == half)
    }

    /// Number of slopes equal to zero (the p-rank).
    pub fn p_rank(&self) -> usize {
        self.slopes.iter().filter(|s| s.is_zero()).count()
    }
}

pub fn format_slopes(slopes: &[BigRational]) -> String {
    let parts: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_slopes(&self.slopes))
    }
}

/// Lower convex hull of `(j, v_p(a_j)/n)` for any polynomial with nonzero
/// constant term.
pub fn newton_polygon_of(poly: &IntPolynomial, p: u64, n: u32) -> NewtonPolygon {
    let deg = poly.deg();
    let nn = BigInt::from(n);
    let points: Vec<(usize, BigRational)> = (0..=deg)
        .filter_map(|j| {
            let c = poly.coeff(deg - j);
            if c.is_zero() {
                None
            } else {
                Some((j, BigRational::new(BigInt::from(valuation(&c, p)), nn.clone())))
            }
        })
        .collect();
    // monotone chain, lower hull, points already sorted by j
    let mut hull: Vec<(usize, BigRational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (j1, v1) = &hull[hull.len() - 2];
            let (j2, v2) = &hull[hull.len() - 1];
            // drop the middle point if it is on or above the chord
            let lhs = (v2 - v1) * BigRational::from_integer(BigInt::from(pt.0 - j1));
            let rhs = (&pt.1 - v1) * BigRational::from_integer(BigInt::from(j2 - j1));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes = Vec::with_capacity(deg);
    for w in hull.windows(2) {
        let width = w[1].0 - w[0].0;
        let s = (&w[1].1 - &w[0].1) / BigRational::from_integer(BigInt::from(width));
        slopes.extend(std::iter::repeat_n(s, width));
    }
    NewtonPolygon { vertices: hull, slopes, p, n }
}

pub fn newton_polygon(poly: &WeilPolynomial) -> NewtonPolygon {
    newton_polygon_of(poly.poly(), poly.p(), poly.n())
}

/// Newton polygon type tags for dimensions 1 to 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NPType {
    Ordinary,
    Supersingular,
    A,
    B,
    C,
    D,
    E,
}

impl NPType {
    pub fn letter(&self) -> &'static str {
        match self {
            NPType::Ordinary => "ordinary",
            NPType::Supersingular => "supersingular",
            NPType::A => "A",
            NPType::B => "B",
            NPType::C => "C",
            NPType::D => "D",
            NPType::E => "E",
        }
    }

    pub fn parse(s: &str) -> Option<NPType> {
        Some(match s {
            "ordinary" => NPType::Ordinary,
            "supersingular" => NPType::Supersingular,
            "A" => NPType::A,
            "B" => NPType::B,
            "C" => NPType::C,
            "D" => NPType::D,
            "E" => NPType::E,
            _ => return None,
        })
    }

    /// The slope multiset of a tag in dimension `dim`.
    pub fn slopes(&self, dim: usize) -> Option<Vec<BigRational>> {
        let s = |v: &[(i64, i64)]| Some(v.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>());
        match (dim, self) {
            (1, NPType::Ordinary) => s(&[(0, 1), (1, 1)]),
            (1, NPType::Supersingular) => s(&[(1, 2), (1, 2)]),
            (2, NPType::A) => s(&[(0, 1), (0, 1), (1, 1), (1, 1)]),
            (2, NPType::B) => s(&[(0, 1), (1, 2), (1, 2), (1, 1)]),
            (2, NPType::C) => s(&[(1, 2); 4]),
            (3, NPType::A) => s(&[(0, 1), (0, 1), (0, 1), (1, 1), (1, 1), (1, 1)]),
            (3, NPType::B) => s(&[(0, 1), (0, 1), (1, 2), (1, 2), (1, 1), (1, 1)]),
            (3, NPType::C) => s(&[(0, 1), (1, 2), (1, 2), (1, 2), (1, 2), (1, 1)]),
            (3, NPType::D) => s(&[(1, 3), (1, 3), (1, 3), (2, 3), (2, 3), (2, 3)]),
            (3, NPType::E) => s(&[(1, 2); 6]),
            _ => None,
        }
    }

    pub fn tags(dim: usize) -> &'static [NPType] {
        match dim {
            1 => &[NPType::Ordinary, NPType::Supersingular],
            2 => &[NPType::A, NPType::B, NPType::C],
            3 => &[NPType::A, NPType::B, NPType::C, NPType::D, NPType::E],
            _ => &[],
        }
    }
}

impl fmt::Display for NPType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Tag of a slope multiset in dimension 1 to 3; `Ok(None)` for larger
/// dimensions, which carry slopes but no tag.
pub fn np_classify(np: &NewtonPolygon, dimension: usize) -> Result<Option<NPType>, NewtonError> {
    if dimension > 3 {
        return Ok(None);
    }
    for tag in NPType::tags(dimension) {
        if tag.slopes(dimension).as_deref() == Some(&np.slopes[..]) {
            return Ok(Some(*tag));
        }
    }
    Err(NewtonError::UnrecognizedSlopeMultiset(format_slopes(&np.slopes)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::validate_weil;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn shioda_polygons() {
        let shioda = validate_weil(&poly(&[130321, 54872, 10108, 152, -170, 8, 28, 8, 1]), 19, 1).unwrap();
        let np = newton_polygon(&shioda);
        assert_eq!(np.slopes, [vec![rat(0, 1); 4], vec![rat(1, 1); 4]].concat());
        assert_eq!(np_classify(&np, 4), Ok(None));
        let b = validate_weil(&poly(&[6859, 0, 171, -64, 9, 0, 1]), 19, 1).unwrap();
        assert_eq!(np_classify(&newton_polygon(&b), 3), Ok(Some(NPType::A)));
    }

    #[test]
    fn supersingular_square() {
        let f = validate_weil(&poly(&[4, -4, 1]), 2, 2).unwrap();
        let np = newton_polygon(&f);
        assert_eq!(np.slopes, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(np.vertices.len(), 2);
        assert_eq!(np_classify(&np, 1), Ok(Some(NPType::Supersingular)));
    }

    #[test]
    fn almost_ordinary_and_type_d() {
        // 2.2.ab_a: T^4 - T^3 + 0 T^2 - 2T + 4
        let f = validate_weil(&poly(&[4, -2, 0, -1, 1]), 2, 1).unwrap();
        assert_eq!(np_classify(&newton_polygon(&f), 2), Ok(Some(NPType::B)));
        let g = poly(&[64, 0, 0, 8, 0, 0, 1]);
        let np = newton_polygon_of(&g, 2, 2);
        assert_eq!(np.slopes, [vec![rat(1, 2); 6]].concat());
        let d = poly(&[8, 0, 0, 2, 0, 0, 1]);
        assert_eq!(np_classify(&newton_polygon_of(&d, 2, 1), 3), Ok(Some(NPType::D)));
        let bad = poly(&[64, 0, 0, 4, 0, 0, 1]);
        let np = newton_polygon_of(&bad, 2, 1);
        assert_eq!(np_classify(&np, 3), Err(NewtonError::UnrecognizedSlopeMultiset(format_slopes(&np.slopes))));
    }
}
