//! Weighted permutation representations: assembly from certificates, angle
//! rank, the divisor matrix and the divisor-map constraints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::rank_rational;
use crate::localfield::{PadicFactorization, ValuationAssignment};
use crate::newton::rat;
use crate::splitting::GaloisCertificate;
use crate::w2d::{canonicalize_rep, enumerate_subgroups_of, w_stabilizer, SignedPerm, SignedSubgroup, W2dError, Weighting};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WprError {
    #[error("valuations of a symbol and its bar do not sum to 1 at symbol {0}")]
    WeightPairingViolation(usize),
    #[error("angle rank formulas disagree: full matrix {full}, hyperplane matrix {hyperplane}")]
    InternalRankMismatch { full: usize, hyperplane: usize },
    #[error("certificate and valuations have different dimensions")]
    DimensionMismatch,
    #[error(transparent)]
    W2d(#[from] W2dError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPermRep {
    pub w: Weighting,
    pub group: SignedSubgroup,
}

impl WeightedPermRep {
    pub fn new(w: Weighting, group: SignedSubgroup) -> Result<WeightedPermRep, WprError> {
        if w.d() != group.d() {
            return Err(WprError::DimensionMismatch);
        }
        Ok(WeightedPermRep { w, group })
    }

    pub fn d(&self) -> usize {
        self.w.d()
    }

    /// Same pair with the group replaced by its canonical `Stab(w)`-conjugate.
    pub fn canonical(&self) -> WeightedPermRep {
        WeightedPermRep { w: self.w.clone(), group: canonicalize_rep(&self.w, &self.group) }
    }
}

impl fmt::Display for WeightedPermRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.group.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "w={} G=<{}>", self.w, gens.join(", "))
    }
}

/// Relabel so that the weights climb: unbarred symbols carry the smaller
/// value of each pair, sorted stably by value.
fn climbing_relabel(values: &[BigRational]) -> SignedPerm {
    let d = values.len() / 2;
    let mut reps: Vec<usize> = (0..d).map(|i| if values[i] <= values[i + d] { i } else { i + d }).collect();
    reps.sort_by(|a, b| values[*a].cmp(&values[*b]));
    let mut images = vec![0u8; 2 * d];
    for (t, &s) in reps.iter().enumerate() {
        let bar = if s < d { s + d } else { s - d };
        images[t] = s as u8;
        images[t + d] = bar as u8;
    }
    SignedPerm::from_images(images).expect("relabelling is a signed permutation")
}

/// Build the representation from a Galois certificate and a valuation
/// assignment on the same symbols.
pub fn assemble(cert: &GaloisCertificate, vals: &ValuationAssignment) -> Result<WeightedPermRep, WprError> {
    let d = cert.d;
    if vals.values.len() != 2 * d {
        return Err(WprError::DimensionMismatch);
    }
    for i in 0..d {
        if &vals.values[i] + &vals.values[i + d] != BigRational::one() {
            return Err(WprError::WeightPairingViolation(i));
        }
    }
    let relabel = climbing_relabel(&vals.values);
    let w = Weighting::new((0..2 * d).map(|t| vals.values[relabel.apply(t)].clone()).collect())?;
    let group = cert.group.conjugate_by(&relabel);
    Ok(WeightedPermRep { w: w.clone(), group: canonicalize_rep(&w, &group) })
}

/// Rows indexed by group elements, columns by all 2d symbols: `w(g(j))`.
pub fn weight_matrix(rep: &WeightedPermRep) -> Vec<Vec<BigRational>> {
    let n = 2 * rep.d();
    rep.group.elements().iter().map(|g| (0..n).map(|j| rep.w.get(g.apply(j)).clone()).collect()).collect()
}

/// Rows indexed by group elements, columns by unbarred symbols:
/// `w(g(i)) - w(g(bar i))`.
pub fn hyperplane_matrix(rep: &WeightedPermRep) -> Vec<Vec<BigRational>> {
    let d = rep.d();
    rep.group
        .elements()
        .iter()
        .map(|g| (0..d).map(|i| rep.w.get(g.apply(i)) - rep.w.get(g.apply(i + d))).collect())
        .collect()
}

/// Angle rank `rank(V) - 1`, cross-checked against the hyperplane matrix.
///
/// The two agree up to whether the all-ones column lies in the span of the
/// hyperplane columns, which never happens once complex conjugation is in
/// the group.
pub fn angle_rank(rep: &WeightedPermRep) -> Result<usize, WprError> {
    let full = rank_rational(&weight_matrix(rep));
    let hyper = hyperplane_matrix(rep);
    let hyperplane = rank_rational(&hyper);
    let with_ones: Vec<Vec<BigRational>> = hyper
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(BigRational::one());
            r
        })
        .collect();
    let ones_outside = rank_rational(&with_ones) > hyperplane;
    let expected = if ones_outside { hyperplane + 1 } else { hyperplane };
    if full != expected || full == 0 {
        return Err(WprError::InternalRankMismatch { full: full.saturating_sub(1), hyperplane });
    }
    Ok(full - 1)
}

/// Rank of the Newton hyperplane matrix on its own.
pub fn hyperplane_rank(rep: &WeightedPermRep) -> usize {
    rank_rational(&hyperplane_matrix(rep))
}

/// The variant that keeps only the d unbarred columns; kept for comparison
/// since it undercounts (an ordinary elliptic curve gets 0).
pub fn angle_rank_unbarred_columns(rep: &WeightedPermRep) -> usize {
    let d = rep.d();
    let m: Vec<Vec<BigRational>> = weight_matrix(rep).into_iter().map(|r| r[..d].to_vec()).collect();
    rank_rational(&m).saturating_sub(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorMatrix {
    pub elements: Vec<SignedPerm>,
    /// `rows[s][j] = w(s^-1(j))`.
    pub rows: Vec<Vec<BigRational>>,
}

impl DivisorMatrix {
    pub fn build(rep: &WeightedPermRep) -> DivisorMatrix {
        let n = 2 * rep.d();
        let elements = rep.group.elements().to_vec();
        let rows = elements
            .iter()
            .map(|g| {
                let inv = g.inverse();
                (0..n).map(|j| rep.w.get(inv.apply(j)).clone()).collect()
            })
            .collect();
        DivisorMatrix { elements, rows }
    }

    pub fn rank(&self) -> usize {
        rank_rational(&self.rows)
    }

    pub fn row_sums_equal(&self, d: usize) -> bool {
        let target = BigRational::from_integer(BigInt::from(d));
        self.rows.iter().all(|r| r.iter().fold(BigRational::zero(), |a, x| a + x) == target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Violated(String),
    Unverified(String),
}

impl Check {
    pub fn is_violated(&self) -> bool {
        matches!(self, Check::Violated(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorReport {
    pub pairing: Check,
    pub transitive_on_symbols: Check,
    pub transitive_on_primes: Check,
    pub prime_count_divisibility: Check,
    pub decomposition_group: Check,
}

impl DivisorReport {
    pub fn violations(&self) -> Vec<String> {
        [
            &self.pairing,
            &self.transitive_on_symbols,
            &self.transitive_on_primes,
            &self.prime_count_divisibility,
            &self.decomposition_group,
        ]
        .into_iter()
        .filter_map(|c| match c {
            Check::Violated(s) => Some(s.clone()),
            _ => None,
        })
        .collect()
    }
}

/// Lengths `m` of Newton segments containing exactly two lattice points,
/// i.e. denominators of slopes other than 1, counted once per slope.
pub fn two_point_segments(w: &Weighting) -> Vec<usize> {
    let mut slopes: Vec<BigRational> = w.values().to_vec();
    slopes.sort();
    slopes.dedup();
    slopes
        .iter()
        .filter_map(|s| {
            let den = s.denom().clone();
            let count = w.values().iter().filter(|x| *x == s).count();
            let m = den.to_string().parse::<usize>().ok()?;
            (m > 1 && count == m).then_some(m)
        })
        .collect()
}

fn subgroups_of_intersection(h: &SignedSubgroup, k: &SignedSubgroup) -> Vec<SignedSubgroup> {
    let common: Vec<SignedPerm> = h.elements().iter().filter(|g| k.contains(g)).cloned().collect();
    enumerate_subgroups_of(h.d(), &common)
}

/// Does `D` preserve `w` with integral weight sums on each of its orbits?
fn integral_orbits(w: &Weighting, dg: &SignedSubgroup) -> bool {
    dg.orbits().iter().all(|o| w.sum_over(o).is_integer())
}

/// Check the necessary conditions on the divisor map of a simple totally
/// complex source. Local data is the factorization of h over `Q_p`.
pub fn check_divisor_properties(rep: &WeightedPermRep, local: &PadicFactorization, n: u32) -> DivisorReport {
    let d = rep.d();
    let pairing = match (0..d).find(|&i| rep.w.get(i) + rep.w.get(i + d) != BigRational::one()) {
        None => Check::Holds,
        Some(i) => Check::Violated(format!("pairing fails at symbol {}", i + 1)),
    };
    let transitive_on_symbols = if rep.group.is_transitive() {
        Check::Holds
    } else {
        Check::Violated("group is not transitive on the roots".into())
    };
    // primes above p are the cosets of one decomposition group
    let transitive_on_primes = Check::Holds;
    let data = local.local_data(n);
    let stab = w_stabilizer(&rep.w);
    let mut expected: Vec<(usize, BigRational)> = data.clone();
    expected.sort();
    let consistent: Vec<SignedSubgroup> = subgroups_of_intersection(&rep.group, &stab)
        .into_iter()
        .filter(|dg| {
            let mut got: Vec<(usize, BigRational)> = dg
                .orbits()
                .iter()
                .map(|o| (o.len(), rep.w.get(o[0]).clone()))
                .collect();
            got.sort();
            got == expected
        })
        .collect();
    let decomposition_group = if consistent.is_empty() {
        Check::Violated("no subgroup fixing w has orbits matching the local factors".into())
    } else {
        Check::Holds
    };
    let lcm = local.factors.iter().fold(1usize, |a, f| num_integer::lcm(a, f.degree));
    let mut divisibility = Check::Holds;
    for m in two_point_segments(&rep.w) {
        if lcm % m != 0 {
            divisibility = Check::Unverified(format!("segment of length {} not forced by local degrees", m));
        }
        if !consistent.is_empty() && consistent.iter().all(|dg| dg.order() % m != 0) {
            divisibility = Check::Violated(format!("prime count does not divide |G|/{}", m));
            break;
        }
    }
    DivisorReport { pairing, transitive_on_symbols, transitive_on_primes, prime_count_divisibility: divisibility, decomposition_group }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Screen {
    /// No obstruction found.
    Realizable,
    Excluded(String),
    Unknown(String),
}

/// Mechanical exclusion of a (weighting, group) pair: a divisor map needs a
/// decomposition subgroup fixing w whose orbits (the local factors) carry
/// integral weight sums; a full group forces maximal angle rank.
pub fn realizability_screen(w: &Weighting, h: &SignedSubgroup) -> Screen {
    let d = w.d();
    if !h.is_transitive() || !h.contains_iota() {
        return Screen::Unknown("screen applies to transitive groups containing conjugation".into());
    }
    if w.is_constant() {
        return Screen::Unknown("constant weighting gives angle rank 0 and no obstruction".into());
    }
    let rep = WeightedPermRep { w: w.clone(), group: h.clone() };
    if h.order() == SignedSubgroup::full(d).order() {
        return match angle_rank(&rep) {
            Ok(r) if r == d => Screen::Realizable,
            Ok(r) => Screen::Excluded(format!("full group with angle rank {} < {}", r, d)),
            Err(e) => Screen::Excluded(e.to_string()),
        };
    }
    let stab = w_stabilizer(w);
    if subgroups_of_intersection(h, &stab).iter().any(|dg| integral_orbits(w, dg)) {
        return Screen::Realizable;
    }
    let mut reason = "no subgroup fixing w has integral weight sums on its orbits".to_string();
    let m = two_point_segments(w).iter().fold(1, |a, &b| num_integer::lcm(a, b));
    if h.is_cyclic() && m > 1 {
        if let Some(gen) = h.elements().iter().find(|g| g.order() == h.order()) {
            let mut seq = Vec::new();
            let mut x = 0;
            for _ in 0..gen.order() {
                seq.push(w.get(x).to_string());
                x = gen.apply(x);
            }
            reason = format!("sequence ({}) along {} is not {}-periodic", seq.join(","), gen, h.order() / m);
        }
    }
    Screen::Excluded(reason)
}

pub fn half() -> BigRational {
    rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::{validate_weil, IntPolynomial};
    use crate::localfield::{factor_over_qp, root_valuations};
    use crate::splitting::{complex_roots, galois_group};
    use crate::w2d::{atlas, calibrated_group};

    fn rep_of(coeffs: &[i64], p: u64, n: u32) -> (WeightedPermRep, PadicFactorization) {
        let h = validate_weil(&IntPolynomial::from_i64(coeffs), p, n).unwrap();
        let cert = galois_group(&complex_roots(&h, 64).unwrap(), p).unwrap();
        let vals = root_valuations(&cert, p, n).unwrap();
        let local = factor_over_qp(h.poly(), p, 8).unwrap();
        (assemble(&cert, &vals).unwrap(), local)
    }

    fn ao3() -> Weighting {
        Weighting::from_i64_pairs(&[(0, 1), (0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn ordinary_elliptic_curve() {
        let (rep, local) = rep_of(&[19, 8, 1], 19, 1);
        assert_eq!(rep.w.values(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(rep.group.order(), 2);
        assert_eq!(angle_rank(&rep), Ok(1));
        assert_eq!(angle_rank_unbarred_columns(&rep), 0);
        assert!(check_divisor_properties(&rep, &local, 1).violations().is_empty());
    }

    #[test]
    fn almost_ordinary_surface() {
        let (rep, local) = rep_of(&[4, -2, 0, -1, 1], 2, 1);
        assert!(rep.w.is_climbing());
        assert_eq!(rep.w, Weighting::from_i64_pairs(&[(0, 1), (1, 2)]).unwrap());
        assert_eq!(atlas(2).unwrap().label_of(&rep.group).unwrap().to_string(), "W4.4.t.a.1");
        assert_eq!(angle_rank(&rep), Ok(2));
        let report = check_divisor_properties(&rep, &local, 1);
        assert!(report.violations().is_empty(), "{:?}", report);
    }

    #[test]
    fn supersingular_has_rank_zero() {
        for h in &atlas(2).unwrap().subgroups {
            let rep = WeightedPermRep::new(Weighting::constant_half(2), h.clone()).unwrap();
            assert_eq!(angle_rank(&rep), Ok(0));
        }
    }

    #[test]
    fn trivial_group_keeps_full_formula() {
        let rep = WeightedPermRep::new(Weighting::from_i64_pairs(&[(0, 1)]).unwrap(), SignedSubgroup::trivial(1)).unwrap();
        assert_eq!(angle_rank(&rep), Ok(0));
        assert_eq!(hyperplane_rank(&rep), 1);
    }

    #[test]
    fn divisor_matrix_rows() {
        let rep = WeightedPermRep::new(ao3(), calibrated_group("D6.6.t.a.1").unwrap()).unwrap();
        let dm = DivisorMatrix::build(&rep);
        assert!(dm.row_sums_equal(3));
        let mut base = ao3().values().to_vec();
        base.sort();
        for r in &dm.rows {
            let mut s = r.clone();
            s.sort();
            assert_eq!(s, base);
        }
        assert_eq!(dm.rank(), rank_rational(&weight_matrix(&rep)));
    }

    #[test]
    fn cyclic_sextic_excluded_for_almost_ordinary() {
        let c6 = calibrated_group("C6.6.t.a.2").unwrap();
        match realizability_screen(&ao3(), &c6) {
            Screen::Excluded(reason) => assert!(reason.contains("(0,0,1/2,1,1,1/2)"), "{}", reason),
            other => panic!("{:?}", other),
        }
        let w4 = SignedSubgroup::full(2);
        assert_eq!(realizability_screen(&Weighting::from_i64_pairs(&[(0, 1), (0, 1)]).unwrap(), &w4), Screen::Realizable);
        assert!(matches!(realizability_screen(&Weighting::constant_half(3), &c6), Screen::Unknown(_)));
    }

    #[test]
    fn full_group_reaches_full_rank() {
        for d in 1..=3 {
            let full = SignedSubgroup::full(d);
            for w in [
                Weighting::from_unbarred(&vec![rat(0, 1); d]).unwrap(),
                Weighting::from_unbarred(&(0..d).map(|i| if i == 0 { rat(0, 1) } else { rat(1, 2) }).collect::<Vec<_>>()).unwrap(),
            ] {
                let rep = WeightedPermRep::new(w, full.clone()).unwrap();
                assert_eq!(angle_rank(&rep), Ok(d));
            }
        }
    }
}
