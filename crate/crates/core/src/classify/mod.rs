//! Classification of isogeny classes: the full pipeline from a Weil
//! polynomial to its weighted permutation representation, angle rank and
//! table verdicts.

pub mod audit;
pub mod tables;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intpoly::{frobenius_decompose, honda_tate_e, FrobeniusDecomposition, IntPolynomial, WeilPolynomial};
use crate::localfield::{factor_over_qp, root_valuations_seeded, LocalFieldError, PROBE_SEED, PadicFactorization, ValuationAssignment};
use crate::newton::{newton_polygon, np_classify, NPType, NewtonError, NewtonPolygon};
use crate::parallel::map_items;
use crate::splitting::{complex_roots, galois_group, GaloisCertificate, SplittingError};
use crate::w2d::{atlas, canonicalize_rep, SubgroupLabel, W2dError, Weighting};
use crate::wpr::{
    angle_rank, assemble, check_divisor_properties, hyperplane_rank, realizability_screen, DivisorReport, Screen,
    WeightedPermRep, WprError,
};

pub use tables::{Arrow, Erratum, VerdictRow, ERRATA, FLOWCHARTS, FLOWCHART_ERRATA, VERDICTS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("verdicts are only tabled for dimensions 1 to 3, got {0}")]
    UnsupportedDimensionForVerdicts(usize),
    #[error("no flowchart path for dimension {dimension}, {np}, angle rank {angle_rank}")]
    InvalidCombination { dimension: usize, np: NPType, angle_rank: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error(transparent)]
    LocalField(#[from] LocalFieldError),
    #[error(transparent)]
    Wpr(#[from] WprError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    W2d(#[from] W2dError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Tabled(&'static VerdictRow),
    Untabled(String),
}

impl Verdict {
    pub fn row(&self) -> Option<&'static VerdictRow> {
        match self {
            Verdict::Tabled(r) => Some(r),
            Verdict::Untabled(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub weil: WeilPolynomial,
    pub dimension: usize,
    pub decomposition: FrobeniusDecomposition,
    pub newton: NewtonPolygon,
    pub np_tag: Option<NPType>,
    pub rep: WeightedPermRep,
    /// Tag of the weighting's own slope multiset, in the representation's degree.
    pub rep_tag: Option<NPType>,
    pub angle_rank: usize,
    pub group_label: Option<String>,
    pub iso_name: String,
    pub simple: bool,
    pub honda_tate_index: Option<u32>,
    pub geometrically_simple: Option<bool>,
    pub verdict: Verdict,
    pub certificate: GaloisCertificate,
    pub valuations: ValuationAssignment,
    pub local: PadicFactorization,
    pub divisor_report: Option<DivisorReport>,
}

impl ClassRecord {
    pub fn is_supersingular(&self) -> bool {
        self.newton.is_supersingular()
    }

    pub fn is_ordinary(&self) -> bool {
        self.newton.is_ordinary()
    }

    /// Structural consequences that must hold on every genuine record.
    pub fn coherence_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.simple && self.geometrically_simple == Some(false) && !self.is_supersingular() && self.dimension <= 2
            && !(self.is_ordinary() && self.angle_rank == 1) {
                out.push("not geometrically simple yet neither supersingular nor ordinary of angle rank 1".into());
            }
        // non-real eigenvalues are never fixed by the whole group
        let conj = self.certificate.roots.conjugation();
        for (x, v) in self.valuations.values.iter().enumerate() {
            if *v != crate::wpr::half() && conj.apply(x) == x {
                out.push(format!("symbol {} has slope other than 1/2 but is real", x));
            }
        }
        if let Some(report) = &self.divisor_report {
            out.extend(report.violations());
        }
        if let Verdict::Tabled(row) = &self.verdict {
            if !row.occurs && !erratum_covers(row, "occurs") {
                out.push(format!("table {} says this class does not occur", row.table));
            }
        }
        out
    }
}

fn erratum_covers(row: &VerdictRow, field: &str) -> bool {
    errata_for(row).iter().any(|e| e.field == field)
}

/// Documented corrections touching a table row.
pub fn errata_for(row: &VerdictRow) -> Vec<&'static Erratum> {
    ERRATA.iter().filter(|e| e.table == row.table && row.contains(e.label)).collect()
}

fn rep_tag(w: &Weighting) -> Option<NPType> {
    let d = w.d();
    let mut slopes = w.values().to_vec();
    slopes.sort();
    NPType::tags(d).iter().copied().find(|t| t.slopes(d).as_deref() == Some(&slopes[..]))
}

/// Geometric simplicity from the representation, following the table rules.
pub fn geometric_simplicity(dimension: usize, simple: bool, np: &NewtonPolygon, rank: usize) -> Option<bool> {
    if !simple {
        return Some(false);
    }
    match dimension {
        1 => Some(true),
        2 => Some(!(np.is_supersingular() || (np.is_ordinary() && rank == 1))),
        3 => Some(if np.is_supersingular() {
            false
        } else if np.is_ordinary() {
            rank == 3
        } else {
            true
        }),
        _ => None,
    }
}

/// Table row for a representation, or an explanation of why none applies.
pub fn lookup_verdict(dimension: usize, simple: bool, rep: &WeightedPermRep, label: Option<&str>) -> Verdict {
    if dimension == 0 || dimension > 3 {
        return Verdict::Untabled(format!("dimension {} is outside the tables", dimension));
    }
    let d = rep.d();
    let Some(tag) = rep_tag(&rep.w) else {
        return Verdict::Untabled("slopes do not match a tabled Newton polygon".into());
    };
    let Some(label) = label else {
        return Verdict::Untabled("representation degree has no subgroup atlas".into());
    };
    if d == 1 {
        if dimension == 2 && simple {
            return Verdict::Untabled("simple surface with representation in W2: supersingular, angle rank 0".into());
        }
        // a power of an elliptic curve carries the curve's representation
        return VERDICTS
            .iter()
            .find(|r| r.dimension == 1 && r.np == tag && r.contains(label))
            .map(Verdict::Tabled)
            .unwrap_or_else(|| Verdict::Untabled(format!("no row for {}", label)));
    }
    if d != dimension {
        return Verdict::Untabled(format!("representation in W{} for a variety of dimension {}", 2 * d, dimension));
    }
    if dimension == 3 && !simple {
        return Verdict::Untabled("nonsimple threefolds are not tabled".into());
    }
    VERDICTS
        .iter()
        .find(|r| r.dimension == d && r.np == tag && r.simple == simple && r.contains(label))
        .map(Verdict::Tabled)
        .unwrap_or_else(|| Verdict::Untabled(format!("no row for {} with {}", label, tag)))
}

/// Precision and seed knobs for [`classify_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Starting accuracy of the complex root enclosures; raised on demand.
    pub precision_bits: u32,
    /// Target p-adic precision of the local factorization.
    pub padic_precision: u32,
    /// Seed for the random valuation probes.
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { precision_bits: 64, padic_precision: 8, seed: PROBE_SEED }
    }
}

/// Full pipeline for one Weil polynomial.
pub fn classify(weil: &WeilPolynomial) -> Result<ClassRecord, ClassifyError> {
    classify_with(weil, &ClassifyOptions::default())
}

pub fn classify_with(weil: &WeilPolynomial, options: &ClassifyOptions) -> Result<ClassRecord, ClassifyError> {
    let dimension = weil.deg() / 2;
    let decomposition = frobenius_decompose(weil);
    let newton = newton_polygon(weil);
    let np_tag = np_classify(&newton, dimension)?;
    let radical = &decomposition.radical;
    let certificate = galois_group(&complex_roots(radical, options.precision_bits.max(32))?, weil.p())?;
    let valuations = root_valuations_seeded(&certificate, weil.p(), weil.n(), options.seed)?;
    let rep = assemble(&certificate, &valuations)?;
    let rank = angle_rank(&rep)?;
    let local = factor_over_qp(radical.poly(), weil.p(), options.padic_precision.max(1))?;
    let (simple, honda_tate_index) = if decomposition.simple {
        let (h, mult) = &decomposition.factors[0];
        let e = honda_tate_e(h.poly(), &local.local_data(weil.n()));
        (*mult as u32 == e, Some(e))
    } else {
        (false, None)
    };
    let group_label = atlas(rep.d()).ok().and_then(|a| a.label_of(&rep.group)).map(|l| l.to_string());
    let verdict = lookup_verdict(dimension, simple, &rep, group_label.as_deref());
    let divisor_report = (simple && certificate.roots.is_totally_complex())
        .then(|| check_divisor_properties(&rep, &local, weil.n()));
    Ok(ClassRecord {
        weil: weil.clone(),
        dimension,
        geometrically_simple: geometric_simplicity(dimension, simple, &newton, rank),
        decomposition,
        newton,
        np_tag,
        rep_tag: rep_tag(&rep.w),
        iso_name: rep.group.iso_name(),
        rep,
        angle_rank: rank,
        group_label,
        simple,
        honda_tate_index,
        verdict,
        certificate,
        valuations,
        local,
        divisor_report,
    })
}

/// Classify many inputs; parallel when the `parallel` feature is on.
pub fn classify_batch(inputs: &[WeilPolynomial]) -> Vec<Result<ClassRecord, ClassifyError>> {
    map_items(inputs, classify)
}

/// Abstract group names the printed flowcharts allow.
pub fn flowchart(dimension: usize, np: NPType, simple: bool, angle_rank: usize) -> Result<BTreeSet<&'static str>, ClassifyError> {
    let hits: BTreeSet<&'static str> = FLOWCHARTS
        .iter()
        .filter(|a| a.dimension == dimension && a.np == np && a.simple == simple && a.angle_rank == angle_rank)
        .flat_map(|a| a.groups.iter().copied())
        .collect();
    if hits.is_empty() {
        return Err(ClassifyError::InvalidCombination { dimension, np, angle_rank });
    }
    Ok(hits)
}

/// Printed arrows plus the ones implied by occurring table rows.
pub fn reconciled_flowchart(dimension: usize, np: NPType, simple: bool, angle_rank: usize) -> Result<BTreeSet<&'static str>, ClassifyError> {
    let mut hits = flowchart(dimension, np, simple, angle_rank).unwrap_or_default();
    hits.extend(
        FLOWCHART_ERRATA
            .iter()
            .filter(|a| a.dimension == dimension && a.np == np && a.simple == simple && a.angle_rank == angle_rank)
            .flat_map(|a| a.groups.iter().copied()),
    );
    if hits.is_empty() {
        return Err(ClassifyError::InvalidCombination { dimension, np, angle_rank });
    }
    Ok(hits)
}

/// Abstract name of a table label (the part before the first dot).
pub fn abstract_name(label: &str) -> &str {
    label.split('.').next().unwrap_or(label)
}

/// Does the sextic field of a simple supersingular threefold come from a
/// 7th or 9th root of unity? Tested by `h | T^(2N) - q^N`, N in {14, 18}.
pub fn supersingular_field_check(rec: &ClassRecord) -> Result<bool, ClassifyError> {
    if rec.dimension != 3 || !rec.simple || !rec.is_supersingular() {
        return Err(ClassifyError::Precondition("expects a simple supersingular threefold".into()));
    }
    let h = rec.decomposition.factors[0].0.poly();
    if h.deg() != 6 {
        return Ok(false);
    }
    Ok(weil_root_of_unity_shape(h, rec.weil.q()))
}

fn weil_root_of_unity_shape(h: &IntPolynomial, q: &BigInt) -> bool {
    [14u32, 18].iter().any(|&n| {
        let mut c = vec![BigInt::zero(); 2 * n as usize + 1];
        c[0] = -q.pow(n);
        c[2 * n as usize] = BigInt::one();
        let (_, r) = IntPolynomial::new(c).div_rem_monic(h);
        r.is_zero()
    })
}

/// One (weighting, subgroup) pair from a subgroup atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub d: usize,
    pub np: NPType,
    pub label: String,
    /// Canonical representative of the w-conjugacy class.
    pub class_label: String,
    pub angle_rank: usize,
    pub hyperplane_rank: usize,
    pub contains_conjugation: bool,
    pub screen: Screen,
}

/// Every subgroup of the degree-d atlas against every tabled weighting.
pub fn sweep_atlas(d: usize) -> Result<Vec<SweepRow>, ClassifyError> {
    let a = atlas(d)?;
    let mut pairs = Vec::new();
    for &np in NPType::tags(d) {
        let w = Weighting::from_slopes(&np.slopes(d).expect("tabled shape"))?;
        for h in &a.subgroups {
            pairs.push((np, w.clone(), h.clone()));
        }
    }
    let rows = map_items(&pairs, |(np, w, h)| -> Result<SweepRow, ClassifyError> {
        let rep = WeightedPermRep::new(w.clone(), h.clone())?;
        let class = canonicalize_rep(w, h);
        Ok(SweepRow {
            d,
            np: *np,
            label: a.label_of(h).map(|l| l.to_string()).unwrap_or_default(),
            class_label: a.label_of(&class).map(|l| l.to_string()).unwrap_or_default(),
            angle_rank: angle_rank(&rep)?,
            hyperplane_rank: hyperplane_rank(&rep),
            contains_conjugation: h.contains_iota(),
            screen: realizability_screen(w, h),
        })
    });
    rows.into_iter().collect()
}

/// Representations named by a table row: the row's weighting paired with
/// each merged group label.
pub fn tabled_reps(row: &VerdictRow) -> Result<Vec<(String, WeightedPermRep)>, ClassifyError> {
    row.labels
        .iter()
        .map(|label| {
            let parsed = SubgroupLabel::parse(label)?;
            let d = parsed.two_d / 2;
            let slopes = row.np.slopes(d).ok_or_else(|| {
                ClassifyError::Precondition(format!("{} has no weighting in degree {}", row.np, 2 * d))
            })?;
            let w = Weighting::from_slopes(&slopes)?;
            let group = atlas(d)?
                .find(label)
                .ok_or_else(|| ClassifyError::Precondition(format!("{} is not in the atlas", label)))?;
            Ok((label.to_string(), WeightedPermRep::new(w, group.clone())?))
        })
        .collect()
}

/// Computed angle rank of a table row; merged labels must agree.
pub fn tabled_angle_rank(row: &VerdictRow) -> Result<usize, ClassifyError> {
    let mut ranks = BTreeSet::new();
    for (_, rep) in tabled_reps(row)? {
        ranks.insert(angle_rank(&rep)?);
    }
    match ranks.len() {
        1 => Ok(*ranks.iter().next().expect("one rank")),
        _ => Err(ClassifyError::Precondition(format!("merged labels {:?} disagree on angle rank", row.labels))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::validate_weil;

    fn weil(c: &[i64], p: u64, n: u32) -> WeilPolynomial {
        validate_weil(&IntPolynomial::from_i64(c), p, n).unwrap()
    }

    #[test]
    fn flowchart_examples() {
        assert_eq!(flowchart(2, NPType::C, true, 0).unwrap(), ["C2", "V4"].into_iter().collect());
        assert_eq!(flowchart(3, NPType::D, true, 1).unwrap(), ["C6", "D6"].into_iter().collect());
        assert_eq!(flowchart(2, NPType::C, false, 0).unwrap(), ["C1", "C2", "V4"].into_iter().collect());
        assert_eq!(flowchart(3, NPType::B, true, 2).unwrap(), ["C6"].into_iter().collect());
        assert_eq!(flowchart(2, NPType::A, true, 2).unwrap(), ["C4", "W4"].into_iter().collect());
        assert!(flowchart(2, NPType::B, true, 0).is_err());
    }

    #[test]
    fn occurring_rows_reach_their_group() {
        for r in VERDICTS.iter().filter(|r| r.occurs && r.dimension >= 2) {
            let name = abstract_name(r.labels[0]);
            let rank = ERRATA
                .iter()
                .find(|e| e.table == r.table && r.contains(e.label) && e.field == "angle rank")
                .map(|e| e.corrected.parse().unwrap())
                .unwrap_or(r.angle_rank);
            if erratum_covers(r, "occurs") {
                continue;
            }
            let arrows = reconciled_flowchart(r.dimension, r.np, r.simple, rank).unwrap();
            assert!(arrows.contains(name), "table {} {} rank {}", r.table, name, rank);
        }
    }

    #[test]
    fn occurring_rows_have_examples() {
        assert!(VERDICTS.iter().all(|r| r.occurs == r.example.is_some()));
    }

    #[test]
    fn almost_ordinary_surface_record() {
        let rec = classify(&weil(&[4, -2, 0, -1, 1], 2, 1)).unwrap();
        assert_eq!(rec.np_tag, Some(NPType::B));
        assert_eq!(rec.group_label.as_deref(), Some("W4.4.t.a.1"));
        assert_eq!(rec.angle_rank, 2);
        assert_eq!(rec.geometrically_simple, Some(true));
        assert_eq!(rec.verdict.row().unwrap().table, 5);
        assert!(rec.coherence_violations().is_empty(), "{:?}", rec.coherence_violations());
    }

    #[test]
    fn same_group_different_rank() {
        let a = classify(&weil(&[8, -8, 0, 3, 0, -2, 1], 2, 1)).unwrap();
        let b = classify(&weil(&[8, 0, 0, -3, 0, 0, 1], 2, 1)).unwrap();
        assert_eq!((a.np_tag, b.np_tag), (Some(NPType::A), Some(NPType::A)));
        assert_eq!((a.iso_name.as_str(), b.iso_name.as_str()), ("D6", "D6"));
        assert_eq!((a.angle_rank, b.angle_rank), (3, 1));
    }

    #[test]
    fn supersingular_threefold_field() {
        let rec = classify(&weil(&[27, 0, 0, -9, 0, 0, 1], 3, 1)).unwrap();
        assert_eq!(rec.np_tag, Some(NPType::E));
        assert_eq!(rec.iso_name, "C6");
        assert_eq!(rec.angle_rank, 0);
        assert_eq!(rec.geometrically_simple, Some(false));
        assert_eq!(supersingular_field_check(&rec), Ok(true));
        let ordinary = classify(&weil(&[19, 8, 1], 19, 1)).unwrap();
        assert!(supersingular_field_check(&ordinary).is_err());
    }

    #[test]
    fn elliptic_curves() {
        let ord = classify(&weil(&[2, -1, 1], 2, 1)).unwrap();
        assert_eq!(ord.group_label.as_deref(), Some("W2.2.t.a.1"));
        assert_eq!(ord.angle_rank, 1);
        let ss = classify(&weil(&[4, -4, 1], 2, 2)).unwrap();
        assert_eq!(ss.group_label.as_deref(), Some("C1.2.nt.a.1"));
        assert_eq!(ss.verdict.row().unwrap().example, Some("1.4.ae"));
    }
}
