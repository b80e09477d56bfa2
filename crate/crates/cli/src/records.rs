//! Machine-readable output: one JSON object per line, keys sorted, tagged by
//! `kind` and carrying a format version.

use serde::{Deserialize, Serialize};

use abvar_core::classify::{ClassRecord, ClassifyOptions, Verdict};
use abvar_core::intpoly::IntPolynomial;
use abvar_core::wpr::hyperplane_rank;
use abvar_lmfdb::polynomial_to_label;

pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Analysis(AnalysisRecord),
    Subgroup(SubgroupRecord),
    TableRow(TableRowRecord),
    Verification(VerificationRecord),
    SearchClass(SearchClassRecord),
    SearchSummary(SearchSummaryRecord),
}

impl Record {
    pub fn render(&self) -> String {
        let mut value = serde_json::to_value(self).expect("records serialize");
        value
            .as_object_mut()
            .expect("records are objects")
            .insert("version".into(), RECORD_VERSION.into());
        serde_json::to_string(&value).expect("value serializes")
    }

    pub fn parse(line: &str) -> Result<Record, String> {
        let mut value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let obj = value.as_object_mut().ok_or("record is not an object")?;
        match obj.remove("version").and_then(|v| v.as_u64()) {
            Some(v) if v == RECORD_VERSION as u64 => {}
            Some(v) => return Err(format!("record version {v}, expected {RECORD_VERSION}")),
            None => return Err("record has no version".into()),
        }
        serde_json::from_value(value).map_err(|e| e.to_string())
    }

    pub fn parse_all(text: &str) -> Result<Vec<Record>, String> {
        text.lines().filter(|l| !l.trim().is_empty()).map(Record::parse).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    /// Leading term first.
    pub coefficients: Vec<String>,
    pub multiplicity: usize,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEntry {
    pub degree: usize,
    pub slope: String,
    pub residue_degree: usize,
    pub ramification: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub input: String,
    pub p: u64,
    pub n: u32,
    pub q: String,
    pub coefficients: Vec<String>,
    pub factors: Vec<FactorEntry>,
    pub dimension: usize,
    pub simple: bool,
    pub honda_tate_index: Option<u32>,
    pub slopes: Vec<String>,
    pub vertices: Vec<(usize, String)>,
    pub newton_type: Option<String>,
    pub group_label: Option<String>,
    pub group_name: String,
    pub group_order: usize,
    pub generators: Vec<String>,
    pub transitive: bool,
    pub contains_conjugation: bool,
    pub weights: Vec<String>,
    pub valuations: Vec<String>,
    pub angle_rank: usize,
    pub hyperplane_rank: usize,
    pub geometrically_simple: Option<bool>,
    pub table: Option<u8>,
    pub printed_angle_rank: Option<usize>,
    pub verdict: String,
    pub local_factors: Vec<LocalEntry>,
    pub certificate_digest: String,
    pub minimal_polynomial_degree: usize,
    pub frobenius_primes: Vec<u64>,
    pub rejected_candidates: usize,
    pub valuation_probes: usize,
    pub checks: Vec<String>,
    pub advisory: Vec<String>,
    pub seed: u64,
    pub precision_bits: u32,
}

pub fn leading_first(poly: &IntPolynomial) -> Vec<String> {
    poly.coeffs().iter().rev().map(|c| c.to_string()).collect()
}

impl AnalysisRecord {
    pub fn from_class(input: &str, rec: &ClassRecord, options: &ClassifyOptions, advisory: Vec<String>) -> Self {
        let weil = &rec.weil;
        let factors = rec
            .decomposition
            .factors
            .iter()
            .map(|(h, m)| FactorEntry {
                coefficients: leading_first(h.poly()),
                multiplicity: *m,
                label: polynomial_to_label(h).map(|l| l.to_string()),
            })
            .collect();
        let (table, printed_angle_rank, verdict) = match &rec.verdict {
            Verdict::Tabled(row) => (
                Some(row.table),
                Some(row.angle_rank),
                format!("{} ({})", row.labels.join(" ~ "), if row.occurs { "occurs" } else { "does not occur" }),
            ),
            Verdict::Untabled(why) => (None, None, format!("untabled: {why}")),
        };
        AnalysisRecord {
            input: input.to_string(),
            p: weil.p(),
            n: weil.n(),
            q: weil.q().to_string(),
            coefficients: leading_first(weil.poly()),
            factors,
            dimension: rec.dimension,
            simple: rec.simple,
            honda_tate_index: rec.honda_tate_index,
            slopes: rec.newton.slopes.iter().map(|s| s.to_string()).collect(),
            vertices: rec.newton.vertices.iter().map(|(j, v)| (*j, v.to_string())).collect(),
            newton_type: rec.np_tag.map(|t| t.letter().to_string()),
            group_label: rec.group_label.clone(),
            group_name: rec.iso_name.clone(),
            group_order: rec.rep.group.order(),
            generators: rec.rep.group.generators().iter().map(|g| g.to_string()).collect(),
            transitive: rec.rep.group.is_transitive(),
            contains_conjugation: rec.rep.group.contains_iota(),
            weights: rec.rep.w.values().iter().map(|x| x.to_string()).collect(),
            valuations: rec.valuations.values.iter().map(|x| x.to_string()).collect(),
            angle_rank: rec.angle_rank,
            hyperplane_rank: hyperplane_rank(&rec.rep),
            geometrically_simple: rec.geometrically_simple,
            table,
            printed_angle_rank,
            verdict,
            local_factors: rec
                .local
                .factors
                .iter()
                .map(|f| LocalEntry {
                    degree: f.degree,
                    slope: f.slope.to_string(),
                    residue_degree: f.residue_degree,
                    ramification: f.ramification,
                })
                .collect(),
            certificate_digest: rec.certificate.digest(),
            minimal_polynomial_degree: rec.certificate.min_poly.deg(),
            frobenius_primes: rec.certificate.frobenius.iter().map(|(ell, _)| *ell).collect(),
            rejected_candidates: rec.certificate.rejected_candidates,
            valuation_probes: rec.valuations.probes,
            checks: rec.coherence_violations(),
            advisory,
            seed: options.seed,
            precision_bits: options.precision_bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub d: usize,
    pub label: String,
    pub group_name: String,
    pub order: usize,
    pub transitive: bool,
    pub contains_conjugation: bool,
    pub generators: Vec<String>,
    /// Set when listing against a Newton polygon weighting.
    pub angle_rank: Option<usize>,
    pub screen: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowRecord {
    pub table: u8,
    pub dimension: usize,
    pub newton_type: String,
    pub simple: bool,
    pub labels: Vec<String>,
    /// Generators, for the subgroup table only.
    pub generators: Vec<String>,
    pub order: Option<usize>,
    pub transitive: Option<bool>,
    pub printed_angle_rank: Option<usize>,
    pub computed_angle_rank: Option<usize>,
    pub occurs: Option<bool>,
    pub geometrically_simple: Option<bool>,
    pub example: Option<String>,
    pub errata: Vec<String>,
    pub verification: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub label: String,
    pub newton_type: Option<String>,
    pub group_label: Option<String>,
    pub angle_rank: Option<usize>,
    pub geometrically_simple: Option<bool>,
    pub table: Option<u8>,
    /// `agrees`, `erratum` or `mismatch`.
    pub outcome: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchClassRecord {
    pub d: usize,
    pub newton_type: String,
    pub group_label: String,
    pub class: String,
    pub angle_rank: usize,
    pub witness: String,
    pub q: u64,
    pub table: Option<u8>,
    pub occurs_in_table: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummaryRecord {
    pub d: usize,
    pub p: u64,
    pub r_max: u32,
    pub height: Option<u64>,
    pub candidates: u64,
    pub weil: u64,
    pub irreducible: u64,
    pub higher_index: u64,
    pub failures: u64,
    pub realized_classes: Vec<String>,
    pub missing_classes: Vec<String>,
    pub seed: u64,
}
