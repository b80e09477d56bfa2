//! Static verdict data: one row per (dimension, Newton polygon, simplicity,
//! w-conjugacy class), mirroring the published classification tables.

use crate::newton::NPType;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerdictRow {
    pub table: u8,
    pub dimension: usize,
    pub np: NPType,
    pub simple: bool,
    /// Labels merged into this row (w-conjugate in the printed table).
    pub labels: &'static [&'static str],
    /// Angle rank as printed.
    pub angle_rank: usize,
    pub occurs: bool,
    pub geom_simple: Option<bool>,
    pub example: Option<&'static str>,
}

impl VerdictRow {
    pub fn contains(&self, label: &str) -> bool {
        self.labels.contains(&label)
    }
}

#[allow(clippy::too_many_arguments)]
const fn row(
    table: u8,
    dimension: usize,
    np: NPType,
    simple: bool,
    labels: &'static [&'static str],
    angle_rank: usize,
    occurs: bool,
    geom_simple: Option<bool>,
    example: Option<&'static str>,
) -> VerdictRow {
    VerdictRow { table, dimension, np, simple, labels, angle_rank, occurs, geom_simple, example }
}

use NPType::*;

const YES: Option<bool> = Some(true);
const NO: Option<bool> = Some(false);

pub static VERDICTS: &[VerdictRow] = &[
    // elliptic curves
    row(2, 1, Ordinary, true, &["W2.2.t.a.1"], 1, true, None, Some("1.2.ab")),
    row(2, 1, Ordinary, true, &["C1.2.nt.a.1"], 0, false, None, None),
    row(3, 1, Supersingular, true, &["W2.2.t.a.1"], 0, true, None, Some("1.2.ac")),
    row(3, 1, Supersingular, true, &["C1.2.nt.a.1"], 0, true, None, Some("1.4.ae")),
    // simple surfaces
    row(4, 2, A, true, &["W4.4.t.a.1"], 2, true, YES, Some("2.2.ac_d")),
    row(4, 2, A, true, &["V4.4.t.a.1"], 1, true, NO, Some("2.2.ad_f")),
    row(4, 2, A, true, &["C4.4.t.a.1"], 2, true, YES, Some("2.3.ad_f")),
    row(5, 2, B, true, &["W4.4.t.a.1"], 2, true, YES, Some("2.2.ab_a")),
    row(5, 2, B, true, &["V4.4.t.a.1"], 2, false, None, None),
    row(5, 2, B, true, &["C4.4.t.a.1"], 2, false, None, None),
    row(6, 2, C, true, &["W4.4.t.a.1"], 2, false, None, None),
    row(6, 2, C, true, &["V4.4.t.a.1"], 0, true, NO, Some("2.2.ac_c")),
    row(6, 2, C, true, &["C4.4.t.a.1"], 0, true, NO, Some("2.4.ac_e")),
    row(6, 2, C, true, &["C2.4.nt.c.1", "C2.4.nt.c.2"], 0, true, NO, Some("2.2.a_ae")),
    // nonsimple surfaces
    row(7, 2, A, false, &["V4.4.nt.a.1"], 1, true, None, Some("2.3.ad_i")),
    row(7, 2, A, false, &["C2.4.nt.a.1"], 1, true, None, Some("2.2.a_d")),
    row(7, 2, A, false, &["C2.4.nt.b.1", "C2.4.nt.b.2"], 1, false, None, None),
    row(7, 2, A, false, &["C2.4.nt.c.1"], 1, false, None, None),
    row(7, 2, A, false, &["C2.4.nt.c.2"], 1, false, None, None),
    row(7, 2, A, false, &["C1.4.nt.a.1"], 0, false, None, None),
    row(8, 2, B, false, &["V4.4.nt.a.1"], 1, true, None, Some("2.2.ad_g")),
    row(8, 2, B, false, &["C2.4.nt.a.1"], 1, false, None, None),
    row(8, 2, B, false, &["C2.4.nt.b.1"], 1, false, None, None),
    row(8, 2, B, false, &["C2.4.nt.b.2"], 1, true, None, Some("2.4.ah_u")),
    row(8, 2, B, false, &["C2.4.nt.c.1"], 1, false, None, None),
    row(8, 2, B, false, &["C2.4.nt.c.2"], 1, false, None, None),
    row(8, 2, B, false, &["C1.4.nt.a.1"], 0, false, None, None),
    row(9, 2, C, false, &["V4.4.nt.a.1"], 0, true, None, Some("2.2.ac_e")),
    row(9, 2, C, false, &["C2.4.nt.a.1"], 0, true, None, Some("2.2.a_a")),
    row(9, 2, C, false, &["C2.4.nt.b.1", "C2.4.nt.b.2"], 0, true, None, Some("2.4.ag_q")),
    row(9, 2, C, false, &["C2.4.nt.c.1", "C2.4.nt.c.2"], 0, false, None, None),
    row(9, 2, C, false, &["C1.4.nt.a.1"], 0, true, None, Some("2.4.a_ai")),
    // simple threefolds
    row(10, 3, A, true, &["W6.6.t.a.1"], 3, true, YES, Some("3.2.ad_f_ah")),
    row(10, 3, A, true, &["6T6.6.t.a.1"], 3, true, YES, Some("3.2.ad_g_aj")),
    row(10, 3, A, true, &["D6.6.t.a.1"], 1, true, NO, Some("3.2.a_a_ad")),
    row(10, 3, A, true, &["D6.6.t.a.2", "D6.6.t.a.3", "D6.6.t.a.4"], 3, true, YES, Some("3.2.ac_a_d")),
    row(10, 3, A, true, &["C6.6.t.a.1"], 1, true, NO, Some("3.2.ae_j_ap")),
    row(10, 3, A, true, &["C6.6.t.a.2", "C6.6.t.a.3", "C6.6.t.a.4"], 3, true, YES, Some("3.7.ak_bw_afv")),
    row(11, 3, B, true, &["W6.6.t.a.1"], 3, true, YES, Some("3.2.ab_ab_c")),
    row(11, 3, B, true, &["6T6.6.t.a.1"], 3, true, YES, Some("3.4.ac_ab_g")),
    row(11, 3, B, true, &["D6.6.t.a.1", "D6.6.t.a.3"], 3, false, None, None),
    row(11, 3, B, true, &["D6.6.t.a.2", "D6.6.t.a.4"], 2, true, YES, Some("3.2.ac_b_a")),
    row(11, 3, B, true, &["C6.6.t.a.1", "C6.6.t.a.4"], 3, false, None, None),
    row(11, 3, B, true, &["C6.6.t.a.2", "C6.6.t.a.3"], 2, false, None, None),
    row(12, 3, C, true, &["W6.6.t.a.1"], 3, true, YES, Some("3.2.ab_a_a")),
    row(12, 3, C, true, &["6T6.6.t.a.1"], 3, true, YES, Some("3.4.ab_c_a")),
    row(12, 3, C, true, &["D6.6.t.a.1", "D6.6.t.a.2", "D6.6.t.a.3", "D6.6.t.a.4"], 3, true, YES, Some("3.4.ab_a_ae")),
    row(12, 3, C, true, &["C6.6.t.a.1", "C6.6.t.a.2", "C6.6.t.a.3", "C6.6.t.a.4"], 3, false, None, None),
    row(13, 3, D, true, &["W6.6.t.a.1"], 3, true, YES, Some("3.2.ac_c_ac")),
    row(13, 3, D, true, &["6T6.6.t.a.1"], 3, true, YES, Some("3.3.ad_j_ap")),
    row(13, 3, D, true, &["D6.6.t.a.1"], 1, true, YES, Some("3.2.a_a_ac")),
    row(13, 3, D, true, &["D6.6.t.a.2", "D6.6.t.a.3", "D6.6.t.a.4"], 3, false, None, None),
    row(13, 3, D, true, &["C6.6.t.a.1"], 1, true, YES, Some("3.7.a_a_abj")),
    row(13, 3, D, true, &["C6.6.t.a.2", "C6.6.t.a.3", "C6.6.t.a.4"], 3, false, None, None),
    row(14, 3, E, true, &["W6.6.t.a.1"], 0, false, None, None),
    row(14, 3, E, true, &["6T6.6.t.a.1"], 0, false, None, None),
    row(14, 3, E, true, &["D6.6.t.a.1", "D6.6.t.a.2", "D6.6.t.a.3", "D6.6.t.a.4"], 0, false, None, None),
    row(14, 3, E, true, &["C6.6.t.a.1", "C6.6.t.a.2", "C6.6.t.a.3", "C6.6.t.a.4"], 0, true, NO, Some("3.3.a_a_aj")),
];

/// A printed value that disagrees with what the definitions give.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub table: u8,
    pub label: &'static str,
    pub field: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
}

pub static ERRATA: &[Erratum] = &[
    Erratum { table: 6, label: "W4.4.t.a.1", field: "angle rank", printed: "2", corrected: "0" },
    Erratum { table: 7, label: "V4.4.nt.a.1", field: "angle rank", printed: "1", corrected: "2" },
    Erratum { table: 7, label: "C2.4.nt.c.1", field: "angle rank", printed: "1", corrected: "0" },
    Erratum { table: 8, label: "C2.4.nt.b.2", field: "angle rank", printed: "1", corrected: "0" },
    Erratum { table: 8, label: "C2.4.nt.b.1", field: "occurs", printed: "No", corrected: "Yes (2.4.ah_u)" },
    Erratum { table: 8, label: "C2.4.nt.b.2", field: "occurs", printed: "Yes (2.4.ah_u)", corrected: "No" },
];

/// Abstract group names reached from a flowchart node.
pub struct Arrow {
    pub dimension: usize,
    pub simple: bool,
    pub np: NPType,
    pub angle_rank: usize,
    pub groups: &'static [&'static str],
}

const fn arrow(dimension: usize, simple: bool, np: NPType, angle_rank: usize, groups: &'static [&'static str]) -> Arrow {
    Arrow { dimension, simple, np, angle_rank, groups }
}

pub static FLOWCHARTS: &[Arrow] = &[
    arrow(2, true, A, 2, &["W4", "C4"]),
    arrow(2, true, A, 1, &["V4"]),
    arrow(2, true, B, 2, &["W4"]),
    arrow(2, true, C, 0, &["V4", "C2"]),
    arrow(2, false, A, 2, &["V4"]),
    arrow(2, false, A, 1, &["C2"]),
    arrow(2, false, B, 1, &["V4", "C2"]),
    arrow(2, false, C, 0, &["V4", "C2", "C1"]),
    arrow(3, true, A, 3, &["W6", "6T6", "D6", "C6"]),
    arrow(3, true, A, 1, &["D6", "C6"]),
    arrow(3, true, B, 3, &["W6", "6T6"]),
    arrow(3, true, B, 2, &["C6"]),
    arrow(3, true, C, 3, &["W6", "6T6", "D6"]),
    arrow(3, true, D, 3, &["W6", "6T6"]),
    arrow(3, true, D, 1, &["D6", "C6"]),
    arrow(3, true, E, 0, &["C6"]),
];

/// Arrows missing from the printed flowcharts but implied by occurring rows.
pub static FLOWCHART_ERRATA: &[Arrow] = &[
    arrow(2, true, C, 0, &["C4"]),
    arrow(3, true, B, 2, &["D6"]),
];
