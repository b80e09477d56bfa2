//! Pipeline checks for example labels.

use abvar_core::classify::{
    classify_with, errata_for, supersingular_field_check, ClassRecord, ClassifyOptions, VerdictRow, ERRATA, VERDICTS,
};
use abvar_lmfdb::{ClassFixture, Resolver};

use crate::records::VerificationRecord;

pub const AGREES: &str = "agrees";
pub const ERRATUM: &str = "erratum";
pub const MISMATCH: &str = "mismatch";
pub const ERROR: &str = "error";

/// Rows that cite `label` as their example.
pub fn rows_citing(label: &str) -> Vec<&'static VerdictRow> {
    VERDICTS.iter().filter(|r| r.example == Some(label)).collect()
}

/// Remote invariants next to ours. Never used as results.
pub fn advisory_notes(fixture: &ClassFixture, rec: &ClassRecord) -> Vec<String> {
    let meta = &fixture.metadata;
    let mut out = Vec::new();
    if let Some(remote) = meta.angle_rank {
        let verdict = if remote as usize == rec.angle_rank { "agrees" } else { "differs" };
        out.push(format!("remote angle rank {remote} {verdict} (computed {})", rec.angle_rank));
    }
    if let Some(remote) = meta.p_rank {
        let ours = rec.newton.p_rank();
        let verdict = if remote as usize == ours { "agrees" } else { "differs" };
        out.push(format!("remote p-rank {remote} {verdict} (computed {ours})"));
    }
    if let Some(groups) = &meta.galois_groups {
        out.push(format!("remote Galois groups {}", groups.join(",")));
    }
    out
}

/// Compare one classification with one printed row. Returns uncovered and
/// covered discrepancies.
pub fn compare_with_row(label: &str, rec: &ClassRecord, row: &VerdictRow) -> (Vec<String>, Vec<String>) {
    let mut hard = Vec::new();
    let mut soft = Vec::new();
    let errata = errata_for(row);
    if rec.np_tag != Some(row.np) {
        hard.push(format!("table {}: Newton type {:?}, row says {}", row.table, rec.np_tag.map(|t| t.letter()), row.np));
    }
    let group = rec.group_label.clone().unwrap_or_else(|| "?".into());
    if !row.contains(&group) {
        let msg = format!("table {}: group {}, row lists {}", row.table, group, row.labels.join(" ~ "));
        let covered = ERRATA.iter().any(|e| e.table == row.table && e.label == group && e.corrected.contains(label));
        if covered { soft.push(msg) } else { hard.push(msg) }
    }
    if rec.angle_rank != row.angle_rank {
        let msg = format!("table {}: angle rank {}, printed {}", row.table, rec.angle_rank, row.angle_rank);
        let covered = errata.iter().any(|e| e.field == "angle rank" && e.corrected == rec.angle_rank.to_string());
        if covered { soft.push(msg) } else { hard.push(msg) }
    }
    if let Some(expected) = row.geom_simple {
        if rec.geometrically_simple != Some(expected) {
            hard.push(format!(
                "table {}: geometrically simple {:?}, printed {}",
                row.table, rec.geometrically_simple, expected
            ));
        }
    }
    (hard, soft)
}

pub fn check_label(resolver: &Resolver, label: &str, options: &ClassifyOptions) -> VerificationRecord {
    let mut out = VerificationRecord {
        label: label.to_string(),
        newton_type: None,
        group_label: None,
        angle_rank: None,
        geometrically_simple: None,
        table: None,
        outcome: ERROR.into(),
        notes: Vec::new(),
    };
    let fixture = match resolver.fetch_class(label) {
        Ok(f) => f,
        Err(e) => {
            out.notes.push(e.to_string());
            return out;
        }
    };
    let rec = match fixture.polynomial().map_err(|e| e.to_string()).and_then(|w| classify_with(&w, options).map_err(|e| e.to_string())) {
        Ok(r) => r,
        Err(e) => {
            out.notes.push(e);
            return out;
        }
    };
    out.newton_type = rec.np_tag.map(|t| t.letter().to_string());
    out.group_label = rec.group_label.clone();
    out.angle_rank = Some(rec.angle_rank);
    out.geometrically_simple = rec.geometrically_simple;

    let mut hard: Vec<String> = rec.coherence_violations();
    let mut soft = Vec::new();
    if rec.dimension == 3 && rec.is_supersingular() && rec.simple {
        match supersingular_field_check(&rec) {
            Ok(true) => {}
            Ok(false) => hard.push("supersingular polynomial fails the root-of-unity check".into()),
            Err(e) => hard.push(e.to_string()),
        }
    }
    for row in rows_citing(label) {
        out.table = Some(row.table);
        let (h, s) = compare_with_row(label, &rec, row);
        hard.extend(h);
        soft.extend(s);
    }
    out.outcome = if !hard.is_empty() {
        MISMATCH
    } else if !soft.is_empty() {
        ERRATUM
    } else {
        AGREES
    }
    .into();
    out.notes = hard;
    out.notes.extend(soft.into_iter().map(|s| format!("documented erratum: {s}")));
    out.notes.extend(advisory_notes(&fixture, &rec));
    out
}

pub fn is_failure(rec: &VerificationRecord) -> bool {
    rec.outcome == MISMATCH || rec.outcome == ERROR
}
