//! Table regeneration from the subgroup atlas, the weightings and the
//! verdict rows.

use abvar_core::classify::{errata_for, tabled_angle_rank, VerdictRow, VERDICTS};
use abvar_core::w2d::{atlas, calibrated_group, SubgroupLabel, CALIBRATION};

use crate::records::TableRowRecord;

pub const TABLE_COUNT: u8 = 14;

pub fn caption(table: u8) -> String {
    if table == 1 {
        return "Labels and generators of the subgroups of W4 and the transitive subgroups of W6 containing complex conjugation".into();
    }
    let Some(row) = VERDICTS.iter().find(|r| r.table == table) else {
        return format!("table {table}");
    };
    let what = match (row.dimension, row.simple) {
        (1, _) => "elliptic curves".to_string(),
        (2, true) => "simple abelian surfaces".to_string(),
        (2, false) => "nonsimple abelian surfaces".to_string(),
        (3, _) => "simple abelian threefolds".to_string(),
        (d, _) => format!("dimension {d}"),
    };
    format!("w-conjugacy classes for {what}, Newton polygon {}", row.np)
}

fn subgroup_rows() -> Vec<TableRowRecord> {
    CALIBRATION
        .iter()
        .map(|(label, gens)| {
            let parsed = SubgroupLabel::parse(label).expect("calibration labels parse");
            let d = parsed.two_d / 2;
            let generated = calibrated_group(label).expect("calibration row");
            let listed = atlas(d).ok().and_then(|a| a.find(label).cloned());
            let mut problems = Vec::new();
            match &listed {
                Some(h) if *h == generated => {}
                Some(_) => problems.push("atlas group differs from the group generated".to_string()),
                None => problems.push("label missing from the atlas".to_string()),
            }
            if generated.iso_name() != parsed.iso {
                problems.push(format!("generated group is {}", generated.iso_name()));
            }
            if generated.is_transitive() != parsed.transitive {
                problems.push("transitivity differs from the label".to_string());
            }
            TableRowRecord {
                table: 1,
                dimension: d,
                newton_type: "-".into(),
                simple: true,
                labels: vec![label.to_string()],
                generators: gens.iter().map(|g| g.to_string()).collect(),
                order: Some(generated.order()),
                transitive: Some(generated.is_transitive()),
                printed_angle_rank: None,
                computed_angle_rank: None,
                occurs: None,
                geometrically_simple: None,
                example: None,
                errata: Vec::new(),
                verification: Some(if problems.is_empty() { "ok".into() } else { problems.join("; ") }),
            }
        })
        .collect()
}

fn verdict_row(row: &VerdictRow) -> TableRowRecord {
    TableRowRecord {
        table: row.table,
        dimension: row.dimension,
        newton_type: row.np.letter().to_string(),
        simple: row.simple,
        labels: row.labels.iter().map(|l| l.to_string()).collect(),
        generators: Vec::new(),
        order: None,
        transitive: None,
        printed_angle_rank: Some(row.angle_rank),
        computed_angle_rank: tabled_angle_rank(row).ok(),
        occurs: Some(row.occurs),
        geometrically_simple: row.geom_simple,
        example: row.example.map(str::to_string),
        errata: errata_for(row)
            .iter()
            .map(|e| format!("{} {}: printed {}, corrected {}", e.label, e.field, e.printed, e.corrected))
            .collect(),
        verification: None,
    }
}

/// Rows of one table, before any example is re-run.
pub fn table_rows(table: u8) -> Vec<TableRowRecord> {
    if table == 1 {
        return subgroup_rows();
    }
    VERDICTS.iter().filter(|r| r.table == table).map(verdict_row).collect()
}

/// Angle-rank disagreements between a row and the atlas that no erratum
/// explains.
pub fn unexplained_rank_gap(row: &TableRowRecord) -> Option<String> {
    let (Some(printed), Some(computed)) = (row.printed_angle_rank, row.computed_angle_rank) else {
        return None;
    };
    if printed == computed {
        return None;
    }
    let corrected = format!("angle rank: printed {printed}, corrected {computed}");
    if row.errata.iter().any(|e| e.ends_with(&corrected)) {
        return None;
    }
    Some(format!("table {} {}: angle rank computed {computed}, printed {printed}", row.table, row.labels.join(" ~ ")))
}

fn cell<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn yes_no(x: Option<bool>) -> String {
    match x {
        Some(true) => "Yes".into(),
        Some(false) => "No".into(),
        None => "-".into(),
    }
}

pub fn render_text(table: u8, rows: &[TableRowRecord]) -> String {
    let mut out = format!("Table {table}. {}\n", caption(table));
    let grid: Vec<Vec<String>> = if table == 1 {
        let mut g = vec![vec!["label".into(), "order".into(), "transitive".into(), "generators".into(), "check".into()]];
        for r in rows {
            g.push(vec![
                r.labels.join(" ~ "),
                cell(r.order),
                yes_no(r.transitive),
                if r.generators.is_empty() { "id".into() } else { r.generators.join(", ") },
                cell(r.verification.clone()),
            ]);
        }
        g
    } else {
        let mut header: Vec<String> =
            ["class", "angle rank", "printed", "occurs", "geom. simple", "example"].iter().map(|s| s.to_string()).collect();
        let verifying = rows.iter().any(|r| r.verification.is_some());
        if verifying {
            header.push("verified".into());
        }
        let mut g = vec![header];
        for r in rows {
            let mut line = vec![
                r.labels.join(" ~ "),
                cell(r.computed_angle_rank),
                cell(r.printed_angle_rank),
                yes_no(r.occurs),
                yes_no(r.geometrically_simple),
                cell(r.example.clone()),
            ];
            if verifying {
                line.push(cell(r.verification.clone()));
            }
            g.push(line);
        }
        g
    };
    let widths: Vec<usize> =
        (0..grid[0].len()).map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
    for (i, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    for r in rows {
        for e in &r.errata {
            out.push_str(&format!("  note: {e}\n"));
        }
    }
    out
}
