//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! asserts everything that can hold; criteria that fail because a printed
//! value disagrees with the computation are reported, and the test then
//! checks that every disagreement is a documented erratum.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abvar_cli::records::Record;
use abvar_cli::search::{run_search, SearchBounds};
use abvar_cli::verify::{check_label, AGREES, ERRATUM};
use abvar_core::classify::audit::{audit_record, sample_frobenius_polynomial, SMALL_FIELDS};
use abvar_core::classify::{
    classify, classify_with, sweep_atlas, tabled_angle_rank, ClassifyOptions, ERRATA, VERDICTS,
};
use abvar_core::intpoly::IntPolynomial;
use abvar_core::parallel::Execution;
use abvar_core::w2d::{atlas, w_conjugate, SignedPerm, SignedSubgroup, Weighting, CALIBRATION};
use abvar_core::wpr::{hyperplane_rank, realizability_screen, Screen, WeightedPermRep};
use abvar_lmfdb::{bundled_labels, decode_code, encode_code, label_to_polynomial, IsogenyClassLabel, LmfdbConfig, Resolver};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Straight to the terminal, past the test harness's capture.
fn report(n: usize, o: &Outcome, took: Duration) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {n}: {verdict} ({:.1} s) {}\n", took.as_secs_f64(), o.detail);
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn resolver() -> Resolver {
    Resolver::new(LmfdbConfig::offline())
}

fn subgroup_atlas_table() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_abvar"))
        .args(["--format", "records", "tables", "--which", "1"])
        .env("ABVAR_OFFLINE", "1")
        .output()
        .expect("binary runs");
    let took = start.elapsed();
    let rows = Record::parse_all(&String::from_utf8_lossy(&out.stdout)).expect("records parse");
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for r in &rows {
        let Record::TableRow(row) = r else {
            bad.push("non-row record".to_string());
            continue;
        };
        seen.push(row.labels[0].clone());
        if row.verification.as_deref() != Some("ok") {
            bad.push(format!("{}: {:?}", row.labels[0], row.verification));
        }
        let order_in_label: usize = match row.labels[0].split('.').next().unwrap() {
            "W4" => 8,
            "W6" => 48,
            "6T6" => 24,
            "D6" => 12,
            "C6" => 6,
            "V4" | "C4" => 4,
            "C2" => 2,
            _ => 1,
        };
        if row.order != Some(order_in_label) {
            bad.push(format!("{}: order {:?}", row.labels[0], row.order));
        }
    }
    let expected: Vec<String> = CALIBRATION.iter().map(|(l, _)| l.to_string()).collect();
    if seen != expected {
        bad.push(format!("labels {seen:?}"));
    }
    if took >= Duration::from_secs(10) {
        bad.push(format!("took {took:?}"));
    }
    Outcome {
        pass: out.status.success() && bad.is_empty() && rows.len() == 20,
        detail: if bad.is_empty() { format!("{} groups, generators re-verified", rows.len()) } else { bad.join("; ") },
    }
}

fn angle_rank_columns() -> (Outcome, Vec<String>) {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut undocumented = Vec::new();
    for row in VERDICTS {
        let computed = tabled_angle_rank(row).expect("tabled rows have atlas groups");
        if computed != row.angle_rank {
            let text = format!("table {} {} computed {computed} printed {}", row.table, row.labels.join("~"), row.angle_rank);
            let documented = ERRATA.iter().any(|e| {
                e.table == row.table && row.contains(e.label) && e.field == "angle rank" && e.corrected == computed.to_string()
            });
            if !documented {
                undocumented.push(text.clone());
            }
            mismatches.push(text);
        }
    }
    // spot values named in the criterion
    let rank_of = |table: u8, label: &str| {
        VERDICTS.iter().find(|r| r.table == table && r.contains(label)).map(|r| tabled_angle_rank(r).unwrap())
    };
    let spots = [(5, "W4.4.t.a.1", 2), (10, "D6.6.t.a.1", 1), (10, "D6.6.t.a.2", 3), (10, "D6.6.t.a.3", 3), (10, "D6.6.t.a.4", 3)];
    for (t, l, want) in spots {
        if rank_of(t, l) != Some(want) {
            undocumented.push(format!("table {t} {l}: {:?}, want {want}", rank_of(t, l)));
        }
    }
    for d in 1..=3 {
        sweep_atlas(d).expect("sweep");
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(60) {
        undocumented.push(format!("sweep took {took:?}"));
    }
    let detail = if mismatches.is_empty() {
        format!("{} rows exact", VERDICTS.len())
    } else {
        format!(
            "{} of {} rows differ from the printed rank, all documented errata: {}",
            mismatches.len(),
            VERDICTS.len(),
            mismatches.join("; ")
        )
    };
    (Outcome { pass: mismatches.is_empty(), detail }, undocumented)
}

fn example_suite() -> (Outcome, Vec<String>) {
    let resolver = resolver();
    let options = ClassifyOptions::default();
    let labels: BTreeSet<&str> = VERDICTS.iter().filter_map(|r| r.example).collect();
    let start = Instant::now();
    let mut errata = Vec::new();
    let mut hard = Vec::new();
    for label in &labels {
        let check = check_label(&resolver, label, &options);
        match check.outcome.as_str() {
            AGREES => {}
            ERRATUM => errata.push(format!("{label} ({})", check.notes.join("; "))),
            _ => hard.push(format!("{label}: {}", check.notes.join("; "))),
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(1800) {
        hard.push(format!("took {took:?}"));
    }
    let pass = errata.is_empty() && hard.is_empty();
    let detail = if pass {
        format!("{} example labels exact", labels.len())
    } else {
        format!(
            "{} of {} labels match the printed rows; differing: {}",
            labels.len() - errata.len() - hard.len(),
            labels.len(),
            errata.iter().chain(&hard).cloned().collect::<Vec<_>>().join("; ")
        )
    };
    (Outcome { pass, detail }, hard)
}

fn shioda_product() -> Outcome {
    let resolver = resolver();
    let ec = resolver.fetch_class("1.19.i").unwrap().polynomial().unwrap();
    let three = resolver.fetch_class("3.19.a_j_acm").unwrap().polynomial().unwrap();
    let rec = classify(&ec.product(&three).unwrap()).unwrap();
    let mut bad = Vec::new();
    let factors: BTreeSet<IntPolynomial> = rec.decomposition.factors.iter().map(|(f, _)| f.poly().clone()).collect();
    let cited: BTreeSet<IntPolynomial> = [
        IntPolynomial::from_i64(&[19, 8, 1]),
        IntPolynomial::from_i64(&[6859, 0, 171, -64, 9, 0, 1]),
    ]
    .into_iter()
    .collect();
    if factors != cited {
        bad.push(format!("factors {factors:?}"));
    }
    if !rec.newton.is_ordinary() {
        bad.push("Newton polygon not ordinary".into());
    }
    if rec.rep.group.order() != 6 {
        bad.push(format!("group order {}", rec.rep.group.order()));
    }
    let cited_gen = SignedPerm::parse_cycles(4, "(1 b2 b4 b1 2 4)(3 b3)").unwrap();
    let cited_group = SignedSubgroup::generate(4, &[cited_gen]);
    if w_conjugate(&rec.rep.group, &cited_group, &rec.rep.w).is_none() {
        bad.push(format!("group {} is not w-conjugate to the cited one", rec.rep));
    }
    if rec.angle_rank != 3 {
        bad.push(format!("angle rank {}", rec.angle_rank));
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "two cited factors, ordinary, cyclic of order 6 w-conjugate to <(1 b2 b4 b1 2 4)(3 b3)>, angle rank 3".into()
        } else {
            bad.join("; ")
        },
    }
}

fn dual_formula() -> (Outcome, Vec<String>) {
    let mut without_iota = Vec::new();
    let mut hard = Vec::new();
    let mut pairs = 0;
    for d in 1..=3 {
        for row in sweep_atlas(d).unwrap() {
            pairs += 1;
            if row.angle_rank != row.hyperplane_rank {
                let text = format!("{} {} ({} vs {})", row.np, row.label, row.angle_rank, row.hyperplane_rank);
                if row.contains_conjugation { hard.push(text) } else { without_iota.push(text) }
            }
        }
    }
    let resolver = resolver();
    let labels = bundled_labels();
    for label in &labels {
        let rec = classify(&resolver.fetch_class(label).unwrap().polynomial().unwrap()).unwrap();
        if rec.angle_rank != hyperplane_rank(&rec.rep) {
            hard.push(format!("fixture {label}"));
        }
    }
    let detail = format!(
        "{} atlas pairs and {} fixtures; all pairs with complex conjugation and all fixtures agree{}",
        pairs,
        labels.len(),
        if without_iota.is_empty() {
            String::new()
        } else {
            format!(
                "; {} pairs without complex conjugation differ (rank(V) - 1 vs hyperplane rank), e.g. {}",
                without_iota.len(),
                without_iota.iter().take(3).cloned().collect::<Vec<_>>().join(", ")
            )
        }
    );
    (Outcome { pass: without_iota.is_empty() && hard.is_empty(), detail }, hard)
}

fn exclusion_screen() -> Outcome {
    let mut bad = Vec::new();
    let mut excluded_rows = Vec::new();
    for row in VERDICTS.iter().filter(|r| r.dimension >= 2 && r.simple) {
        let d = row.dimension;
        let w = Weighting::from_slopes(&row.np.slopes(d).unwrap()).unwrap();
        for label in row.labels {
            let h = atlas(d).unwrap().find(label).unwrap();
            if !(h.is_transitive() && h.contains_iota()) {
                continue;
            }
            let occurs = row.occurs
                != ERRATA.iter().any(|e| e.table == row.table && e.label == *label && e.field == "occurs");
            let screen = realizability_screen(&w, h);
            let excluded = matches!(screen, Screen::Excluded(_));
            // rows whose "No" rests on divisor-map periodicity
            let governed = d == 3
                && matches!(label.split('.').next(), Some("C6" | "D6"))
                && matches!(row.np.letter(), "B" | "C" | "D");
            if excluded && occurs {
                bad.push(format!("table {} {label} excluded but occurs", row.table));
            }
            if governed && !occurs && !excluded {
                bad.push(format!("table {} {label} should be excluded ({screen:?})", row.table));
            }
            if excluded {
                excluded_rows.push(format!("{}:{}:{label}", row.table, row.np));
            }
        }
    }
    let almost_ordinary_c6 = WeightedPermRep::new(
        Weighting::from_i64_pairs(&[(0, 1), (0, 1), (1, 2)]).unwrap(),
        atlas(3).unwrap().find("C6.6.t.a.2").unwrap().clone(),
    )
    .unwrap();
    if !matches!(realizability_screen(&almost_ordinary_c6.w, &almost_ordinary_c6.group), Screen::Excluded(_)) {
        bad.push("almost ordinary C6 not excluded".into());
    }
    Outcome {
        pass: bad.is_empty() && !excluded_rows.is_empty(),
        detail: if bad.is_empty() {
            format!("every exclusion is a non-occurring row and every periodicity row is excluded: {}", excluded_rows.join(", "))
        } else {
            bad.join("; ")
        },
    }
}

fn certificate_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut failures = Vec::new();
    let mut dims = [0usize; 3];
    for i in 0..1000 {
        let d = rng.gen_range(1..=3);
        dims[d - 1] += 1;
        let (p, n) = SMALL_FIELDS[rng.gen_range(0..SMALL_FIELDS.len())];
        let weil = sample_frobenius_polynomial(&mut rng, d, p, n);
        match classify(&weil) {
            Ok(rec) => failures.extend(audit_record(&rec).into_iter().map(|e| format!("#{i} {}: {e}", weil.poly()))),
            Err(e) => failures.push(format!("#{i} {}: {e}", weil.poly())),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("1000 polynomials (dimensions 1/2/3: {}/{}/{}), zero failures", dims[0], dims[1], dims[2])
        } else {
            format!("{} failures: {}", failures.len(), failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
        },
    }
}

fn label_codec() -> Outcome {
    let limit = 26i64.pow(4);
    let broken = (-limit..=limit).filter(|&m| decode_code(&encode_code(m)).ok() != Some(m)).count();
    let anchors = [("acm", -64), ("i", 8), ("j", 9)];
    let anchored = anchors.iter().all(|(c, v)| decode_code(c).ok() == Some(*v));
    Outcome {
        pass: broken == 0 && anchored,
        detail: format!("{} values round-trip, {broken} broken; acm/i/j decode to -64/8/9: {anchored}", 2 * limit + 1),
    }
}

fn search_smoke() -> Outcome {
    let options = ClassifyOptions::default();
    let mut bad = Vec::new();
    let mut realized = BTreeSet::new();
    let mut witnesses = Vec::new();
    for (p, r_max) in [(2, 2), (3, 1)] {
        let bounds = SearchBounds { d: 2, p, r_max, height: None };
        let report = run_search(&bounds, 512, None, &options, Execution::default()).unwrap();
        if report.summary.failures > 0 {
            bad.push(format!("p={p}: {} failures", report.summary.failures));
        }
        for c in report.classes {
            realized.insert(c.class.clone());
            if !matches!(c.table, Some(4..=6)) || c.occurs_in_table != Some(true) {
                bad.push(format!("{} witness {} lands in table {:?} occurs {:?}", c.group_label, c.witness, c.table, c.occurs_in_table));
            }
            let label: IsogenyClassLabel = c.witness.parse().unwrap();
            let again = classify_with(&label_to_polynomial(&label).unwrap(), &options).unwrap();
            if again.group_label.as_deref() != Some(&c.group_label) || again.np_tag.map(|t| t.letter()) != Some(&c.newton_type) {
                bad.push(format!("witness {} reclassifies differently", c.witness));
            }
            witnesses.push(format!("{} {}: {}", c.newton_type, c.group_label, c.witness));
        }
    }
    let wanted: BTreeSet<String> = ["C4.4.t.a", "V4.4.t.a", "W4.4.t.a"].iter().map(|s| s.to_string()).collect();
    if !wanted.is_subset(&realized) {
        bad.push(format!("realized only {realized:?}"));
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("W4, V4, C4 realized; {}", witnesses.join(", ")) } else { bad.join("; ") },
    }
}

#[test]
fn acceptance() {
    let mut hard: Vec<String> = Vec::new();
    let mut outcomes = Vec::new();
    let mut timed = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        report(n, &o, start.elapsed());
        outcomes.push((n, o.pass));
    };

    timed(1, &mut subgroup_atlas_table);
    timed(2, &mut || {
        let (o, h) = angle_rank_columns();
        hard.extend(h);
        o
    });
    timed(3, &mut || {
        let (o, h) = example_suite();
        hard.extend(h);
        o
    });
    timed(4, &mut shioda_product);
    timed(5, &mut || {
        let (o, h) = dual_formula();
        hard.extend(h);
        o
    });
    timed(6, &mut exclusion_screen);
    timed(7, &mut certificate_suite);
    timed(8, &mut label_codec);
    timed(9, &mut search_smoke);

    // 2, 3 and 5 can fail only through printed errata and the groups
    // without complex conjugation; everything else must pass.
    for (n, pass) in &outcomes {
        if ![2, 3, 5].contains(n) {
            assert!(pass, "criterion {n} failed");
        }
    }
    assert!(hard.is_empty(), "undocumented discrepancies:\n{}", hard.join("\n"));
}
