use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

use abvar_cli::records::{Record, VerificationRecord, RECORD_VERSION};

fn abvar(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_abvar"));
    cmd.args(args).env("ABVAR_OFFLINE", "1");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["analyze", "1.19.i"], 0),
        (&["tables", "--which", "99"], 2),
        (&["analyze"], 2),
        (&["analyze", "--coeffs", "1,0,0", "--p", "2"], 2),
        (&["analyze", "1.2.ab", "1.3.ab"], 2),
        (&["analyze", "2.4.zz_"], 3),
        (&["analyze", "1.2.aa"], 3),
        (&["analyze", "--coeffs", "1,5,2", "--p", "2"], 4),
        // bounds are fine but not bundled, and the network is off
        (&["analyze", "1.7.b"], 5),
        (&["--precision-bits", "8", "analyze", "1.19.i"], 2),
    ];
    for (args, want) in cases {
        let out = abvar(args, &[]);
        assert_eq!(code(&out), *want, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn environment_sets_global_flags() {
    let out = abvar(&["analyze", "1.2.ab"], &[("ABVAR_FORMAT", "records")]);
    assert_eq!(code(&out), 0);
    let records = Record::parse_all(&stdout(&out)).unwrap();
    assert!(matches!(&records[..], [Record::Analysis(a)] if a.input == "1.2.ab"));

    let out = abvar(&["analyze", "1.2.ab"], &[("ABVAR_PRECISION_BITS", "4")]);
    assert_eq!(code(&out), 2);

    // the flag wins over the environment
    let out = abvar(&["--format", "text", "analyze", "1.2.ab"], &[("ABVAR_FORMAT", "records")]);
    assert!(stdout(&out).starts_with("input"));
}

#[test]
fn verify_records_round_trip() {
    let out = abvar(&["--format", "records", "verify"], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let records = Record::parse_all(&text).unwrap();
    assert_eq!(records.len(), abvar_lmfdb::bundled_labels().len());
    for (line, rec) in text.lines().zip(&records) {
        assert_eq!(rec.render(), line);
        assert!(line.contains(&format!("\"version\":{RECORD_VERSION}")));
    }
}

#[test]
fn analysis_records_round_trip() {
    for args in [&["analyze", "3.19.a_j_acm"][..], &["analyze", "--product", "1.19.i", "3.19.a_j_acm"]] {
        let out = abvar(&[&["--format", "records"][..], args].concat(), &[]);
        let line = stdout(&out);
        let rec = Record::parse(line.trim_end()).unwrap();
        assert_eq!(rec.render(), line.trim_end());
    }
}

#[test]
fn stale_record_version_is_rejected() {
    let out = abvar(&["--format", "records", "analyze", "1.2.ab"], &[]);
    let line = stdout(&out).replace(&format!("\"version\":{RECORD_VERSION}"), "\"version\":999");
    assert!(Record::parse(line.trim_end()).is_err());
}

#[test]
fn tables_verify_passes_with_documented_errata() {
    let out = abvar(&["tables", "--verify"], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("Table 14."));
    assert!(text.contains("erratum (documented erratum"));
}

fn run_search(dir: &Path, extra: &[&str]) -> Output {
    let cp = dir.join("cp.json");
    let cp = cp.to_str().unwrap();
    let args = [&["--format", "records", "search", "--d", "2", "--p", "2", "--r-max", "2", "--batch", "97", "--checkpoint", cp][..], extra]
        .concat();
    abvar(&args, &[])
}

#[test]
fn interrupted_search_resumes_to_the_same_result() {
    let straight = tempfile::tempdir().unwrap();
    let full = stdout(&run_search(straight.path(), &[]));

    let pieces = tempfile::tempdir().unwrap();
    let mut rounds = 0;
    let resumed = loop {
        let out = run_search(pieces.path(), &["--max-batches", "3"]);
        assert_eq!(code(&out), 0);
        rounds += 1;
        if !out.stdout.is_empty() {
            break stdout(&out);
        }
        assert!(rounds < 100);
    };
    assert!(rounds > 1);
    assert_eq!(resumed, full);
    let summary = Record::parse_all(&full).unwrap().pop().unwrap();
    assert!(matches!(summary, Record::SearchSummary(s) if s.missing_classes.is_empty()));
}

#[test]
fn checkpoint_from_other_bounds_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_search(dir.path(), &["--max-batches", "1"])), 0);
    let cp = dir.path().join("cp.json");
    let out = abvar(&["search", "--d", "2", "--p", "3", "--checkpoint", cp.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 8);
}

#[test]
fn sequential_and_parallel_agree() {
    let a = abvar(&["--format", "records", "verify", "2.4.ah_u", "3.19.a_j_acm"], &[("ABVAR_SEQUENTIAL", "1")]);
    let b = abvar(&["--format", "records", "verify", "2.4.ah_u", "3.19.a_j_acm"], &[]);
    assert_eq!(stdout(&a), stdout(&b));
}

fn text() -> impl Strategy<Value = String> {
    "[ -~]{0,12}"
}

proptest! {
    #[test]
    fn verification_record_round_trip(
        label in text(),
        np in proptest::option::of(text()),
        rank in proptest::option::of(0usize..8),
        simple in proptest::option::of(any::<bool>()),
        table in proptest::option::of(2u8..=14),
        notes in proptest::collection::vec(text(), 0..3),
    ) {
        let rec = Record::Verification(VerificationRecord {
            label,
            newton_type: np,
            group_label: None,
            angle_rank: rank,
            geometrically_simple: simple,
            table,
            outcome: "agrees".into(),
            notes,
        });
        let line = rec.render();
        prop_assert!(!line.contains('\n'));
        prop_assert_eq!(Record::parse(&line).unwrap(), rec);
    }
}
