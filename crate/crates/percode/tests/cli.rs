//! End-to-end tests of the command-line interface, driving the built binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use percode::canon::analyze;
use percode::hamming::{extended_hamming, hamming};
use percode::steiner::{neighborhood_system, write_catalog};
use percode::{Code, Codeword};

fn percode(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percode"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn cover_solve_prints_solutions() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("inst.txt"), "3 4\n0 1\n2\n1 2\n0\n").unwrap();
    let out = percode(&["cover", "solve", "inst.txt"], dir.path());
    assert!(out.status.success());
    let body = stdout_of(&out);
    let mut lines: Vec<&str> = body.lines().map(str::trim).collect();
    lines.sort();
    assert_eq!(lines, vec!["0 1", "2 3"]);
}

#[test]
fn canon_output_is_the_representative() {
    let dir = tempfile::tempdir().unwrap();
    let code = hamming(3);
    fs::write(dir.path().join("code.txt"), code.to_text()).unwrap();
    let out = percode(&["canon", "code.txt"], dir.path());
    assert!(out.status.success());
    let body = stdout_of(&out);
    let parsed = Code::read_text(body.as_bytes()).unwrap();
    assert_eq!(parsed, analyze(&code).representative);
    assert!(body.contains("# certificate perm"));
    assert!(body.contains("# certificate translation"));
}

#[test]
fn aut_reports_group_orders() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("code.txt"), extended_hamming(3).to_text()).unwrap();
    let out = percode(&["aut", "code.txt"], dir.path());
    assert!(out.status.success());
    let body = stdout_of(&out);
    assert!(body.contains("sym 1344"));
    assert!(body.contains("ker 16"));
    assert!(body.contains("aut 21504"));
    assert!(body.contains("gen perm"));
}

#[test]
fn steiner_verify_reports_per_record() {
    let dir = tempfile::tempdir().unwrap();
    let q = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let mut good = Vec::new();
    write_catalog(&mut good, [&q]).unwrap();
    let good = String::from_utf8(good).unwrap();
    // second record: drop one block (wrong count)
    let broken: String = good.trim_end().split(' ').skip(1).collect::<Vec<_>>().join(" ");
    fs::write(dir.path().join("cat.txt"), format!("{good}{broken}\n")).unwrap();

    let out =
        percode(&["steiner", "verify", "cat.txt", "--t", "3", "--k", "4", "--v", "8"], dir.path());
    assert!(!out.status.success());
    let body = stdout_of(&out);
    assert!(body.contains("record 1: ok"));
    assert!(body.contains("record 2: FAIL"));
}

#[test]
fn classify_then_audit_desk_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = percode(&["classify", "--length", "8", "--out", "run"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = stdout_of(&out);
    assert!(body.contains("extended8: 1 classes"));
    assert!(body.contains("halved7: 1 classes"));
    for file in
        ["records.txt", "extended.txt", "perfect.txt", "shortened.txt", "halved.txt", "summary.tsv"]
    {
        assert!(dir.path().join("run").join(file).exists(), "missing {file}");
    }
    let summary = fs::read_to_string(dir.path().join("run/summary.tsv")).unwrap();
    assert!(summary.contains("hist\textended8\t21504\t1"));

    let audit = percode(&["audit", "--reports", "run"], dir.path());
    assert!(audit.status.success());
    let body = stdout_of(&audit);
    assert!(body.contains("by_codes 480\tby_designs 480\tPASS"));
    assert!(body.contains("AUDIT PASS"));
}

#[test]
fn classify_resume_skips_done_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let first = percode(&["classify", "--length", "8", "--out", "run"], dir.path());
    assert!(first.status.success());
    let summary_before = fs::read(dir.path().join("run/summary.tsv")).unwrap();

    let second = percode(&["classify", "--length", "8", "--out", "run", "--resume"], dir.path());
    assert!(second.status.success());
    let err = String::from_utf8_lossy(&second.stderr);
    assert!(err.contains("resuming: 1 inputs already processed"), "{err}");
    let summary_after = fs::read(dir.path().join("run/summary.tsv")).unwrap();
    assert_eq!(summary_before, summary_after, "resume must reproduce the report");
}

#[test]
fn classify_plain_dedup_matches_two_test_mode() {
    let dir = tempfile::tempdir().unwrap();
    let a = percode(&["classify", "--length", "8", "--out", "two_test"], dir.path());
    let b = percode(&["classify", "--length", "8", "--out", "plain", "--plain-dedup"], dir.path());
    assert!(a.status.success() && b.status.success());
    let sa = fs::read_to_string(dir.path().join("two_test/summary.tsv")).unwrap();
    let sb = fs::read_to_string(dir.path().join("plain/summary.tsv")).unwrap();
    assert_eq!(sa, sb, "both acceptance modes classify identically");
}

#[test]
fn classify_with_external_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let mut buf = Vec::new();
    write_catalog(&mut buf, [&q]).unwrap();
    fs::write(dir.path().join("cat.txt"), buf).unwrap();
    let out = percode(
        &["classify", "--length", "8", "--catalog", "cat.txt", "--out", "run", "--jobs", "2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = stdout_of(&out);
    assert!(body.contains("1 inputs, 1 augmentable, 1 extensions"), "{body}");
    assert!(body.contains("extended8: 1 classes"));
}

#[test]
fn duplicated_catalog_entries_trip_the_soundness_check() {
    // catalogs must hold pairwise non-isomorphic systems; a duplicate makes
    // the same class get accepted twice, which the pipeline refuses
    let dir = tempfile::tempdir().unwrap();
    let q = neighborhood_system(&extended_hamming(3), Codeword::zero(8), 4).unwrap();
    let mut buf = Vec::new();
    write_catalog(&mut buf, [&q, &q]).unwrap();
    fs::write(dir.path().join("cat.txt"), buf).unwrap();
    let out =
        percode(&["classify", "--length", "8", "--catalog", "cat.txt", "--out", "run"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("two accepted extended codes are equivalent"), "{err}");

    // plain-dedup mode is insensitive to duplicates: global deduplication
    // keeps the first occurrence
    let out = percode(
        &["classify", "--length", "8", "--catalog", "cat.txt", "--out", "plain", "--plain-dedup"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = stdout_of(&out);
    assert!(body.contains("extended8: 1 classes"), "{body}");
}
