use std::fs;
use std::path::PathBuf;

use abelk_cli::{run, Report, Run, EXIT_GALLERY_FAIL, EXIT_INPUT_ERROR, EXIT_OK};
use tempfile::TempDir;

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path: PathBuf = self.0.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn abelk(args: &[&str]) -> Run {
    run(std::iter::once("abelk").chain(args.iter().copied()))
}

#[test]
fn k1_of_free_rank_four() {
    let f = Files::new();
    let g = f.write("zm.grp", "name: zm\ntorsion: trivial\nfree: {free: 4}\n");
    let r = abelk(&["k1", &g]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.contains("free rank 8"), "{}", r.stdout);
}

#[test]
fn k0_reports_rank() {
    let f = Files::new();
    let g = f.write("zm.grp", "torsion: trivial; free: {free: 3}");
    let r = abelk(&["k0", &g]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.contains("free rank 4"), "{}", r.stdout);
}

#[test]
fn unitary_and_k1_disagree_on_countable_torsion() {
    let f = Files::new();
    let a = f.write("a.grp", "name: a; torsion: countable[2]; free: {free: 1}");
    let b = f.write("b.grp", "name: b; torsion: countable[2]; free: {free: 2}");
    let u = abelk(&["compare-unitary", &a, &b]);
    assert_eq!(u.exit_code, EXIT_OK);
    assert!(u.stdout.contains("a vs b: Isomorphic"), "{}", u.stdout);
    let k = abelk(&["compare-k1", &a, &b]);
    assert_eq!(k.exit_code, EXIT_OK);
    assert!(k.stdout.contains("NotIsomorphic (free rank 1 vs 2)"), "{}", k.stdout);
}

#[test]
fn type_and_height_of_a_rank_one_group() {
    let f = Files::new();
    let g = f.write("q.grp", "name: q; torsion: trivial; free: {rank1: {2: inf, 3: 1}}");
    let t = abelk(&["type", &g]);
    assert!(t.stdout.contains("type(2^inf)"), "{}", t.stdout);
    let h = abelk(&["height", &g, "--prime", "3"]);
    assert_eq!(h.exit_code, EXIT_OK);
    assert!(h.stdout.trim_end().ends_with(": 1"), "{}", h.stdout);
    let h2 = abelk(&["height", &g, "--prime", "2", "--element", "6"]);
    assert!(h2.stdout.trim_end().ends_with(": inf"), "{}", h2.stdout);
}

#[test]
fn witness_check_reports_validity() {
    let f = Files::new();
    let w = f.write(
        "w.wit",
        "copies: 1\nsrc: {tower: 1, prefix: [], period: [[[2]]]}\ndst: {tower: 1, prefix: [], period: [[[2]]]}\nmap: [[3]]\n",
    );
    let r = abelk(&["check-witness", "--witness", &w]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.contains("invalid"), "{}", r.stdout);
    let ok = f.write("ok.wit", "copies: 1; src: {free: 1}; dst: {free: 1}; map: [[-1]]");
    assert!(abelk(&["check-witness", "--witness", &ok]).stdout.contains(": valid"));
}

#[test]
fn gallery_verifies_with_shipped_configuration() {
    let r = abelk(&["verify-gallery"]);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.stdout);
    assert!(r.stdout.contains("SKIPPED"));
    assert!(!r.stdout.contains("FAIL ("));
    assert!(r.stdout.trim_end().ends_with("0 failed, 4 skipped, 0 unknown"), "{}", r.stdout);
}

#[test]
fn gallery_without_configuration_notes_the_omission() {
    let r = abelk(&["verify-gallery", "--gallery-config", "none"]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.starts_with("notice:"), "{}", r.stdout);
}

#[test]
fn gallery_failure_exits_with_one() {
    let f = Files::new();
    let cfg = f.write(
        "bad.cfg",
        "copies: 2\nsrc: {tower: 2, prefix: [], period: [[[3, -10], [2, 3]]]}\n\
         dst: {tower: 2, prefix: [], period: [[[1, -6], [4, 5]]]}\n\
         map: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]\n",
    );
    let r = abelk(&["verify-gallery", "--gallery-config", &cfg]);
    assert_eq!(r.exit_code, EXIT_GALLERY_FAIL, "{}", r.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    let f = Files::new();
    let bad = f.write("bad.grp", "torsion: trivial\nfree: {rank1: {2: x}}\n");
    let r = abelk(&["k1", &bad]);
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(abelk(&["k1", "/nonexistent/file.grp"]).exit_code, EXIT_INPUT_ERROR);
    let singular = f.write("s.grp", "torsion: trivial; free: {tower: 2, prefix: [], period: [[[1, 2], [2, 4]]]}");
    assert_eq!(abelk(&["k1", &singular]).exit_code, EXIT_INPUT_ERROR);
}

#[test]
fn unknown_command_prints_usage() {
    let r = abelk(&["frobnicate"]);
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR);
    assert!(r.stderr.contains("Usage"), "{}", r.stderr);
}

#[test]
fn json_reports_round_trip() {
    let f = Files::new();
    let g = f.write("zm.grp", "torsion: trivial; free: {free: 2}");
    let r = abelk(&["--format", "json", "k1", &g]);
    assert_eq!(r.exit_code, EXIT_OK);
    let parsed = Report::from_json(&r.stdout).unwrap();
    assert_eq!(Some(&parsed), r.report.as_ref());
    assert_eq!(Report::from_json(&parsed.to_json()).unwrap(), parsed);
    assert_eq!(parsed.command, "k1");
    assert_eq!(parsed.verdicts[0].verdict, "free rank 2");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_abelk");
    let status = std::process::Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_INPUT_ERROR));
    let out = std::process::Command::new(bin).arg("verify-gallery").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
}
