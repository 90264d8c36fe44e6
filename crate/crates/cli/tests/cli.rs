use std::path::Path;
use std::process::{Command, Output};

fn caliblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caliblab"))
        .args(args)
        .env_remove("CALIBLAB_SEED")
        .output()
        .expect("binary runs")
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn sign_bound_command_passes_by_default() {
    let out = caliblab(&["lemma324"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let max_rows: Vec<&str> = text.lines().filter(|l| l.contains(",max over ")).collect();
    assert_eq!(max_rows.len(), 2);
    assert!(max_rows.iter().all(|l| l.starts_with("PASS,")));
    assert!(text.lines().nth(2).unwrap().starts_with("SUMMARY,"));
}

#[test]
fn report_all_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        let out = caliblab(&["--seed", "11", "--out", d.to_str().unwrap(), "report-all"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (ca, cb) = (dir_contents(&a), dir_contents(&b));
    assert!(ca.iter().any(|(n, _)| n == "report-all.csv"));
    assert_eq!(ca, cb);
}

#[test]
fn malformed_chain_file_is_a_parse_error_without_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let export = tmp.path().join("export");
    let out = caliblab(&[
        "--refine",
        "1",
        "--out",
        export.to_str().unwrap(),
        "homology",
        "export",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bad = tmp.path().join("bad.chain");
    std::fs::write(&bad, "caliblab-chain 1\ncomplex 0000\ndim one\n").unwrap();
    let reports = tmp.path().join("reports");
    let out = caliblab(&[
        "--out",
        reports.to_str().unwrap(),
        "homology",
        "check",
        "--complex",
        export.join("yxy.complex").to_str().unwrap(),
        "--chain",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing"));
    assert!(!reports.exists());
}

#[test]
fn exported_cycles_are_filled() {
    let tmp = tempfile::tempdir().unwrap();
    let out = caliblab(&[
        "--refine",
        "1",
        "--out",
        tmp.path().to_str().unwrap(),
        "homology",
        "export",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let complex = tmp.path().join("yxy.complex");
    let gamma = tmp.path().join("gamma_23.chain");
    let solved = tmp.path().join("solved");
    let out = caliblab(&[
        "--out",
        solved.to_str().unwrap(),
        "homology",
        "solve",
        "--complex",
        complex.to_str().unwrap(),
        "--chain",
        gamma.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = caliblab(&[
        "homology",
        "check",
        "--complex",
        complex.to_str().unwrap(),
        "--chain",
        solved.join("fill.chain").to_str().unwrap(),
    ]);
    // a fill is a 2-chain with nonzero boundary
    assert_eq!(out.status.code(), Some(1));
    let out = caliblab(&[
        "homology",
        "check",
        "--complex",
        complex.to_str().unwrap(),
        "--chain",
        gamma.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn minimized_competitor_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = tmp.path().join("run.manifest");
    std::fs::write(&manifest, "refine = 1\nbudget = 2000\nseeds = 3..5\n").unwrap();
    let comp = tmp.path().join("best.competitor");
    let out = caliblab(&[
        "minimize",
        "--manifest",
        manifest.to_str().unwrap(),
        "--export",
        comp.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = caliblab(&["calibrate", "--competitor", comp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = caliblab(&[
        "--format",
        "json",
        "homology",
        "decompose",
        "--competitor",
        comp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.find("\"failures\"").unwrap() < text.find("\"summary\"").unwrap());
}

#[test]
fn seeds_and_tolerances() {
    let out = caliblab(&["cones"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_caliblab"))
        .arg("cones")
        .env("CALIBLAB_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains(" seed=4 "));
    assert_eq!(
        caliblab(&["--tol.bound=1e-20", "lemma324"]).status.code(),
        Some(1)
    );
    assert_eq!(
        caliblab(&["--tol.bound", "1e-6", "lemma324"]).status.code(),
        Some(0)
    );
    assert_eq!(
        caliblab(&["--tol.nope=1", "lemma324"]).status.code(),
        Some(2)
    );
    assert_eq!(
        caliblab(&["--tol.bound=-1", "lemma324"]).status.code(),
        Some(2)
    );
}

#[test]
fn comass_of_one_two_vector() {
    let out = caliblab(&["--seed", "1", "comass", "--alpha", "1,0,0,0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("closed form [1.0, 0.0, 0.0, 0.0, 0.0, 1.0]"));
    let out = caliblab(&["--seed", "1", "comass", "--alpha", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}
