use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgz-galois"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn build_emits_curve_artifact() {
    let (code, stdout, _) = run(&["build", "--q", "3"]);
    assert_eq!(code, 0);
    let art = json(&stdout);
    assert_eq!(art["degree"], 18);
    assert_eq!(art["checks"]["division_identity"], true);
}

#[test]
fn verify_facts_passes_for_q3() {
    let (code, stdout, _) = run(&["verify-facts", "--q", "3"]);
    assert_eq!(code, 0);
    let art = json(&stdout);
    assert_eq!(art["pass"], true);
    assert_eq!(art["singular_locus"]["singular_points"], 78);
}

#[test]
fn certify_reports_verdicts() {
    let (code, stdout, _) = run(&["certify", "--q", "3", "--point", "0,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(
        json(&stdout)["certificate"]["evidence"]["verdict"],
        "positive"
    );

    let (code, stdout, _) = run(&[
        "certify",
        "--q",
        "3",
        "--point",
        "0:1,1,0",
        "--subfield",
        "2",
    ]);
    assert_eq!(code, 0);
    let art = json(&stdout);
    assert_eq!(art["certificate"]["evidence"]["verdict"], "negative");
    assert_eq!(
        art["certificate"]["evidence"]["obstruction"]["kind"],
        "index-not-dividing-degree"
    );
}

#[test]
fn text_output_and_out_file() {
    let dir = std::env::temp_dir().join(format!("dgz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    let (code, stdout, _) = run(&["build", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(json(&std::fs::read_to_string(&path).unwrap())["degree"], 4);
    std::fs::remove_dir_all(&dir).unwrap();

    let (code, stdout, _) = run(&["build", "--q", "2", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(!stdout.trim().is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["build", "--q", "6"]).0, 2);
    assert_eq!(run(&["certify", "--q", "3", "--point", "1,2"]).0, 2);
    assert_eq!(run(&["build"]).0, 2);
    let (code, _, stderr) = run(&["build", "--q", "3", "--L", "40"]);
    assert_eq!(code, 2);
    assert!(!stderr.is_empty());
}
