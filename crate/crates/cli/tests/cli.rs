use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn input(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("inputs").join(name).display().to_string()
}

fn algd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algd")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("algd-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn minimal_sl2_file_checks() {
    let o = algd(&["check", &input("sl2.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["jacobi", "d_squared", "maurer_cartan"] {
        assert!(text.contains(&format!("[pass] {name}")), "{text}");
    }
    assert!(text.contains("seed 0  truncate 2  mode weight 0"));
}

#[test]
fn machine_report_is_self_describing() {
    let o = algd(&["weil", &input("sl2.alg"), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "algd-report/1");
    assert_eq!(doc["command"], "weil");
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["seed"], 0);
    assert_eq!(doc["truncate"], 2);
    let rows = doc["tables"]["H(W(L))"]["rows"].as_array().unwrap();
    let dims: Vec<&str> = rows.iter().map(|r| r[1].as_str().unwrap()).collect();
    assert_eq!(dims, ["1", "0", "0", "0", "0"]);
    assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn unknown_coordinate_is_located() {
    let o = algd(&["check", &input("bad_anchor.alg")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 8, column 1: unknown coordinate 'z'"), "{}", stderr(&o));
}

#[test]
fn bracket_antisymmetry_is_strict_by_default() {
    let o = algd(&["check", &input("bad_bracket.alg")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not graded-antisymmetric"));
    let o = algd(&["check", &input("bad_bracket.alg"), "--strict"]);
    assert_eq!(o.status.code(), Some(2));
    let o = algd(&["check", &input("bad_bracket.alg"), "--lenient", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let warnings = doc["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].as_str().unwrap().contains("antisymmetrized"));
}

#[test]
fn expression_errors_point_at_the_column() {
    let p = scratch("expr.alg", "[patch]\ncoords = x\n[bundle]\ne = 0\n[anchor]\ne x = 1 + * x\n");
    let o = algd(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 6, column 11"), "{}", stderr(&o));
}

#[test]
fn structural_errors() {
    let cases = [
        ("nobundle.alg", "[patch]\ncoords = x\n", "missing [bundle]"),
        ("section.alg", "[bundle]\ne = 0\n[wat]\n", "unknown section 'wat'"),
        ("key.alg", "[bundle]\ne = 0\n[options]\ncolour = 3\n", "unknown key 'colour'"),
        ("dup.alg", "[bundle]\ne = 0\n[bundle]\n", "duplicate section"),
        ("noeq.alg", "[bundle]\ne 0\n", "expected 'key = value'"),
        ("orphan.alg", "e = 0\n", "before the first section"),
        ("both.alg", "[bundle]\ne = 0\n[options]\nweight = 0\ntruncate = 1\n", "both weight and truncate"),
    ];
    for (name, text, needle) in cases {
        let p = scratch(name, text);
        let o = algd(&["check", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
}

#[test]
fn weight_mode_on_inhomogeneous_data_is_an_input_error() {
    let p = scratch("inhom.alg", "[patch]\ncoords = x\n[bundle]\ne = 0\n[anchor]\ne x = 1 + x\n");
    let o = algd(&["ce-cohomology", p.to_str().unwrap(), "--weight", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("weight-homogeneous"), "{}", stderr(&o));
    // without a mode flag the command falls back to truncation and says so
    let o = algd(&["ce-cohomology", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mode truncate 2"));
    assert!(stdout(&o).contains("caveat: ce-cohomology"));
}

#[test]
fn flag_conflicts_are_usage_errors() {
    let o = algd(&["weil", &input("sl2.alg"), "--weight", "0", "--truncate", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = algd(&["check", &input("sl2.alg"), "--strict", "--lenient"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enh_reports_brackets_and_accepts_k() {
    let o = algd(&["enh", &input("tangent2.alg"), "--K", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[pass] d_squared: mod F^3"));
    assert!(text.contains("[pass] curving"));
    assert!(text.contains("0  y_x        -dx"), "{text}");
    assert!(text.contains("1  y_x        eta_e_x"), "{text}");
}

#[test]
fn symplectic_and_mc_commands() {
    let o = algd(&["symplectic", &input("sl2.alg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] form killing: enh_closed"));
    let o = algd(&["symplectic", &input("plane_area.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let o = algd(&["mc-check", &input("sl2.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let o = algd(&["mc-check", &input("tangent1.alg")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residual at y_x = -eps"));
    let o = algd(&["symplectic", &input("tangent2.alg")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tangent_area_form_fails_q_invariance_through_the_cli() {
    let p = scratch(
        "tx_area.alg",
        "[patch]\ncoords = x, y\n[bundle]\ne_x = 0\ne_y = 0\n[anchor]\ne_x x = 1\ne_y y = 1\n[form area]\ndegree = 0\nomega0 = dx*dy\n",
    );
    let o = algd(&["symplectic", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] form area: q_invariant"), "{}", stdout(&o));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("algd-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = algd(&["check", &input("sl2.alg"), "--format", "machine", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = algd(&["check", &input("sl2.alg"), "--format", "machine"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn reports_are_deterministic_for_any_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..4 {
        let seed = rng.gen_range(0..10_000u64).to_string();
        let args = ["rep-weq", &input("action_dx.alg"), "--seed", &seed, "--format", "machine"];
        let a = algd(&args);
        let b = algd(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
        let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(doc["seed"].to_string(), seed);
    }
}
