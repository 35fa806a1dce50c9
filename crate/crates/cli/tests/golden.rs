//! End-to-end runs of the binary against committed outputs.
//!
//! Set `LCBIF_BLESS=1` to rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn lcbif(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcbif")).args(args).current_dir(root()).output().expect("binary runs")
}

fn lcbif_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcbif"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn compare(name: &str, actual: &[u8]) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("LCBIF_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    if expected != actual {
        let a = String::from_utf8_lossy(actual);
        let e = String::from_utf8_lossy(&expected);
        let line = a.lines().zip(e.lines()).position(|(x, y)| x != y).unwrap_or(0);
        panic!(
            "{name} differs from golden at line {}:\n  got:      {:?}\n  expected: {:?}",
            line + 1,
            a.lines().nth(line),
            e.lines().nth(line)
        );
    }
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = lcbif(args);
    assert_eq!(out.status.code(), Some(code), "{name}: stderr {}", String::from_utf8_lossy(&out.stderr));
    compare(name, &out.stdout);
}

const CONE: &str = "tests/configs/cone.toml";
const EXPLICIT: &str = "tests/configs/explicit.toml";
const PATH_A: &str = "tests/configs/path_a.toml";
const REGION: &str = "tests/configs/region.toml";

#[test]
fn molien_d3tilde() {
    golden("molien_d3tilde.json", &["molien", "--group", "d3tilde", "--max-degree", "12"], 0);
    let out = lcbif(&["molien", "--group", "d3tilde", "--max-degree", "12"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let want: Vec<u64> = vec![1, 0, 1, 1, 2, 2, 4, 3, 6, 6, 8, 9, 13];
    assert_eq!(v["result"]["coefficients"], serde_json::json!(want));
}

#[test]
fn molien_so3_csv() {
    golden("molien_so3.csv", &["molien", "--group", "so3", "--max-degree", "10", "--format", "csv"], 0);
}

#[test]
fn invariants_sampled() {
    golden("invariants.json", &["invariants", "--points", "20", "--seed", "5"], 0);
}

#[test]
fn entropy_coeffs_default() {
    golden("entropy_coeffs.json", &["entropy-coeffs"], 0);
    let text = String::from_utf8(lcbif(&["entropy-coeffs"]).stdout).unwrap();
    assert!(text.contains("\"a3p\": 1.190476190"), "{text}");
}

#[test]
fn classify_models() {
    golden("classify_cone.json", &["-c", CONE, "classify"], 0);
    golden("classify_explicit.json", &["-c", EXPLICIT, "classify"], 0);
}

#[test]
fn solve4d_explicit() {
    golden("solve4d_explicit.json", &["-c", EXPLICIT, "solve4d"], 0);
    golden("solve4d_explicit.csv", &["-c", EXPLICIT, "solve4d", "--format", "csv"], 0);
}

#[test]
fn reduce_cone() {
    golden("reduce_cone.json", &["-c", CONE, "reduce"], 0);
}

#[test]
fn solve_region_and_reduced() {
    golden("solve_region.json", &["-c", REGION, "solve"], 0);
    golden("solve_cone.json", &["-c", CONE, "solve"], 0);
}

#[test]
fn bifset_region() {
    golden("bifset_region.json", &["-c", REGION, "bifset"], 0);
    golden("bifset_region.csv", &["-c", REGION, "bifset", "--format", "csv"], 0);
}

#[test]
fn census_region() {
    golden("census_region.json", &["-c", REGION, "census"], 0);
    golden("census_region.csv", &["-c", REGION, "census", "--format", "csv"], 0);
}

#[test]
fn sweep_path_a_single_event() {
    golden("sweep_path_a.json", &["-c", PATH_A, "sweep"], 0);
    let out = lcbif(&["-c", PATH_A, "sweep"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let events = v["result"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert!(events[0]["kinds"].as_array().unwrap().len() >= 2);
}

#[test]
fn determinacy_suite_reports_case_seven() {
    golden("determinacy_suite.json", &["determinacy"], 1);
    golden("determinacy_f6.json", &["determinacy", "--poly", "3,0,1; 0,2,1"], 0);
    golden("determinacy_xy_k5.json", &["determinacy", "--poly", "1,1,1", "--k", "5"], 0);
}

#[test]
fn versal_families() {
    golden("versal_f6.json", &["versal"], 0);
    golden("versal_y.json", &["versal", "--poly", "0,1,1", "--monomials", "0,0; 1,0", "--window", "6"], 0);
    golden("versal_f6_without_x2.json", &["versal", "--monomials", "0,0;1,0;0,1;1,1;3,0;4,0"], 0);
}

#[test]
fn spanning_thirty() {
    golden("spanning.json", &["spanning", "--samples", "30", "--seed", "1"], 0);
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("lcbif-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn figdata_files() {
    let dir = temp_dir("fig");
    let out = lcbif(&["figdata", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let files = read_dir_sorted(&dir);
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "figdata.gp",
            "figdata.json",
            "figdata_census.csv",
            "figdata_curves_neg.csv",
            "figdata_curves_pos.csv",
            "figdata_path_a.csv",
            "figdata_path_b.csv",
            "figdata_path_c.csv"
        ]
    );
    compare("figdata.json", &files[1].1);
    compare("figdata.gp", &files[0].1);
    let doc: serde_json::Value = serde_json::from_slice(&files[1].1).unwrap();
    for (name, bytes) in &files[2..] {
        let table = name.trim_start_matches("figdata_").trim_end_matches(".csv");
        let rows = String::from_utf8_lossy(bytes).lines().count() - 1;
        assert_eq!(doc["tables"][table]["rows"].as_u64(), Some(rows as u64), "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(lcbif(&["figdata"]).status.code(), Some(2));
}

#[test]
fn output_directory_layout() {
    let dir = temp_dir("out");
    let out = lcbif(&["-c", REGION, "census", "--out", dir.to_str().unwrap(), "--format", "both"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let files = read_dir_sorted(&dir);
    assert_eq!(files.iter().map(|f| f.0.as_str()).collect::<Vec<_>>(), ["census.json", "census_cells.csv"]);
    compare("census_region.json", &files[0].1);
    compare("census_region.csv", &files[1].1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_bytes_across_runs_and_thread_counts() {
    let cases: [&[&str]; 4] = [
        &["entropy-coeffs"],
        &["-c", EXPLICIT, "solve4d", "--format", "csv"],
        &["-c", PATH_A, "sweep", "--format", "csv"],
        &["-c", REGION, "census", "--format", "csv"],
    ];
    for args in cases {
        let a = lcbif_threads(args, "1");
        let b = lcbif_threads(args, "4");
        let c = lcbif(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
    let (d1, d2) = (temp_dir("det1"), temp_dir("det2"));
    for d in [&d1, &d2] {
        assert!(lcbif(&["figdata", "--out", d.to_str().unwrap()]).status.success());
    }
    assert_eq!(read_dir_sorted(&d1), read_dir_sorted(&d2));
    let _ = std::fs::remove_dir_all(&d1);
    let _ = std::fs::remove_dir_all(&d2);
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(lcbif(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(lcbif(&["molien", "--group", "icosahedral"]).status.code(), Some(2));
    assert_eq!(lcbif(&["classify"]).status.code(), Some(2));
    assert_eq!(lcbif(&["census"]).status.code(), Some(2));
    assert_eq!(lcbif(&["-c", "tests/configs/missing.toml", "molien"]).status.code(), Some(2));
    assert_eq!(lcbif(&["determinacy", "--poly", "1,0"]).status.code(), Some(2));
    assert_eq!(lcbif(&["--format", "both", "molien"]).status.code(), Some(2));
    let bad = lcbif(&["-c", "tests/configs/bad_both_sources.toml", "classify"]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("line 6"), "{msg}");
    let bad = lcbif(&["-c", "tests/configs/bad_syntax.toml", "classify"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 3"));
    // invariant violation: the seven-case suite does not reproduce case 7
    assert_eq!(lcbif(&["determinacy"]).status.code(), Some(1));
    // a clean run
    assert_eq!(lcbif(&["spanning"]).status.code(), Some(0));
}
