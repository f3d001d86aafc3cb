use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const E2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/e2.json");

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bimoment<P: AsRef<std::ffi::OsStr>>(args: &[P]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_bimoment"))
        .args(args)
        .output()
        .unwrap();
    Out {
        code: o.status.code().unwrap(),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gumbel_bound_prints_exact_and_decimal() {
    let o = bimoment(&[
        "bound", "--in", E2, "--family", "gumbel", "--u", "1", "--v", "1", "--k", "1", "--l", "1",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout, "5/3 (≈1.6667) [upper]\n");
}

#[test]
fn clamp_reports_the_raw_value() {
    let args = [
        "bound", "--in", E2, "--family", "gumbel", "--u", "1", "--v", "1", "--k", "1", "--l", "1",
        "--clamp",
    ];
    assert_eq!(
        bimoment(&args).stdout,
        "1 (≈1.0000) [upper] (clamped from 5/3)\n"
    );
    let args = [
        "bound",
        "--in",
        E2,
        "--family",
        "frechet_type",
        "--u",
        "2",
        "--v",
        "2",
        "--k",
        "1",
        "--l",
        "1",
        "--json",
    ];
    let doc: Value = serde_json::from_str(&bimoment(&args).stdout).unwrap();
    assert_eq!(doc["value"], "-4/3");
    assert_eq!(doc["direction"], "lower");
    assert_eq!(doc["params"]["s"], 2);
    assert_eq!(doc["clamped"], false);
}

#[test]
fn bound_flags_are_checked() {
    let base = ["bound", "--in", E2, "--u", "1", "--v", "1"];
    let with = |extra: &[&str]| bimoment(&[&base[..], extra].concat());
    let o = with(&["--family", "c3", "--a", "0", "--b", "1"]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr
            .contains("chen_seneta requires positive integers a, b"),
        "{}",
        o.stderr
    );
    let o = with(&["--family", "gumbel", "--k", "1"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("--l is required"), "{}", o.stderr);
    let o = with(&["--family", "c1", "--k", "1"]);
    assert!(o.stderr.contains("--k does not apply"), "{}", o.stderr);
    let o = with(&["--family", "chung", "--s", "2", "--k", "2", "--l", "2"]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr.contains("conflicts with the target"),
        "{}",
        o.stderr
    );
    assert_eq!(with(&["--family", "c6"]).stdout, "2/3 (≈0.6667) [upper]\n");
    assert_eq!(
        with(&["--family", "bonferroni_lower", "--k", "0"]).stdout,
        "1/3 (≈0.3333) [lower]\n"
    );
}

#[test]
fn invert_then_moments_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let moments = bimoment(&["moments", "--in", E2, "--json"]);
    assert_eq!(moments.code, 0);
    let mom_path = write(&dir, "m.json", &moments.stdout);
    let pmf = bimoment(&["invert", "--in", s(&mom_path), "--to", "pmf"]);
    assert_eq!(pmf.code, 0, "{}", pmf.stderr);
    let pmf_path = write(&dir, "p.json", &pmf.stdout);
    assert_eq!(
        bimoment(&["moments", "--in", s(&pmf_path), "--json"]).stdout,
        moments.stdout
    );

    let tails = bimoment(&["invert", "--in", s(&mom_path), "--to", "tails"]);
    let doc: Value = serde_json::from_str(&tails.stdout).unwrap();
    assert_eq!(doc["q"][1][1], "2/3");
    assert_eq!(doc["q"][2][1], "1/3");
}

#[test]
fn invert_rejects_truncated_or_impossible_moments() {
    let dir = TempDir::new().unwrap();
    let truncated = write(
        &dir,
        "t.json",
        r#"{"m":2,"n":2,"s":[["1","1"],["1","5/3"]]}"#,
    );
    let o = bimoment(&["invert", "--in", s(&truncated), "--to", "pmf"]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr.contains("inversion needs every moment"),
        "{}",
        o.stderr
    );
    let fake = write(
        &dir,
        "f.json",
        r#"{"m":2,"n":2,"s":[["1","1","1/3"],["1","1","1"],["1/3","1","0"]]}"#,
    );
    let o = bimoment(&["invert", "--in", s(&fake), "--to", "pmf"]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr.contains("do not come from a distribution"),
        "{}",
        o.stderr
    );
}

#[test]
fn event_csv_reports_gumbel_check() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "ev.csv", "weight,A1,A2,B1,B2\n1/3,0,0,0,0\n1/3,1,0,0,1\n0.3333333333333333333333333333333333333333,1,1,1,1\n");
    let o = bimoment(&["moments", "--in", s(&csv)]);
    assert_eq!(o.code, 1, "inexact decimal weights must not sum to one");
    assert!(o.stderr.contains("weights must sum to 1"), "{}", o.stderr);

    let csv = write(
        &dir,
        "ev.csv",
        "weight,A1,A2,B1,B2\n1/3,0,0,0,0\n1/3,1,0,0,1\n1/3,1,1,1,1\n",
    );
    let o = bimoment(&["moments", "--in", s(&csv)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(
        o.stdout
            .contains("Gumbel identity check: sums equal binomial moments of the counting law: ok"),
        "{}",
        o.stdout
    );
    let o = bimoment(&["moments", "--in", s(&csv), "--json"]);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc["s"][1][1], "5/3");
    let o = bimoment(&[
        "moments",
        "--in",
        s(&csv),
        "--kmax",
        "1",
        "--lmax",
        "1",
        "--json",
    ]);
    assert_eq!(
        o.stdout,
        "{\"m\":2,\"n\":2,\"s\":[[\"1\",\"1\"],[\"1\",\"5/3\"]]}\n"
    );
}

#[test]
fn csv_diagnostics_name_line_and_constraint() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "bad.csv", "weight,A1,B1\n1/2,0,1\n1/2,2,0\n");
    let o = bimoment(&["moments", "--in", s(&csv)]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr
            .contains("bad.csv: line 3: column A1: indicator must be 0 or 1"),
        "{}",
        o.stderr
    );
    let csv = write(&dir, "hdr.csv", "weight,B1,A1\n1,0,1\n");
    let o = bimoment(&["moments", "--in", s(&csv)]);
    assert!(
        o.stderr
            .contains("line 1: header must be weight,A1..Am,B1..Bn"),
        "{}",
        o.stderr
    );
}

#[test]
fn pmf_diagnostics_name_entry_and_constraint() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "p.json",
        r#"{"m":1,"n":1,"p":[["1/2","x"],["0","1/2"]]}"#,
    );
    let o = bimoment(&["moments", "--in", s(&bad)]);
    assert_eq!(o.code, 1);
    assert!(
        o.stderr.contains("p.json: p[0][1]: cannot parse \"x\""),
        "{}",
        o.stderr
    );
    let short = write(&dir, "q.json", r#"{"m":1,"n":1,"p":[["1","0"]]}"#);
    assert!(bimoment(&["moments", "--in", s(&short)])
        .stderr
        .contains("p must have m+1 = 2 rows"));
    let heavy = write(
        &dir,
        "r.json",
        r#"{"m":1,"n":1,"p":[["0.5","0.25"],["0.5","0"]]}"#,
    );
    let o = bimoment(&["moments", "--in", s(&heavy)]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("r.json"), "{}", o.stderr);
    let broken = write(&dir, "s.json", "{\"m\":1,\n\"n\":1,\n\"p\": [}");
    let o = bimoment(&["moments", "--in", s(&broken)]);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    let decimals = write(
        &dir,
        "d.json",
        r#"{"m":1,"n":1,"p":[["0.5","0.25"],["0.125",0.125]]}"#,
    );
    assert_eq!(
        bimoment(&["moments", "--in", s(&decimals), "--json"]).code,
        0
    );
}

#[test]
fn sweep_flags_shape_violations_with_exit_two() {
    let o = bimoment(&[
        "sweep", "--in", E2, "--family", "gumbel", "--u", "1", "--v", "1",
    ]);
    assert_eq!(o.code, 0);
    assert!(o
        .stdout
        .contains("shape: nonincreasing and convex in k and l: ok"));
    let dir = TempDir::new().unwrap();
    let fake = write(
        &dir,
        "f.json",
        r#"{"m":2,"n":2,"s":[["1","1","1/3"],["1","1","1"],["1/3","1","0"]]}"#,
    );
    let o = bimoment(&[
        "sweep",
        "--in",
        s(&fake),
        "--family",
        "frechet",
        "--u",
        "1",
        "--v",
        "1",
    ]);
    assert_eq!(o.code, 2, "{}", o.stdout);
    assert!(
        o.stdout
            .contains("violation: nondecreasing in l at (k,l)=(1,1)"),
        "{}",
        o.stdout
    );
    let o = bimoment(&[
        "sweep",
        "--in",
        s(&fake),
        "--family",
        "frechet",
        "--u",
        "1",
        "--v",
        "1",
        "--json",
    ]);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(!doc["violations"].as_array().unwrap().is_empty());
}

#[test]
fn compare_notes_omitted_bounds() {
    let dir = TempDir::new().unwrap();
    let thin = write(
        &dir,
        "thin.json",
        r#"{"m":1,"n":2,"p":[["1/4","1/4","0"],["0","1/4","1/4"]]}"#,
    );
    let o = bimoment(&["compare", "--in", s(&thin), "--u", "1", "--v", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(
        o.stdout
            .contains("omitted: c1, c3, c6: require m >= 2 and n >= 2 (m=1, n=2)"),
        "{}",
        o.stdout
    );
    assert!(o.stdout.contains("exact: 1/2 (≈0.5000)"), "{}", o.stdout);
    let o = bimoment(&["compare", "--in", E2, "--u", "2", "--v", "1"]);
    assert!(
        o.stdout.contains("bound undefined for these parameters"),
        "{}",
        o.stdout
    );
    assert!(o.stdout.contains("exact: 1/3"), "{}", o.stdout);
    assert_eq!(
        bimoment(&["compare", "--in", E2, "--u", "3", "--v", "1"]).code,
        1
    );
}

#[test]
fn validate_is_reproducible_and_gated() {
    let args = [
        "validate", "--trials", "12", "--seed", "7", "--mmax", "3", "--nmax", "3", "--json",
    ];
    let a = bimoment(&args);
    let b = bimoment(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    let o = bimoment(&["validate", "--trials", "0"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("failures: 0"));
    assert_eq!(bimoment(&["validate", "--mmax", "0"]).code, 1);
}
