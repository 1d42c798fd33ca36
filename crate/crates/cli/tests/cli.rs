use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn agcodes(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agcodes"))
        .args(args)
        .env("AGCODES_OUT_DIR", dir)
        .current_dir(dir)
        .output()
        .expect("spawn agcodes")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = agcodes(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let s: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(schema_name: &str, text: &str) {
    let v: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    let val = schema(schema_name);
    let errors: Vec<String> = val.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:#?}");
}

fn sha(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

const KLEIN: &str = "d=4; f=x^3*y+y^3*z+x*z^3";

#[test]
fn klein_quartic_has_24_points_over_gf8() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ok(dir.path(), &["count-points", "--curve", KLEIN, "--m", "3"]), "24\n");
}

#[test]
fn count_points_reads_curve_files() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("curves.txt"), format!("# two curves\n{KLEIN}\n\nd=5; f=x^5+y^5+z^5\n")).unwrap();
    let out = ok(dir.path(), &["count-points", "--curve", "curves.txt", "--m", "4"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "degree,polynomial,q,points");
    assert_eq!(lines[2], "5,x^5+y^5+z^5,16,65");
    assert_eq!(lines.len(), 3);
}

#[test]
fn lomont1_params_and_exact_distance_agree() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let text = ok(d, &["params", "--family", "lomont1", "--q", "4", "--a", "2", "--b", "1", "--e", "0"]);
    assert_eq!(text.lines().next(), Some("n=25 k=6 d>=12"));
    let js = ok(d, &["params", "--family", "lomont1", "--q", "4", "--a", "2", "--b", "1", "--e", "0", "--json"]);
    assert_valid("params.schema.json", &js);
    let v: Value = serde_json::from_str(&js).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"]["value"].as_u64(), v["d"].as_u64()), (Some(25), Some(6), Some(12)));

    ok(d, &["build-code", "--family", "lomont1", "--q", "4", "--a", "2", "--b", "1", "--out", "G.csv"]);
    assert!(fs::read_to_string(d.join("G.csv")).unwrap().starts_with("q=4,k=6,n=25\n"));
    let md = ok(d, &["min-distance", "--gen", "G.csv", "--limit", "2^24", "--json"]);
    assert_valid("code-params.schema.json", &md);
    let v: Value = serde_json::from_str(&md).unwrap();
    assert_eq!(v["d"].as_u64(), Some(12));
    assert_eq!(v["d_exact"], Value::Bool(true));
}

#[test]
fn min_distance_is_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["build-code", "--family", "product", "--m", "2", "--a", "2", "--b", "3", "--out", "P.csv"]);
    let one = ok(d, &["--jobs", "1", "min-distance", "--gen", "P.csv"]);
    let four = ok(d, &["min-distance", "--gen", "P.csv", "--jobs", "4"]);
    assert_eq!(one, four);
    // extended RS of length 5: d = 5 - k + 1, and products multiply distances
    assert_eq!(one, "n=25 k=6 d=12\n");
}

#[test]
fn min_distance_refuses_past_the_limit() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["build-code", "--family", "ext-rs", "--q", "16", "--k", "8"]);
    let out = agcodes(d, &["min-distance", "--gen", "G.csv", "--limit", "2^20"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("work limit"));
}

const TABLE1_FIRST: &str = "0.1,81,81,0.1009,0.470973,80,81,0.100562,0.47165";
const TABLE1_LAST: &str = "0.9,242,242,0.900638,0.00301423,243,243,0.901391,0.00296749";

#[test]
fn compare_reproduces_the_rs_and_p1xp1_table() {
    let dir = TempDir::new().unwrap();
    let out = ok(dir.path(), &["compare", "--q", "256", "--aleph", "255", "--families", "rs-product,lomont1", "--csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "r,rs-product_a,rs-product_b,rs-product_rate,rs-product_delta,lomont1_a,lomont1_b,lomont1_rate,lomont1_delta"
    );
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[1], TABLE1_FIRST);
    assert_eq!(lines[9], TABLE1_LAST);
}

#[test]
fn compare_exact_and_json() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = ["compare", "--q", "256", "--aleph", "255", "--families", "goppa-product,lomont2", "--targets", "0.5"];
    let exact = ok(d, &[&args[..], &["--csv", "--exact"]].concat());
    let row: Vec<&str> = exact.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1..3], ["181", "179"]);
    // rate k/n = 181*179 / (255*254), reduced
    assert_eq!(row[5], "32399/64770");
    let js = ok(d, &[&args[..], &["--json"]].concat());
    assert_valid("compare.schema.json", &js);
}

#[test]
fn compare_needs_aleph_for_elliptic_families() {
    let dir = TempDir::new().unwrap();
    let out = agcodes(dir.path(), &["compare", "--q", "16", "--families", "lomont2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--aleph"));
}

#[test]
fn json_outputs_match_their_schemas() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let report = ok(d, &["analyze-curve", "--curve", "d=5; f=x^5+y^5+z^5", "--m", "4"]);
    assert_valid("curve-report.schema.json", &report);
    let g128 = "x^6+x^5*y+x^4*y^2+x^3*y^3+x^2*y^4+x^5*z+x^4*y*z+y^4*z^2+x^3*z^3+y^3*z^3";
    let singular = ok(d, &["analyze-curve", "--curve", g128, "--m", "7", "--no-irreducibility"]);
    assert_valid("curve-report.schema.json", &singular);
    let v: Value = serde_json::from_str(&singular).unwrap();
    assert!(!v["singularities"].as_array().unwrap().is_empty());

    let opt = ok(d, &["optimal-rate", "--q", "256", "--aleph", "255", "--delta", "0.05", "--json"]);
    assert_valid("optimal-rate.schema.json", &opt);
    let v: Value = serde_json::from_str(&opt).unwrap();
    assert_eq!(v["err_negative_exact"], Value::Bool(true));
    assert_eq!(v["lomont2"]["best_integer"], serde_json::json!([198, 199]));

    let blow =
        ok(d, &["blowup-check", "--q", "4", "--h", "6", "--t", "36,36", "--H0L0", "1", "--s0L0C0", "10", "--n0", "25"]);
    assert!(blow.contains("first_failure="));
    let args = "blowup-check --q 4 --h 6 --t 36 --H0L0 1 --s0L0C0 10 --n0 25 --steps 12 --json";
    let blow = ok(d, &args.split(' ').collect::<Vec<_>>());
    assert_valid("blowup-check.schema.json", &blow);
    let v: Value = serde_json::from_str(&blow).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 13);

    for fam in [
        &["--family", "ruled", "--q", "4", "--g", "1", "--aleph", "5", "--e", "-1", "--a", "1", "--b", "2"][..],
        &["--family", "decomposable", "--q", "4", "--g", "1", "--aleph", "5", "--e", "1", "--a", "1", "--b", "1"],
        &["--family", "goppa", "--aleph", "20", "--k2", "5"],
        &["--family", "lomont2", "--q", "4", "--aleph", "5", "--a", "2", "--b", "3"],
    ] {
        let js = ok(d, &[&["params"][..], fam, &["--json"]].concat());
        assert_valid("params.schema.json", &js);
    }
}

#[test]
fn every_run_writes_a_manifest_with_output_digests() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let stdout = ok(d, &["field-table", "--m", "3"]);
    assert_eq!(stdout, "m,q,reduction\n3,8,x^3+x+1\n");
    ok(d, &["compare", "--q", "64", "--families", "rs-product", "--out", "tables/cmp.csv"]);
    let text = fs::read_to_string(d.join("compare.manifest.json")).unwrap();
    assert_valid("run-manifest.schema.json", &text);
    let m: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(m["subcommand"], "compare");
    assert_eq!(m["reduction_polynomials"][0]["polynomial"], "x^6+x+1");
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let bytes = fs::read(d.join("tables/cmp.csv")).unwrap();
    assert_eq!(outputs[0]["sha256"].as_str().unwrap(), sha(&bytes));
    assert_eq!(m["stdout_sha256"].as_str().unwrap(), sha(b""));

    let ft: Value = serde_json::from_str(&fs::read_to_string(d.join("field-table.manifest.json")).unwrap()).unwrap();
    assert_eq!(ft["stdout_sha256"].as_str().unwrap(), sha(stdout.as_bytes()));
}

#[test]
fn field_table_limits_the_product_table() {
    let dir = TempDir::new().unwrap();
    let out = ok(dir.path(), &["field-table", "--m", "2", "--table"]);
    assert!(out.ends_with("*,0,1,2,3\n0,0,0,0,0\n1,0,1,2,3\n2,0,2,3,1\n3,0,3,1,2\n"));
    assert!(!agcodes(dir.path(), &["field-table", "--m", "5", "--table"]).status.success());
}

fn search_outputs(dir: &Path, extra: &[&str]) -> (Vec<u8>, Vec<u8>) {
    let args = [&["search", "--degree", "4", "--fields", "3,4", "--out", "r.csv", "--tally", "t.csv"][..], extra];
    ok(dir, &args.concat());
    (fs::read(dir.join("r.csv")).unwrap(), fs::read(dir.join("t.csv")).unwrap())
}

#[test]
fn search_is_deterministic_and_resumable() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    let fresh = search_outputs(a.path(), &["--jobs", "1"]);
    assert_eq!(fresh, search_outputs(b.path(), &["--jobs", "3"]));

    let partial = ok(
        c.path(),
        &["search", "--degree", "4", "--fields", "3,4", "--out", "r.csv", "--resume", "ck.bin", "--max-reps", "50"],
    );
    assert!(partial.contains("complete=false"));
    assert_eq!(fresh, search_outputs(c.path(), &["--resume", "ck.bin"]));

    let tally = ok(a.path(), &["tally", "--results", "r.csv"]);
    assert_eq!(tally.as_bytes(), &fresh.1[..]);
    let js = ok(a.path(), &["tally", "--results", "r.csv", "--json"]);
    assert_valid("tally.schema.json", &js);

    let header = String::from_utf8(fresh.0).unwrap();
    assert!(header.starts_with(
        "degree,polynomial,q,plane_points,smooth_points,n_sing,bonus,bonus_exact,genus_lo,genus_hi,abs_irred\n"
    ));
    // the Klein quartic's orbit gives the 24-point genus-3 entry over GF(8)
    assert!(String::from_utf8(fresh.1).unwrap().lines().any(|l| l.starts_with("8,3,3,24,")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let runs: [&[&str]; 4] = [
        &["compare", "--q", "32", "--aleph", "40", "--out", "c.csv", "--exact"],
        &["analyze-curve", "--curve", KLEIN, "--m", "5", "--out", "k.json"],
        &["bounds", "--q", "64", "--csv"],
        &["optimal-rate", "--q", "64", "--aleph", "70", "--delta", "0.2", "--json"],
    ];
    for args in runs {
        assert_eq!(ok(a.path(), args), ok(b.path(), args), "{args:?}");
    }
    for f in ["c.csv", "k.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_input_is_reported() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let out = agcodes(d, &["count-points", "--curve", KLEIN, "--m", "3", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let out = agcodes(d, &["count-points", "--curve", "d=4; f=x^3*w", "--m", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing curve"));

    let out = agcodes(
        d,
        &["params", "--family", "ruled", "--q", "4", "--g", "1", "--aleph", "5", "--e", "-2", "--a", "1", "--b", "1"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized"));

    let out = agcodes(d, &["count-points", "--curve", KLEIN, "--m", "12"]);
    assert_eq!(out.status.code(), Some(1));
}
