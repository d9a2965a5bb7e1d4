use std::path::Path;
use std::process::{Command, Output};

use qhom_cli::output::{rows_from_json, rows_json};
use qhom_core::verify::VerificationReport;

fn qhom(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhom"))
        .args(args)
        .env("QHOM_CACHE", cache)
        .output()
        .expect("qhom runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(cache: &Path, args: &[&str]) -> String {
    let out = qhom(cache, args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn homology_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    assert_eq!(ok(c, &["homology", "dihedral:3", "--theory", "rack", "--n", "3"]), "Z + Z_3\n");
    assert_eq!(ok(c, &["homology", "dihedral:3", "--theory", "quandle", "--n", "2"]), "0\n");
    assert_eq!(ok(c, &["homology", "trivial:1", "--theory", "rack", "--n", "4"]), "Z\n");
    assert_eq!(
        ok(c, &["homology", "dihedral:3", "--theory", "quandle", "--n", "1..4"]),
        "H_1 = Z\nH_2 = 0\nH_3 = Z_3\nH_4 = Z_3\n"
    );
}

#[test]
fn rack_files_and_alexander_specs() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("r3.txt");
    std::fs::write(&table, "3\n0 2 1\n2 1 0\n1 0 2\n").unwrap();
    let spec = format!("file:{}", table.display());
    let c = dir.path().join("cache");
    assert_eq!(ok(&c, &["homology", &spec, "--theory", "rack", "--n", "3"]), "Z + Z_3\n");
    // Z_3 with t = -1 is the dihedral quandle
    assert_eq!(ok(&c, &["homology", "alexander:3:2", "--theory", "rack", "--n", "3"]), "Z + Z_3\n");
    let bad = qhom(&c, &["homology", "dihedral:x", "--n", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["--format", "json", "homology", "dihedral:5", "--theory", "rack", "--n", "1..3"]);
    let rows = rows_from_json(&text).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2].free_rank, 1);
    assert_eq!(rows[2].torsion, vec![5.into()]);
    assert_eq!(rows_json(&rows).unwrap(), text);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = value[0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec!["rack", "theory", "n", "free_rank", "torsion", "time_ms"];
    want.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, want);
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["--format", "csv", "homology", "dihedral:3", "--theory", "q", "--n", "3"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rack,theory,n,free_rank,torsion,time_ms"));
    assert!(lines.next().unwrap().starts_with("dihedral:3,quandle,3,0,3,"));
}

#[test]
fn cache_is_written_and_consulted() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("cache");
    ok(&c, &["homology", "dihedral:3", "--theory", "rack", "--n", "3"]);
    let files: Vec<_> = std::fs::read_dir(&c).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(text.contains("free_rank 1\ntorsion 3\n"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("generator +1*(")), "{text}");
    // a doctored entry is served back, so the cache really is read
    std::fs::write(&files[0], text.replace("torsion 3", "torsion 3 9")).unwrap();
    assert_eq!(ok(&c, &["homology", "dihedral:3", "--theory", "rack", "--n", "3"]), "Z + Z_3 + Z_9\n");
    assert!(ok(&c, &["cache", "list"]).contains("rack n=3 m=0: Z + Z_3 + Z_9"));
    assert_eq!(ok(&c, &["cache", "path"]), format!("{}\n", c.display()));
    let flag = dir.path().join("flagged");
    ok(&c, &["--cache-dir", flag.to_str().unwrap(), "homology", "dihedral:3", "--n", "2"]);
    assert_eq!(std::fs::read_dir(&flag).unwrap().count(), 1);
    assert_eq!(ok(&c, &["cache", "clear"]), format!("removed 1 entries from {}\n", c.display()));
    assert_eq!(ok(&c, &["homology", "dihedral:3", "--theory", "rack", "--n", "3"]), "Z + Z_3\n");
}

fn strip_times(mut reports: Vec<VerificationReport>) -> Vec<VerificationReport> {
    for r in &mut reports {
        r.time_ms = 0;
    }
    reports
}

#[test]
fn verify_is_reproducible_with_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let cold = ok(c, &["--format", "json", "verify", "frs"]);
    let warm = ok(c, &["--format", "json", "verify", "frs"]);
    let cold: Vec<VerificationReport> = serde_json::from_str(&cold).unwrap();
    let warm: Vec<VerificationReport> = serde_json::from_str(&warm).unwrap();
    assert!(!cold.is_empty());
    assert_eq!(strip_times(cold.clone()), strip_times(warm));
    let again = serde_json::to_string_pretty(&cold).unwrap();
    assert_eq!(serde_json::from_str::<Vec<VerificationReport>>(&again).unwrap(), cold);
    assert!(std::fs::read_dir(c).unwrap().count() > 0);
}

#[test]
fn verify_fibonacci_and_appendix2() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let text = ok(c, &["verify", "fibonacci", "--k", "3", "--n-max", "6"]);
    assert!(text.contains("6 checks: 6 match, 0 finding, 0 mismatch"), "{text}");
    let text = ok(c, &["--format", "json", "verify", "fibonacci", "--k", "11", "--n-max", "3"]);
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.verdict.to_string() == "finding"));
    let text = ok(c, &["verify", "appendix2", "--k", "3", "--a", "0", "--n", "3"]);
    assert!(text.contains("1 checks: 1 match"), "{text}");
    assert_eq!(qhom(c, &["verify", "fibonacci", "--k", "4", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(qhom(c, &["verify", "appendix2", "--k", "3", "--a", "7", "--n", "3"]).status.code(), Some(2));
    assert_eq!(qhom(c, &["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn mismatch_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = qhom(dir.path(), &["verify", "sec5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("mismatch"), "{text}");
    assert!(text.contains("sec5/R3/quandle/n4/contains-Zp"), "{text}");
}

#[test]
fn cocycle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    // (1-0)(2*3^5 - 1 - 5^5)/5 = (486 - 1 - 3125)/5 = -528 = 2 mod 5
    assert_eq!(ok(c, &["cocycle", "theta", "--p", "5", "--eval", "(0,1,3)"]), "2\n");
    assert_eq!(ok(c, &["cocycle", "theta", "--p", "5", "--eval", "+1*(0,1,3) -1*(0,1,3)"]), "0\n");
    let text = ok(c, &["cocycle", "check", "--p", "7"]);
    assert!(text.starts_with("δθ = 0 on all 1512 generators"), "{text}");
    let json = ok(c, &["--format", "json", "cocycle", "check", "--p", "3"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["cocycle"], true);
    assert_eq!(qhom(c, &["cocycle", "check", "--p", "9"]).status.code(), Some(2));
}

#[test]
fn operations_and_induced_maps() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    assert_eq!(
        ok(c, &["operation", "dihedral:3", "--map", "hprime:0", "--chain", "+1*(0,1)"]),
        "+1*(0,1,0) +1*(0,2,0)\n"
    );
    let text = ok(c, &["operation", "dihedral:5", "--map", "g1:1", "--check", "3"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.contains(": chain map")), "{text}");
    let text = ok(c, &["induced", "dihedral:3", "--map", "hs:1", "--theory", "quandle", "--n", "3"]);
    assert!(text.starts_with("hs:1: H_3 = Z_3 -> H_5 = Z_3\n"), "{text}");
    assert!(text.ends_with("kernel 0, cokernel 0\n"), "{text}");
    let json = ok(c, &["--format", "json", "induced", "dihedral:3", "--map", "sym", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["matrix"], serde_json::json!([[3]]));
    assert_eq!(qhom(c, &["induced", "dihedral:3", "--map", "nosuch", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn cohomology_by_universal_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    assert_eq!(
        ok(c, &["cohomology", "dihedral:3", "--theory", "rack", "--n", "3..4"]),
        "H^3 = Z\nH^4 = Z + Z_3\n"
    );
    assert_eq!(ok(c, &["cohomology", "dihedral:3", "--theory", "quandle", "--n", "3", "--p", "3"]), "Z_3\n");
}

#[test]
fn boundary_dump() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["homology", "dihedral:3", "--n", "2", "--dump"]);
    let m: qhom_core::SparseIntMatrix = text.parse().unwrap();
    assert_eq!((m.rows(), m.cols()), (3, 9));
    assert_eq!(m.to_string(), text);
    let triples: Vec<(usize, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<usize> = l.split(' ').take(2).map(|x| x.parse().unwrap()).collect();
            (f[1], f[0])
        })
        .collect();
    let mut sorted = triples.clone();
    sorted.sort();
    assert_eq!(triples, sorted);
}
