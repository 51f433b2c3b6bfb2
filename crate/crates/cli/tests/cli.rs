//! End-to-end runs of every subcommand through the library entry point,
//! pinning the exit-code contract and the report shapes.

use std::path::PathBuf;

use fusion_obstructions::pentagon::{group_to_json, matrix_to_json, swap_factors, GroupTable};
use fusion_obstructions::{ring_to_json_string, FusionRing};

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["fusionob"];
    argv.extend_from_slice(args);
    let code = fusionob::run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn fibonacci_json() -> String {
    ring_to_json_string(&FusionRing::rank2(1, 1))
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let good = write_temp(&dir, "fib.json", &fibonacci_json());
    let (code, out) = run(&["validate", "--input", good.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"valid\": true"));

    let bad = write_temp(
        &dir,
        "neg.json",
        r#"{"names":["e","x"],"identity":null,"table":{"x,x":{"e":-1}}}"#,
    );
    let (code, out) = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("negative entry"));

    let broken = write_temp(&dir, "broken.json", "{not json");
    let (code, _) = run(&["validate", "--input", broken.to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _) = run(&[
        "validate",
        "--input",
        good.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn validate_reports_identity_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "badid.json",
        r#"{"names":["e","x"],"identity":"e","table":{"e,e":{"e":1},"e,x":{"x":1},"x,e":{"x":2},"x,x":{"e":1}}}"#,
    );
    let (code, out) = run(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("identity axiom"), "{out}");
}

#[test]
fn obstruction_trivial_and_nontrivial() {
    let dir = tempfile::tempdir().unwrap();

    let z2 = write_temp(
        &dir,
        "z2.json",
        &ring_to_json_string(&FusionRing::group_ring(&[vec![0, 1], vec![1, 0]]).unwrap()),
    );
    let (code, out) = run(&[
        "obstruction",
        "--input",
        z2.to_str().unwrap(),
        "--verify-oracle",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"alpha_trivial\": true"));
    assert!(out.contains("\"oracle_checked\": true"));
    assert!(out.contains("\"cocycle_checked\": true"));

    let sq2 = write_temp(
        &dir,
        "sq2.json",
        &ring_to_json_string(&FusionRing::rank2(0, 2)),
    );
    let (code, out) = run(&["obstruction", "--input", sq2.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("\"alpha_trivial\": false"));
    assert!(out.contains("\"witness\": null"));
    // the nontrivial entry itself is visible in the report
    assert!(out.contains("\"x,x,x,x\""));
}

#[test]
fn obstruction_rank4_hits_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = GroupTable::cyclic(4).fusion_ring();
    let path = write_temp(&dir, "z4.json", &ring_to_json_string(&z4));
    let (code, _) = run(&["obstruction", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 4);
}

#[test]
fn obstruction_normalizes_identity_position() {
    // same ring with the identity listed second; the loader moves it to front
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "swapped.json",
        r#"{"identity":"e","names":["x","e"],"table":{"e,e":{"e":1},"e,x":{"x":1},"x,e":{"x":1},"x,x":{"e":2}}}"#,
    );
    let (code, out) = run(&["obstruction", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("\"names\": ["));
    let names_pos = out.find("\"names\"").unwrap();
    let e_pos = out[names_pos..].find("\"e\"").unwrap();
    let x_pos = out[names_pos..].find("\"x\"").unwrap();
    assert!(
        e_pos < x_pos,
        "identity should be listed first after normalization"
    );
}

#[test]
fn classify_grid_agrees_and_is_deterministic() {
    let (code, out) = run(&["classify-rank2", "--m-max", "6", "--n-max", "6"]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "m,n,alpha_x,alpha_e,congruence_verdict,generic_solver_verdict,agree"
    );
    assert_eq!(lines.len(), 1 + 49);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    assert!(out.contains("2,1,0,1,nontrivial,nontrivial,true"));
    assert!(out.contains("1,1,1,0,trivial,trivial,true"));
    assert!(out.contains("0,2,0,1,nontrivial,nontrivial,true"));

    let (code_par, out_par) = run(&[
        "classify-rank2",
        "--m-max",
        "6",
        "--n-max",
        "6",
        "--jobs",
        "4",
    ]);
    assert_eq!(code_par, 0);
    assert_eq!(
        out, out_par,
        "reports must be byte-identical across parallelism settings"
    );
}

#[test]
fn classify_json_format_and_bounds() {
    let (code, out) = run(&[
        "classify-rank2",
        "--m-max",
        "1",
        "--n-max",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert_eq!(rows[0]["agree"], true);

    let (code, _) = run(&["classify-rank2", "--m-max", "17"]);
    assert_eq!(code, 4);
}

#[test]
fn enumerate_streams_and_counts() {
    let (code, out) = run(&["enumerate", "--rank", "2", "--max-entry", "2", "--identity"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 9);
    for line in &lines {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["valid"], true);
        assert_eq!(row["identity"], "e");
        assert!(row["alpha_trivial"].is_boolean());
    }

    let (code, out) = run(&["enumerate", "--rank", "1", "--max-entry", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    for line in lines {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["alpha_trivial"], true);
    }

    let (code, out) = run(&[
        "enumerate",
        "--rank",
        "2",
        "--max-entry",
        "1",
        "--identity",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,rank,identity,valid,alpha_trivial,table");
    assert_eq!(lines.len(), 1 + 4);
    assert!(lines[1].starts_with("0,2,e,true,"));

    let (code, _) = run(&["enumerate", "--rank", "5", "--max-entry", "1"]);
    assert_eq!(code, 4);
}

#[test]
fn enumerate_rank3_counts_and_parallel_determinism() {
    let (code, out) = run(&["enumerate", "--rank", "3", "--max-entry", "1", "--identity"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 46);

    let (code_par, out_par) = run(&[
        "enumerate",
        "--rank",
        "3",
        "--max-entry",
        "1",
        "--identity",
        "--jobs",
        "3",
    ]);
    assert_eq!(code_par, 0);
    assert_eq!(out, out_par);
}

#[test]
fn hochschild_reports() {
    let dir = tempfile::tempdir().unwrap();
    let fib = write_temp(&dir, "fib.json", &fibonacci_json());
    let (code, out) = run(&["hochschild", "--input", fib.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["degree"], 4);
    assert_eq!(report["dim"], 0);
    assert_eq!(report["alpha_trivial"], true);
    assert!(report["witness"].is_object());

    let sq2 = write_temp(
        &dir,
        "sq2.json",
        &ring_to_json_string(&FusionRing::rank2(0, 2)),
    );
    let (code, out) = run(&["hochschild", "--input", sq2.to_str().unwrap()]);
    assert_eq!(code, 3);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["dim"], 2);
    assert_eq!(report["alpha_trivial"], false);

    let (code, _) = run(&[
        "hochschild",
        "--input",
        fib.to_str().unwrap(),
        "--degree",
        "6",
    ]);
    assert_eq!(code, 4);
}

#[test]
fn pentagon_group_matrix_and_ne_case() {
    let dir = tempfile::tempdir().unwrap();

    let z3 = write_temp(
        &dir,
        "z3.json",
        &serde_json::to_string(&group_to_json(&GroupTable::cyclic(3))).unwrap(),
    );
    let (code, out) = run(&["pentagon", "--input", z3.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"pentagon_holds\": true"));
    assert!(out.contains("\"source\": \"group\""));

    let swap = write_temp(
        &dir,
        "swap.json",
        &serde_json::to_string(&matrix_to_json(&swap_factors(2))).unwrap(),
    );
    let (code, out) = run(&["pentagon", "--input", swap.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("\"pentagon_holds\": false"));

    let (code, out) = run(&["pentagon", "--ne-case", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"solvable\": true"));

    let (code, out) = run(&["pentagon", "--ne-case", "2"]);
    assert_eq!(code, 3);
    assert!(out.contains("\"solvable\": false"));

    // a 3x3 operator has no tensor-square side
    let odd = write_temp(
        &dir,
        "odd.json",
        r#"[["1","0","0"],["0","1","0"],["0","0","1"]]"#,
    );
    let (code, _) = run(&["pentagon", "--input", odd.to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _) = run(&["pentagon"]);
    assert_eq!(code, 2);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let fib = write_temp(&dir, "fib.json", &fibonacci_json());
    let report_path = dir.path().join("report.json");
    let (code, out) = run(&[
        "validate",
        "--input",
        fib.to_str().unwrap(),
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(report_path).unwrap();
    assert!(written.contains("\"valid\": true"));
}
