use std::process::Command;

use pairlab::cli::run;

fn pairlab(args: &[&str]) -> pairlab::cli::Outcome {
    run(std::iter::once("pairlab").chain(args.iter().copied()))
}

#[test]
fn scan_lists_the_toy_record() {
    let out = pairlab(&["scan", "--q", "5", "--kmax", "2"]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .lines()
        .any(|l| l == r#"{"q":5,"a":0,"b":1,"n":6,"r":3,"k":2,"d":8}"#));
    for line in out.stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["k"].as_u64().unwrap() <= 2);
    }
}

#[test]
fn scan_csv_has_header() {
    let out = pairlab(&["--format", "csv", "scan", "--q", "5", "--kmax", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("q,a,b,n,r,k,d"));
    assert!(out.stdout.contains("\n5,0,1,6,3,2,8\n"));
}

#[test]
fn empty_q_list_is_empty_output() {
    let out = pairlab(&["scan", "--q"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pairlab(&["scan", "--q", "4"]).code, 2);
    assert_eq!(pairlab(&["scan", "--q", "3"]).code, 2);
    assert_eq!(pairlab(&["dh-demo", "--curve", "5,0"]).code, 2);
    assert_eq!(pairlab(&["dh-demo", "--curve", "toy"]).code, 2);
    assert_eq!(pairlab(&["frobnicate"]).code, 2);
    assert_eq!(
        pairlab(&["--cap", "100", "dweight", "--q", "5", "--k", "3"]).code,
        2
    );
}

#[test]
fn degenerate_curve_is_a_usage_error() {
    let out = pairlab(&["dh-demo", "--curve", "5,4,2", "--a", "1", "--b", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("r^3"));
}

#[test]
fn dweight_table_for_q2_k3() {
    let out = pairlab(&["dweight", "--q", "2", "--k", "3"]);
    assert_eq!(out.code, 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let weights: Vec<&str> = rows.iter().map(|r| &r[1]).collect();
    assert_eq!(weights, ["0", "1", "1", "1", "1", "1", "1"]);
    assert_eq!((&rows[3][2], &rows[3][3]), ("0 0 0", "0 0 1"));
}

#[test]
fn dweight_single_residue_json() {
    let out = pairlab(&[
        "--format", "json", "dweight", "--q", "3", "--k", "2", "--a", "4",
    ]);
    let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    assert_eq!(v["D"], 2);
}

#[test]
fn dh_demo_on_the_toy_curve() {
    let out = pairlab(&["dh-demo", "--curve", "toy", "--a", "2", "--b", "1"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["answer"], v["ground_truth"]);

    let sweep = pairlab(&["dh-demo", "--curve", "toy", "--sweep"]);
    assert_eq!(sweep.code, 0);
    assert_eq!(sweep.stdout.lines().count(), 9);
}

#[test]
fn dh_demo_random_depends_on_seed_only() {
    let a = pairlab(&["--seed", "3", "dh-demo", "--curve", "13,0,4", "--random"]);
    let b = pairlab(&["dh-demo", "--curve", "13,0,4", "--random", "--seed", "3"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, b);
}

#[test]
fn verify_descent_on_the_toy_curve() {
    let out = pairlab(&[
        "verify", "descent", "--curve", "toy", "--f", "x", "--d", "8",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    assert_eq!(v["claimed_bound"], 8);
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn verify_descent_with_extension_coefficients() {
    let out = pairlab(&[
        "--seed",
        "1",
        "verify",
        "descent",
        "--curve",
        "13,0,4",
        "--f",
        "line2",
        "--samples",
        "10",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 10);
}

#[test]
fn verify_lemma_and_bounds() {
    let lemma = pairlab(&["verify", "lemma", "--q", "3", "--k", "2"]);
    assert_eq!(lemma.code, 0);
    let v: serde_json::Value = serde_json::from_str(lemma.stdout.trim()).unwrap();
    assert!(v["ratio_two_count"].as_u64().unwrap() > 0);

    let bounds = pairlab(&["verify", "bounds", "--q", "5,7", "--kmax", "3"]);
    assert_eq!(bounds.code, 0);
    assert!(bounds
        .stdout
        .starts_with("q,a,b,r,k,d,deg_f,D_d,c,d1,D_d1,"));
    assert!(bounds
        .stdout
        .contains("\n5,0,1,3,2,8,3,4,1,2,2,24,12,6,true,true,true\n"));
    assert!(bounds.stderr.contains("violations: 0"));
}

#[test]
fn binary_honours_env_cap_and_output_file() {
    let bin = env!("CARGO_BIN_EXE_pairlab");
    let status = Command::new(bin)
        .args(["dweight", "--q", "5", "--k", "3"])
        .env("PAIRLAB_CAP", "100")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));

    let path = std::env::temp_dir().join(format!("pairlab-cli-{}.jsonl", std::process::id()));
    let out = Command::new(bin)
        .args(["scan", "--q", "5", "--kmax", "2", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("{\"q\":5"));
}
