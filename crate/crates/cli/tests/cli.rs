use std::process::{Command, Output};

use serde_json::Value;

fn secvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secvar"))
        .args(args)
        .env_remove("SECANT_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = secvar(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    secvar(args).status.code().unwrap()
}

#[test]
fn dim_p1_cubed_222_seven_points() {
    // computed: one short of filling P^26, split by two (1,1,1) forms
    let r = json(&[
        "dim",
        "--factors",
        "1,1,1",
        "--degree",
        "2,2,2",
        "--s",
        "7",
        "--seed",
        "1",
    ]);
    assert_eq!(r["dim_expected"], 26);
    assert_eq!(r["dim_actual"], 25);
    assert_eq!(r["defect"], 1);
    assert_eq!(r["certificate"]["b"], serde_json::json!([1, 1, 1]));
    assert_eq!(r["certificate"]["proves_defect"], true);
    assert_eq!(r["spec"]["N"], 26);
}

#[test]
fn dim_nondefective_and_veronese_examples() {
    let r = json(&[
        "dim",
        "--factors",
        "1,1",
        "--degree",
        "3,1",
        "--s",
        "2",
        "--seed",
        "4",
    ]);
    assert_eq!(r["defect"], 0);
    assert_eq!(r["dim_actual"], 5);
    let r = json(&[
        "dim",
        "--factors",
        "1",
        "--degree",
        "4",
        "--s",
        "3",
        "--seed",
        "4",
    ]);
    assert_eq!(r["dim_actual"], 4);
    assert_eq!(r["hilbert"], 5);
    assert!(r["certificate"].is_null());
}

#[test]
fn dim_methods_agree() {
    for m in ["direct", "reduced", "both"] {
        let r = json(&[
            "dim",
            "--factors",
            "1,2",
            "--degree",
            "2,1",
            "--s",
            "3",
            "--seed",
            "9",
            "--method",
            m,
        ]);
        assert_eq!(r["dim_actual"], 8, "{m}");
        assert_eq!(r["method"], m);
    }
}

#[test]
fn seed_is_echoed_and_reproducible() {
    let a = secvar(&["dim", "--factors", "1,1", "--degree", "2,2", "--s", "3"]);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let seed = v["metadata"]["seed"].as_u64().unwrap().to_string();
    let b = secvar(&[
        "dim",
        "--factors",
        "1,1",
        "--degree",
        "2,2",
        "--s",
        "3",
        "--seed",
        &seed,
    ]);
    assert_eq!(a.stdout, b.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_secvar"))
        .args(["dim", "--factors", "1,1", "--degree", "2,2", "--s", "3"])
        .env("SECANT_SEED", &seed)
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn report_round_trips_through_core_types() {
    let out = secvar(&[
        "dim",
        "--factors",
        "1,1",
        "--degree",
        "2,2",
        "--s",
        "3",
        "--seed",
        "2",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let r: secvar_core::SecantReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let out = secvar(&[
        "grassmann",
        "--factors",
        "1,1",
        "--degree",
        "2,1",
        "--k",
        "1",
        "--s",
        "3",
        "--seed",
        "2",
    ]);
    let g: secvar_core::GrassmannReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(g.defect, 1);
}

#[test]
fn grassmann_examples() {
    let g = json(&[
        "grassmann",
        "--factors",
        "1,1",
        "--degree",
        "2,1",
        "--k",
        "1",
        "--s",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(g["defect"], 1);
    assert_eq!(g["dim_expected"], 8);
    assert_eq!(g["dim_actual"], 7);
    assert_eq!(g["product_spec"]["factors"], serde_json::json!([1, 1, 1]));
    assert_eq!(g["product_spec"]["degree"], serde_json::json!([2, 1, 1]));

    let g = json(&[
        "grassmann",
        "--factors",
        "2",
        "--degree",
        "3",
        "--k",
        "2",
        "--s",
        "4",
        "--seed",
        "5",
    ]);
    assert_eq!(g["defect"], 0);

    // product P^1 x P^1 x P^1 x P^3 in degree (1,1,1,1) fills P^31; Grassmann
    // expected dimension is 4 (N - 3) = 16
    let g = json(&[
        "grassmann",
        "--factors",
        "1,1,1",
        "--degree",
        "1,1,1",
        "--k",
        "3",
        "--s",
        "7",
        "--seed",
        "5",
    ]);
    assert_eq!(
        g["product_spec"]["factors"],
        serde_json::json!([1, 1, 1, 3])
    );
    assert_eq!(g["product_report"]["dim_actual"], 31);
    assert_eq!(g["dim_expected"], 16);
    assert_eq!(g["defect"], 0);
}

#[test]
fn scan_flags_the_p1xp1_exceptions() {
    let out = secvar(&[
        "scan",
        "--factors",
        "1,1",
        "--degree-max",
        "6",
        "--s-max",
        "12",
        "--seed",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "factors,degree,s,N,dim_expected,dim_actual,defect,certified,prime,seed,trials,status"
    );
    let mut defective = Vec::new();
    let mut count = 0;
    let mut keys = Vec::new();
    for l in lines {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(l.as_bytes());
        let rec = r.records().next().unwrap().unwrap();
        let degree: Vec<u32> = rec[1].split(',').map(|x| x.parse().unwrap()).collect();
        let s: u32 = rec[2].parse().unwrap();
        keys.push((degree.clone(), s));
        count += 1;
        if &rec[6] != "0" {
            defective.push((degree, s));
        }
    }
    assert_eq!(count, 36 * 12);
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(
        defective,
        vec![
            (vec![2, 2], 3),
            (vec![2, 4], 5),
            (vec![2, 6], 7),
            (vec![4, 2], 5),
            (vec![6, 2], 7)
        ]
    );
}

#[test]
fn scan_p1_cubed_flags_both_families() {
    let t = json(&[
        "scan",
        "--factors",
        "1,1,1",
        "--degree-max",
        "4",
        "--s-max",
        "14",
        "--seed",
        "8",
    ]);
    let mut defective: Vec<(Vec<u64>, u64)> = t["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["defect"].as_u64().unwrap() > 0)
        .map(|r| {
            let d = r["degree"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .collect();
            (d, r["s"].as_u64().unwrap())
        })
        .collect();
    defective.sort();
    let mut want = vec![(vec![2, 2, 2], 7)];
    for alpha in [1u64, 2] {
        let a = 2 * alpha;
        for d in [vec![a, 1, 1], vec![1, a, 1], vec![1, 1, a]] {
            want.push((d, a + 1));
        }
    }
    want.sort();
    assert_eq!(defective, want);
}

#[test]
fn scan_skips_cells_over_the_cap() {
    let out = secvar(&[
        "scan",
        "--factors",
        "2",
        "--degree-max",
        "3",
        "--s-max",
        "1",
        "--size-cap",
        "6",
        "--seed",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    let status: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(status, vec!["ok", "ok", "skipped"]);
}

#[test]
fn scan_json_is_byte_identical() {
    let args = [
        "scan",
        "--factors",
        "1,2",
        "--degree-max",
        "2",
        "--s-max",
        "4",
        "--seed",
        "77",
    ];
    assert_eq!(secvar(&args).stdout, secvar(&args).stdout);
    let jobs = [
        "scan",
        "--factors",
        "1,2",
        "--degree-max",
        "2",
        "--s-max",
        "4",
        "--seed",
        "77",
        "--jobs",
        "1",
    ];
    assert_eq!(secvar(&args).stdout, secvar(&jobs).stdout);
}

#[test]
fn verify_suites() {
    for suite in ["thm1.1", "sec3", "prop2.3", "grassmann"] {
        let r = json(&["verify", "--suite", suite, "--seed", "11"]);
        assert_eq!(r["failed"], 0, "{suite}");
        assert_eq!(r["suite"], suite);
    }
    let r = json(&["verify", "--suite", "thm1.1", "--seed", "11"]);
    assert!(r["cases"].as_array().unwrap().len() >= 50);
    let args = ["verify", "--suite", "sec3", "--seed", "11"];
    assert_eq!(secvar(&args).stdout, secvar(&args).stdout);
}

#[test]
fn verify_p1_cubed_suite_reports_the_222_cell() {
    // the classification value at (2,2,2), s = 7 disagrees with the computed one
    let out = secvar(&[
        "verify", "--suite", "thm2.5", "--seed", "11", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with("FAIL a=(2,2,2) s=7"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&["dim", "--factors", "1,1", "--degree", "2", "--s", "2"]),
        2
    );
    assert_eq!(
        code(&["dim", "--factors", "1,1", "--degree", "2,0", "--s", "2"]),
        2
    );
    assert_eq!(
        code(&[
            "dim",
            "--factors",
            "1",
            "--degree",
            "2",
            "--s",
            "2",
            "--prime",
            "1000000"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "dim",
            "--factors",
            "1",
            "--degree",
            "2",
            "--s",
            "2",
            "--trials",
            "0"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "dim",
            "--factors",
            "1",
            "--degree",
            "2",
            "--s",
            "2",
            "--format",
            "csv"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "dim",
            "--factors",
            "3,3",
            "--degree",
            "5,5",
            "--s",
            "2",
            "--size-cap",
            "100"
        ]),
        3
    );
    assert_eq!(
        code(&[
            "scan",
            "--factors",
            "1,1",
            "--degree-max",
            "0",
            "--s-max",
            "3"
        ]),
        2
    );
    assert_eq!(code(&["verify", "--suite", "thm9.9"]), 2);
    assert_eq!(
        code(&[
            "grassmann",
            "--factors",
            "1,1",
            "--degree",
            "2,1",
            "--k",
            "2",
            "--s",
            "2"
        ]),
        2
    );
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn text_output_echoes_seed() {
    let out = secvar(&[
        "dim",
        "--factors",
        "1",
        "--degree",
        "3",
        "--s",
        "2",
        "--format",
        "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("seed: ")));
}
