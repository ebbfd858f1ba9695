use std::process::{Command, Output};

use serde_json::Value;

use hopfchain::chain::kernel_from_csv;
use hopfchain::exactmath::{parse_rational, RatMatrix};
use hopfchain::hopf::HopfAlgebra;
use hopfchain::spectral::{spectrum_for_sector, verify_spectrum};
use hopfchain::shuffle::{Alphabet, ShuffleAlgebra};
use hopfchain::{Exec, Preset};

fn hopfchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_str().expect("string").to_string())
        .collect()
}

#[test]
fn spectrum_with_matrix_confirmation() {
    let out = hopfchain(&["spectrum", "--algebra", "shuffle", "--distinct", "4", "--preset", "top-to-random", "--verify-matrix"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["eigenvalues"]["1"], "1");
    assert_eq!(v["eigenvalues"]["1/2"], "6");
    assert_eq!(v["eigenvalues"]["1/4"], "8");
    assert_eq!(v["eigenvalues"]["0"], "9");
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn evolve_matches_closed_form() {
    let out = hopfchain(&[
        "evolve", "--algebra", "shuffle", "--distinct", "4", "--preset", "top-or-bottom", "--q", "1/2", "--t", "5",
        "--stat", "weighted-descents",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let got = strings(&v["expectations"]["weighted-descents"]);
    let want: Vec<String> = (0..=5u32)
        .map(|t| {
            let d = 1u64 << (t + 1);
            if t == 0 {
                "0".to_string()
            } else {
                format!("{}/{}", (1u64 << t) - 1, d)
            }
        })
        .collect();
    assert_eq!(got, want);
    assert_eq!(v["matches_reference"], true);
}

#[test]
fn evolve_on_forests_needs_weights_and_start() {
    let out = hopfchain(&["evolve", "--algebra", "forests", "--n", "3", "--preset", "riffle", "--stat", "f2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hopfchain(&[
        "evolve", "--algebra", "forests", "--forest", "(()())", "--preset", "trinomial", "--params", "1/4", "1/2", "1/4",
        "--t", "1", "--stat", "f2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    // From the cherry: stays put with probability 1/8, loses one vertex with probability 3/16.
    assert_eq!(strings(&v["expectations"]["f2"]), vec!["3/256", "9/2048"]);
}

#[test]
fn csv_round_trip_reproduces_verification() {
    let out = hopfchain(&["matrix", "--distinct", "4", "--preset", "riffle", "--a", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let (labels, kernel) = kernel_from_csv(&text).unwrap();
    assert_eq!(labels.len(), 24);

    let json = json_stdout(&hopfchain(&["matrix", "--distinct", "4", "--preset", "riffle", "--a", "3"]));
    let rows: Vec<Vec<_>> = json["kernel"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| strings(r).iter().map(|s| parse_rational(s).unwrap()).collect())
        .collect();
    assert_eq!(RatMatrix::from_rows(rows).unwrap(), kernel);

    let alg = ShuffleAlgebra::new(Alphabet::distinct(4));
    let spec = Preset::Riffle { hands: 3 }.expand(4).unwrap();
    let spectrum = spectrum_for_sector(&alg, &spec, &[1, 1, 1, 1]).unwrap();
    let reimported = verify_spectrum(&kernel, &spectrum, Exec::Serial).unwrap();
    let built = hopfchain::build_transition_matrix(&alg, &spec, alg.sector_basis(&[1, 1, 1, 1])).unwrap();
    assert_eq!(reimported, verify_spectrum(built.kernel(), &spectrum, Exec::Serial).unwrap());
    assert!(reimported.passed());
}

#[test]
fn spec_file_equals_preset() {
    let dir = std::env::temp_dir().join(format!("hopfchain-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tob.json");
    std::fs::write(
        &path,
        r#"{"n": 4, "terms": [{"composition": [1,3], "weight": "1/2"}, {"composition": [3,1], "weight": "1/2"}]}"#,
    )
    .unwrap();
    let from_file = json_stdout(&hopfchain(&["matrix", "--distinct", "4", "--spec", path.to_str().unwrap()]));
    let from_preset = json_stdout(&hopfchain(&["matrix", "--distinct", "4", "--preset", "top-or-bottom"]));
    assert_eq!(from_file["kernel"], from_preset["kernel"]);
    let wrong_degree = hopfchain(&["matrix", "--distinct", "3", "--spec", path.to_str().unwrap()]);
    assert_eq!(wrong_degree.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn errors_are_json_with_exit_code_two() {
    for args in [
        vec!["matrix", "--distinct", "4", "--preset", "no-such-shuffle"],
        vec!["matrix", "--distinct", "4"],
        vec!["matrix", "--distinct", "5", "--preset", "riffle", "--cap", "10"],
        vec!["matrix", "--distinct", "4", "--preset", "trinomial", "--params", "1/2", "1/2", "1/2"],
        vec!["evolve", "--distinct", "3", "--preset", "riffle", "--q", "x/y"],
        vec!["no-such-command"],
    ] {
        let out = hopfchain(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
        assert_eq!(err["format_version"], 1);
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--distinct", "4", "--preset", "riffle", "--t", "3", "--stat", "descents", "--trials", "3000", "--seed", "9"];
    let a = hopfchain(&args);
    let b = hopfchain(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut serial = args.to_vec();
    serial.push("--serial");
    assert_eq!(hopfchain(&serial).stdout, a.stdout);
    let v = json_stdout(&a);
    assert!(v["pile_order"].is_string());
    let series = &v["statistics"][0]["series"];
    assert_eq!(series[1]["exact"], "3/4");
}

#[test]
fn stationary_and_eigenvectors() {
    let v = json_stdout(&hopfchain(&["stationary", "--deck", "aab", "--preset", "riffle"]));
    assert_eq!(v["fixed_by_kernel"][0], true);
    let d = &v["distributions"][0]["distribution"];
    for w in ["aab", "aba", "baa"] {
        assert_eq!(d[w], "1/3");
    }
    let v = json_stdout(&hopfchain(&["eigvecs", "--distinct", "3", "--q", "1/3"]));
    assert_eq!(v["count"], 6);
    assert_eq!(v["full_basis"], true);
    let v = json_stdout(&hopfchain(&["eigvecs", "--distinct", "4", "--j", "3"]));
    assert_eq!(v["count"], 0);
}

#[test]
fn verify_exit_codes() {
    let ok = hopfchain(&["verify", "--only", "2,8", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json_stdout(&ok);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    let bad = hopfchain(&["verify", "--only", "7"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout).unwrap().starts_with("FAIL  7"));
}
