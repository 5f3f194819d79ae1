use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlamperti"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

// Ad diag(1, i) in column-stacking form: conj(U) ⊗ U = diag(1, i, -i, 1)
const AD_PHASE: &str = r#"{"dim":2,"matrix":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,1],[0,0],[0,0]],[[0,0],[0,0],[0,-1],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;

// the swap of E_12 and E_21
const TRANSPOSE: &str = r#"{"dim":2,"matrix":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;

const LOGISTIC: &str = r#"{"N":3,"f":{"kind":"logistic"},"t":1,"seed":7}"#;

#[test]
fn decompose_conjugation() {
    let o = run(&["decompose", AD_PHASE]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["report"]["kind"], "star_isomorphism");
    assert!((r["report"]["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn jordan_classifies_transpose() {
    let o = run(&["jordan", TRANSPOSE]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(report(&o)["report"]["classification"]["kind"], "star_anti_isomorphism");
}

#[test]
fn exponent_below_one_is_a_usage_error() {
    let o = run(&["norm", r#"{"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]],"p":0.5}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("p must be ≥ 1"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn schema_errors_name_the_field() {
    let o = run(&["norm", r#"{"matrix":[[[1,0]]],"p":2,"rh":[]}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("rh"));
    let o = run(&["mpc", "run", r#"{"N":3,"t":1}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`f`"));
    let o = run(&["norm", r#"{"matrix":[[[1,0],[0,0]],[[1,0]]],"p":2}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("matrix"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&run(&["--tol", "0", "decompose", AD_PHASE])), 2);
    assert_eq!(code(&run(&["--trials", "0", "decompose", AD_PHASE])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["decompose", "/no/such/file.json"])), 2);
}

#[test]
fn weighted_norm_of_a_projection() {
    let o = run(&[
        "norm",
        r#"{"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]],"p":1,"rho":[[[0.75,0],[0,0]],[[0,0],[0.25,0]]]}"#,
    ]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!((r["report"]["weighted"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((r["report"]["schatten"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mpc_logistic_is_a_negative_verdict() {
    let o = run(&["mpc", "run", LOGISTIC]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["verdict"], "negative");
    assert_eq!(r["report"]["identities_hold"], true);
    assert_eq!(r["report"]["implementability"]["implementable"], false);
    assert!(r["report"]["note"].as_str().unwrap().contains("not multiplicative"));
}

#[test]
fn mpc_constant_multiplier_holds() {
    let o = run(&["mpc", "run", r#"{"N":2,"f":{"kind":"constant"},"t":2}"#]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn csv_output_is_deterministic() {
    let a = run(&["--format", "csv", "mpc", "run", LOGISTIC]);
    let b = run(&["--format", "csv", "mpc", "run", LOGISTIC]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("experiment,defect_name,value,domain_fraction\n"));
    assert!(text.contains("implementability,multiplicativity_defect,"));

    let args = ["--format", "csv", "--trials", "5", "--seed", "3", "norm-scale", r#"{"dim":3}"#];
    let x = run(&args);
    assert_eq!(code(&x), 0);
    assert_eq!(x.stdout, run(&args).stdout);
    let text = String::from_utf8(x.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 10);
}

#[test]
fn file_input_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("map.json");
    std::fs::write(&input, r#"{"n":3,"map":[1,2,0]}"#).unwrap();
    let out = dir.path().join("k.json");
    let o = run(&[
        "--out",
        out.to_str().unwrap(),
        "classical",
        "koopman",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // (Kf)_0 = f_1
    assert_eq!(r["report"]["matrix"][0][1][0], 1.0);
    assert_eq!(r["report"]["matrix"][0][0][0], 0.0);
}

#[test]
fn classical_checks_report_verdicts() {
    let half = r#"{"matrix":[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}"#;
    let o = run(&["classical", "ds-check", half]);
    assert_eq!(code(&o), 0);
    let o = run(&["classical", "multiplicative", half]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["report"]["multiplicative"], false);

    let swap = r#"{"matrix":[[[0,0],[1,0]],[[1,0],[0,0]]],"mu":[0.5,0.5],"p":3}"#;
    let o = run(&["classical", "lamperti", swap]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(report(&o)["report"]["s"], serde_json::json!([1, 0]));

    let fp = run(&["classical", "fp", r#"{"n":2,"map":[1,0],"mu":[0.5,0.5]}"#]);
    assert_eq!(code(&fp), 0);
}

#[test]
fn integrability_of_pauli_x() {
    let x = r#"{"dim":2,"matrix":[[[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[1,0],[0,0],[0,0],[0,0]]],"rho":[[[0.6666666666666666,0],[0,0]],[[0,0],[0.3333333333333333,0]]]}"#;
    let o = run(&["integrability", x]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!((report(&o)["report"]["c"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn implementable_and_transport() {
    let o = run(&["implementable", AD_PHASE]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(report(&o)["report"]["implementable"], true);

    // a non-unital scaled identity is rejected with a reason
    let scaled = r#"{"dim":2,"matrix":[[[2,0],[0,0],[0,0],[0,0]],[[0,0],[2,0],[0,0],[0,0]],[[0,0],[0,0],[2,0],[0,0]],[[0,0],[0,0],[0,0],[2,0]]]}"#;
    let o = run(&["implementable", scaled]);
    assert_eq!(code(&o), 1);
    assert!(report(&o)["report"]["failure"].as_str().unwrap().contains("unital"));

    let o = run(&["transport", AD_PHASE]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["report"]["dim"], 2);
}

#[test]
fn change_of_representation_by_transpose() {
    let input = format!(
        r#"{{"u":[[[0,0],[1,0]],[[1,0],[0,0]]],"lambda":{TRANSPOSE},"steps":2}}"#
    );
    let o = run(&["change-rep", &input]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(report(&o)["report"]["steps"].as_array().unwrap().len(), 2);
}

#[test]
fn key_value_csv_for_scalar_reports() {
    let o = run(&["--format", "csv", "decompose", AD_PHASE]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("key,value\nverdict,holds\n"));
    assert!(text.contains("\nkind,star_isomorphism\n"));
}

#[test]
fn selftest_passes_with_stable_csv() {
    let a = run(&["--format", "csv", "selftest"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let b = run(&["--format", "csv", "selftest"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 11);
}
