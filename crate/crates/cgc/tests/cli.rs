use std::process::Command;

use cgc::cli::{render, run, Format, EXIT_BUDGET, EXIT_INPUT, EXIT_PASS};

fn go(args: &[&str]) -> cgc::cli::Outcome {
    run(std::iter::once("cgc").chain(args.iter().copied()))
}

const T: &str = r#"{"factors":[{"poly":[2,1],"parts":[1],"signs":[[1,1,1]]}]}"#;

#[test]
fn classify_transvection() {
    let o = go(&["classify", "--kind", "sp", "--q", "3", "--matrix", "1,1;0,1"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["refl_length"], 1);
    assert_eq!(o.doc["result"]["fixed_dim"], 1);
    assert_eq!(o.doc["config"]["matrix"], "1,1;0,1");
    assert_eq!(o.doc["config"]["command"], "classify");
}

#[test]
fn input_errors() {
    for (args, kind) in [
        (vec!["classify", "--kind", "gl", "--matrix", "1,1;1,1"], "singular"),
        (vec!["classify", "--kind", "sp", "--matrix", "1,1;1,1"], "not-symplectic"),
        (vec!["classify", "--kind", "gl", "--matrix", "1,x;0,1"], "parse"),
        (vec!["sc", "--kind", "sp", "--n", "1", "--lambda", "{", "--mu", "", "--eta", ""], "parse"),
        (vec!["classify", "--q", "6", "--matrix", "1"], "invalid"),
    ] {
        let o = go(&args);
        assert_eq!(o.code, EXIT_INPUT, "{args:?}");
        assert_eq!(o.doc["error"]["kind"], kind, "{args:?}");
    }
    assert_eq!(go(&["nonsense"]).code, EXIT_INPUT);
    assert_eq!(go(&["--help"]).code, EXIT_PASS);
}

#[test]
fn budget_exceeded() {
    let o = go(&["sc", "--kind", "sp", "--n", "2", "--lambda", T, "--mu", T, "--eta", T, "--budget-orbit", "10"]);
    assert_eq!(o.code, EXIT_BUDGET);
    assert_eq!(o.doc["error"]["kind"], "budget");
}

#[test]
fn structure_constants() {
    let o = go(&["sc", "--kind", "sym", "--n", "4", "--lambda", "1", "--mu", "1", "--eta", ""]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["constant"], 6);
    let o = go(&["sc", "--kind", "sp", "--n", "2", "--lambda", T, "--mu", T, "--eta", r#"{"factors":[]}"#, "--orbit-sum"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["agree"], true);
    let o = go(&["expand", "--kind", "gl", "--q", "2", "--n", "2", "--lambda", "1", "--mu", "1"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["mass"]["lhs"], o.doc["result"]["mass"]["rhs"]);
}

#[test]
fn stability_and_growth() {
    let o = go(&["stability", "--kind", "sp", "--q", "3", "--n", "1", "--n2", "2"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.doc);
    let o = go(&["stability", "--kind", "sym", "--n", "3", "--n2", "6"]);
    assert_eq!(o.code, EXIT_PASS);
    let o = go(&["growth", "--kind", "sp", "--q", "3", "--matrix", "1,0;1,1", "--n", "2"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["status"], "pass");
    assert_eq!(o.doc["result"]["lhs"], o.doc["result"]["rhs"]);
    // identity blocks sit outside the hypothesis
    let o = go(&["growth", "--kind", "sp", "--matrix", "1,0;0,1", "--matrix2", "1,0;0,1", "--n", "2"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.doc["result"]["status"], "out-of-hypothesis");
}

#[test]
fn output_is_deterministic_and_worker_independent() {
    let args = ["expand", "--kind", "sp", "--q", "3", "--n", "2", "--lambda", T, "--mu", T];
    let a = render(&go(&args).doc, Format::Json);
    let b = render(&go(&args).doc, Format::Json);
    assert_eq!(a, b);
    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    let mut two = args.to_vec();
    two.extend(["--workers", "2"]);
    assert_eq!(go(&one).doc["result"], go(&two).doc["result"]);
}

#[test]
fn binary_runs_and_echoes_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_cgc"))
        .args(["classify", "--kind", "sym", "--matrix", "2,1,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["kind"], "sym");
    assert_eq!(v["result"]["cycle_type"], serde_json::json!([2, 1]));
    let out = Command::new(env!("CARGO_BIN_EXE_cgc"))
        .args(["classify", "--kind", "gl", "--matrix", "0,0;0,0", "--format", "table"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("error.kind"));
}
