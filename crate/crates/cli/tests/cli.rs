use goodpair_cli::{run_with, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use num_rational::BigRational;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("goodpair").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

fn ratio(v: &Value) -> BigRational {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn orders_of_sp4_3() {
    let (code, v) = json(&["orders", "--type", "Sp", "--n", "2", "--q", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["order"], "51840");
    assert_eq!(v["result"]["centralizer"], "96");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["command"], "orders");
    assert_eq!(v["config"]["type"], "Sp");
}

#[test]
fn exact_p1_of_sp4_2_is_within_bound() {
    let (code, v) = json(&["exact-p1", "--type", "Sp", "--n", "2", "--q", "2"]);
    assert_eq!(code, EXIT_OK);
    let value = ratio(&v["result"]["sweep"]["value"]);
    assert!(value <= "7/8".parse().unwrap());
    assert_eq!(v["result"]["bound"], "7/8");
    assert_eq!(v["result"]["sweep"]["class_size"], 40);
    assert_eq!(v["status"], "ok");
}

#[test]
fn phi_of_su6_3() {
    let (code, v) = json(&["phi", "--type", "SU", "--n", "3", "--q", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["phi"], serde_json::json!([7]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(run(&["orders", "--type", "XY", "--n", "2", "--q", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["phi", "--type", "Sp", "--n", "3", "--q", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["theta", "--k", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn violations_exit_one_with_witness() {
    let (code, out, err) = run(&["sym-audit", "--n", "4", "--p", "5", "--ell", "10"]);
    assert_eq!(code, EXIT_VIOLATION);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "violation");
    assert!(err.contains("violation:"));
    let (code, _, _) = run(&["sym-audit", "--n", "4", "--p", "2", "--ell", "10"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn theta_value_and_suite() {
    let (code, v) = json(&["theta", "--k", "1", "--n", "2", "--q", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["value"], "16/27");
    let (code, v) = json(&["theta", "--suite", "--n-max", "6", "--q-max", "3"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(v["violations"].as_array().unwrap().len() > 0);
}

#[test]
fn output_is_identical_across_runs_and_worker_counts() {
    let base = ["estimate-p1", "--type", "Sp", "--n", "2", "--q", "2", "--trials", "2000", "--seed", "9"];
    let (c1, a, _) = run(&base);
    let mut more = base.to_vec();
    more.extend(["--workers", "3"]);
    let (c2, b, _) = run(&more);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let (_, c, _) = run(&base);
    assert_eq!(a, c);
}

#[test]
fn csv_output_has_one_row_per_entry() {
    let (code, out, _) = run(&["bounds", "--type", "SL", "--n", "9", "--q", "4", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[0].starts_with("class,source,formula,value"));
}

#[test]
fn classify_agrees_with_the_oracle() {
    let (code, v) = json(&["classify", "--type", "Sp", "--n", "2", "--q", "2", "--trials", "50", "--seed", "4"]);
    assert_eq!(code, EXIT_OK);
    let pairs = v["result"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 50);
    assert!(pairs.iter().all(|p| p["agrees"] == true));
}

#[test]
fn exact_p1_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["exact-p1", "--type", "Sp", "--n", "2", "--q", "3", "--cache-dir", d];
    let (c1, first, _) = run(&args);
    assert_eq!(c1, EXIT_OK);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let (c2, second, _) = run(&args);
    assert_eq!(c2, EXIT_OK);
    assert_eq!(first, second);
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("good.json");
    let (code, out, _) = run(&["good", "--type", "SO+", "--n", "4", "--q", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["fixed_dim"], 4);
    assert_eq!(v["result"]["element"]["m"], 5);
}

#[test]
fn selftest_runs_selected_criteria() {
    let (code, v) = json(&["selftest", "--criteria", "1,11"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["selftest", "--criteria", "12"]).0, EXIT_USAGE);
}
