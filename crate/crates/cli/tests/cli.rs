use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurtrace"))
        .args(args)
        .env_remove("SCHURTRACE_EXACT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn assert_schema(name: &str, value: &serde_json::Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn tv_of_two_boxes() {
    assert_eq!(stdout(&["exact", "tv", "--n", "2", "--d", "2"]).trim(), "1/2");
    let v = json(&["exact", "tv", "--n", "2", "--d", "2", "--format", "json"]);
    assert_eq!(v["l1"], "1/2");
    assert_schema("exact_tv", &v);
}

#[test]
fn power_trace_report_parameters() {
    let args = ["estimate", "power-trace", "--q", "3", "--eps", "0.12", "--uniform", "4", "--seed", "7"];
    let v = json(&args);
    assert_eq!(v["eps_prime"].as_f64().unwrap(), 0.02);
    assert_eq!(v["m_uncapped"], 50);
    assert_eq!(v["m"], 4);
    assert_eq!(v["algorithm"], "TruncatedHighQ");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["truth"].as_f64().unwrap(), 0.0625);
    assert_schema("estimate_power_trace", &v);
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn json_outputs_follow_schemas() {
    assert_schema("estimate_spectrum", &json(&["estimate", "spectrum", "--eps", "0.2", "--alpha", "0.5,0.3,0.2"]));
    assert_schema("exact_distribution", &json(&["exact", "sw", "--n", "4", "--alpha", "1/2,3/10,1/5", "--format", "json"]));
    assert_schema("exact_distribution", &json(&["exact", "planch", "--n", "5", "--format", "json"]));
    assert_schema("chw_grid", &json(&["exact", "chw-grid", "--max-d", "5", "--format", "json"]));
    assert_schema("sample", &json(&["sample", "planch", "--n", "7", "--trials", "20", "--format", "json"]));
    assert_schema("calibrate_c", &json(&["calibrate-c", "--max-n", "6"]));
    assert_schema("lowerbound_qubit", &json(&["lowerbound", "qubit", "--q", "2", "--eps", "0.3", "--trials", "100"]));
    let mixed = json(&["lowerbound", "mixed", "--q", "1.5", "--eps", "0.125", "--n", "4", "--trials", "200"]);
    assert_eq!(mixed["instance"]["analytic"]["r"], 16);
    assert_eq!(mixed["instance"]["analytic"]["d"], 65);
    assert_schema("lowerbound_mixed", &mixed);
    assert_schema("lowerbound_mixed", &json(&["lowerbound", "mixed", "--q", "1.5", "--r", "4", "--d", "8"]));
}

#[test]
fn exact_table_csv() {
    let text = stdout(&["exact", "sw", "--n", "2", "--uniform", "2"]);
    assert_eq!(text, "shape,p,p_float\r\n2,3/4,0.75\r\n1|1,1/4,0.25\r\n");
}

#[test]
fn sample_csv_is_reproducible_and_seeded() {
    let args = ["sample", "sw", "--n", "30", "--trials", "50", "--alpha", "0.5,0.3,0.2", "--seed", "3"];
    let a = stdout(&args);
    assert!(a.starts_with("trial_id,shape\r\n0,"));
    assert_eq!(a.lines().count(), 51);
    assert_eq!(a, stdout(&args));
    let other = stdout(&["sample", "sw", "--n", "30", "--trials", "50", "--alpha", "0.5,0.3,0.2", "--seed", "4"]);
    assert_ne!(a, other);
    let single = stdout(&["--threads", "1", "sample", "sw", "--n", "30", "--trials", "50", "--alpha", "0.5,0.3,0.2", "--seed", "3"]);
    assert_eq!(a, single);
}

#[test]
fn sweep_writes_stable_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    for p in [&p1, &p2] {
        stdout(&[
            "sweep", "--q", "2.5,1.5", "--eps", "0.3,0.2", "--trials", "5", "--alpha", "0.5,0.3,0.2",
            "--out", p.to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(&p1).unwrap();
    assert_eq!(a, std::fs::read(&p2).unwrap());
    let mut reader = csv::Reader::from_reader(a.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["q", "eps", "trial", "seed", "estimate", "truth", "abs_err", "total_samples", "algorithm"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 20);
    let trials: Vec<&str> = rows.iter().take(5).map(|r| &r[2]).collect();
    assert_eq!(trials, ["0", "1", "2", "3", "4"]);
    assert_eq!(&rows[0][8], "TruncatedHighQ");
    assert_eq!(&rows[19][8], "TruncatedLowQ");
}

#[test]
fn exact_cap_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_schurtrace"))
        .args(["exact", "planch", "--n", "5"])
        .env("SCHURTRACE_EXACT_CAP", "4")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit 4"));
    assert!(run(&["exact", "planch", "--n", "5"]).status.success());
}

#[test]
fn invalid_input_is_explained() {
    let cases: [(&[&str], &str); 5] = [
        (&["estimate", "power-trace", "--q", "2", "--eps", "0.1", "--alpha", "0.5,0.4"], "sum"),
        (&["estimate", "power-trace", "--q", "0.5", "--eps", "0.1", "--uniform", "2"], "q"),
        (&["sweep", "--q", "2", "--eps", "1.5", "--uniform", "2"], "--eps"),
        (&["exact", "sw", "--n", "3", "--zipf", "5"], "zipf"),
        (&["estimate", "spectrum", "--eps", "0.1", "--uniform", "2", "--format", "csv"], "json"),
    ];
    for (args, needle) in cases {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}
