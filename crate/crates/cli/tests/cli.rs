use std::path::PathBuf;
use std::process::{Command, Output};

use actevo_cli::report::AnalysisReport;
use serde_json::Value;

const WORKED_LAW: &str = r#"{"n": 5, "generators": [[2,3,4,1,5],[2,5,5,2,4]], "weights": ["1/2","1/2"]}"#;
const PERIODIC_LAW: &str = r#"{"n": 6, "generators": [[2,3,4,5,6,1],[5,6,1,2,3,4]], "weights": ["1/3","2/3"]}"#;
const FAST: [&str; 4] = ["--replications", "1000", "--k-min", "-60"];

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actevo")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn analyze_worked_law() {
    let law = write("worked.json", WORKED_LAW);
    let out = run(&["analyze", "--law", law.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cliques"]["m_mu"], 3);
    assert_eq!(v["limits"]["eta_L"]["[4,2,2,4,5]"], "2/3");
    assert_eq!(v["limits"]["eta_L"]["[1,3,3,1,5]"], "1/3");
    assert_eq!(v["limits"]["p"], 1);
    assert_eq!(v["cliques"]["W"], serde_json::json!([[2, 4, 5]]));
    assert_eq!(v["rees"]["e"], "[4,2,2,4,5]");
    assert!(v.get("simulation").is_none());
}

#[test]
fn analyze_identity_law() {
    let law = write("identity.json", r#"{"n": 3, "generators": [[1,2,3]], "weights": ["1"]}"#);
    let v = json(&run(&["analyze", "--law", law.to_str().unwrap()]));
    assert_eq!(v["semigroup"]["elements"], 1);
    assert_eq!(v["semigroup"]["kernel"], 1);
    assert_eq!(v["limits"]["H_equals_G"], true);
    assert_eq!(v["limits"]["p"], 1);
    assert!(v["timestamp"].is_u64());
}

#[test]
fn weight_validation() {
    let ok = write(
        "thirds.json",
        r#"{"n": 2, "generators": [[1,1],[2,2],[2,1]], "weights": ["1/3","1/3","1/3"]}"#,
    );
    assert_eq!(run(&["analyze", "--law", ok.to_str().unwrap()]).status.code(), Some(0));
    let bad = write("short.json", r#"{"n": 2, "generators": [[1,1],[2,2]], "weights": ["1/2","1/3"]}"#);
    let out = run(&["analyze", "--law", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum"));
    let broken = write("broken.json", "{\"n\": 2,\n \"generators\": [[1,1]]\n");
    let out = run(&["analyze", "--law", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(run(&["analyze"]).status.code(), Some(3));
}

#[test]
fn simulate_is_deterministic() {
    let law = write("worked_sim.json", WORKED_LAW);
    let mut args = vec!["simulate", "--law", law.to_str().unwrap(), "--no-timestamp", "--seed", "5"];
    args.extend(FAST);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["simulation"]["exact_failures"], 0);
    assert_eq!(v["simulation"]["path_excerpt"].as_array().unwrap().len(), 10);
    let checks = v["simulation"]["verification"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "u_h_uniform" && c["df"] == 5));
}

#[test]
fn zero_replications_is_an_input_error() {
    let law = write("worked_zero.json", WORKED_LAW);
    let out = run(&["simulate", "--law", law.to_str().unwrap(), "--replications", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nonstationary_config() {
    write("periodic.json", PERIODIC_LAW);
    let cfg = write(
        "periodic_cfg.json",
        r#"{
            "law_file": "periodic.json",
            "mode": "nonstationary",
            "family": [
                {"c": "1/2", "Lambda_W": {"(1,2,3,4,5,6)": "1"}},
                {"c": "1/3", "Lambda_W": {"(1,2,3,4,6,5)": "1"}},
                {"c": "1/6", "Lambda_W": {"(1,2,3,5,4,6)": "1"}}
            ],
            "replications": 2000,
            "k_min": -60
        }"#,
    );
    let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["limits"]["p"], 3);
    assert_eq!(v["simulation"]["mode"], "nonstationary");
    let checks = v["simulation"]["verification"]["checks"].as_array().unwrap();
    let joint = checks.iter().find(|c| c["name"] == "y_c_z_w_family_joint").unwrap();
    assert!(joint["df"].as_u64().unwrap() > 0);
}

#[test]
fn example_command() {
    let mut args = vec!["example", "--no-timestamp", "--replications", "2000", "--k-min", "-100"];
    args.push("--json");
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["limits"]["eta_equals_nu"], true);
    assert_eq!(v["limits"]["H_equals_G"], true);
    assert_eq!(v["invariant_law"]["marginal"], serde_json::json!(["1/9", "2/9", "1/9", "2/9", "1/3"]));
    let checks = v["simulation"]["verification"]["checks"].as_array().unwrap();
    for name in ["mixing_n50", "x1_marginal", "lambda_consistency"] {
        assert!(checks.iter().any(|c| c["name"] == name), "{name}");
    }
}

#[test]
fn text_and_file_output() {
    let law = write("worked_text.json", WORKED_LAW);
    let out = run(&["analyze", "--law", law.to_str().unwrap(), "--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("  m_mu: 3\n"));
    assert!(text.contains("p: 1"));
    let dest = scratch("report.json");
    let out = run(&["analyze", "--law", law.to_str().unwrap(), "--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let saved = std::fs::read_to_string(&dest).unwrap();
    let report: AnalysisReport = serde_json::from_str(&saved).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", saved);
    assert!(report.timestamp.is_some());
}

#[test]
fn failures_map_to_exit_codes() {
    use actevo::sim::{Check, VerificationReport};
    let law = actevo::example::law();
    let an = actevo::Analysis::run(&law).unwrap();
    let lw = actevo::Measure::dirac(actevo::example::base_tuple());
    let mut report = AnalysisReport::build(&an, &lw).unwrap();
    assert_eq!(actevo_cli::status(&report), 0);
    let mut ver = VerificationReport::default();
    ver.push(Check::exact("x", 0, 1, 0, None));
    report.simulation = Some(actevo_cli::report::SimulationSection {
        mode: Default::default(),
        config: Default::default(),
        lambda_w: None,
        family: None,
        path_excerpt: vec![],
        verification: ver,
        exact_failures: 0,
        statistical_failures: 1,
    });
    assert_eq!(actevo_cli::status(&report), 1);
    report.simulation.as_mut().unwrap().exact_failures = 1;
    assert_eq!(actevo_cli::status(&report), 2);
}
