use std::process::{Command, Output};

fn pdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn even_kdv_flow_is_zero() {
    let o = pdo(&["flow", "--hierarchy", "sl2", "--time", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn kdv_flow_text() {
    let o = pdo(&["flow", "--time", "3"]);
    assert_eq!(stdout(&o), "u_t3 = 3/2 u u' + 1/4 u'''\n");
}

#[test]
fn root_latex_rows() {
    let o = pdo(&["root", "--order", "2", "--depth", "4", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "b_{2} = \\frac{1}{2} u");
    assert_eq!(lines[1], "b_{3} = -\\frac{1}{4} u^{\\prime}");
    assert!(lines[3].starts_with("b_{5} = "));
}

#[test]
fn root_json_parses_back() {
    let o = pdo(&["root", "--order", "3", "--depth", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    let root =
        pdo_core::PsiDO::from_json_value(&v["root"], &pdo_core::FieldRegistry::sl3()).unwrap();
    assert_eq!(root.floor(), Some(-3));
}

#[test]
fn primary_basis_flow() {
    let o = pdo(&[
        "flow",
        "--hierarchy",
        "sl3",
        "--time",
        "2",
        "--basis",
        "primary",
    ]);
    assert_eq!(
        stdout(&o),
        "u2_t2 = 2 v3'\nv3_t2 = -2/3 u2 u2' - 1/6 u2'''\n"
    );
    let o = pdo(&["flow", "--hierarchy", "sl2", "--basis", "primary"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn density_output() {
    let o = pdo(&["density", "--time", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hierarchy"], "sl2");
    assert_eq!(v["power"], 3);
    assert!(!v["density"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["spin"][..],
        &["root", "--bogus"],
        &["root", "--seed", "3"],
        &["flow", "--format", "pdf"],
        &["flow", "--time", "5", "--depth", "2"],
        &["check", "--suite", "nope"],
        &[],
    ] {
        let o = pdo(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let o = pdo(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn verify_writes_report_and_exits_two_on_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = pdo(&["verify", "--report", path.to_str().unwrap()]);
    let report =
        pdo_core::DiscrepancyReport::from_json_str(&std::fs::read_to_string(&path).unwrap())
            .unwrap();
    let expected = if report.is_clean() { 0 } else { 2 };
    assert_eq!(o.status.code(), Some(expected));
    assert!(report.entry("sl2.root.b2").unwrap().is_match());
    assert!(stdout(&o).contains("entries match"));
}

#[test]
fn check_suites() {
    let o = pdo(&["check", "--suite", "binomial"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = pdo(&[
        "check", "--suite", "duality", "--trials", "5", "--seed", "9", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 9);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["check", "--trials", "10", "--seed", "4"][..],
        &[
            "flow",
            "--hierarchy",
            "sl3",
            "--time",
            "4",
            "--format",
            "json",
        ],
        &["verify", "--format", "json"],
    ] {
        assert_eq!(pdo(args).stdout, pdo(args).stdout, "{args:?}");
    }
}

#[test]
fn config_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pdo.cfg");
    std::fs::write(&cfg, "# defaults\nhierarchy = sl3\ntime = 2\nseed = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = pdo(&["flow", "--config", c]);
    assert_eq!(
        stdout(&o),
        stdout(&pdo(&["flow", "--hierarchy", "sl3", "--time", "2"]))
    );
    let o = pdo(&["flow", "--config", c, "--time", "1"]);
    assert!(stdout(&o).starts_with("u2_t1 = u2'"));
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(pdo(&["flow", "--config", c]).status.code(), Some(1));
    std::fs::write(&cfg, "time = soon\n").unwrap();
    assert_eq!(pdo(&["flow", "--config", c]).status.code(), Some(1));
}

fn validator(name: &str) -> jsonschema::Validator {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas");
    let load = |n: &str| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(format!("{dir}/{n}.schema.json")).unwrap())
            .unwrap()
    };
    let mut opts = jsonschema::options();
    for dep in ["diffpoly", "psido"] {
        let uri = format!("{BASE}{dep}.schema.json");
        opts = opts.with_resource(uri, jsonschema::Resource::from_contents(load(dep)).unwrap());
    }
    opts.build(&load(name)).unwrap()
}

const BASE: &str = "https://pdo.invalid/schemas/";

#[test]
fn json_outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    pdo(&["verify", "--report", report.to_str().unwrap()]);
    let cases: Vec<(&str, Vec<u8>)> = vec![
        (
            "root",
            pdo(&["root", "--order", "3", "--depth", "3", "--format", "json"]).stdout,
        ),
        (
            "flow",
            pdo(&[
                "flow",
                "--hierarchy",
                "sl3",
                "--time",
                "4",
                "--format",
                "json",
            ])
            .stdout,
        ),
        (
            "density",
            pdo(&["density", "--time", "5", "--format", "json"]).stdout,
        ),
        (
            "check",
            pdo(&["check", "--trials", "5", "--format", "json"]).stdout,
        ),
        ("report", std::fs::read(&report).unwrap()),
    ];
    for (name, bytes) in cases {
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let errors: Vec<String> = validator(name)
            .iter_errors(&v)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
    }
    let bad = serde_json::json!({"floor": "low", "terms": []});
    assert!(!validator("psido").is_valid(&bad));
}
