use std::process::{Command, Output};

use serde_json::Value;

fn iet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn no_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(a) => a.iter().all(no_numbers),
        Value::Object(m) => m.values().all(no_numbers),
        _ => true,
    }
}

#[test]
fn period_of_a_quarter() {
    let o = iet(&["period", "--map", "TN:2", "--x", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"period\":\"10\"}\n");
}

#[test]
fn nine_periods() {
    let o = iet(&["decompose", "--map", "R:42,7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let periods: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["period"].as_str().unwrap())
        .collect();
    assert_eq!(
        periods,
        [
            "272",
            "2002",
            "105252",
            "125986",
            "9515623638834",
            "13883349533760",
            "35513020871128",
            "43184371863572",
            "70542359811724"
        ]
    );
    assert_eq!(v["domain_length"], "5/42");
}

#[test]
fn decompose_with_oracle_and_checks() {
    let o = iet(&[
        "decompose",
        "--map",
        "R:12,4",
        "--oracle",
        "lattice",
        "--cross-validate",
        "5",
        "--divisibility",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["oracle"]["modulus"], "27720");
    assert_eq!(v["oracle"]["points"], "4620");
    assert_eq!(
        v["cross_validation"]["mismatches"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
    assert!(no_numbers(&v));
}

#[test]
fn oracle_over_cap_keeps_the_spectrum() {
    let o = iet(&["decompose", "--map", "R:42,7", "--oracle", "lattice"]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert!(v["oracle"]["error"].as_str().unwrap().contains("cap"));
    assert_eq!(v["entries"].as_array().unwrap().len(), 9);
}

#[test]
fn return_lemma_suite() {
    let o = iet(&["verify", "--suite", "return-lemma", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn suites_pass_or_fail_honestly() {
    for suite in ["key-lemma", "conjugacy", "vdc"] {
        let o = iet(&["verify", "--suite", suite, "--samples", "100"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
    // one of the claimed identities does not hold; the suite says so
    let o = iet(&["verify", "--suite", "remark-identities"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failing: Vec<&str> = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["T_1^8 on [1/15,1/10) = R_{15,10}"]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["period", "--map", "TN:2", "--x", "1/0"][..],
        &["period", "--map", "TN:2", "--x", "one"],
        &["period", "--map", "Q:2", "--x", "1/4"],
        &["decompose", "--map", "TN:1"],
        &["decompose", "--map", "R:6,3", "--oracle", "sieve"],
        &["frobnicate"],
    ] {
        let o = iet(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn caps_exit_3() {
    let o = iet(&[
        "period",
        "--map",
        "TN:2",
        "--x",
        "1/4",
        "--iteration-cap",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "{\"cap_reached\":\"5\"}\n");
    let o = iet(&["return-map", "--map", "TN:1", "--target", "0,1/6"]);
    assert_eq!(o.status.code(), Some(3));
    let o = iet(&["address", "--N", "1", "--x", "1/5", "--depth", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_reproducible() {
    let args = [
        "decompose",
        "--map",
        "R:15,10",
        "--cross-validate",
        "20",
        "--seed",
        "11",
    ];
    let a = iet(&args);
    let b = iet(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = iet(&[
        "decompose",
        "--map",
        "R:15,10",
        "--cross-validate",
        "20",
        "--seed",
        "12",
    ]);
    assert_eq!(json(&a)["entries"], json(&c)["entries"]);
    let svg = ["render", "--what", "fig1", "--pieces", "8"];
    assert_eq!(iet(&svg).stdout, iet(&svg).stdout);
}

#[test]
fn config_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("iet-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# test\noutput_format = csv\niteration_cap = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = iet(&["--config", cfg, "decompose", "--map", "R:6,3"]);
    assert_eq!(stdout(&o), "period,measure\n10,1/6\n");
    let o = iet(&["--config", cfg, "period", "--map", "TN:2", "--x", "1/4"]);
    assert_eq!(o.status.code(), Some(3));
    let o = iet(&[
        "--config",
        cfg,
        "--iteration-cap",
        "100",
        "--format",
        "json",
        "period",
        "--map",
        "TN:2",
        "--x",
        "1/4",
    ]);
    assert_eq!(stdout(&o), "{\"period\":\"10\"}\n");
    std::fs::write(dir.join("bad.conf"), "iteration_cap = 0\n").unwrap();
    let o = iet(&[
        "--config",
        dir.join("bad.conf").to_str().unwrap(),
        "show-config",
    ]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn file_maps_round_trip() {
    let dir = std::env::temp_dir().join(format!("iet-cli-map-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = iet(&[
        "compose",
        "--map",
        "TN:1",
        "--target",
        "1/42,1/7",
        "--steps",
        "4",
        "--require-invariant",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut v = json(&o);
    assert_eq!(v["invariant"], true);
    v.as_object_mut().unwrap().remove("invariant");
    let path = dir.join("r.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let from_file = iet(&["decompose", "--map", &spec]);
    let direct = iet(&["decompose", "--map", "R:42,7"]);
    assert_eq!(from_file.stdout, direct.stdout);
    // an exchange whose images overlap is rejected
    std::fs::write(
        &path,
        r#"{"domain":{"lo":"0","hi":"1"},"pieces":[{"lo":"0","hi":"1/2","translation":"0"},{"lo":"1/2","hi":"1","translation":"-1/2"}]}"#,
    )
    .unwrap();
    assert_eq!(iet(&["decompose", "--map", &spec]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cantor_and_friends() {
    let v = json(&iet(&["cantor", "--N", "1", "--levels", "2"]));
    assert_eq!(v["lengths"], serde_json::json!(["1", "1/2", "1/6"]));
    assert_eq!(v["levels"][1][1]["word"], "1");
    assert_eq!(v["levels"][2].as_array().unwrap().len(), 4);
    let v = json(&iet(&["classify", "--N", "1", "--x", "1/4"]));
    assert_eq!(
        v,
        serde_json::json!({"verdict": "periodic", "word": "0", "period": "20"})
    );
    let v = json(&iet(&["classify", "--N", "1", "--x", "0", "--depth", "6"]));
    assert_eq!(v["verdict"], "in_cantor_prefix");
    let v = json(&iet(&["content", "--N", "1", "--d", "1", "--k", "3"]));
    assert_eq!(v, serde_json::json!({"kind": "exact", "value": "2/21"}));
    let o = iet(&["render", "--what", "cantor", "--N", "2", "--levels", "3"]);
    assert!(stdout(&o).starts_with("<?xml") && stdout(&o).contains("version=\"1.1\""));
    let o = iet(&[
        "orbit", "--map", "TN:1", "--x", "0", "--steps", "4", "--format", "csv",
    ]);
    assert_eq!(stdout(&o), "step,point\n0,0\n1,1/2\n2,1/3\n3,5/6\n4,1/7\n");
}
