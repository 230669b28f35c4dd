use quantum_macwilliams::rational;
use quantum_macwilliams::WeightEnumerator;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["qmw"];
    argv.extend_from_slice(args);
    let code = qmw::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert!(code == 0 || code == 3, "exit {code}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn enumerator_json_round_trips() {
    for code in ["five_qubit", "steane_7", "bell", "trivial_3"] {
        let v = json(&["enumerate", code, "--json"]);
        for key in ["A", "B"] {
            let e = &v["paths"][0][key];
            let parsed = WeightEnumerator::from_json(&e.to_string()).unwrap();
            assert_eq!(serde_json::to_value(&parsed).unwrap(), *e);
        }
    }
}

#[test]
fn text_and_json_agree() {
    for code in ["five_qubit", "shor_9", "bell"] {
        let v = json(&["enumerate", code, "--json"]);
        let (_, text, _) = run(&["enumerate", code]);
        for key in ["A", "B"] {
            let e: WeightEnumerator = serde_json::from_value(v["paths"][0][key].clone()).unwrap();
            assert!(text.contains(&e.to_string()), "{code}: {text}");
        }
    }

    let v = json(&["transform", "--n", "5", "--k", "1", "--a", "1,0,0,0,15,0", "--json"]);
    let (_, text, _) = run(&["transform", "--n", "5", "--k", "1", "--a", "1,0,0,0,15,0"]);
    let b: WeightEnumerator = serde_json::from_value(v["output"].clone()).unwrap();
    assert_eq!(b.to_string(), "B=(1,0,0,30,15,18)");
    assert!(text.contains("B=(1,0,0,30,15,18)"));

    let v = json(&["krawtchouk", "--n", "3", "--json"]);
    let (_, text, _) = run(&["krawtchouk", "--n", "3"]);
    let from_json: Vec<Vec<String>> = serde_json::from_value(v["rows"].clone()).unwrap();
    let from_text: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect();
    assert_eq!(from_json, from_text);

    let v = json(&["fidelity", "five_qubit", "--p", "9/10", "--json"]);
    let (_, text, _) = run(&["fidelity", "five_qubit", "--p", "0.9"]);
    for key in ["entanglement_poly", "average_poly", "average_poly_per_dimension"] {
        assert!(text.contains(v[key].as_str().unwrap()), "{key}: {text}");
    }

    let v = json(&["exists", "--n", "5", "--k", "1", "--t", "1", "--json"]);
    let (_, text, _) = run(&["exists", "--n", "5", "--k", "1", "--t", "1"]);
    let a: WeightEnumerator = serde_json::from_value(v["witness_a"].clone()).unwrap();
    assert!(text.contains(&a.to_string()));
}

#[test]
fn inverse_transform_and_rationals() {
    let v = json(&["transform", "--n", "5", "--k", "1", "--a", "1,0,0,30,15,18", "--inverse", "--json"]);
    let a: WeightEnumerator = serde_json::from_value(v["output"].clone()).unwrap();
    assert_eq!(rational::format_list(&a.coeffs), "1,0,0,0,15,0");
    let v = json(&["transform", "--n", "1", "--k", "0", "--a", "1/2,-1/3", "--json"]);
    assert_eq!(v["output"]["coeffs"], serde_json::json!(["1/12", "11/12"]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["exists", "--n", "9", "--k", "1", "--t", "2"]).0, 3);
    assert_eq!(run(&["exists", "--n", "10", "--k", "1", "--t", "2"]).0, 0);
    assert_eq!(run(&["verify-kl", "bell", "--t", "2"]).0, 2);
    assert_eq!(run(&["verify-kl", "trivial_3", "--t", "1"]).0, 4);
    assert_eq!(run(&["verify-kl", "steane_7", "--t", "1"]).0, 0);

    let (code, _, err) = run(&["enumerate", "no_such_code"]);
    assert_eq!(code, 2);
    assert!(err.contains("no_such_code"), "{err}");
    let (code, _, err) = run(&["exists", "--n", "3", "--k", "1", "--t", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains('t'), "{err}");
    let (code, _, err) = run(&["fidelity", "five_qubit", "--p", "3/2"]);
    assert_eq!(code, 2);
    assert!(err.contains('p'), "{err}");
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["scan", "--max-n", "31", "--k", "1", "--t", "1"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn fidelity_with_simulation() {
    let v = json(&["fidelity", "five_qubit", "--p", "0.99", "--simulate", "--json"]);
    assert!(v["entanglement_difference"].as_f64().unwrap().abs() < 1e-9);
    assert!(v["average_difference"].as_f64().unwrap().abs() < 1e-9);
    let (_, text, _) = run(&["fidelity", "bell", "--p", "1", "--simulate"]);
    assert!(text.contains("simulated entanglement 1"), "{text}");
}

#[test]
fn code_files() {
    let dir = std::env::temp_dir().join(format!("qmw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("five.code");
    let text = quantum_macwilliams::builtin("five_qubit").unwrap().to_text();
    std::fs::write(&path, text).unwrap();
    let (code, out, err) = run(&["enumerate", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("A=(1,0,0,0,15,0)"));
    std::fs::write(&path, "stabilizer 5\nXZQ\n").unwrap();
    assert_eq!(run(&["enumerate", path.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
