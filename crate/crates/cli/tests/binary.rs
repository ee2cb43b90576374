use std::process::{Command, Output};

use serde_json::Value;

fn starforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starforge")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn commutator_example() {
    let out = starforge(&["commutator", "q", "p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"result":"I*lam"}"#);
}

#[test]
fn region_example() {
    let out = starforge(&["region", "(q) + I*(p)", "--lambda", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &stdout_json(&out)["result"];
    assert_eq!(r["minimum"], "-1/3");
    assert_eq!(r["area"], "pi*1/3");
    assert_eq!(r["center"], serde_json::json!(["0", "0"]));
}

#[test]
fn bullet_axioms_fail_on_the_commutator() {
    let out = starforge(&["axioms", "--product", "bullet", "--degree", "2", "--order", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let axioms = stdout_json(&out)["result"]["axioms"].as_array().unwrap().clone();
    let six = axioms.iter().find(|a| a["axiom"] == 6).unwrap();
    assert_eq!(six["verdict"], "fail");
    assert_eq!(six["counterexample"]["inputs"], serde_json::json!(["q", "p"]));
    let failing: Vec<_> = axioms.iter().filter(|a| a["verdict"] == "fail").map(|a| a["axiom"].as_u64().unwrap()).collect();
    assert_eq!(failing, vec![6]);
}

#[test]
fn moyal_axioms_pass() {
    let out = starforge(&["axioms", "--degree", "2", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_2_with_offset() {
    let out = starforge(&["star", "q +* p", "q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let e = &stderr_json(&out)["error"];
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["offset"], 3);
}

#[test]
fn usage_and_engine_errors_exit_2() {
    for args in [
        &["star", "q"][..],
        &["frobnicate"],
        &["star", "q", "p", "--product", "weyl"],
        &["star", "gauss(1)", "gauss(1)"],
        &["region", "q^2"],
        &["trace", "q"],
        &["star", "q2", "p"],
        &["normalize", "delta(0,0) - delta(1,1)"],
        &["eigencheck", "q", "1"],
        &["region", "q + I*p", "--lambda", "0"],
    ] {
        let out = starforge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["error"]["message"].is_string(), "{args:?}");
    }
}

#[test]
fn verdict_failures_exit_1() {
    let out = starforge(&["positivity", "delta(0,0)", "q + I*p"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &stdout_json(&out)["result"];
    assert_eq!(r["positive"], false);
    assert_eq!(r["counterexample"]["value"], "-1");
    let out = starforge(&["eigencheck", "q", "1", "density(gauss(1))", "--product", "bullet"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn states_and_eigenfunctions() {
    let out = starforge(&["positivity", "delta(0,0)", "q + I*p", "--product", "bullet"]);
    assert_eq!(out.status.code(), Some(0));
    let out = starforge(&["normalize", "density(gauss(1))"]);
    assert_eq!(stdout_json(&out)["result"]["functional"], "pi^-1*lam*density(gauss(1))");
    for (n, e) in [(0, "1/4"), (1, "3/4"), (3, "7/4")] {
        let level = n.to_string();
        let out = starforge(&["eigencheck", "1/2*q^2 + 1/2*p^2", e, "--wigner", &level, "--lambda", "1/2"]);
        assert_eq!(out.status.code(), Some(0), "level {n}");
    }
    let out = starforge(&["eigencheck", "1/2*q^2 + 1/2*p^2", "1/4", "--wigner", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["star", "gauss(1)*q", "p^2 + lam*q"][..],
        &["positivity", "delta(0,0) + lam*density(gauss(1))", "--seed", "5", "--random", "3"],
        &["axioms", "--degree", "1", "--order", "2", "--pairs", "2"],
        &["normalize", "2*delta(0,0) + lam*density(q^2*gauss(1))", "--json"],
    ] {
        let a = starforge(args);
        let b = starforge(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn seeds_change_random_witnesses() {
    let a = stdout_json(&starforge(&["positivity", "delta(0,0)", "--seed", "1", "--product", "bullet"]));
    let b = stdout_json(&starforge(&["positivity", "delta(0,0)", "--seed", "2", "--product", "bullet"]));
    assert_ne!(a["result"]["values"], b["result"]["values"]);
    assert_eq!(a["result"]["values"].as_array().unwrap().len(), 6);
}

#[test]
fn json_mode_round_trips_through_the_engine_schema() {
    let out = starforge(&["star", "q", "p", "--json"]);
    let v = &stdout_json(&out)["result"];
    let f = starforge_core::json::function_from_json(v).unwrap();
    assert_eq!(starforge_core::series::FunctionDisplay(&f).to_string(), "q*p + 1/2*I*lam");
}
