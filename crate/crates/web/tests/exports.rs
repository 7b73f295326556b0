use kbeq_web::{counterexample, odd_quadratic, parse_group, positive_form};
use serde_json::{json, Value};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn counterexample_export() {
    let v = parse(counterexample());
    assert_eq!(v["check"]["holds"], json!(true));
    assert_eq!(v["f"].as_array().unwrap().len(), 16);
    assert_eq!(v["f_constant_on_4x_cosets"], json!(true));
    assert_eq!(v["f_constant_on_2x_cosets"], json!(false));
    assert!(v["f_2x_violations"].as_array().unwrap().contains(&json!([[1, 1], [1, 3]])));
    assert_eq!(v["census_count"], json!(64));
}

#[test]
fn positive_form_export_round_trips() {
    let form = r#"{"group":"Z^2","p":{"matrix":[["1/8","1/16"],["1/16","-1/8"]]},"l":{"coeffs":["1/2","0"]},
        "m":{"coeffs":["0","-1/3"]},"r":{"entries":[{"coset":[0,0],"value":"0"},{"coset":[0,1],"value":"1/2"},
        {"coset":[1,0],"value":"-1/4"},{"coset":[1,1],"value":"1"}]}}"#;
    let v = parse(positive_form(form, 5));
    assert_eq!(v["check"]["holds"], json!(true));
    assert_eq!(v["log_f"].as_array().unwrap().len(), 121);
    assert_eq!(v["recovered"]["matches"], json!(true));
}

#[test]
fn positive_form_export_reports_errors() {
    assert!(parse(positive_form("{", 5))["error"].is_string());
    let form = r#"{"group":"Z","p":{"matrix":[["1"]]},"l":{"coeffs":["0"]},"m":{"coeffs":["0"]},
        "r":{"entries":[{"coset":[0],"value":"0"},{"coset":[1],"value":"0"}]}}"#;
    let v = parse(positive_form(form, 2));
    assert_eq!(v["check"]["holds"], json!(true));
    assert_eq!(v["recovered"]["error"], json!("sizing"));
}

#[test]
fn odd_quadratic_export() {
    let v = parse(odd_quadratic(4));
    assert_eq!(v["size"], json!(9));
    assert_eq!(v["check"]["holds"], json!(true));
    assert!(!v["decomposition"]["multiplicativity_witness"].is_null());
}

#[test]
fn parse_group_export() {
    assert_eq!(parse(parse_group("Z^2 x Z/4"))["rank"], json!(2));
    assert!(parse(parse_group("Z/0"))["error"].is_string());
}
