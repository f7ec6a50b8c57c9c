use std::process::{Command, Output};

fn cobar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn build_sphere_json() {
    let o = cobar(&["build", "--space", "sphere:2", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    let counts: Vec<usize> = v["generators"].as_array().unwrap().iter().map(|g| g.as_array().unwrap().len()).collect();
    assert_eq!(counts, [1, 0, 1]);
    assert!(v["faces"].as_object().unwrap().keys().all(|k| k.contains('/')));
}

#[test]
fn build_round_trips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("cobar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    let p = path.to_str().unwrap();
    assert!(cobar(&["build", "--space", "quotient:4,1", "--format", "json", "--out", p]).status.success());
    let direct = cobar(&["homology", "--space", "cobar:quotient:4,1", "--bound", "2"]);
    let loaded = cobar(&["homology", "--space", &format!("cobar:{p}"), "--bound", "2"]);
    assert!(loaded.status.success(), "{}", String::from_utf8_lossy(&loaded.stderr));
    assert_eq!(stdout(&direct), stdout(&loaded));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn build_product_and_simplex() {
    let o = cobar(&["build", "--space", "product:sphere:2,sphere:2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4\t6\t"));
    assert!(cobar(&["build", "--space", "delta:3"]).status.success());
}

#[test]
fn unknown_space_and_bad_json_fail() {
    let o = cobar(&["build", "--space", "torus:2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("torus:2"));
    let dir = std::env::temp_dir().join(format!("cobar-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"generators\": 3}").unwrap();
    assert!(!cobar(&["build", "--space", path.to_str().unwrap()]).status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn diagonal_both_reports_equal() {
    let o = cobar(&["diagonal", "--space", "sphere:2", "--method", "both", "--bound", "6", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["verdict"], "equal");
}

#[test]
fn baues_expansion_of_a_three_cell() {
    let o = cobar(&["diagonal", "--space", "quotient:3,1", "--method", "baues", "--bound", "2", "--format", "json"]);
    let v = json(&o);
    let top = v["generators"].as_array().unwrap().iter().find(|g| g["degree"] == 2).unwrap();
    assert_eq!(top["image"].as_array().unwrap().len(), 4);
}

#[test]
fn diagonal_rejects_edges() {
    let o = cobar(&["diagonal", "--space", "delta:2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("1-reduced"));
}

#[test]
fn verify_all_on_the_two_sphere() {
    let o = cobar(&["verify", "--space", "sphere:2", "--bound", "5", "--properties", "all", "--format", "json"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let reports = json(&o);
    let reports = reports.as_array().unwrap();
    assert!(reports.len() > 11);
    for r in reports {
        for key in ["property", "space", "bound", "status", "witnesses"] {
            assert!(r.get(key).is_some());
        }
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn verify_product_baues_equality() {
    let o = cobar(&["verify", "--space", "product:sphere:2,sphere:2", "--bound", "5", "--properties", "baues-eq"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn injected_mutation_fails_coassoc_with_witness() {
    let o = cobar(&["verify", "--space", "sphere:2", "--properties", "coassoc", "--mutate", "--seed", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let reports = json(&o);
    let coassoc = reports.as_array().unwrap().iter().find(|r| r["property"].as_str().unwrap().contains("(ψ⊗1)ψ")).unwrap();
    assert_eq!(coassoc["status"], "fail");
    assert!(!coassoc["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_property_is_an_error() {
    let o = cobar(&["verify", "--space", "sphere:2", "--properties", "d2,nonsense"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense"));
}

#[test]
fn bound_must_be_positive() {
    assert!(!cobar(&["verify", "--space", "sphere:2", "--bound", "0"]).status.success());
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--space", "sphere:3", "--bound", "4", "--properties", "coassoc,baues-eq", "--mutations", "6", "--seed", "5", "--format", "json"];
    assert_eq!(stdout(&cobar(&args)), stdout(&cobar(&args)));
}

#[test]
fn homology_tables() {
    let o = cobar(&["homology", "--space", "cobar:sphere:2", "--bound", "4"]);
    assert_eq!(stdout(&o), "H_0\tℤ\nH_1\tℤ\nH_2\tℤ\nH_3\tℤ\nH_4\tℤ\n");
    let o = cobar(&["homology", "--space", "sphere:3", "--bound", "3", "--format", "json"]);
    let groups: Vec<String> = json(&o)["groups"].as_array().unwrap().iter().map(|g| g["group"].as_str().unwrap().to_string()).collect();
    assert_eq!(groups, ["ℤ", "0", "0", "ℤ"]);
    let o = cobar(&["homology", "--space", "twisted-cobar:sphere:2", "--bound", "4"]);
    assert_eq!(stdout(&o), "H_0\tℤ\nH_1\t0\nH_2\t0\nH_3\t0\nH_4\t0\n");
}
