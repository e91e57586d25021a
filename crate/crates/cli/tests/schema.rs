mod common;

use common::nitsche;

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn every_command_emits_schema_valid_json() {
    let v = validator();
    let runs: [&[&str]; 6] = [
        &["bound", "--a", "0.5", "--b", "0.9", "--alpha", "0.5", "--beta", "0.9"],
        &["radial", "--identity", "--a", "0.2", "--b", "0.9", "--samples", "4"],
        &["sweep", "--a-range", "0.2,0.3,2", "--b-range", "0.7,0.8,2", "--alphaH-range", "0.1,0.2,2"],
        &["verify-lemma", "--trials", "100"],
        &["verify-prop", "--surface", "sphere:0.5"],
        &["tension", "--samples", "4"],
    ];
    for args in runs {
        let r = nitsche(args);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        let j = r.json();
        let errors: Vec<String> = v.iter_errors(&j).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn schema_rejects_a_broken_report() {
    let v = validator();
    let mut j = nitsche(&["tension", "--samples", "2"]).json();
    j["schema"] = 2.into();
    assert!(!v.is_valid(&j));
}
