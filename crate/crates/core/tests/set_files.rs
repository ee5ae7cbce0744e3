use std::path::PathBuf;

use densitylab::SetSpec;

fn docs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs")
}

#[test]
fn sample_files_parse_and_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(docs().join("sets")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let spec: SetSpec = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let back: SetSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, back);
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn schema_lists_every_kind() {
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(docs().join("set-spec.schema.json")).unwrap()).unwrap();
    let kinds: Vec<&str> = schema["properties"]["kind"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let specs = [
        "explicit:1,2",
        "intervals:2-4",
        "squarefree",
        "primes",
        "full",
        "even",
        "example2:j=2,depth=1",
    ];
    for s in specs {
        let spec: SetSpec = s.parse().unwrap();
        let doc = serde_json::to_value(&spec).unwrap();
        let kind = doc["kind"].as_str().unwrap();
        assert!(kinds.contains(&kind), "{kind} not in schema");
        // only the documented top-level keys appear
        assert!(doc.as_object().unwrap().keys().all(|k| k == "kind" || k == "params"));
    }
    assert_eq!(kinds.len(), specs.len());
}

#[test]
fn malformed_documents_are_rejected() {
    for bad in [
        r#"{"kind": "explicit", "params": {"elements": [3, 1]}}"#,
        r#"{"kind": "explicit", "params": {"elements": [0, 1]}}"#,
        r#"{"kind": "example2", "params": {"j": 1, "depth": 2}}"#,
        r#"{"kind": "interval_union", "params": {"intervals": [[5, 2]]}}"#,
        r#"{"kind": "cubes"}"#,
    ] {
        assert!(serde_json::from_str::<SetSpec>(bad).is_err(), "{bad}");
    }
}
