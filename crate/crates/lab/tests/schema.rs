//! Reports against `docs/report.schema.json`. The validator below covers
//! the keywords that schema uses: `type`, `required`, `properties`,
//! `additionalProperties`, `items`, `enum`, `const`, `minimum`, `$ref`.

use std::process::Command;

use serde_json::Value;

fn resolve<'a>(root: &'a Value, schema: &'a Value) -> &'a Value {
    match schema.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let name = r.strip_prefix("#/$defs/").expect("local refs only");
            resolve(root, &root["$defs"][name])
        }
        None => schema,
    }
}

fn validate(root: &Value, schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = resolve(root, schema);
    if let Some(c) = schema.get("const") {
        if c != v {
            errors.push(format!("{path}: expected {c}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            errors.push(format!("{path}: {v} not in {options:?}"));
        }
    }
    match schema.get("type").and_then(Value::as_str) {
        Some("object") => {
            let Some(obj) = v.as_object() else { return errors.push(format!("{path}: not an object")) };
            for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
                if !obj.contains_key(key.as_str().unwrap()) {
                    errors.push(format!("{path}: missing {key}"));
                }
            }
            let props = schema.get("properties").and_then(Value::as_object);
            for (key, value) in obj {
                let sub = format!("{path}.{key}");
                match (props.and_then(|p| p.get(key)), schema.get("additionalProperties")) {
                    (Some(s), _) => validate(root, s, value, &sub, errors),
                    (None, Some(Value::Bool(false))) => errors.push(format!("{sub}: not allowed")),
                    (None, Some(s @ Value::Object(_))) => validate(root, s, value, &sub, errors),
                    (None, _) => {}
                }
            }
        }
        Some("array") => {
            let Some(items) = v.as_array() else { return errors.push(format!("{path}: not an array")) };
            if let Some(s) = schema.get("items") {
                for (i, item) in items.iter().enumerate() {
                    validate(root, s, item, &format!("{path}[{i}]"), errors);
                }
            }
        }
        Some("integer") => {
            let ok = v.as_u64().is_some() || v.as_i64().is_some();
            let min_ok =
                schema.get("minimum").and_then(Value::as_i64).is_none_or(|m| v.as_i64().is_none_or(|x| x >= m));
            if !ok || !min_ok {
                errors.push(format!("{path}: not a valid integer"));
            }
        }
        Some("string") if !v.is_string() => errors.push(format!("{path}: not a string")),
        _ => {}
    }
}

fn report(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_container-lab")).args(args).output().unwrap();
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reports_match_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")))
            .unwrap();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("schema");
    std::fs::create_dir_all(&dir).unwrap();
    let star = dir.join("star.json");
    std::fs::write(&star, r#"{"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}"#).unwrap();
    let star = star.to_str().unwrap();
    let reports = [
        report(&["verify", "--suite", "hardcore-lemmas", "--corpus", "random", "--count", "6"]),
        report(&["verify", "--suite", "cover-lemmas", "--input", star]),
        report(&["verify", "--suite", "efficient", "--input", star]),
        report(&["containers", "--input", star, "--mode", "interpolating", "--p", "1/4", "--delta", "1/4", "--all"]),
        report(&["containers", "--input", star, "--mode", "cover", "--p", "1/32", "--input-set", "1,2"]),
    ];
    for r in &reports {
        let mut errors = Vec::new();
        validate(&schema, &schema, r, "$", &mut errors);
        assert!(errors.is_empty(), "{errors:?}");
    }
    let mut errors = Vec::new();
    let mut broken = reports[0].clone();
    broken["instances"][0]["status"] = "ok".into();
    broken["surprise"] = 1.into();
    validate(&schema, &schema, &broken, "$", &mut errors);
    assert_eq!(errors.len(), 2, "{errors:?}");
}
