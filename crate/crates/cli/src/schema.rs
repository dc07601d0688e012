use serde_json::{json, Value};

fn edge_list() -> Value {
    json!({
        "type": "array",
        "items": { "type": "array", "items": { "type": "integer", "minimum": 0 }, "minItems": 2, "maxItems": 2 }
    })
}

fn network() -> Value {
    json!({
        "type": "object",
        "required": ["n", "m", "state_edges", "input_edges"],
        "properties": {
            "n": { "type": "integer", "minimum": 1 },
            "m": { "type": "integer", "minimum": 1 },
            "state_edges": edge_list(),
            "input_edges": edge_list(),
            "labels": { "type": "object", "additionalProperties": { "type": "string" } }
        }
    })
}

fn extended() -> Value {
    let mut doc = network();
    doc["required"] = json!(["n", "m", "state_edges", "input_edges", "orders", "heterogeneous"]);
    let props = doc["properties"].as_object_mut().unwrap();
    props.insert("orders".into(), json!({ "type": "array", "items": { "type": "integer", "minimum": 1 } }));
    props.insert("heterogeneous".into(), json!({ "type": "array", "items": { "type": "boolean" } }));
    props.insert("copy_edges".into(), json!({ "type": "array" }));
    props.insert("copy_input_edges".into(), json!({ "type": "array" }));
    doc
}

fn report() -> Value {
    json!({
        "type": "object",
        "required": ["tool", "version", "command", "seed", "input_digest", "result"],
        "properties": {
            "tool": { "const": "structctl" },
            "version": { "type": "string" },
            "command": { "enum": ["analyze", "classify", "extend", "bounds", "verify"] },
            "seed": { "type": ["integer", "null"] },
            "input_digest": { "type": ["string", "null"], "pattern": "^sha256:[0-9a-f]{64}$" },
            "result": { "type": "object" }
        }
    })
}

pub fn all() -> Value {
    json!({
        "network": network(),
        "extended_network": extended(),
        "report": report(),
    })
}
