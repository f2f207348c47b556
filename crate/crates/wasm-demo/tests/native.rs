use binhk_wasm_demo::{ehk_json, hkf_json, partition_json};
use serde_json::Value;

const FILE: &str = "
binoid N { gens: x y; }
binoid F { gens: X Y Z; rel: X + 3Y = 4Z; }
binoid Nil { gens: x; rel: 2x = inf; }
affine Cusp { dim: 1; gen: 2; gen: 3; }
";

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn series() {
    let v = parse(hkf_json(FILE, "N", 1, 4).unwrap());
    let c: Vec<u64> = v["series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["count"].as_u64().unwrap())
        .collect();
    assert_eq!(c, vec![1, 4, 9, 16]);
    let v = parse(hkf_json(FILE, "Cusp", 5, 5).unwrap());
    assert_eq!(v["series"][0]["count"], 10);
}

#[test]
fn multiplicity() {
    let v = parse(ehk_json(FILE, "F").unwrap());
    assert_eq!(v["ehk"]["text"], "13/4");
    assert_eq!(v["ehk"]["num"], "13");
    let err = ehk_json(FILE, "Nil").unwrap_err();
    assert!(err.contains("reduced"), "{err}");
}

#[test]
fn partition() {
    let v = parse(partition_json(FILE, "Cusp", 7).unwrap());
    assert_eq!(v["generator_count"], 14);
    let v = parse(partition_json(FILE, "N", 3).unwrap());
    assert_eq!(v["generator_count"], 9);
}

#[test]
fn errors_are_messages() {
    assert!(hkf_json(FILE, "Missing", 1, 2)
        .unwrap_err()
        .contains("N, F"));
    assert!(hkf_json(FILE, "N", 3, 2).is_err());
    assert!(hkf_json(FILE, "N", 1, 1000).is_err());
    assert!(ehk_json("binoid {", "N")
        .unwrap_err()
        .starts_with("line 1, column"));
}
