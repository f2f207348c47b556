//! Browser bindings: each export takes the text of a `.bnd` file and returns JSON.
//!
//! The `*_json` functions are plain Rust so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use binhk::affine::{presentation_to_affine, AffineMonoid, Cancellativity};
use binhk::hk::{self, EhkResult};
use binhk::parse::{parse_document, Document, Model};
use binhk::partition;
use binhk::{Error, IdealSpec};

/// Keeps a page responsive: larger sweeps belong on the command line.
const MAX_Q: u32 = 60;

fn describe(e: Error) -> String {
    match e {
        Error::Refused {
            precondition,
            theorem,
            detail,
        } => format!("refused, needs {precondition}: {theorem} ({detail})"),
        other => other.to_string(),
    }
}

fn load(text: &str) -> Result<Document, String> {
    parse_document(text).map_err(|e| match e {
        Error::Syntax { line, col, msg } => format!("line {line}, column {col}: {msg}"),
        other => other.to_string(),
    })
}

fn find<'a>(doc: &'a Document, name: &str) -> Result<&'a Model, String> {
    doc.model(name).ok_or_else(|| {
        let known: Vec<&str> = doc.models.iter().map(|(n, _)| n.as_str()).collect();
        format!("no model `{name}` (file defines: {})", known.join(", "))
    })
}

fn as_affine(m: &Model) -> Result<AffineMonoid, String> {
    match m {
        Model::Affine(a) => Ok(a.clone()),
        other => {
            let p = other.presentation().expect("presented");
            let e = presentation_to_affine(p).map_err(describe)?;
            if let Cancellativity::Witness(..) = e.cancellativity {
                return Err("the binoid is not cancellative".into());
            }
            Ok(e.monoid)
        }
    }
}

pub fn hkf_json(text: &str, model: &str, q_min: u32, q_max: u32) -> Result<String, String> {
    if q_min == 0 || q_max < q_min {
        return Err(format!("bad range {q_min}..{q_max}"));
    }
    if q_max > MAX_Q {
        return Err(format!("q above {MAX_Q} is left to the command-line tool"));
    }
    let doc = load(text)?;
    let m = find(&doc, model)?;
    let qs: Vec<u32> = (q_min..=q_max).collect();
    let s = match m {
        Model::Affine(a) => hk::hkf_series(&qs, |q| hk::hkf_affine(a, &a.gens, q)),
        other => {
            let p = other.presentation().expect("presented");
            let ideal = IdealSpec::maximal(p.rank());
            hk::hkf_series(&qs, |q| hk::hkf(p, &ideal, q))
        }
    }
    .map_err(describe)?;
    let series: Vec<Value> = s.iter().map(|(q, c)| json!({"q": q, "count": c})).collect();
    Ok(json!({"model": model, "ideal": "max", "series": series}).to_string())
}

fn ehk_value(r: &EhkResult) -> Value {
    json!({
        "num": r.value.numer().to_string(),
        "den": r.value.denom().to_string(),
        "text": hk::format_rational(&r.value),
        "method": r.method.to_string(),
        "dim": r.dim,
        "trace": r.trace,
    })
}

pub fn ehk_json(text: &str, model: &str) -> Result<String, String> {
    let doc = load(text)?;
    let r = match find(&doc, model)? {
        Model::Affine(a) => hk::ehk_pipeline_affine(a),
        other => hk::ehk_pipeline_presentation(other.presentation().expect("presented")),
    }
    .map_err(describe)?;
    Ok(json!({"model": model, "ehk": ehk_value(&r)}).to_string())
}

pub fn partition_json(text: &str, model: &str, q: u32) -> Result<String, String> {
    if q == 0 || q > MAX_Q {
        return Err(format!("q must lie in 1..{MAX_Q}"));
    }
    let doc = load(text)?;
    let m = as_affine(find(&doc, model)?)?;
    let part = partition::components(&m, q).map_err(describe)?;
    let iso = partition::iso_classes(&part);
    let comps: Vec<Value> = part
        .components
        .iter()
        .map(|c| json!({"anchor": c.anchor, "generators": c.generators}))
        .collect();
    let classes: Vec<Value> = iso
        .classes
        .iter()
        .map(|(sig, n)| json!({"signature": sig, "count": n}))
        .collect();
    Ok(json!({
        "model": model,
        "q": q,
        "generator_count": part.generator_count(),
        "components": comps,
        "classes": classes,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn hkf(text: &str, model: &str, q_min: u32, q_max: u32) -> Result<String, JsError> {
    hkf_json(text, model, q_min, q_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ehk(text: &str, model: &str) -> Result<String, JsError> {
    ehk_json(text, model).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn partition(text: &str, model: &str, q: u32) -> Result<String, JsError> {
    partition_json(text, model, q).map_err(|e| JsError::new(&e))
}

/// Names of the models in a file, as a JSON array.
#[wasm_bindgen]
pub fn models(text: &str) -> Result<String, JsError> {
    let doc = load(text).map_err(|e| JsError::new(&e))?;
    let names: Vec<&str> = doc.models.iter().map(|(n, _)| n.as_str()).collect();
    Ok(json!(names).to_string())
}
