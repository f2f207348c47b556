//! JSON and CSV rendering. Field order is fixed by the struct definitions.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use binhk::hk::EhkResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Point {
    pub q: u32,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Ehk {
    pub num: Value,
    pub den: Value,
    pub method: String,
    pub trace: Vec<String>,
    pub dim: usize,
}

impl Ehk {
    pub fn from_result(r: &EhkResult) -> Self {
        Ehk {
            num: big(r.value.numer()),
            den: big(r.value.denom()),
            method: r.method.to_string(),
            trace: r.trace.clone(),
            dim: r.dim,
        }
    }

    /// `p/q` text; exact for arbitrarily large values.
    pub fn fraction(&self) -> String {
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if show(&self.den) == "1" {
            show(&self.num)
        } else {
            format!("{}/{}", show(&self.num), show(&self.den))
        }
    }
}

/// Integers that fit in i64 become JSON numbers, larger ones decimal strings.
fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// Output of `hkf` and `ehk`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SeriesReport {
    pub model: String,
    pub ideal: String,
    pub series: Vec<Point>,
    pub ehk: Option<Ehk>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpecReport {
    pub model: String,
    pub primes: Vec<Vec<String>>,
    pub minimal_primes: Vec<Vec<String>>,
    pub combinatorial_dimension: usize,
    pub rank_dimension: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NormalizeReport {
    pub model: String,
    pub rank: usize,
    pub already_normal: bool,
    pub generators: Vec<Vec<i64>>,
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SmashReport {
    pub left: String,
    pub right: String,
    pub presentation: String,
    pub combinatorial_dimension: usize,
    pub series: Vec<Point>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComponentOut {
    pub anchor: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ClassOut {
    pub signature: Vec<Vec<i64>>,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PartitionReport {
    pub model: String,
    pub q: u32,
    /// Coordinates of anchors and generators.
    pub coordinates: String,
    pub generator_count: u64,
    pub components: Vec<ComponentOut>,
    pub classes: Vec<ClassOut>,
    pub ambiguous: bool,
    pub max_generator_level: i64,
    pub window_constant: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Series(SeriesReport),
    Spec(SpecReport),
    Normalize(NormalizeReport),
    Smash(SmashReport),
    Partition(PartitionReport),
}

/// Machine-readable description of a refused computation.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Refusal {
    pub precondition: String,
    pub theorem: String,
    pub detail: String,
}

#[derive(Serialize)]
struct RefusalDoc<'a> {
    refusal: &'a Refusal,
}

pub fn refusal_json(r: &Refusal) -> String {
    let mut s = serde_json::to_string_pretty(&RefusalDoc { refusal: r }).expect("serializable");
    s.push('\n');
    s
}

pub fn render(report: &Report, format: Format) -> String {
    let mut out = match format {
        Format::Json => {
            let v = match report {
                Report::Series(r) => serde_json::to_string_pretty(r),
                Report::Spec(r) => serde_json::to_string_pretty(r),
                Report::Normalize(r) => serde_json::to_string_pretty(r),
                Report::Smash(r) => serde_json::to_string_pretty(r),
                Report::Partition(r) => serde_json::to_string_pretty(r),
            };
            v.expect("reports are serializable")
        }
        Format::Csv => csv(report),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

/// Quote a CSV field when needed.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn vector(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn series_rows(out: &mut String, model: &str, ideal: &str, series: &[Point]) {
    out.push_str("model,ideal,q,count\n");
    for p in series {
        out.push_str(&format!(
            "{},{},{},{}\n",
            field(model),
            field(ideal),
            p.q,
            p.count
        ));
    }
}

fn csv(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Series(r) => {
            if !r.series.is_empty() || r.ehk.is_none() {
                series_rows(&mut out, &r.model, &r.ideal, &r.series);
            }
            if let Some(e) = &r.ehk {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str("model,ideal,ehk,method,dim\n");
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    field(&r.model),
                    field(&r.ideal),
                    e.fraction(),
                    e.method,
                    e.dim
                ));
            }
        }
        Report::Spec(r) => {
            out.push_str("model,prime,minimal\n");
            for p in &r.primes {
                out.push_str(&format!(
                    "{},{},{}\n",
                    field(&r.model),
                    field(&p.join(" ")),
                    r.minimal_primes.contains(p)
                ));
            }
            out.push_str(&format!(
                "\ncombinatorial_dimension,{}\nrank_dimension,{}\n",
                r.combinatorial_dimension, r.rank_dimension
            ));
        }
        Report::Normalize(r) => {
            out.push_str("model,generator\n");
            for g in &r.generators {
                out.push_str(&format!("{},{}\n", field(&r.model), vector(g)));
            }
            out.push_str(&format!(
                "\ntorsion,{}\nalready_normal,{}\n",
                vector(&r.torsion),
                r.already_normal
            ));
        }
        Report::Smash(r) => {
            out.push_str(&format!(
                "presentation,{}\ncombinatorial_dimension,{}\n\n",
                field(&r.presentation),
                r.combinatorial_dimension
            ));
            let name = format!("{}^{}", r.left, r.right);
            series_rows(&mut out, &name, "max", &r.series);
        }
        Report::Partition(r) => {
            out.push_str("model,q,anchor,generator\n");
            for c in &r.components {
                for g in &c.generators {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        field(&r.model),
                        r.q,
                        vector(&c.anchor),
                        vector(g)
                    ));
                }
            }
            out.push_str("\nsignature,count\n");
            for c in &r.classes {
                let sig: Vec<String> = c.signature.iter().map(|g| vector(g)).collect();
                out.push_str(&format!("{},{}\n", field(&sig.join(";")), c.count));
            }
        }
    }
    out
}
