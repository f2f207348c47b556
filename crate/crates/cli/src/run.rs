//! Argument model and dispatch to the library.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use binhk::affine::{presentation_to_affine, AffineEmbedding, AffineMonoid, Cancellativity, Elem};
use binhk::boxq::{box_quotient_with, BoxOptions, DEFAULT_LEVEL_CAP};
use binhk::hk::{self, hkf_affine_capped, hkf_series, EhkResult, Method};
use binhk::parse::{parse_document, Document, Model};
use binhk::partition;
use binhk::spectrum;
use binhk::{Error, IdealSpec, Presentation};

use crate::cache::{Cache, CacheKey};
use crate::emit::*;

#[derive(Debug, Parser)]
#[command(
    name = "binhk",
    version,
    about = "Hilbert-Kunz functions and multiplicities of binoids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Model file (.bnd).
    #[arg(short = 'i', long = "input", global = true)]
    pub input: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads for engine work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Result cache directory; falls back to $BINHK_CACHE, otherwise no cache.
    #[arg(long = "cache-dir", env = "BINHK_CACHE", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Largest number of enumerated points per computation.
    #[arg(long = "level-cap", default_value_t = DEFAULT_LEVEL_CAP, value_parser = positive_usize, global = true)]
    pub level_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Box,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EhkMethod {
    Pipeline,
    Volume,
    Fit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QRange {
    pub start: u32,
    pub end: u32,
}

impl QRange {
    pub fn values(&self) -> Vec<u32> {
        (self.start..=self.end).collect()
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// `A..B` (inclusive) or a single `Q`.
pub fn parse_q_range(s: &str) -> Result<QRange, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if start == 0 {
        return Err("q starts at 1".into());
    }
    if end < start {
        return Err(format!("empty range {start}..{end}"));
    }
    Ok(QRange { start, end })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert-Kunz function over a range of q.
    Hkf {
        #[arg(long)]
        model: String,
        /// Ideal declared in the file (default: the maximal ideal).
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, value_parser = parse_q_range)]
        q: QRange,
        #[arg(long, value_enum)]
        engine: Option<Engine>,
    },
    /// Hilbert-Kunz multiplicity.
    Ehk(EhkArgs),
    /// Prime ideals and both dimensions.
    Spec {
        #[arg(long)]
        model: String,
    },
    /// Hilbert basis of the normalization.
    Normalize {
        #[arg(long)]
        model: String,
    },
    /// Smash product of two presented binoids.
    Smash {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Also count the maximal-ideal function of the product.
        #[arg(long, value_parser = parse_q_range)]
        q: Option<QRange>,
    },
    /// Components and generators of N acting on itself through q.
    Partition {
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
    },
}

#[derive(Debug, Args)]
pub struct EhkArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub ideal: Option<String>,
    #[arg(long, value_enum, default_value = "pipeline")]
    pub method: EhkMethod,
    /// Sample range for `--method fit`.
    #[arg(long, value_parser = parse_q_range)]
    pub q: Option<QRange>,
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const REFUSED: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub refusal: Option<Refusal>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INPUT,
            message: message.into(),
            refusal: None,
        }
    }

    fn refused(precondition: &str, theorem: &str, detail: impl Into<String>) -> Self {
        let refusal = Refusal {
            precondition: precondition.into(),
            theorem: theorem.into(),
            detail: detail.into(),
        };
        Failure {
            code: exit::REFUSED,
            message: format!("refused: {} ({})", refusal.precondition, refusal.detail),
            refusal: Some(refusal),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Refused {
                precondition,
                theorem,
                detail,
            } => Failure::refused(&precondition, &theorem, detail),
            Error::NotPrimary(detail) => Failure::refused(
                "ideal primary to the maximal ideal",
                "the residue classes of N modulo [q]I are finite in number only when I is primary",
                detail,
            ),
            Error::PrimaryUnknown { bound } => Failure::refused(
                "ideal primary to the maximal ideal",
                "the residue classes of N modulo [q]I are finite in number only when I is primary",
                format!("no pure power of a generator found in the ideal up to multiple {bound}"),
            ),
            Error::ResourceCap(_) | Error::Overflow(_) => Failure {
                code: exit::RESOURCE,
                message: message.clone(),
                refusal: Some(Refusal {
                    precondition: "computation within resource caps".into(),
                    theorem: "none: the value exists but was not computed".into(),
                    detail: message,
                }),
            },
            _ => Failure::input(message),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

pub fn load(path: &PathBuf) -> Outcome<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::input(format!("{}:{e}", path.display())))
}

fn model<'a>(doc: &'a Document, name: &str) -> Outcome<&'a Model> {
    doc.model(name)
        .ok_or_else(|| Failure::input(format!("no model named `{name}`")))
}

fn presentation<'a>(doc: &'a Document, name: &str) -> Outcome<&'a Presentation> {
    match model(doc, name)? {
        Model::Affine(_) => Err(Failure::input(format!(
            "`{name}` is an affine monoid; this operation needs a presented binoid"
        ))),
        m => Ok(m.presentation().expect("presented")),
    }
}

fn ideal_of(
    doc: &Document,
    model: &str,
    p: &Presentation,
    name: Option<&str>,
) -> Outcome<(String, IdealSpec)> {
    let Some(name) = name else {
        return Ok(("max".into(), IdealSpec::maximal(p.rank())));
    };
    let decl = doc
        .ideal(name)
        .ok_or_else(|| Failure::input(format!("no ideal named `{name}`")))?;
    if decl.owner != model {
        return Err(Failure::input(format!(
            "ideal `{name}` belongs to `{}`, not `{model}`",
            decl.owner
        )));
    }
    Ok((name.to_string(), decl.ideal.clone()))
}

fn cancellative_image(p: &Presentation) -> Outcome<AffineEmbedding> {
    let e = presentation_to_affine(p)?;
    if let Cancellativity::Witness(a, b) = &e.cancellativity {
        return Err(Failure::refused(
            "cancellative",
            "affine methods apply to cancellative binoids, which embed in their difference group",
            format!(
                "{} and {} are distinct but identified in the difference group",
                p.format_vector(a),
                p.format_vector(b)
            ),
        ));
    }
    Ok(e)
}

/// A monoid with an ideal, in the coordinates an engine works in.
enum Target {
    Presented(Presentation, IdealSpec),
    Affine(AffineMonoid, Vec<Elem>),
}

impl Target {
    fn key_parts(&self) -> (String, String) {
        match self {
            Target::Presented(p, i) => (p.canonical_text(), i.canonical_text()),
            Target::Affine(m, i) => (m.canonical_text(), format!("ideal {i:?}")),
        }
    }
}

fn target(
    doc: &Document,
    name: &str,
    ideal: Option<&str>,
    engine: Option<Engine>,
) -> Outcome<(String, Target)> {
    match model(doc, name)? {
        Model::Affine(m) => {
            if engine == Some(Engine::Box) {
                return Err(Failure::input("the box engine needs a presented binoid"));
            }
            if ideal.is_some() {
                return Err(Failure::input(
                    "ideals can only be declared for presented binoids",
                ));
            }
            Ok(("max".into(), Target::Affine(m.clone(), m.gens.clone())))
        }
        m => {
            let p = m.presentation().expect("presented");
            let (iname, spec) = ideal_of(doc, name, p, ideal)?;
            match engine.unwrap_or(Engine::Box) {
                Engine::Box => Ok((iname, Target::Presented(p.clone(), spec))),
                Engine::Affine => {
                    let e = cancellative_image(p)?;
                    let gens = spec.gens.iter().map(|g| e.map(g)).collect();
                    Ok((iname, Target::Affine(e.monoid, gens)))
                }
            }
        }
    }
}

fn engine_name(t: &Target) -> &'static str {
    match t {
        Target::Presented(..) => "box",
        Target::Affine(..) => "affine",
    }
}

fn count_series(t: &Target, qs: &[u32], level_cap: usize, cache: &Cache) -> Outcome<Vec<Point>> {
    let (model, ideal) = t.key_parts();
    let engine = engine_name(t);
    let one = |q: u32| -> binhk::Result<u64> {
        let key = CacheKey {
            model: model.clone(),
            ideal: ideal.clone(),
            q,
            engine: engine.into(),
        };
        let v = cache.get_or_compute(&key, || {
            let c = match t {
                Target::Presented(p, i) => {
                    let opts = BoxOptions {
                        level_cap,
                        ..BoxOptions::default()
                    };
                    box_quotient_with(p, i, q, &opts)?.class_count as u64
                }
                Target::Affine(m, i) => hkf_affine_capped(m, i, q, level_cap)?,
            };
            Ok(c.to_string())
        })?;
        v.parse::<u64>()
            .map_err(|_| Error::invalid(format!("unreadable cached count `{v}`")))
    };
    let s = hkf_series(qs, one)?;
    Ok(s.iter().map(|(q, count)| Point { q, count }).collect())
}

#[derive(serde::Serialize, serde::Deserialize)]
struct StoredEhk {
    num: String,
    den: String,
    method: String,
    dim: usize,
    trace: Vec<String>,
}

fn cached_ehk(
    cache: &Cache,
    key: CacheKey,
    compute: impl FnOnce() -> Outcome<EhkResult>,
) -> Outcome<EhkResult> {
    let text = cache.get_or_compute(&key, || {
        let r = compute()?;
        let stored = StoredEhk {
            num: r.value.numer().to_string(),
            den: r.value.denom().to_string(),
            method: r.method.to_string(),
            dim: r.dim,
            trace: r.trace,
        };
        Ok::<_, Failure>(serde_json::to_string(&stored).expect("serializable"))
    })?;
    let bad = || Failure::input(format!("unreadable cache entry for {}", key.engine));
    let s: StoredEhk = serde_json::from_str(&text).map_err(|_| bad())?;
    let num = s.num.parse().map_err(|_| bad())?;
    let den = s.den.parse().map_err(|_| bad())?;
    let method = match s.method.as_str() {
        "pipeline" => Method::Pipeline,
        "volume" => Method::Volume,
        "fit" => Method::Fit,
        _ => return Err(bad()),
    };
    Ok(EhkResult {
        value: binhk::lattice::linalg::Q::new(num, den),
        method,
        dim: s.dim,
        trace: s.trace,
    })
}

fn require_normal(m: &AffineMonoid) -> Outcome<()> {
    if !m.is_torsion_free() {
        return Err(Failure::refused(
            "torsion-free",
            "the multiplicity equals the volume of the region between the cone and the ideal \
             for normal torsion-free monoids",
            format!("torsion part {:?}; use --method pipeline", m.torsion),
        ));
    }
    if !m.is_normal()? {
        return Err(Failure::refused(
            "normal",
            "the multiplicity equals the volume of the region between the cone and the ideal \
             for normal torsion-free monoids",
            "the monoid misses lattice points of its cone; use --method pipeline",
        ));
    }
    Ok(())
}

fn ehk(doc: &Document, args: &EhkArgs, common: &Common, cache: &Cache) -> Outcome<SeriesReport> {
    let (name, ideal, engine) = (args.model.as_str(), args.ideal.as_deref(), args.engine);
    let (iname, mut series) = ("max".to_string(), Vec::new());
    let (iname, result) = match args.method {
        EhkMethod::Pipeline => {
            if ideal.is_some() {
                return Err(Failure::input(
                    "the pipeline computes the multiplicity of the maximal ideal; \
                     use --method volume or fit for other ideals",
                ));
            }
            let r = match model(doc, name)? {
                Model::Affine(m) => {
                    let key = CacheKey {
                        model: m.canonical_text(),
                        ideal: "max".into(),
                        q: 0,
                        engine: "ehk-pipeline".into(),
                    };
                    cached_ehk(cache, key, || Ok(hk::ehk_pipeline_affine(m)?))?
                }
                m => {
                    let p = m.presentation().expect("presented");
                    let key = CacheKey {
                        model: p.canonical_text(),
                        ideal: "max".into(),
                        q: 0,
                        engine: "ehk-pipeline".into(),
                    };
                    cached_ehk(cache, key, || Ok(hk::ehk_pipeline_presentation(p)?))?
                }
            };
            (iname, r)
        }
        EhkMethod::Volume => {
            let (iname, t) = target(doc, name, ideal, Some(Engine::Affine))?;
            let Target::Affine(m, gens) = &t else {
                unreachable!("affine engine requested")
            };
            require_normal(m)?;
            let (mk, ik) = t.key_parts();
            let key = CacheKey {
                model: mk,
                ideal: ik,
                q: 0,
                engine: "ehk-volume".into(),
            };
            let r = cached_ehk(cache, key, || Ok(hk::ehk_normal_volume(m, gens)?))?;
            (iname, r)
        }
        EhkMethod::Fit => {
            let (iname, t) = target(doc, name, ideal, engine)?;
            let d = match model(doc, name)? {
                Model::Affine(m) => m.d,
                m => {
                    let p = m.presentation().expect("presented");
                    spectrum::rank_dimension(p, &spectrum::spectrum(p)?)
                }
            };
            let unit = d.max(1) as u32;
            let range = args.q.unwrap_or(QRange {
                start: 4 * unit,
                end: 8 * unit + 4,
            });
            series = count_series(&t, &range.values(), common.level_cap, cache)?;
            let s = hk::HkSeries {
                qs: series.iter().map(|p| p.q).collect(),
                counts: series.iter().map(|p| p.count).collect(),
            };
            (iname, hk::ehk_fit(&s, d)?)
        }
    };
    Ok(SeriesReport {
        model: name.into(),
        ideal: iname,
        series,
        ehk: Some(Ehk::from_result(&result)),
    })
}

fn affine_view(doc: &Document, name: &str) -> Outcome<AffineMonoid> {
    match model(doc, name)? {
        Model::Affine(m) => Ok(m.clone()),
        m => Ok(cancellative_image(m.presentation().expect("presented"))?.monoid),
    }
}

/// Execute one command against a parsed document.
pub fn execute(
    command: &Command,
    doc: &Document,
    common: &Common,
    cache: &Cache,
) -> Outcome<Report> {
    match command {
        Command::Hkf {
            model,
            ideal,
            q,
            engine,
        } => {
            let (iname, t) = target(doc, model, ideal.as_deref(), *engine)?;
            let series = count_series(&t, &q.values(), common.level_cap, cache)?;
            Ok(Report::Series(SeriesReport {
                model: model.clone(),
                ideal: iname,
                series,
                ehk: None,
            }))
        }
        Command::Ehk(args) => Ok(Report::Series(ehk(doc, args, common, cache)?)),
        Command::Spec { model } => {
            let p = presentation(doc, model)?;
            let s = spectrum::spectrum(p)?;
            let names = |v: &[spectrum::PrimeIdeal]| v.iter().map(|q| q.names(p)).collect();
            Ok(Report::Spec(SpecReport {
                model: model.clone(),
                primes: names(&s.primes),
                minimal_primes: names(&s.minimal_primes()),
                combinatorial_dimension: s.combinatorial_dimension(),
                rank_dimension: spectrum::rank_dimension(p, &s),
            }))
        }
        Command::Normalize { model } => {
            let m = affine_view(doc, model)?;
            let n = m.normalization()?;
            let mut generators = n.monoid.gens.clone();
            generators.sort();
            Ok(Report::Normalize(NormalizeReport {
                model: model.clone(),
                rank: m.d,
                already_normal: m.is_normal()?,
                generators,
                torsion: n.torsion,
            }))
        }
        Command::Smash { left, right, q } => {
            let a = presentation(doc, left)?;
            let b = presentation(doc, right)?;
            let s = a.smash(b);
            let spec = spectrum::spectrum(&s)?;
            let series = match q {
                Some(q) => {
                    let t = Target::Presented(s.clone(), IdealSpec::maximal(s.rank()));
                    count_series(&t, &q.values(), common.level_cap, cache)?
                }
                None => Vec::new(),
            };
            Ok(Report::Smash(SmashReport {
                left: left.clone(),
                right: right.clone(),
                presentation: s.canonical_text(),
                combinatorial_dimension: spec.combinatorial_dimension(),
                series,
            }))
        }
        Command::Partition { model, q } => {
            let m = affine_view(doc, model)?;
            if !m.is_torsion_free() {
                return Err(Failure::refused(
                    "torsion-free",
                    "generators of N acting on itself through q count #N/[q]N+ only up to the \
                     order of the unit group; the partition is computed for trivial units",
                    format!("torsion part {:?}", m.torsion),
                ));
            }
            let part = partition::components(&m, *q)?;
            let iso = partition::iso_classes(&part);
            Ok(Report::Partition(PartitionReport {
                model: model.clone(),
                q: *q,
                coordinates: if m.lattice_coords()?.is_identity() {
                    "input".into()
                } else {
                    "lattice".into()
                },
                generator_count: part.generator_count(),
                components: part
                    .components
                    .iter()
                    .map(|c| ComponentOut {
                        anchor: c.anchor.clone(),
                        generators: c.generators.clone(),
                    })
                    .collect(),
                classes: iso
                    .classes
                    .into_iter()
                    .map(|(signature, count)| ClassOut { signature, count })
                    .collect(),
                ambiguous: iso.ambiguous,
                max_generator_level: part.max_generator_level,
                window_constant: part.window_constant,
            }))
        }
    }
}

/// Parse the input file, run the command, render the result.
pub fn run(cli: &Cli, cache: &Cache) -> Outcome<String> {
    let Some(input) = &cli.common.input else {
        return Err(Failure::input("missing input file (-i FILE)"));
    };
    let doc = load(input)?;
    let report = execute(&cli.command, &doc, &cli.common, cache)?;
    Ok(render(&report, cli.common.format))
}
