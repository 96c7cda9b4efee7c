//! Command-line front end: model configs in, reports out.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with everything that should go to stdout and stderr, so the
//! binary is a thin wrapper and tests can drive the CLI in-process.

pub mod cache;
pub mod config;
pub mod pipeline;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coupling::instanton;
use crate::error::{Error, Result};
use crate::models::ProductProjModel;
use crate::multiparam::{biv_q, biv_solve, discriminant_p2p2, printed_discriminant, BiRecurrence};
use crate::series::{Rat, SeriesM};

pub use cache::{config_hash, Cache, CacheStatus};
pub use config::{catalog, catalog_entry, Model, ModelConfig, ModelKind, Printed, Source};
use pipeline::*;

/// Truncation order when neither the flag nor the config sets one.
pub const DEFAULT_TERMS: usize = 12;
/// Instanton depth when `--max-degree` is absent.
pub const DEFAULT_MAX_DEGREE: usize = 5;
/// Total-degree bound of `multiparam` when `--max-degree` is absent.
pub const DEFAULT_BOUND: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "cymirror", version, about = "Mirror maps, Yukawa couplings and instanton numbers from Picard-Fuchs data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Built-in model name (see `catalog`).
    #[arg(long, global = true, conflicts_with = "config")]
    pub model: Option<String>,
    /// Path to a JSON model config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Truncation order.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Instanton depth, or total-degree bound for `multiparam`.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for coefficient files.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Compare against published values stored with the model.
    #[arg(long, global = true)]
    pub compare_printed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Coefficients of the fundamental period.
    Phi0,
    /// Picard-Fuchs operator, constructed or fitted.
    Operator,
    /// Logarithmic solution and mirror map.
    Qcoord,
    /// Yukawa coupling in the z and q frames.
    Yukawa,
    /// Instanton numbers.
    Instantons,
    /// The whole one-parameter chain.
    Report,
    /// List built-in models.
    Catalog,
    /// Several-variable period, mirror map and integrality checks.
    Multiparam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Result of a command before formatting.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    /// Flat table for `--format csv`, when the command has one.
    pub table: Option<Table>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let line = |xs: &[String]| xs.iter().map(|x| csv_field(x)).collect::<Vec<_>>().join(",");
        let mut out = line(&self.headers);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Process outcome: exit code, stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for an error: 1 for invalid input, 2 for a failed computation.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        1
    } else {
        2
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli).and_then(|out| render(&out, cli.format)) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn render(out: &Output, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => out
            .table
            .as_ref()
            .map(Table::to_csv)
            .ok_or_else(|| Error::Config("format: csv is only available for tabular commands".into())),
        Format::Text => {
            let mut s = String::new();
            text_value(&out.json, 0, &mut s);
            Ok(s)
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn text_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match text_inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match text_inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_value(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Scalars and arrays of scalars fit on one line.
fn text_inline(v: &Value) -> Option<String> {
    match v {
        Value::Array(xs) => xs
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .map(|s| s.join(", ")),
        Value::Object(_) => None,
        other => scalar(other),
    }
}

/// Loads the model named by `--model` or `--config`.
pub fn load_model(cli: &Cli) -> Result<Model> {
    let config = match (&cli.model, &cli.config) {
        (Some(name), None) => catalog_entry(name)?,
        (None, Some(path)) => ModelConfig::load(path)?,
        _ => return Err(Error::Config("model: pass exactly one of --model or --config".into())),
    };
    config.resolve()
}

/// Runs the parsed command.
pub fn execute(cli: &Cli) -> Result<Output> {
    if cli.command == Command::Catalog {
        return Ok(catalog_output());
    }
    let model = load_model(cli)?;
    let cache = cli.cache_dir.as_ref().map(Cache::new).transpose()?;
    let cache = cache.as_ref();
    let max_degree = cli.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let terms = cli
        .terms
        .or(model.config.terms)
        .unwrap_or(DEFAULT_TERMS)
        .max(if cli.command == Command::Multiparam { 0 } else { max_degree });
    let name = json!(model.config.name);
    match cli.command {
        Command::Catalog => unreachable!(),
        Command::Phi0 => {
            let p = phi0(&model, terms, cache)?;
            Ok(Output {
                json: json!({ "model": name, "terms": terms, "cache": cache_json(&p.cache), "phi0": series_json(&p.series) }),
                table: Some(series_table(&[("phi0", p.series.coeffs())])),
            })
        }
        Command::Operator => {
            let stage = operator(&model, cache)?;
            let mut json = json!({ "model": name, "operator": operator_json(&stage)? });
            if cli.compare_printed {
                if let Some(text) = model.config.printed.as_ref().and_then(|p| p.operator.as_ref()) {
                    let need = stage.fit_terms.unwrap_or(0).max(terms + 1);
                    let phi = phi0(&model, need - 1, cache)?.series;
                    json["printed_operator"] = printed_operator_json(text, &stage, &phi);
                }
            }
            Ok(Output { json, table: None })
        }
        Command::Qcoord => {
            let stage = operator(&model, cache)?;
            let f = crate::coupling::YukawaFrame::compute(&stage.spec, &model.w0, terms)?;
            Ok(Output {
                json: json!({
                    "model": name,
                    "terms": terms,
                    "psi": series_json(&f.psi),
                    "q_of_z": series_json(&f.q_of_z),
                    "z_of_q": series_json(&f.z_of_q),
                }),
                table: Some(series_table(&[
                    ("psi", f.psi.coeffs()),
                    ("q_of_z", f.q_of_z.coeffs()),
                    ("z_of_q", f.z_of_q.coeffs()),
                ])),
            })
        }
        Command::Yukawa => {
            let stage = operator(&model, cache)?;
            let f = crate::coupling::YukawaFrame::compute(&stage.spec, &model.w0, terms)?;
            Ok(Output {
                json: json!({
                    "model": name,
                    "terms": terms,
                    "dim": f.dim,
                    "w": series_json(&f.w),
                    "k_z": series_json(&f.k_z),
                    "k_q": series_json(&f.k_q),
                    "j": series_json(&f.j),
                }),
                table: Some(series_table(&[
                    ("w", f.w.coeffs()),
                    ("k_z", f.k_z.coeffs()),
                    ("k_q", f.k_q.coeffs()),
                ])),
            })
        }
        Command::Instantons => {
            let stage = operator(&model, cache)?;
            let f = crate::coupling::YukawaFrame::compute(&stage.spec, &model.w0, terms)?;
            let r = instanton(&f.k_q, f.dim, max_degree)?;
            let mut t = Table::new(&["degree", "n", "gamma", "integral", "nonnegative"]);
            for i in 0..r.n.len() {
                t.rows.push(vec![
                    (i + 1).to_string(),
                    r.n[i].to_string(),
                    r.gamma[i].to_string(),
                    r.integral[i].to_string(),
                    r.nonnegative[i].to_string(),
                ]);
            }
            Ok(Output {
                json: json!({ "model": name, "terms": terms, "instantons": instantons_json(&r) }),
                table: Some(t),
            })
        }
        Command::Report => report(&model, terms, max_degree, cache, cli.compare_printed),
        Command::Multiparam => {
            let bound = cli.max_degree.map_or(DEFAULT_BOUND, |d| d as u32);
            multiparam(&model, bound, cache)
        }
    }
}

fn series_table(cols: &[(&str, &[Rat])]) -> Table {
    let mut headers = vec!["index"];
    headers.extend(cols.iter().map(|(h, _)| *h));
    let mut t = Table::new(&headers);
    let n = cols.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    for i in 0..n {
        let mut row = vec![i.to_string()];
        row.extend(cols.iter().map(|(_, c)| c.get(i).map_or_else(String::new, Rat::to_string)));
        t.rows.push(row);
    }
    t
}

fn catalog_output() -> Output {
    let mut t = Table::new(&["name", "kind", "title"]);
    let models: Vec<Value> = catalog()
        .into_iter()
        .map(|c| {
            let title = c.title.clone().unwrap_or_default();
            t.rows.push(vec![c.name.clone(), c.model.name().into(), title.clone()]);
            json!({ "name": c.name, "kind": c.model.name(), "title": title })
        })
        .collect();
    Output {
        json: json!({ "models": models }),
        table: Some(t),
    }
}

/// The full one-parameter chain with diagnostics.
pub fn report(model: &Model, terms: usize, max_degree: usize, cache: Option<&Cache>, compare: bool) -> Result<Output> {
    let run = full_run(model, terms, max_degree, cache)?;
    let f = &run.frame;
    let mut diagnostics = basic_diagnostics(&run);
    if compare {
        diagnostics["printed"] = match &model.config.printed {
            Some(p) => printed_diagnostics(model, &run, p)?,
            None => Value::Null,
        };
    }
    let mut t = Table::new(&["degree", "k_q", "n", "gamma"]);
    for i in 0..=terms {
        let inst = run.instantons.as_ref().filter(|r| i >= 1 && i <= r.n.len());
        t.rows.push(vec![
            i.to_string(),
            f.k_q.coeff(i).to_string(),
            inst.map_or_else(String::new, |r| r.n[i - 1].to_string()),
            inst.map_or_else(String::new, |r| r.gamma[i - 1].to_string()),
        ]);
    }
    let json = json!({
        "config": serde_json::to_value(&model.config).expect("serializes"),
        "terms": terms,
        "w0": model.w0.to_string(),
        "dim": f.dim,
        "cache": cache_json(&run.phi0.cache),
        "phi0": series_json(&run.phi0.series),
        "operator": operator_json(&run.operator)?,
        "psi": series_json(&f.psi),
        "q_of_z": series_json(&f.q_of_z),
        "z_of_q": series_json(&f.z_of_q),
        "w": series_json(&f.w),
        "k_z": series_json(&f.k_z),
        "k_q": series_json(&f.k_q),
        "instantons": run.instantons.as_ref().map(instantons_json),
        "diagnostics": diagnostics,
    });
    Ok(Output { json, table: Some(t) })
}

fn key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn terms_json(s: &SeriesM) -> Value {
    Value::Object(s.terms().iter().map(|(e, c)| (key(e), json!(c.to_string()))).collect())
}

/// Socle, logarithmic solutions and `q_j` of a product model in all its
/// Kähler parameters, to total degree `bound`.
pub fn multiparam(model: &Model, bound: u32, cache: Option<&Cache>) -> Result<Output> {
    let Source::Product(p) = &model.source else {
        return Err(Error::Config(format!(
            "model: multiparam needs a product_projective model, got {}",
            model.config.model.name()
        )));
    };
    let generated = product_series(model, p, bound, cache)?;
    let rec = BiRecurrence::from_product(p);
    let sol = biv_solve(&rec, bound)?;
    let q = biv_q(&sol.phi0, &sol.psi)?;
    let t = rec.nvars();
    let log_identities: Vec<bool> = (0..t).map(|j| rec.log_identity_holds(j, &sol.phi0, &sol.psi[j])).collect();
    // c^(1)_{l1,l2} = c^(2)_{l2,l1} when the two factors can be exchanged
    let symmetric = (t == 2 && p.dims()[0] == p.dims()[1]).then(|| {
        let swap = |s: &SeriesM| {
            SeriesM::from_terms(2, s.bound(), s.terms().iter().map(|(e, c)| (vec![e[1], e[0]], c.clone())))
        };
        swap(&q.ratio[0]) == q.ratio[1]
    });
    let failures: Vec<Value> = q
        .failures
        .iter()
        .map(|(j, e, c)| json!({ "q": j + 1, "index": key(e), "value": c.to_string() }))
        .collect();
    let mut json = json!({
        "model": model.config.name,
        "nvars": t,
        "bound": bound,
        "phi0": terms_json(&sol.phi0),
        "phi0_matches_generator": sol.phi0 == generated,
        "annihilated": rec.annihilates(&sol.phi0),
        "log_identities": log_identities,
        "q": q.q.iter().map(terms_json).collect::<Vec<_>>(),
        "q_all_integral": q.all_integral,
        "failures": failures,
        "symmetric": symmetric,
    });
    if p.dims() == [2, 2] && p.matrix() == [vec![3, 3]] {
        let computed = discriminant_p2p2();
        let printed = printed_discriminant();
        json["discriminant"] = json!({
            "computed": computed.to_string(),
            "printed": printed.to_string(),
            "equal": computed == printed,
        });
    }
    let mut table = Table::new(&["q", "index", "coefficient"]);
    for (j, s) in q.q.iter().enumerate() {
        for (e, c) in s.terms() {
            table.rows.push(vec![(j + 1).to_string(), key(e), c.to_string()]);
        }
    }
    Ok(Output { json, table: Some(table) })
}

fn product_series(model: &Model, p: &ProductProjModel, bound: u32, cache: Option<&Cache>) -> Result<SeriesM> {
    let t = p.nfactors();
    let Some(cache) = cache else {
        return Ok(p.product_series(bound));
    };
    let hash = config_hash(&model.config);
    let (terms, _) = cache.load_multi(&model.config.name, &hash);
    let have = terms.keys().map(|e| e.iter().sum::<u32>()).max();
    let complete = terms.len() == crate::models::compositions_up_to(t, have.unwrap_or(0)).len();
    if complete && terms.keys().all(|e| e.len() == t) && have.is_some_and(|h| h >= bound) {
        let s = SeriesM::from_terms(t, bound, terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= bound));
        return Ok(s);
    }
    let s = p.product_series(bound);
    cache.store_multi(&model.config.name, &hash, s.terms())?;
    Ok(s)
}
