//! Command-line front end.
//!
//! Exit codes: 0 success, 1 comparison mismatch or failed check, 2 parse or
//! validation error, 3 an undefined invariant was requested as a value.

use std::io::Write;
use std::path::Path as FsPath;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::equivalence::{compare, verify_mapping, Verdict};
use crate::fixtures;
use crate::generators::{self, Constraint, CATALOG};
use crate::invariants::{Engine, Entry, Family, Method, Path};
use crate::model::{Model, PointTransform};
use crate::parser::{parse_expression, parse_transform, render_model, render_transform};
use crate::regression;
use crate::symbolic::{ZeroTester, ZeroVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hyperinv",
    version,
    about = "Invariants of linear hyperbolic equations and systems"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Sample points for zero testing.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a model or transform file, or a catalog generator.
    Show { target: String },
    /// Compute an invariant signature.
    Invariants {
        model: String,
        #[arg(long, default_value = "complex")]
        method: Method,
        #[arg(long, default_value = "semi-dep")]
        family: Family,
        #[arg(long, default_value = "split")]
        path: Path,
        /// Print only this entry; exit 3 if it is undefined.
        #[arg(long)]
        entry: Option<String>,
    },
    /// Convert between a complex scalar equation and its CR system.
    Split { model: String },
    /// Check whether a general system is CR-structured.
    CrCheck { model: String },
    /// Apply a point transform to a model.
    Transform { model: String, map: String },
    /// Compare the signatures of two models.
    Compare {
        a: String,
        b: String,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value = "complex")]
        method: Method,
        /// Families to compare (repeatable); all when omitted.
        #[arg(long)]
        family: Vec<Family>,
        /// Also check that the map carries `a` onto `b`.
        #[arg(long)]
        verify: bool,
    },
    /// Apply a generator to an invariant, optionally on a constraint manifold.
    Annihilate {
        /// Catalog name, `cplx-dep-3` or `cplx-indep-3`.
        generator: Option<String>,
        /// Entry id (`h1`, `I3c`, ...) or a formula in t, x.
        target: Option<String>,
        /// Constrain to `ID = 0`; repeatable, solved in order.
        #[arg(long = "on")]
        on: Vec<String>,
        /// Run every printed relation instead.
        #[arg(long, conflicts_with_all = ["generator", "target"])]
        all: bool,
    },
    /// Recompute the worked examples.
    VerifyPaper {
        #[arg(long)]
        example: Option<u8>,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Failure with an exit code and a message for stderr.
struct Exit(i32, String);

impl<E: std::fmt::Display> From<E> for Exit {
    fn from(e: E) -> Exit {
        Exit(EXIT_INPUT, e.to_string())
    }
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

/// Reads a file, falling back to the bundled fixture of the same name.
fn load(path: &str) -> Result<String, Exit> {
    match std::fs::read_to_string(path) {
        Ok(t) => Ok(t),
        Err(e) => {
            let name = FsPath::new(path)
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or(path);
            fixtures::text(name)
                .map(str::to_string)
                .ok_or_else(|| Exit(EXIT_INPUT, format!("{path}: {e}")))
        }
    }
}

fn load_model(path: &str) -> Result<Model, Exit> {
    Model::from_text(&load(path)?).map_err(|e| Exit(EXIT_INPUT, format!("{path}: {e}")))
}

fn load_transform(path: &str) -> Result<PointTransform, Exit> {
    parse_transform(&load(path)?)
        .map(Into::into)
        .map_err(|e| Exit(EXIT_INPUT, format!("{path}: {e}")))
}

fn emit(io: &mut Io, json: bool, value: Json, text: impl FnOnce() -> String) -> Result<(), Exit> {
    if json {
        writeln!(io.out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        write!(io.out, "{}", text())?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<i32, Exit> {
    let c = &cli.common;
    let tester = ZeroTester::new(c.seed, c.samples);
    match &cli.command {
        Command::Show { target } => show(io, c.json, target),
        Command::Invariants {
            model,
            method,
            family,
            path,
            entry,
        } => {
            let m = load_model(model)?;
            let sig = Engine::new(tester, *path).compute(&m, *method, *family)?;
            if let Some(id) = entry {
                return match sig.get(id) {
                    None => Err(Exit(
                        EXIT_INPUT,
                        format!("no entry {id} in {method} {family}"),
                    )),
                    Some(Entry::Undefined { reason }) => {
                        Err(Exit(EXIT_UNDEFINED, format!("{id} is undefined: {reason}")))
                    }
                    Some(Entry::Defined(e)) => {
                        emit(io, c.json, json!({"id": id, "expr": e.to_string()}), || {
                            format!("{e}\n")
                        })?;
                        Ok(EXIT_OK)
                    }
                };
            }
            emit(io, c.json, sig.to_json(), || sig.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Split { model } => {
            let m = load_model(model)?;
            let out = match &m {
                Model::Scalar(s) => Model::System(s.realify()),
                Model::System(s) => Model::Scalar(s.complexify()),
                Model::General(g) => match g.cr_check(&tester) {
                    Ok(s) => Model::Scalar(s.complexify()),
                    Err(v) => return Err(Exit(EXIT_INPUT, format!("not CR-structured: {v}"))),
                },
            };
            print_model(io, c.json, &out)?;
            Ok(EXIT_OK)
        }
        Command::CrCheck { model } => {
            let m = load_model(model)?;
            let Model::General(g) = &m else {
                writeln!(
                    io.out,
                    "{} model is CR-structured by construction",
                    m.kind_name()
                )?;
                return Ok(EXIT_OK);
            };
            match g.cr_check(&tester) {
                Ok(s) => {
                    let file = render_model(&Model::System(s).to_file());
                    emit(io, c.json, json!({"cr": true, "system": file}), || {
                        format!("CR-structured\n{file}")
                    })?;
                }
                Err(v) => {
                    emit(
                        io,
                        c.json,
                        json!({"cr": false, "violated": v.condition, "detail": v.to_string()}),
                        || format!("not CR-structured: {v}\n"),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Transform { model, map } => {
            let m = load_model(model)?;
            let t = load_transform(map)?;
            print_model(io, c.json, &m.apply(&t)?)?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            a,
            b,
            map,
            method,
            family,
            verify,
        } => {
            let (ma, mb) = (load_model(a)?, load_model(b)?);
            let t = map.as_deref().map(load_transform).transpose()?;
            let families = if family.is_empty() {
                Family::ALL.to_vec()
            } else {
                family.clone()
            };
            let engine = Engine::new(tester, Path::Split);
            let mut report = compare(&engine, &ma, &mb, t.as_ref(), *method, &families)?;
            let mut mapped = true;
            if let (true, Some(t)) = (*verify, &t) {
                let check = verify_mapping(&engine, &ma, &mb, t)?;
                mapped = check.holds();
                report.residuals = Some(check.residuals);
            }
            emit(io, c.json, report.to_json(), || report.to_string())?;
            let ok = report.verdict == Verdict::NecessaryConditionsHold && mapped;
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Annihilate {
            generator,
            target,
            on,
            all,
        } => annihilate(
            io,
            c.json,
            &tester,
            generator.as_deref(),
            target.as_deref(),
            on,
            *all,
        ),
        Command::VerifyPaper { example } => {
            if example.is_some_and(|n| !(1..=5).contains(&n)) {
                return Err(Exit(EXIT_INPUT, "examples are numbered 1 to 5".into()));
            }
            let reports = regression::run_example(&Engine::new(tester, Path::Split), *example)?;
            let failed = reports.iter().any(|r| r.failed());
            let value = json!({
                "cases": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "failed": failed,
            });
            emit(io, c.json, value, || {
                let mut s: String = reports.iter().map(|r| r.to_string()).collect();
                let known: usize = reports.iter().map(|r| r.known().count()).sum();
                s.push_str(&format!(
                    "{} cases, {} known discrepancies, {}\n",
                    reports.len(),
                    known,
                    if failed { "FAILED" } else { "ok" }
                ));
                s
            })?;
            Ok(if failed { EXIT_MISMATCH } else { EXIT_OK })
        }
    }
}

fn print_model(io: &mut Io, json: bool, m: &Model) -> Result<(), Exit> {
    let text = render_model(&m.to_file());
    emit(
        io,
        json,
        json!({"kind": m.kind_name(), "file": text}),
        || text.clone(),
    )
}

fn show(io: &mut Io, json: bool, target: &str) -> Result<i32, Exit> {
    if CATALOG.contains(&target) || target.ends_with("-3") || target == "hk-scaling" {
        let v = if target == "hk-scaling" {
            generators::hk_scaling()
        } else {
            generators::resolve(target)?
        };
        emit(io, json, v.to_json(), || v.to_string())?;
        return Ok(EXIT_OK);
    }
    let text = load(target)?;
    if target.ends_with(".transform") {
        let t = parse_transform(&text).map_err(|e| Exit(EXIT_INPUT, format!("{target}: {e}")))?;
        let r = render_transform(&t);
        emit(io, json, json!({"transform": r}), || r.clone())?;
    } else {
        let m = Model::from_text(&text).map_err(|e| Exit(EXIT_INPUT, format!("{target}: {e}")))?;
        print_model(io, json, &m)?;
    }
    Ok(EXIT_OK)
}

fn verdict_json(v: &ZeroVerdict) -> Json {
    match v {
        ZeroVerdict::NonZero(w) => json!({
            "verdict": v.label(),
            "value": w.value.to_string(),
            "witness": crate::invariants::witness_json(&w.point),
        }),
        _ => json!({"verdict": v.label()}),
    }
}

fn annihilate(
    io: &mut Io,
    json: bool,
    tester: &ZeroTester,
    generator: Option<&str>,
    target: Option<&str>,
    on: &[String],
    all: bool,
) -> Result<i32, Exit> {
    let mut rows: Vec<(String, ZeroVerdict)> = Vec::new();
    if all {
        for rel in generators::printed_relations() {
            rows.push((rel.to_string(), generators::check_relation(&rel, tester)?));
        }
        for (name, entries) in generators::unconstrained_suite() {
            let v = if name == "hk-scaling" {
                generators::hk_scaling()
            } else {
                generators::catalog(name)?
            };
            for (id, text) in entries {
                let verdict = generators::kills(&v, &generators::parse(&text), tester)?;
                rows.push((format!("{name} {id}"), verdict));
            }
        }
    } else {
        let (Some(g), Some(t)) = (generator, target) else {
            return Err(Exit(
                EXIT_INPUT,
                "give a generator and a target, or --all".into(),
            ));
        };
        let v = if g == "hk-scaling" {
            generators::hk_scaling()
        } else {
            generators::resolve(g)?
        };
        let j = target_expr(t)?;
        let v = generators::prolong(&v, generators::jet_order(&v.space, &j).max(1))?;
        let constraints = on
            .iter()
            .map(|id| {
                let sym = generators::elimination_symbol(id)
                    .ok_or_else(|| Exit(EXIT_INPUT, format!("cannot constrain by {id}")))?;
                Ok(Constraint {
                    expr: target_expr(id)?,
                    solve_for: generators::parse(sym),
                })
            })
            .collect::<Result<Vec<_>, Exit>>()?;
        let verdict = generators::annihilation_check(&v, &j, &constraints, tester)?;
        let mut label = format!("{g} {t}");
        if !on.is_empty() {
            label.push_str(&format!(" | {} = 0", on.join(" = ")));
        }
        rows.push((label, verdict));
    }
    let failed = rows.iter().any(|(_, v)| !v.holds());
    let value = json!(rows
        .iter()
        .map(|(l, v)| {
            let mut j = verdict_json(v);
            j["relation"] = json!(l);
            j
        })
        .collect::<Vec<_>>());
    emit(io, json, value, || {
        rows.iter()
            .map(|(l, v)| format!("{l}: {}\n", v.label()))
            .collect()
    })?;
    Ok(if failed { EXIT_MISMATCH } else { EXIT_OK })
}

fn target_expr(t: &str) -> Result<crate::symbolic::Expr, Exit> {
    match generators::entry_text(t) {
        Some(text) => Ok(generators::parse(&text)),
        None => Ok(parse_expression(t, generators::scope())?),
    }
}
