mod instance;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use qmrat::decider::{certificate_for, decide_dim1, decide_with, DecideOptions, DeciderError, Outcome};
use qmrat::fixedfield::{case_chain_with, case_tags};
use qmrat::glz::{classify, close_group, normal_subgroup_table, IntMatrix2};
use qmrat::symbols::{conic_point_with, evaluate, ConicSearch, SearchOrder, SymbolQuery, DEFAULT_CUBIC_BOUND};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use instance::{parse_instance, parse_rational, InstanceError};

const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_NOINPUT: u8 = 66;
const EXIT_INVALID: u8 = 3;

/// Rationality of two-dimensional quasi-monomial actions over Q.
#[derive(Parser, Debug)]
#[command(name = "qmrat", version)]
struct Cli {
    /// Seed for the conic-point search order; without it the search runs
    /// in the fixed forward order.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Coefficient box for cubic norm searches.
    #[arg(long, global = true, default_value_t = DEFAULT_CUBIC_BOUND)]
    bound: i64,
    /// Print only the JSON report (no summary on stderr).
    #[arg(long, global = true)]
    json_only: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide rationality for instance files (TOML).
    Decide {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Evaluate several files in parallel and report them together.
        #[arg(long)]
        batch: bool,
    },
    /// Classify the finite group generated by integer matrices, each given
    /// as a JSON array [a11, a12, a21, a22] (or one array of such arrays).
    Classify {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Norm residue symbol (a, b) of degree 2 or 3.
    Symbol {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        deg: u8,
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        a: BigRational,
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        b: BigRational,
        /// Degree 2 only: evaluate over Q(sqrt(m)).
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        ext: Option<BigRational>,
    },
    /// Rational point on x^2 - a*y^2 = b*z^2.
    Conic {
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        a: BigRational,
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        b: BigRational,
    },
    /// Run the symbolic checks of one case chain.
    VerifyCase { tag: String },
    /// Run every case chain.
    VerifyAll,
    /// One-dimensional action sqrt(a) -> -sqrt(a), y -> b/y.
    Dim1 {
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        a: BigRational,
        #[arg(allow_hyphen_values = true, value_parser = rational)]
        b: BigRational,
    },
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("{s:?} is not a rational number"))
}

struct Run {
    code: u8,
    payload: Map<String, Value>,
    summary: Vec<String>,
}

impl Run {
    fn new(code: u8, payload: Map<String, Value>, summary: Vec<String>) -> Self {
        Run { code, payload, summary }
    }

    fn error(code: u8, msg: String) -> Self {
        let mut m = Map::new();
        m.insert("error".into(), json!(msg));
        Run { code, payload: m, summary: vec![format!("error: {msg}")] }
    }
}

fn options(cli: &Cli) -> DecideOptions {
    let order = cli.seed.map_or(SearchOrder::Forward, SearchOrder::Shuffled);
    DecideOptions { search: ConicSearch { order, honor_holzer: true }, cubic_bound: cli.bound }
}

fn decide_file(path: &Path, opts: DecideOptions) -> Run {
    let shown = path.display().to_string();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return Run::error(EXIT_NOINPUT, format!("{shown}: {e}")),
    };
    let inst = match parse_instance(&src) {
        Ok(i) => i,
        Err(e @ InstanceError::Parse { .. }) => return Run::error(EXIT_PARSE, format!("{shown}:{e}")),
        Err(InstanceError::Invalid(e)) => return Run::error(EXIT_INVALID, format!("{shown}: {e}")),
    };
    let v = match decide_with(&inst, opts) {
        Ok(v) => v,
        Err(e) => return Run::error(EXIT_INVALID, format!("{shown}: {e}")),
    };
    let mut notes_extra = Vec::new();
    let cert = if v.outcome == Outcome::Rational {
        match certificate_for(&inst, &v) {
            Ok(c) => Some(c),
            Err(DeciderError::CertificateCheck(msg)) => {
                notes_extra.push(format!("explicit generators failed verification: {msg}"));
                None
            }
            Err(e) => return Run::error(EXIT_INVALID, format!("{shown}: {e}")),
        }
    } else {
        None
    };
    let mut m = report::verdict(&v, cert.as_ref());
    if let Some(Value::Array(notes)) = m.get_mut("notes") {
        notes.extend(notes_extra.into_iter().map(Value::String));
    }
    m.insert("instance".into(), report::instance(&inst));
    let mut summary = vec![format!("{shown}: {} [{}] clause {}", v.outcome, inst, v.clause)];
    for s in &v.symbols {
        summary.push(format!("  {} = {}", s.query, s.value));
    }
    if let Some(c) = cert.as_ref().or(v.certificate.as_ref()) {
        summary.push(format!("  certificate: {c}"));
    }
    Run::new(v.outcome.exit_code() as u8, m, summary)
}

fn matrices(args: &[String]) -> Result<Vec<IntMatrix2>, String> {
    let mut out = Vec::new();
    for a in args {
        let v: Value = serde_json::from_str(a).map_err(|e| format!("{a:?}: {e}"))?;
        let items = match &v {
            Value::Array(xs) if xs.iter().all(Value::is_array) => xs.clone(),
            _ => vec![v],
        };
        for it in items {
            let e: [i64; 4] =
                serde_json::from_value(it.clone()).map_err(|_| format!("{it} is not an array of 4 integers"))?;
            out.push(IntMatrix2::from_row_major(e).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn run(cli: &Cli) -> (Value, Run) {
    match &cli.cmd {
        Cmd::Decide { files, batch } => {
            let inputs = json!({ "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>() });
            if files.len() > 1 && !batch {
                return (inputs, Run::error(EXIT_USAGE, "several files need --batch".into()));
            }
            let opts = options(cli);
            if !batch {
                return (inputs, decide_file(&files[0], opts));
            }
            let results: Vec<Run> = files.par_iter().map(|f| decide_file(f, opts)).collect();
            let code = results.iter().map(|r| r.code).max().unwrap_or(0);
            let summary = results.iter().flat_map(|r| r.summary.clone()).collect();
            let items = files
                .iter()
                .zip(results)
                .map(|(f, mut r)| {
                    r.payload.insert("file".into(), json!(f.display().to_string()));
                    r.payload.insert("exit_code".into(), json!(r.code));
                    Value::Object(r.payload)
                })
                .collect::<Vec<_>>();
            let mut m = Map::new();
            m.insert("results".into(), Value::Array(items));
            (inputs, Run::new(code, m, summary))
        }
        Cmd::Classify { gens } => {
            let inputs = json!({ "generators": gens });
            let ms = match matrices(gens) {
                Ok(m) => m,
                Err(e) => return (inputs, Run::error(EXIT_USAGE, e)),
            };
            let g = match close_group(&ms) {
                Ok(g) => g,
                Err(e) => return (inputs, Run::error(EXIT_INVALID, e.to_string())),
            };
            match classify(&g) {
                Ok((label, p)) => {
                    let mut m = Map::new();
                    m.insert("label".into(), json!(label.as_str()));
                    m.insert("conjugator".into(), json!(p.to_row_major()));
                    m.insert("order".into(), json!(g.order()));
                    let names: Vec<&str> = normal_subgroup_table(label).into_iter().map(|(n, _)| n).collect();
                    m.insert("normal_subgroups".into(), json!(names));
                    let summary = vec![format!("{label} (order {}), P = {p} with P G P^-1 = representative", g.order())];
                    (inputs, Run::new(0, m, summary))
                }
                Err(e) => (inputs, Run::error(EXIT_INVALID, e.to_string())),
            }
        }
        Cmd::Symbol { deg, a, b, ext } => {
            let inputs = json!({ "deg": deg, "a": report::rat(a), "b": report::rat(b), "ext": ext.as_ref().map(report::rat) });
            let q = match (deg, ext) {
                (2, None) => SymbolQuery::quadratic(a.clone(), b.clone()),
                (2, Some(m)) => SymbolQuery::quadratic_over(a.clone(), b.clone(), m.clone()),
                (_, None) => SymbolQuery::cubic(a.clone(), b.clone()),
                (_, Some(_)) => return (inputs, Run::error(EXIT_USAGE, "--ext applies to degree 2 only".into())),
            };
            match evaluate(&q, cli.bound) {
                Ok(e) => {
                    let summary = vec![format!("{} = {}", e.query, e.value)];
                    let code = match e.value {
                        qmrat::symbols::Tri::Zero => 0,
                        qmrat::symbols::Tri::NonZero => 1,
                        qmrat::symbols::Tri::Undecided(_) => 2,
                    };
                    let Value::Object(m) = report::symbol(&e) else { unreachable!() };
                    (inputs, Run::new(code, m, summary))
                }
                Err(e) => (inputs, Run::error(EXIT_INVALID, e.to_string())),
            }
        }
        Cmd::Conic { a, b } => {
            let inputs = json!({ "a": report::rat(a), "b": report::rat(b) });
            let p = conic_point_with(a, b, options(cli).search);
            let mut m = Map::new();
            m.insert("point".into(), p.as_ref().map_or(Value::Null, report::point));
            let summary = vec![match &p {
                Some(p) => format!("x^2 - ({a})*y^2 = ({b})*z^2 at {p}"),
                None => format!("x^2 - ({a})*y^2 = ({b})*z^2 has no rational point"),
            }];
            (inputs, Run::new(if p.is_some() { 0 } else { 1 }, m, summary))
        }
        Cmd::VerifyCase { tag } => {
            let inputs = json!({ "tag": tag });
            match case_chain_with(tag, &Default::default()) {
                Ok(c) => {
                    let summary = c.checks.iter().map(|k| k.to_string()).collect();
                    let Value::Object(mut m) = report::chain(&c) else { unreachable!() };
                    let detail = c
                        .checks
                        .iter()
                        .map(|k| json!({ "part": k.part, "step": k.step, "kind": format!("{:?}", k.kind), "what": k.what, "passed": k.passed }))
                        .collect();
                    m.insert("detail".into(), Value::Array(detail));
                    (inputs, Run::new(if c.passed() { 0 } else { 1 }, m, summary))
                }
                Err(e) => (inputs, Run::error(EXIT_INVALID, e.to_string())),
            }
        }
        Cmd::VerifyAll => {
            let tags = case_tags();
            let chains: Vec<_> = tags.par_iter().map(|t| (*t, case_chain_with(t, &Default::default()))).collect();
            let mut cases = Vec::new();
            let (mut total, mut passed, mut failed_tags) = (0usize, 0usize, Vec::new());
            for (t, r) in &chains {
                match r {
                    Ok(c) => {
                        total += c.checks.len();
                        passed += c.checks.iter().filter(|k| k.passed).count();
                        if !c.passed() {
                            failed_tags.push(t.to_string());
                        }
                        cases.push(report::chain(c));
                    }
                    Err(e) => {
                        failed_tags.push(t.to_string());
                        cases.push(json!({ "tag": t, "passed": false, "error": e.to_string() }));
                    }
                }
            }
            let mut m = Map::new();
            m.insert("cases".into(), Value::Array(cases));
            m.insert("total_checks".into(), json!(total));
            m.insert("passed_checks".into(), json!(passed));
            m.insert("failed_cases".into(), json!(failed_tags));
            let mut summary: Vec<String> = failed_tags.iter().map(|t| format!("FAIL {t}")).collect();
            summary.push(format!("{passed}/{total} checks passed across {} cases", tags.len()));
            (json!({}), Run::new(if failed_tags.is_empty() { 0 } else { 1 }, m, summary))
        }
        Cmd::Dim1 { a, b } => {
            let inputs = json!({ "a": report::rat(a), "b": report::rat(b) });
            match decide_dim1(a, b) {
                Ok(v) => {
                    let summary = vec![format!("dim1 a = {a}, b = {b}: {}", v.outcome)];
                    let mut m = report::verdict(&v, None);
                    m.remove("normalized");
                    (inputs, Run::new(v.outcome.exit_code() as u8, m, summary))
                }
                Err(e) => (inputs, Run::error(EXIT_INVALID, e.to_string())),
            }
        }
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Decide { .. } => "decide",
        Cmd::Classify { .. } => "classify",
        Cmd::Symbol { .. } => "symbol",
        Cmd::Conic { .. } => "conic",
        Cmd::VerifyCase { .. } => "verify-case",
        Cmd::VerifyAll => "verify-all",
        Cmd::Dim1 { .. } => "dim1",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let (inputs, out) = run(&cli);
    let mut report = out.payload;
    report.insert("command".into(), json!(command_name(&cli.cmd)));
    report.insert("inputs".into(), inputs);
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    report.insert("exit_code".into(), json!(out.code));
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if !cli.json_only {
        for line in out.summary {
            eprintln!("{line}");
        }
    }
    ExitCode::from(out.code)
}
