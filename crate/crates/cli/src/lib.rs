//! Command-line front end: Ext charts, spectral sequences, verification
//! suites, chart comparison and rendering.

pub mod cache;
pub mod expr;
pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kqext::chart::Chart;
use kqext::comod::Comodule;
use kqext::ext::{ExtComputer, Range};
use kqext::ground::{Base, TriDegree};
use kqext::sseq::{self, FilteredComodule, Sseq, SseqPage};
use kqext::suites;
use kqext::zoo::{self, COMPARE_OPS};

use cache::Cache;
use expr::parse_module_expr;

#[derive(Parser, Debug)]
#[command(name = "kqext", version, about = "Motivic Ext charts over A(1) for the reals and complex numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ext chart of a comodule.
    Ext(ExtArgs),
    /// Algebraic Atiyah-Hirzebruch spectral sequence of the internal-degree filtration.
    Aahss(SseqArgs),
    /// rho-Bockstein spectral sequence of a real comodule.
    Bockstein(SseqArgs),
    /// Run a named verification suite, or `all`.
    Verify(VerifyArgs),
    /// Compare two chart files.
    Compare(CompareArgs),
    /// Render a chart file as text or SVG.
    Chart(ChartArgs),
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// R or C.
    #[arg(long, default_value = "R")]
    pub base: String,
    /// Module expression, e.g. "S(4,2) B0(1) * B0(1)".
    #[arg(long)]
    pub module: String,
    /// Closed intervals: s=a..b f=a..b w=a..b (all three required).
    #[arg(long, num_args = 3, value_names = ["S", "F", "W"], allow_hyphen_values = true, required = true)]
    pub range: Vec<String>,
    /// 1 for A(1), 0 for A(0).
    #[arg(long, default_value_t = 1)]
    pub level: u8,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Args, Debug)]
pub struct ExtArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Quotient by b-power torsion.
    #[arg(long)]
    pub mod_b: bool,
}

#[derive(Args, Debug)]
pub struct SseqArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Last page computed with differentials.
    #[arg(long, default_value_t = 4)]
    pub last: i32,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    /// Override the chart window: s=a..b f=a..b w=a..b.
    #[arg(long, num_args = 3, value_names = ["S", "F", "W"], allow_hyphen_values = true)]
    pub range: Option<Vec<String>>,
    /// Write the reports as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub expected: PathBuf,
    pub computed: PathBuf,
    /// Operators to compare, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ops: Option<Vec<String>>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub svg: bool,
    /// Only the page cw = N mod 4.
    #[arg(long)]
    pub coweight: Option<i32>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A failure reported as `{"error": kind, "message": ...}` on stderr.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure { kind, message: message.to_string() }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.kind, "message": self.message})
    }
}

type Result<T> = std::result::Result<T, Failure>;

pub fn parse_range(parts: &[String]) -> Result<Range> {
    let mut got: [Option<(i32, i32)>; 3] = [None; 3];
    for p in parts {
        let bad = || Failure::new("range", format!("expected k=a..b, got {p:?}"));
        let (k, v) = p.split_once('=').ok_or_else(bad)?;
        let (a, b) = v.split_once("..").ok_or_else(bad)?;
        let a: i32 = a.trim().parse().map_err(|_| bad())?;
        let b: i32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(Failure::new("range", format!("empty interval {p:?}")));
        }
        let i = match k.trim() {
            "s" => 0,
            "f" => 1,
            "w" => 2,
            _ => return Err(bad()),
        };
        if got[i].replace((a, b)).is_some() {
            return Err(Failure::new("range", format!("{k} given twice")));
        }
    }
    match got {
        [Some(s), Some(f), Some(w)] if f.0 >= 0 => Ok(Range::new(s, f, w)),
        [Some(_), Some(_), Some(_)] => Err(Failure::new("range", "filtration must be nonnegative")),
        _ => Err(Failure::new("range", "s, f and w intervals are all required")),
    }
}

struct Job {
    base: Base,
    label: String,
    module: Comodule,
    range: Range,
    level: u8,
}

fn job(a: &JobArgs) -> Result<Job> {
    let base: Base = a.base.parse().map_err(|e| Failure::new("base", e))?;
    let e = parse_module_expr(&a.module).map_err(|e| Failure::new("parse", e))?;
    if a.level > 1 {
        return Err(Failure::new("level", "level must be 0 or 1"));
    }
    let module = e.build(base, a.level).map_err(|e| Failure::new("module", e))?;
    let range = parse_range(&a.range)?;
    let label = if a.level == 0 { format!("{e} at level 0") } else { e.to_string() };
    Ok(Job { base: module.base, label, module, range, level: a.level })
}

fn range_json(r: &Range) -> Value {
    json!({"s": [r.s.0, r.s.1], "f": [r.f.0, r.f.1], "w": [r.w.0, r.w.1]})
}

fn spec_json(command: &str, j: &Job, extra: Value) -> Value {
    json!({"command": command, "base": j.base.to_string(), "module": j.label, "level": j.level, "range": range_json(&j.range), "options": extra})
}

/// Serve from the cache or compute and store.
fn cached(a: &JobArgs, spec: &Value, compute: impl FnOnce() -> Result<String>) -> Result<String> {
    if a.no_cache {
        return compute();
    }
    let c = Cache::new(cache::cache_dir(a.cache_dir.as_deref()));
    let key = cache::key(spec);
    if let Some(body) = c.get(&key) {
        return Ok(body);
    }
    let body = compute()?;
    c.put(&key, &body).map_err(|e| Failure::new("cache", e))?;
    Ok(body)
}

fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::new("io", format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run_ext(a: &ExtArgs) -> Result<u8> {
    let j = job(&a.job)?;
    let spec = spec_json("ext", &j, json!({"mod_b": a.mod_b}));
    let body = cached(&a.job, &spec, || {
        let chart = if a.mod_b {
            zoo::computed_chart(&j.label, &j.module, &j.range, true)
        } else {
            let ext = ExtComputer::for_comodule(j.label.clone(), j.module.clone(), &j.range);
            Chart::compute(&ext, &j.range)
        };
        let mut chart = chart;
        chart.module = j.label.clone();
        Ok(pretty(&chart.to_json()))
    })?;
    emit(a.job.json.as_deref(), &body)?;
    Ok(0)
}

fn page_json(p: &SseqPage) -> Value {
    let classes: Vec<Value> = p
        .dims
        .iter()
        .map(|((d, a), n)| json!({"s": d.s, "f": d.f, "w": d.w, "filtration": a, "dim": n, "d_rank": p.rank(*d, *a)}))
        .collect();
    json!({"page": p.r, "classes": classes})
}

fn sseq_json(j: &Job, s: &Sseq) -> Value {
    let deg = |d: &TriDegree| json!([d.s, d.f, d.w]);
    json!({
        "base": j.base.to_string(),
        "module": j.label,
        "range": range_json(&j.range),
        "pages": s.pages.iter().map(page_json).collect::<Vec<_>>(),
        "infinity": page_json(&s.infinity)["classes"],
        "abutment": s.abutment.iter().map(|(d, n)| json!({"s": d.s, "f": d.f, "w": d.w, "dim": n})).collect::<Vec<_>>(),
        "convergence_failures": s.convergence_failures.iter().map(|(d, a, b)| json!([deg(d), a, b])).collect::<Vec<_>>(),
        "homology_failures": s.homology_failures.iter().map(|(r, d, a)| json!([r, deg(d), a])).collect::<Vec<_>>(),
    })
}

fn run_aahss(a: &SseqArgs) -> Result<u8> {
    let j = job(&a.job)?;
    let spec = spec_json("aahss", &j, json!({"last": a.last}));
    let body = cached(&a.job, &spec, || {
        let fm = FilteredComodule::by_degree(j.module.clone()).map_err(|e| Failure::new("filtration", e))?;
        let s = sseq::aahss_pages(&fm, &j.range, a.last).map_err(|e| Failure::new("compute", e))?;
        Ok(pretty(&sseq_json(&j, &s)))
    })?;
    emit(a.job.json.as_deref(), &body)?;
    Ok(0)
}

fn run_bockstein(a: &SseqArgs) -> Result<u8> {
    let j = job(&a.job)?;
    if j.base != Base::R {
        return Err(Failure::new("base", "the rho-Bockstein needs a real comodule"));
    }
    let spec = spec_json("bockstein", &j, json!({"last": a.last}));
    let body = cached(&a.job, &spec, || {
        let b = sseq::rho_bockstein(&j.module, &j.range, a.last).map_err(|e| Failure::new("compute", e))?;
        let mut v = sseq_json(&j, &b.sseq);
        v["e1_failures"] = b.e1_failures.iter().map(|(d, x, y)| json!([[d.s, d.f, d.w], x, y])).collect();
        Ok(pretty(&v))
    })?;
    emit(a.job.json.as_deref(), &body)?;
    Ok(0)
}

fn run_verify(a: &VerifyArgs) -> Result<u8> {
    let range = a.range.as_deref().map(parse_range).transpose()?;
    let list: Vec<&suites::Suite> = if a.suite == "all" {
        suites::SUITES.iter().collect()
    } else {
        let names: Vec<&str> = suites::SUITES.iter().map(|s| s.name).collect();
        vec![suites::find(&a.suite).ok_or_else(|| Failure::new("suite", format!("unknown suite {:?}; known: all, {}", a.suite, names.join(", "))))?]
    };
    let mut reports = Vec::new();
    for s in list {
        let r = s.run(range);
        println!("[{}] {:>2} {}: {}", if r.passed() { "PASS" } else { "FAIL" }, s.criterion, s.name, s.title);
        for c in &r.checks {
            println!("       {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
            if !c.passed {
                for line in c.detail.lines() {
                    println!("            {line}");
                }
            }
        }
        reports.push(r);
    }
    if let Some(p) = &a.json {
        let v = Value::Array(reports.iter().map(|r| r.to_json()).collect());
        emit(Some(p), &pretty(&v))?;
    }
    Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
}

fn read_chart(p: &Path) -> Result<Chart> {
    let text = fs::read_to_string(p).map_err(|e| Failure::new("io", format!("{}: {e}", p.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::new("json", format!("{}: {e}", p.display())))?;
    Chart::from_json(&v).map_err(|e| Failure::new("json", format!("{}: {e}", p.display())))
}

fn run_compare(a: &CompareArgs) -> Result<u8> {
    let e = read_chart(&a.expected)?;
    let c = read_chart(&a.computed)?;
    let ops: Vec<&str> = match &a.ops {
        Some(v) => v.iter().map(String::as_str).collect(),
        None => COMPARE_OPS.to_vec(),
    };
    let d = zoo::compare(&e, &c, &ops);
    print!("{d}");
    if let Some(p) = &a.json {
        emit(Some(p), &pretty(&d.to_json()))?;
    }
    Ok(if d.is_empty() { 0 } else { 1 })
}

fn run_chart(a: &ChartArgs) -> Result<u8> {
    let mut c = read_chart(&a.input)?;
    let mut title = format!("Ext({}) over {}", c.module, c.base);
    if let Some(n) = a.coweight {
        c = c.coweight_page(n.rem_euclid(4));
        title.push_str(&format!(", cw = {} mod 4", n.rem_euclid(4)));
    }
    let body = if a.svg { render::svg(&c, &title) } else { render::text(&c, &title) };
    emit(a.output.as_deref(), &body)?;
    Ok(0)
}

/// Run a parsed command; the returned code is the process exit status.
pub fn run(cli: &Cli) -> std::result::Result<u8, Failure> {
    match &cli.command {
        Command::Ext(a) => run_ext(a),
        Command::Aahss(a) => run_aahss(a),
        Command::Bockstein(a) => run_bockstein(a),
        Command::Verify(a) => run_verify(a),
        Command::Compare(a) => run_compare(a),
        Command::Chart(a) => run_chart(a),
    }
}
