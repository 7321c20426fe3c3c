//! Command-line front end. Every run prints one JSON document (or a table)
//! echoing its configuration.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 input error, 3 budget exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::center::{self, Budgets, Center, Status};
use crate::classify::{fixed_dim, refl_length};
use crate::combin::{ClassType, Kind, Partition};
use crate::error::{Error, Result};
use crate::fh_symmetric as fh;
use crate::gf::Fq;
use crate::grp::Group;
use crate::mat::Matrix;
use crate::selftest::{self, SelftestConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Gl,
    Sp,
    Sym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "cgc", version, about = "Class sums and structure constants for S_n, GL_n(q) and Sp_n(q)")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(skip)]
    pub command: Command,
    /// Field size: a prime power such as 3, 9 or 3^2.
    #[arg(long, global = true, default_value = "3")]
    pub q: String,
    #[arg(long, global = true, value_enum, default_value = "sp")]
    pub kind: KindArg,
    /// Rank (GL_n, Sp_n acting on F_q^{2n}, or S_n).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Second rank for comparisons.
    #[arg(long, global = true)]
    pub n2: Option<usize>,
    /// Matrix as rows separated by ';', entries by ','. For sym: 1-based image list.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Second matrix, for intersection growth.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub matrix2: Option<String>,
    /// Modified types: JSON, or a comma list for sym (and for gl, the partition at t-1).
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true)]
    pub mu: Option<String>,
    #[arg(long, global = true)]
    pub eta: Option<String>,
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget_orbit: u64,
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub budget_filter: u64,
    /// Group table cache directory (default: $CGC_CACHE or the temp dir).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Also run the orbit-sum method (sc).
    #[arg(long, global = true)]
    pub orbit_sum: bool,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Type, fixed-space dimension and reflection length of a matrix or permutation.
    Classify,
    /// One structure constant c^eta_{lambda,mu}(n).
    Sc,
    /// The full product K_lambda K_mu at rank n, its top-degree part and the mass check.
    Expand,
    /// Top-degree structure constants at n and n2.
    Stability,
    /// Centralizer growth of a matrix (or a pair) from its own rank up to n.
    Growth,
    /// The acceptance suite.
    Selftest,
}

/// Result of a command: the JSON document and the exit code.
pub struct Outcome {
    pub code: i32,
    pub doc: Value,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Inconsistent(_) | Error::Generators { .. } | Error::Io(_) => EXIT_ASSERT,
        _ => EXIT_INPUT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division-by-zero",
        Error::Invalid(_) => "invalid",
        Error::Parse(_) => "parse",
        Error::Shape(_) => "shape",
        Error::Singular => "singular",
        Error::NotSymplectic => "not-symplectic",
        Error::Budget { .. } => "budget",
        Error::Generators { .. } => "generators",
        Error::Unsupported(_) => "unsupported",
        Error::Inconsistent(_) => "inconsistent",
        Error::Io(_) => "io",
    }
}

impl Cli {
    fn config(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").insert("command".into(), serde_json::to_value(self.command).unwrap());
        v
    }

    fn field(&self) -> Result<Fq> {
        Fq::parse(&self.q)
    }

    fn budgets(&self) -> Budgets {
        Budgets { orbit: self.budget_orbit, filter: self.budget_filter }
    }

    fn kind(&self) -> Result<Kind> {
        match self.kind {
            KindArg::Gl => Ok(Kind::Gl),
            KindArg::Sp => Ok(Kind::Sp),
            KindArg::Sym => Err(Error::Unsupported("this operation needs --kind gl or sp".into())),
        }
    }

    fn need_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Invalid("--n is required".into()))
    }

    fn matrix(&self, f: &Fq, which: Option<&String>, name: &str) -> Result<Matrix> {
        let s = which.ok_or_else(|| Error::Invalid(format!("--{name} is required")))?;
        Matrix::parse(f, s)
    }
}

fn parse_partition(s: &str) -> Result<Partition> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("partition part {p:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if parts.contains(&0) {
        return Err(Error::Parse("partition parts must be positive".into()));
    }
    Ok(Partition::new(parts))
}

/// Modified type from JSON, or from a comma list (gl: the partition at t-1).
pub fn parse_type(f: &Fq, kind: Kind, s: &str) -> Result<ClassType> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        return ClassType::from_json(f, kind, &v);
    }
    match kind {
        Kind::Gl => {
            let p = parse_partition(t)?;
            let mut pf = crate::combin::PartitionFn::new();
            if !p.is_empty() {
                pf.set(crate::poly::Poly::t_minus_one(f), p);
            }
            Ok(ClassType::Gl(pf))
        }
        Kind::Sp if parse_partition(t).map(|p| p.is_empty()).unwrap_or(false) => {
            Ok(ClassType::Sp(Default::default()))
        }
        Kind::Sp => Err(Error::Parse("symplectic types need JSON with sign data".into())),
    }
}

fn type_arg(f: &Fq, kind: Kind, v: &Option<String>, name: &str) -> Result<ClassType> {
    parse_type(f, kind, v.as_deref().ok_or_else(|| Error::Invalid(format!("--{name} is required")))?)
}

fn part_arg(v: &Option<String>, name: &str) -> Result<Partition> {
    parse_partition(v.as_deref().ok_or_else(|| Error::Invalid(format!("--{name} is required")))?)
}

fn terms_json(f: &Fq, terms: &[center::Term]) -> Value {
    Value::Array(terms.iter().map(|t| json!({"eta": t.eta.to_json(f), "c": t.c})).collect())
}

fn execute(cli: &Cli) -> Result<(bool, Value)> {
    match cli.command {
        Command::Classify => classify_cmd(cli),
        Command::Sc => sc_cmd(cli),
        Command::Expand => expand_cmd(cli),
        Command::Stability => stability_cmd(cli),
        Command::Growth => growth_cmd(cli),
        Command::Selftest => {
            let cfg = SelftestConfig { budgets: cli.budgets(), cache: cli.cache.clone() };
            let results = selftest::run_all(&cfg);
            let ok = results.iter().all(|r| r.passed);
            let mut v = serde_json::to_value(&results).expect("serializable");
            // timings vary between runs
            for r in v.as_array_mut().expect("array") {
                r.as_object_mut().expect("object").remove("millis");
            }
            Ok((ok, json!({ "passed": ok, "criteria": v })))
        }
    }
}

fn classify_cmd(cli: &Cli) -> Result<(bool, Value)> {
    if cli.kind == KindArg::Sym {
        let s = cli.matrix.as_deref().ok_or_else(|| Error::Invalid("--matrix is required".into()))?;
        let images = parse_partition_like_list(s)?;
        let g = fh::Perm::from_images(images.into_iter().map(|i| i - 1).collect())?;
        return Ok((
            true,
            json!({
                "cycle_type": fh::cycle_type(&g),
                "modified": fh::modified_cycle_type(&g),
                "support": fh::support(&g).iter().map(|i| i + 1).collect::<Vec<_>>(),
                "refl_length": fh::refl_length_perm(&g),
            }),
        ));
    }
    let f = cli.field()?;
    let kind = cli.kind()?;
    let u = cli.matrix(&f, cli.matrix.as_ref(), "matrix")?;
    let t = crate::classify::type_of(&f, kind, &u)?;
    Ok((
        true,
        json!({
            "type": t.to_json(&f),
            "modified": t.modify(&f).to_json(&f),
            "describe": t.describe(&f),
            "fixed_dim": fixed_dim(&f, &u),
            "refl_length": refl_length(&f, &u),
        }),
    ))
}

/// 1-based image list; zero entries are rejected by the caller.
fn parse_partition_like_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            let v = p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("image {p:?}: {e}")))?;
            if v == 0 {
                return Err(Error::Parse("images are 1-based".into()));
            }
            Ok(v)
        })
        .collect()
}

fn sc_cmd(cli: &Cli) -> Result<(bool, Value)> {
    let n = cli.need_n()?;
    if cli.kind == KindArg::Sym {
        let (l, m, e) = (part_arg(&cli.lambda, "lambda")?, part_arg(&cli.mu, "mu")?, part_arg(&cli.eta, "eta")?);
        let c = fh::sc_symmetric(&l, &m, &e, n)?;
        return Ok((true, json!({"kind": "sym", "n": n, "lambda": l, "mu": m, "eta": e, "constant": c, "method": "fiber"})));
    }
    let f = cli.field()?;
    let kind = cli.kind()?;
    let (l, m, e) =
        (type_arg(&f, kind, &cli.lambda, "lambda")?, type_arg(&f, kind, &cli.mu, "mu")?, type_arg(&f, kind, &cli.eta, "eta")?);
    let center = Center::new(Group::new(kind, f, n)?, cli.budgets());
    let report = if cli.orbit_sum { center.orbit_sum_check(&l, &m, &e)? } else { center.report(&l, &m, &e)? };
    Ok((report.agree, serde_json::to_value(report).expect("serializable")))
}

fn expand_cmd(cli: &Cli) -> Result<(bool, Value)> {
    let n = cli.need_n()?;
    if cli.kind == KindArg::Sym {
        let (l, m) = (part_arg(&cli.lambda, "lambda")?, part_arg(&cli.mu, "mu")?);
        let terms = fh::product_expand_sym(&l, &m, n)?;
        let size = |p: &Partition| p.ncomplete(n).map(|c| fh::class_size_sym(&c));
        let mut lhs = 0u128;
        for (e, c) in &terms {
            lhs += *c as u128 * size(e)?;
        }
        let rhs = size(&l)? * size(&m)?;
        let top = l.weight() + m.weight();
        let all: Vec<Value> = terms.iter().map(|(e, c)| json!({"eta": e, "c": c})).collect();
        let filtered: Vec<Value> =
            terms.iter().filter(|(e, _)| e.weight() == top).map(|(e, c)| json!({"eta": e, "c": c})).collect();
        return Ok((
            lhs == rhs,
            json!({"kind": "sym", "n": n, "lambda": l, "mu": m, "terms": all, "filtered": filtered,
                   "mass": {"lhs": lhs.to_string(), "rhs": rhs.to_string()}}),
        ));
    }
    let f = cli.field()?;
    let kind = cli.kind()?;
    let (l, m) = (type_arg(&f, kind, &cli.lambda, "lambda")?, type_arg(&f, kind, &cli.mu, "mu")?);
    let center = Center::new(Group::new(kind, f.clone(), n)?, cli.budgets());
    let terms = center.product_expand(&l, &m)?;
    let filtered = center::filter_top(&terms, &l, &m);
    let (lhs, rhs) = center.mass(&l, &m, &terms)?;
    Ok((
        lhs == rhs,
        json!({
            "kind": kind, "q": f.q(), "n": n,
            "lambda": l.to_json(&f), "mu": m.to_json(&f),
            "terms": terms_json(&f, &terms),
            "filtered": terms_json(&f, &filtered),
            "mass": {"lhs": lhs.to_string(), "rhs": rhs.to_string()},
        }),
    ))
}

fn stability_cmd(cli: &Cli) -> Result<(bool, Value)> {
    let n = cli.need_n()?;
    let n2 = cli.n2.ok_or_else(|| Error::Invalid("--n2 is required".into()))?;
    if cli.kind == KindArg::Sym {
        let r = selftest::stability_check_sym(n, n..=n2)?;
        return Ok((r.passed, serde_json::to_value(r).expect("serializable")));
    }
    let f = cli.field()?;
    let r = selftest::stability_check(cli.kind()?, &f, n, n2, cli.budgets())?;
    let mut v = serde_json::to_value(&r).expect("serializable");
    // u128 masses as strings
    for e in v["expansions"].as_array_mut().expect("array") {
        let mass = r.expansions.iter().find(|x| x.lambda == e["lambda"] && x.mu == e["mu"]).expect("present").mass;
        e["mass"] = json!(mass.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>());
    }
    Ok((r.passed, v))
}

fn growth_cmd(cli: &Cli) -> Result<(bool, Value)> {
    let f = cli.field()?;
    let kind = cli.kind()?;
    let u = cli.matrix(&f, cli.matrix.as_ref(), "matrix")?;
    let m = match kind {
        Kind::Gl => u.rows(),
        Kind::Sp => u.rows() / 2,
    };
    let n = cli.n.unwrap_or(m + 1);
    let r = match &cli.matrix2 {
        Some(_) => {
            if kind != Kind::Sp {
                return Err(Error::Unsupported("intersection growth is implemented for sp".into()));
            }
            let u2 = cli.matrix(&f, cli.matrix2.as_ref(), "matrix2")?;
            center::intersection_growth_check(&f, &u, &u2, m, n, cli.budget_filter)?
        }
        None => center::growth_check(&f, kind, &u, m, n, cli.budget_filter)?,
    };
    let mut v = serde_json::to_value(&r).expect("serializable");
    v["lhs"] = json!(r.lhs.to_string());
    v["rhs"] = json!(r.rhs.to_string());
    Ok((r.status != Status::Fail, v))
}

/// Flattens a JSON value into `path: value` lines.
fn table(v: &Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => out.push(format!("{prefix:<40} {v}")),
    }
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            return Outcome { code, doc: json!({ "message": e.to_string() }) };
        }
    };
    let config = cli.config();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.unwrap_or(0)).build();
    let result = match pool {
        Ok(p) => p.install(|| execute(&cli)),
        Err(e) => Err(Error::Invalid(e.to_string())),
    };
    match result {
        Ok((ok, v)) => Outcome {
            code: if ok { EXIT_PASS } else { EXIT_ASSERT },
            doc: json!({ "config": config, "passed": ok, "result": v }),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            doc: json!({ "config": config, "error": { "kind": error_kind(&e), "message": e.to_string() } }),
        },
    }
}

/// Renders an outcome in the requested format.
pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable"),
        Format::Table => {
            let mut lines = Vec::new();
            table(doc, "", &mut lines);
            lines.join("\n")
        }
    }
}

/// Entry point of the binary: runs, prints and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let format = if args.windows(2).any(|w| w[0] == "--format" && w[1] == "table")
        || args.iter().any(|a| a == "--format=table")
    {
        Format::Table
    } else {
        Format::Json
    };
    let out = run(args);
    match out.doc.get("message").and_then(Value::as_str) {
        Some(msg) if out.doc.get("config").is_none() => {
            if out.code == EXIT_PASS {
                print!("{msg}");
            } else {
                eprint!("{msg}");
            }
        }
        _ => println!("{}", render(&out.doc, format)),
    }
    out.code
}
