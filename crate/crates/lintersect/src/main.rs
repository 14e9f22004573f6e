//! Command-line driver: bounds, hypothesis checks, witnesses, partitions,
//! certified searches, and the q-analogue commands.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 anomaly (a
//! theorem-violating instance, which correct code must never produce).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lintersect::exact::Natural;
use lintersect::family::{parse_family, serialize_family, KSet, LSet, SetFamily};
use lintersect::procedures::{
    check_prop33_instance, helly_witness, kwise_partition, PairFamilyInstance,
};
use lintersect::qspace::{
    enumerate_subspaces, helly_witness_q, max_subspace_family, parse_subspace_family,
    q_bound, serialize_subspace_family, QBoundSpec,
};
use lintersect::search::{
    construct_extremal, max_family, tightness_scan, GridCell, SearchSpec,
};
use lintersect::theorems::{
    apply_theorem, cor18_threshold_k, default_thm17_k, ekr_bound, frankl_wilson_bound,
    lemma32_bound, lemma36_threshold, prop33_threshold, snevily_bound, t_intersecting_bound,
    thm17_bound, thm17_threshold, BoundValue, KwiseParams, TheoremId, TheoremReport,
};

#[derive(Parser)]
#[command(
    name = "lintersect",
    about = "Exact bounds, proof procedures, and certified search for \
             L-intersecting set and subspace systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonOut {
    /// Write a machine-readable JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a theorem's exact bound from parameters alone.
    Bound {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        l1: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// Permitted member sizes (comma-separated ascending); the maximum
        /// is used where a single k is needed.
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        wise: Option<u64>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Check every hypothesis of a theorem against a family file.
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        wise: Option<u64>,
        #[arg(long)]
        assert_n0: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Extract a Helly-type witness achieving the family's intersection.
    Witness {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run the k-wise partition procedure and re-validate its output.
    Partition {
        #[arg(long)]
        family: PathBuf,
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        wise: u64,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Certified maximum family search.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long, default_value_t = 2)]
        wise: u64,
        #[arg(long, default_value_t = 60)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Emit the extremal family attaining the generalized bound.
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l1: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Enumerate subspaces of F_q^n by dimension.
    Qenum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dims: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Certified maximum subspace family search.
    Qsearch {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dims: Option<String>,
        #[arg(long = "L")]
        l: String,
        #[arg(long, default_value_t = 60)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run max_family plus every applicable theorem over a grid file.
    Scan {
        /// Grid file: one cell per line, "n=<int> L=<list> h=<int> [K=<list>]".
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 60)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        common: CommonOut,
    },
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn parse_list(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| usage(format!("bad list entry {p:?}"))))
        .collect()
}

fn parse_lset(text: &str) -> Result<LSet, CliError> {
    LSet::new(parse_list(text)?).map_err(usage)
}

fn parse_kset(text: &str) -> Result<KSet, CliError> {
    KSet::new(parse_list(text)?).map_err(usage)
}

fn require<T>(v: Option<T>, name: &str, theorem: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--{name} is required for theorem {theorem}")))
}

struct Output {
    text: String,
    json: Value,
    anomalies: Vec<String>,
}

impl Output {
    fn new() -> Self {
        Output { text: String::new(), json: Value::Null, anomalies: Vec::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.text, "{}", s.as_ref());
    }
}

fn verdicts_json(rep: &TheoremReport) -> Value {
    json!(rep
        .hypotheses
        .iter()
        .map(|h| json!({ "hypothesis": h.description, "verdict": h.verdict.to_string() }))
        .collect::<Vec<_>>())
}

fn report_json(rep: &TheoremReport) -> Value {
    json!({
        "theorem": rep.theorem.to_string(),
        "hypotheses": verdicts_json(rep),
        "bound": rep.bound.to_string(),
        "effective_bound": rep.effective_bound.to_string(),
        "family_size": rep.family_size,
        "within_bound": rep.within_bound,
        "tight": rep.tight,
        "applicable": rep.applicable,
        "common_core": rep.common_core,
    })
}

fn print_report(out: &mut Output, rep: &TheoremReport) {
    out.line(format!("theorem        {}", rep.theorem));
    for h in &rep.hypotheses {
        out.line(format!("  [{}] {}", h.verdict, h.description));
    }
    let bound_note = match &rep.bound {
        BoundValue::Integer(_) => String::new(),
        BoundValue::Rational(r) => format!(" (exact {r})"),
    };
    out.line(format!("bound          {}{}", rep.effective_bound, bound_note));
    out.line(format!("family size    {}", rep.family_size));
    out.line(format!(
        "within bound   {}{}",
        rep.within_bound,
        if rep.tight { " (tight)" } else { "" }
    ));
    out.line(format!("applicable     {}", rep.applicable));
    if let Some(core) = rep.common_core {
        out.line(format!("common core    {core}"));
    }
}

fn report_anomalies(rep: &TheoremReport) -> Vec<String> {
    let mut out = Vec::new();
    if rep.applicable && !rep.within_bound {
        out.push(format!(
            "{}: family of size {} exceeds the bound {} with all hypotheses satisfied",
            rep.theorem, rep.family_size, rep.effective_bound
        ));
    }
    if rep.applicable && rep.common_core == Some(false) {
        out.push(format!(
            "{}: tight family above the threshold lacks the common core promised \
             by the equality clause",
            rep.theorem
        ));
    }
    out
}

fn kmax_or_default(k: &Option<String>, fallback: u64) -> Result<u64, CliError> {
    match k {
        Some(text) => Ok(parse_kset(text)?.max()),
        None => Ok(fallback),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_bound(
    theorem: &str,
    n: Option<u64>,
    l1: Option<u64>,
    s: Option<u64>,
    r: Option<u64>,
    q: Option<u64>,
    k: &Option<String>,
    wise: Option<u64>,
) -> Result<Output, CliError> {
    let mut out = Output::new();
    let t = theorem.to_ascii_lowercase();
    let mut threshold_note: Option<(Natural, u64)> = None;
    let mut bound_text: String;
    let bound_value: Value;
    match t.as_str() {
        "ekr" | "ekr_1_1" => {
            let n = require(n, "n", theorem)?;
            let k = parse_kset(&require(k.clone(), "K", theorem)?)?.max();
            let b = ekr_bound(n, k);
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "tint" | "tint_1_2" => {
            let n = require(n, "n", theorem)?;
            let k = parse_kset(&require(k.clone(), "K", theorem)?)?.max();
            let tv = require(l1, "l1", theorem)?;
            let b = t_intersecting_bound(n, k, tv).map_err(usage)?;
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "fw" | "fw_1_3" | "lemma32" | "lemma_3_2" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let b = if t.starts_with("fw") {
                frankl_wilson_bound(n, s)
            } else {
                lemma32_bound(n, s)
            };
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "abs" | "abs_1_4" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let r = require(r, "r", theorem)?;
            let b = lintersect::theorems::abs_bound(n, s, r);
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "snevily" | "snevily_1_5" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let b = snevily_bound(n, s).map_err(usage)?;
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "conj16" | "conj_1_6" | "thm17" | "thm_1_7" => {
            let n = require(n, "n", theorem)?;
            let l1 = require(l1, "l1", theorem)?;
            let s = require(s, "s", theorem)?;
            let r = require(r, "r", theorem)?;
            let b = thm17_bound(n, l1, s, r).map_err(usage)?;
            if t.contains("17") || t.contains("1_7") {
                let kk = kmax_or_default(k, default_thm17_k(l1, s, r))?;
                threshold_note = Some((thm17_threshold(kk, l1, s), n));
            }
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "cor18" | "cor_1_8" => {
            let n = require(n, "n", theorem)?;
            let l1 = require(l1, "l1", theorem)?;
            let s = require(s, "s", theorem)?;
            let b = thm17_bound(n, l1, s, s + 1).map_err(usage)?;
            let kk = kmax_or_default(k, cor18_threshold_k(l1, s))?;
            threshold_note = Some((thm17_threshold(kk, l1, s), n));
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "fs9" | "fs_1_9" | "fs10" | "fs_1_10" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let h = require(wise, "wise", theorem)?;
            let l1 = if t.contains("10") { require(l1, "l1", theorem)? } else { 0 };
            let b = lintersect::theorems::fs_kwise_bound(h, n, s, l1).map_err(usage)?;
            let eff = lintersect::exact::rational_floor(&b);
            bound_text = format!("{eff} (exact {b})");
            bound_value = json!(b.to_string());
        }
        "gs34" | "gs_3_4" | "thm35" | "thm_3_5" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let h = require(wise, "wise", theorem)?;
            let l1 = if t.contains("35") || t.contains("3_5") {
                require(l1, "l1", theorem)?
            } else {
                0
            };
            let b = lintersect::theorems::gs_kwise_bound(h, n, s, l1).map_err(usage)?;
            if l1 > 0 || t.contains("35") || t.contains("3_5") {
                let kk = kmax_or_default(k, default_thm17_k(l1, s, s))?;
                threshold_note = Some((prop33_threshold(kk, l1, s), n));
            }
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "lemma36" | "lemma_3_6" => {
            let n = require(n, "n", theorem)?;
            let s = require(s, "s", theorem)?;
            let l1 = require(l1, "l1", theorem)?;
            let h = require(wise, "wise", theorem)?;
            let b = lintersect::theorems::lemma36_bound(h, n, s, l1).map_err(usage)?;
            let kk = kmax_or_default(k, default_thm17_k(l1, s, s))?;
            threshold_note = Some((lemma36_threshold(kk, l1, s), n));
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "prop33" | "prop_3_3" => {
            let n = require(n, "n", theorem)?;
            let l1 = require(l1, "l1", theorem)?;
            let s = require(s, "s", theorem)?;
            let b = lintersect::exact::binom_sum(n.saturating_sub(l1), 0, s as i64)
                .map_err(usage)?;
            let kk = kmax_or_default(k, default_thm17_k(l1, s, s))?;
            threshold_note = Some((prop33_threshold(kk, l1, s), n));
            bound_text = b.to_string();
            bound_value = json!(b.to_string());
        }
        "t1_11" | "t1_12" | "t1_13" | "t1_14" | "t1_15" | "t1_16" => {
            let qv = require(q, "q", theorem)?;
            let n = require(n, "n", theorem)?;
            let spec = match t.as_str() {
                "t1_11" => QBoundSpec::T1_11 {
                    q: qv,
                    n,
                    k: parse_kset(&require(k.clone(), "K", theorem)?)?.max(),
                },
                "t1_12" => QBoundSpec::T1_12 { q: qv, n, s: require(s, "s", theorem)? },
                "t1_13" => QBoundSpec::T1_13 { q: qv, n, s: require(s, "s", theorem)? },
                "t1_14" => QBoundSpec::T1_14 {
                    q: qv,
                    n,
                    s: require(s, "s", theorem)?,
                    t: require(r, "r", theorem)?,
                },
                "t1_15" => QBoundSpec::T1_15 {
                    q: qv,
                    n,
                    s: require(s, "s", theorem)?,
                    l1: require(l1, "l1", theorem)?,
                    k: parse_kset(&require(k.clone(), "K", theorem)?)?.max(),
                },
                _ => QBoundSpec::T1_16 {
                    q: qv,
                    n,
                    s: require(s, "s", theorem)?,
                    l1: require(l1, "l1", theorem)?,
                    r: require(r, "r", theorem)?,
                    k: parse_kset(&require(k.clone(), "K", theorem)?)?.max(),
                },
            };
            let rep = q_bound(&spec).map_err(usage)?;
            bound_text = rep.bound.to_string();
            if let Some(pass) = rep.threshold_pass {
                bound_text =
                    format!("{bound_text}, threshold: {}", if pass { "PASS" } else { "FAIL" });
            }
            bound_value = json!(rep.bound.to_string());
            out.line(format!("bound = {bound_text}"));
            out.json = json!({
                "schema_version": "1",
                "invocation": { "command": "bound", "theorem": theorem },
                "results": [{ "bound": bound_value, "threshold_pass": rep.threshold_pass }],
                "anomalies": [],
            });
            return Ok(out);
        }
        other => return Err(usage(format!("unknown theorem id {other:?}"))),
    }
    let mut threshold_json = Value::Null;
    if let Some((threshold, n)) = &threshold_note {
        let pass = Natural::from(*n) >= *threshold;
        bound_text = format!(
            "{bound_text}, threshold n >= {threshold}: {}",
            if pass { "PASS" } else { "FAIL" }
        );
        threshold_json = json!({ "threshold": threshold.to_string(), "pass": pass });
    }
    out.line(format!("bound = {bound_text}"));
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "bound", "theorem": theorem },
        "results": [{ "bound": bound_value, "threshold": threshold_json }],
        "anomalies": [],
    });
    Ok(out)
}

fn load_family(path: &PathBuf) -> Result<SetFamily, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| data(format!("{}: {e}", path.display())))?;
    parse_family(&text).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn run_check(
    family: &PathBuf,
    l: &str,
    k: &Option<String>,
    theorem: &str,
    wise: Option<u64>,
    assert_n0: bool,
) -> Result<Output, CliError> {
    let fam = load_family(family)?;
    let l = parse_lset(l)?;
    let k = k.as_deref().map(parse_kset).transpose()?;
    let id: TheoremId = theorem.parse().map_err(usage)?;
    let kwise = wise.map(|h| KwiseParams { h, assert_n0 });
    let rep = apply_theorem(id, &fam, &l, k.as_ref(), kwise.as_ref()).map_err(data)?;
    let mut out = Output::new();
    print_report(&mut out, &rep);
    out.anomalies = report_anomalies(&rep);
    out.json = json!({
        "schema_version": "1",
        "invocation": {
            "command": "check",
            "family": family.display().to_string(),
            "theorem": id.to_string(),
        },
        "results": [report_json(&rep)],
        "anomalies": out.anomalies,
    });
    Ok(out)
}

fn run_witness(family: &PathBuf) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(family)
        .map_err(|e| data(format!("{}: {e}", family.display())))?;
    let mut out = Output::new();
    let indices: Vec<usize>;
    if text.trim_start().starts_with("q=") {
        let fam = parse_subspace_family(&text).map_err(data)?;
        let w = helly_witness_q(&fam).map_err(data)?;
        indices = w.indices;
        out.line(format!(
            "witness indices: {indices:?} (size {} <= max dim + 1)",
            indices.len()
        ));
    } else {
        let fam = parse_family(&text).map_err(data)?;
        let target = fam.common_intersection().map_err(data)?;
        let w = helly_witness(&fam, target).map_err(data)?;
        indices = w.indices;
        out.line(format!(
            "witness indices: {indices:?} (size {} <= max size + 1)",
            indices.len()
        ));
    }
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "witness", "family": family.display().to_string() },
        "results": [{ "indices": indices }],
        "anomalies": [],
    });
    Ok(out)
}

fn run_partition(family: &PathBuf, l: &str, wise: u64) -> Result<Output, CliError> {
    let fam = load_family(family)?;
    let l = parse_lset(l)?;
    let part = kwise_partition(&fam, &l, wise).map_err(data)?;
    let mut out = Output::new();
    out.line(format!(
        "partition: |B| = {}, |F| = {}, reorder = {:?}",
        part.b.len(),
        part.f.len(),
        part.reorder
    ));
    let inst = PairFamilyInstance::new(
        part.b.ground(),
        part.b.members().to_vec(),
        part.c.clone(),
        l,
    )
    .map_err(data)?;
    let k = part.b.max_member_size() as u64;
    let rep = check_prop33_instance(&inst, k).map_err(data)?;
    print_report(&mut out, &rep);
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "partition", "family": family.display().to_string() },
        "results": [{
            "b_size": part.b.len(),
            "f_size": part.f.len(),
            "reorder": part.reorder,
            "validation": report_json(&rep),
        }],
        "anomalies": [],
    });
    Ok(out)
}

fn run_search(
    n: u32,
    l: &str,
    k: &Option<String>,
    wise: u64,
    budget: u64,
    threads: usize,
) -> Result<Output, CliError> {
    let l = parse_lset(l)?;
    let k = k.as_deref().map(parse_kset).transpose()?;
    let mut spec = SearchSpec::new(n, l, k, wise);
    spec.time_budget = Duration::from_secs(budget);
    spec.thread_count = threads;
    let res = max_family(&spec).map_err(data)?;
    let mut out = Output::new();
    out.line(format!(
        "max = {} ({})",
        res.max_size,
        if res.certified { "certified" } else { "uncertified: budget exhausted" }
    ));
    let witness_text = res.witness.as_ref().map(serialize_family);
    if let Some(w) = &witness_text {
        out.line("witness:");
        for line in w.lines() {
            out.line(format!("  {line}"));
        }
    }
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "search", "n": n, "wise": wise },
        "results": [{
            "max_size": res.max_size,
            "certified": res.certified,
            "nodes_explored": res.nodes_explored,
            "witness": witness_text,
        }],
        "anomalies": [],
    });
    Ok(out)
}

fn run_construct(n: u64, l1: u64, s: u64, r: u64) -> Result<Output, CliError> {
    let fam = construct_extremal(n, l1, s, r).map_err(data)?;
    let mut out = Output::new();
    let text = serialize_family(&fam);
    out.text = text.clone();
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "construct", "n": n, "l1": l1, "s": s, "r": r },
        "results": [{ "size": fam.len(), "family": text }],
        "anomalies": [],
    });
    Ok(out)
}

fn run_qenum(q: u64, n: usize, dims: &str) -> Result<Output, CliError> {
    let field = lintersect::gf::FieldSpec::new(q).map_err(usage)?;
    let dims = parse_list(dims)?;
    let mut out = Output::new();
    let mut counts = Vec::new();
    let mut blocks = String::new();
    for &k in &dims {
        let subs = enumerate_subspaces(&field, n, k as usize).map_err(data)?;
        out.line(format!("k={k}: {} subspaces", subs.len()));
        counts.push(json!({ "k": k, "count": subs.len() }));
        for sub in &subs {
            let _ = writeln!(blocks);
            let _ = writeln!(blocks, "k={}", sub.dim());
            for row in sub.basis() {
                let text: String = row
                    .iter()
                    .map(|&d| char::from_digit(d as u32, 16).unwrap())
                    .collect();
                let _ = writeln!(blocks, "{text}");
            }
        }
    }
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "qenum", "q": q, "n": n },
        "results": counts,
        "anomalies": [],
        "subspaces": format!("q={q} n={n}\n{blocks}"),
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_qsearch(
    q: u64,
    n: usize,
    dims: &Option<String>,
    l: &str,
    budget: u64,
    threads: usize,
) -> Result<Output, CliError> {
    let field = lintersect::gf::FieldSpec::new(q).map_err(usage)?;
    let dims = dims.as_deref().map(parse_list).transpose()?;
    let l = parse_lset(l)?;
    let deadline = Instant::now() + Duration::from_secs(budget);
    let res = max_subspace_family(&field, n, dims.as_deref(), &l, Some(deadline), threads)
        .map_err(data)?;
    let mut out = Output::new();
    out.line(format!(
        "max = {} ({})",
        res.max_size,
        if res.certified { "certified" } else { "uncertified: budget exhausted" }
    ));
    let witness_text = res.witness.as_ref().map(serialize_subspace_family);
    if let Some(w) = &witness_text {
        out.line("witness:");
        for line in w.lines() {
            out.line(format!("  {line}"));
        }
    }
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "qsearch", "q": q, "n": n },
        "results": [{
            "max_size": res.max_size,
            "certified": res.certified,
            "nodes_explored": res.nodes_explored,
            "witness": witness_text,
        }],
        "anomalies": [],
    });
    Ok(out)
}

fn parse_grid(text: &str) -> Result<Vec<GridCell>, CliError> {
    let mut cells = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut n = None;
        let mut l = None;
        let mut h = None;
        let mut k = None;
        for part in content.split_whitespace() {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| data(format!("grid line {line}: bad token {part:?}")))?;
            match key {
                "n" => n = Some(value.parse::<u32>().map_err(|e| data(format!("line {line}: {e}")))?),
                "L" => l = Some(parse_lset(value)?),
                "h" => h = Some(value.parse::<u64>().map_err(|e| data(format!("line {line}: {e}")))?),
                "K" => k = Some(parse_kset(value)?),
                other => return Err(data(format!("grid line {line}: unknown key {other:?}"))),
            }
        }
        cells.push(GridCell {
            n: n.ok_or_else(|| data(format!("grid line {line}: missing n")))?,
            l: l.ok_or_else(|| data(format!("grid line {line}: missing L")))?,
            k,
            h: h.ok_or_else(|| data(format!("grid line {line}: missing h")))?,
        });
    }
    Ok(cells)
}

fn run_scan(grid: &PathBuf, budget: u64, threads: usize) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(grid)
        .map_err(|e| data(format!("{}: {e}", grid.display())))?;
    let cells = parse_grid(&text)?;
    let outcomes = tightness_scan(&cells, Duration::from_secs(budget), threads);
    let mut out = Output::new();
    let mut cells_json = Vec::new();
    for outcome in &outcomes {
        let header = format!(
            "cell n={} L={:?} h={}",
            outcome.cell.n,
            outcome.cell.l.values(),
            outcome.cell.h
        );
        match &outcome.search {
            Err(e) => out.line(format!("{header}: search error: {e}")),
            Ok(res) => {
                out.line(format!(
                    "{header}: max = {} ({})",
                    res.max_size,
                    if res.certified { "certified" } else { "uncertified" }
                ));
                for rep in &outcome.reports {
                    out.line(format!(
                        "  {} bound {} {}{}",
                        rep.theorem,
                        rep.effective_bound,
                        if rep.applicable { "applicable" } else { "inapplicable" },
                        if rep.applicable && rep.tight { ", tight" } else { "" },
                    ));
                }
            }
        }
        for a in &outcome.anomalies {
            out.anomalies.extend(report_anomalies(a));
        }
        cells_json.push(json!({
            "n": outcome.cell.n,
            "L": outcome.cell.l.values(),
            "h": outcome.cell.h,
            "max_size": outcome.search.as_ref().ok().map(|r| r.max_size),
            "certified": outcome.search.as_ref().ok().map(|r| r.certified),
            "error": outcome.search.as_ref().err().map(|e| e.to_string()),
            "reports": outcome.reports.iter().map(report_json).collect::<Vec<_>>(),
        }));
    }
    out.json = json!({
        "schema_version": "1",
        "invocation": { "command": "scan", "grid": grid.display().to_string() },
        "results": cells_json,
        "anomalies": out.anomalies,
    });
    Ok(out)
}

fn dispatch(cli: Cli) -> Result<(Output, Option<PathBuf>), CliError> {
    let (out, path) = match cli.command {
        Command::Bound { theorem, n, l1, s, r, q, k, wise, common } => {
            (run_bound(&theorem, n, l1, s, r, q, &k, wise)?, common.out)
        }
        Command::Check { family, l, k, theorem, wise, assert_n0, common } => {
            (run_check(&family, &l, &k, &theorem, wise, assert_n0)?, common.out)
        }
        Command::Witness { family, common } => (run_witness(&family)?, common.out),
        Command::Partition { family, l, wise, common } => {
            (run_partition(&family, &l, wise)?, common.out)
        }
        Command::Search { n, l, k, wise, budget, threads, common } => {
            (run_search(n, &l, &k, wise, budget, threads)?, common.out)
        }
        Command::Construct { n, l1, s, r, common } => {
            (run_construct(n, l1, s, r)?, common.out)
        }
        Command::Qenum { q, n, dims, common } => (run_qenum(q, n, &dims)?, common.out),
        Command::Qsearch { q, n, dims, l, budget, threads, common } => {
            (run_qsearch(q, n, &dims, &l, budget, threads)?, common.out)
        }
        Command::Scan { grid, budget, threads, common } => {
            (run_scan(&grid, budget, threads)?, common.out)
        }
    };
    Ok((out, path))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output still exits 0
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok((out, path)) => {
            print!("{}", out.text);
            for a in &out.anomalies {
                eprintln!("ANOMALY: {a}");
            }
            if let Some(path) = path {
                let doc = serde_json::to_string_pretty(&out.json).expect("report serializes");
                if let Err(e) = std::fs::write(&path, doc + "\n") {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if out.anomalies.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
