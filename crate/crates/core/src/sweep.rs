//! Resumable grid sweeps writing one JSON record per task.
//!
//! Records are appended as tasks finish, so an interrupted run keeps its
//! work. A resumed run skips ids already present, and finalisation rewrites
//! the log deduplicated and sorted by task id.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{admissible_k_max, nu_floor, nu_floor_at, rickert_applicable, rickert};
use crate::error::{Error, Result};
use crate::reduce::{verify_pair_at, verify_prop_delta, PairReport};
use crate::tuple::family_triple;

/// How `K` is chosen for each `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRule {
    Range(i64, i64),
    /// `samples` evenly spaced values in `[1, K_max(A)]` of the admissible region.
    PaperBound { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// ν-floor test on every family pair.
    Nu,
    /// Full reduction and residual intersection on every family pair.
    Verify,
    /// Quintuple triples attached to `Δ` over the `A` range read as `Δ`.
    Delta,
}

impl SweepMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nu" => Ok(SweepMode::Nu),
            "verify" => Ok(SweepMode::Verify),
            "delta" => Ok(SweepMode::Delta),
            _ => Err(Error::Domain(format!("unknown sweep mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub eps_list: Vec<i64>,
    pub a_range: (i64, i64),
    pub k_rule: KRule,
    pub nu_max: u64,
    pub prec: Option<u32>,
    pub jobs: usize,
    pub output: PathBuf,
    pub resume: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::Nu,
            eps_list: vec![-2, 2],
            a_range: (2, 39),
            k_rule: KRule::PaperBound { samples: 4 },
            nu_max: 10,
            prec: None,
            jobs: 1,
            output: PathBuf::from("sweep.jsonl"),
            resume: false,
        }
    }
}

/// Parses `lo..hi` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Domain(format!("bad range {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Error::Domain(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

pub fn parse_eps_list(s: &str) -> Result<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Domain(format!("bad eps {t:?}"))))
        .collect::<Result<_>>()?;
    if v.is_empty() || v.iter().any(|e| ![-2, -1, 1, 2].contains(e)) {
        return Err(Error::Domain(format!("eps list must be drawn from -2,-1,1,2: {s:?}")));
    }
    Ok(v)
}

impl SweepConfig {
    /// Reads `key = value` lines; `#` starts a comment. Unknown keys are errors.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut samples = 4usize;
        let mut k_paper = true;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("line {}: expected key = value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<u64> {
                v.parse().map_err(|_| Error::Domain(format!("line {}: bad number {v:?}", no + 1)))
            };
            match key {
                "mode" => cfg.mode = SweepMode::parse(value)?,
                "eps" => cfg.eps_list = parse_eps_list(value)?,
                "A" | "a" => cfg.a_range = parse_range(value)?,
                "K" | "k" => {
                    if value == "paper-bound" {
                        k_paper = true;
                    } else {
                        k_paper = false;
                        let (lo, hi) = parse_range(value)?;
                        cfg.k_rule = KRule::Range(lo, hi);
                    }
                }
                "k-samples" => samples = num(value)? as usize,
                "nu-max" => cfg.nu_max = num(value)?,
                "precision" => cfg.prec = Some(num(value)? as u32),
                "jobs" => cfg.jobs = num(value)? as usize,
                "output" => cfg.output = PathBuf::from(value),
                "resume" => cfg.resume = matches!(value, "true" | "yes" | "1"),
                _ => return Err(Error::Domain(format!("line {}: unknown key {key:?}", no + 1))),
            }
        }
        if k_paper {
            cfg.k_rule = KRule::PaperBound { samples };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::Domain("jobs must be at least 1".into()));
        }
        if self.a_range.0 > self.a_range.1 || self.eps_list.is_empty() {
            return Err(Error::Domain("empty sweep range".into()));
        }
        if let KRule::PaperBound { samples: 0 } = self.k_rule {
            return Err(Error::Domain("k-samples must be at least 1".into()));
        }
        if self.nu_max == 0 {
            return Err(Error::Domain("nu-max must be at least 1".into()));
        }
        Ok(())
    }

    /// Working precision: the override (never below 180) or the family policy.
    pub fn effective_prec(&self) -> Option<u32> {
        self.prec.map(|p| p.max(180))
    }
}

/// A unit of work with a stable id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Family { eps: i64, a: i64, k: i64 },
    Delta(u64),
}

impl Task {
    pub fn id(&self) -> String {
        match self {
            Task::Family { eps, a, k } => format!("{eps}:{a}:{k}"),
            Task::Delta(d) => format!("delta:{d}"),
        }
    }

    /// Inverse of [`Task::id`].
    pub fn parse(id: &str) -> Option<Task> {
        if let Some(d) = id.strip_prefix("delta:") {
            return d.parse().ok().map(Task::Delta);
        }
        let mut it = id.split(':').map(|p| p.parse::<i64>().ok());
        match (it.next()??, it.next()??, it.next()??, it.next()) {
            (eps, a, k, None) => Some(Task::Family { eps, a, k }),
            _ => None,
        }
    }
}

fn sample_k(k_max: i64, samples: usize) -> Vec<i64> {
    if k_max < 1 {
        return Vec::new();
    }
    if samples <= 1 {
        return vec![k_max];
    }
    let mut v: Vec<i64> = (0..samples as i64).map(|i| 1 + i * (k_max - 1) / (samples as i64 - 1)).collect();
    v.dedup();
    v
}

/// Tasks of the configuration in canonical order; pairs without a valid family triple are dropped.
pub fn tasks(cfg: &SweepConfig) -> Vec<Task> {
    let mut out = Vec::new();
    if cfg.mode == SweepMode::Delta {
        for d in cfg.a_range.0.max(0)..=cfg.a_range.1 {
            out.push(Task::Delta(d as u64));
        }
        return out;
    }
    for &eps in &cfg.eps_list {
        for a in cfg.a_range.0..=cfg.a_range.1 {
            let ks = match &cfg.k_rule {
                KRule::Range(lo, hi) => (*lo..=*hi).collect(),
                KRule::PaperBound { samples } => admissible_k_max(a).map(|m| sample_k(m, *samples)).unwrap_or_default(),
            };
            for k in ks {
                if family_triple(a, k, eps).is_ok() {
                    out.push(Task::Family { eps, a, k });
                }
            }
        }
    }
    out.sort();
    out
}

/// One line of the record log. Field order is fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub id: String,
    pub kind: String,
    pub verdict: String,
    pub d_plus: Option<String>,
    pub nu_floor: Option<u64>,
    pub new_bound: Option<String>,
    pub lambda: Option<String>,
    pub anchor: String,
    pub prec: Option<u32>,
    pub detail: Option<String>,
    pub wall_ms: u64,
}

impl ResultRecord {
    pub fn is_positive(&self) -> bool {
        matches!(self.verdict.as_str(), "nu-excluded" | "unique-extension")
    }

    pub fn is_precision_failure(&self) -> bool {
        self.verdict == "precision-exhausted"
    }

    fn csv_row(&self) -> String {
        let o = |v: &Option<String>| v.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            self.kind,
            self.verdict,
            o(&self.d_plus),
            self.nu_floor.map(|n| n.to_string()).unwrap_or_default(),
            o(&self.new_bound),
            o(&self.lambda),
            self.prec.map(|n| n.to_string()).unwrap_or_default()
        )
    }
}

fn error_record(id: String, kind: &str, anchor: &str, e: &Error) -> ResultRecord {
    let verdict = if e.is_precision() { "precision-exhausted" } else { "error" };
    ResultRecord {
        id,
        kind: kind.into(),
        verdict: verdict.into(),
        d_plus: None,
        nu_floor: None,
        new_bound: None,
        lambda: None,
        anchor: anchor.into(),
        prec: None,
        detail: Some(e.to_string()),
        wall_ms: 0,
    }
}

fn pair_record(id: String, kind: &str, anchor: &str, rep: &PairReport) -> ResultRecord {
    let detail = match &rep.verdict {
        crate::reduce::Verdict::NeedsAttention(s) => Some(s.clone()),
        _ => Some(format!("fundamentals {}", rep.fundamentals)),
    };
    ResultRecord {
        id,
        kind: kind.into(),
        verdict: rep.verdict.as_str().into(),
        d_plus: Some(rep.d_plus.to_string()),
        nu_floor: None,
        new_bound: Some(rep.max_bound().to_string()),
        lambda: None,
        anchor: anchor.into(),
        prec: Some(rep.prec),
        detail,
        wall_ms: 0,
    }
}

/// Runs one task to a record. Errors are folded into the record.
pub fn run_task(task: &Task, cfg: &SweepConfig) -> ResultRecord {
    let start = Instant::now();
    let id = task.id();
    let mut rec = match (task, cfg.mode) {
        (Task::Family { eps, a, k }, SweepMode::Nu) => {
            let floor = match cfg.effective_prec() {
                Some(p) => nu_floor_at(*a, *k, *eps, cfg.nu_max, p),
                None => nu_floor(*a, *k, *eps, cfg.nu_max),
            };
            match floor {
                Ok(nu) => {
                    let f = family_triple(*a, *k, *eps).expect("task triples are valid");
                    let lambda = rickert_applicable(*a, *k, *eps)
                        .then(|| rickert(*a, *k, *eps).ok())
                        .flatten()
                        .map(|r| r.lambda.to_decimal(8));
                    let verdict = if nu > cfg.nu_max { "nu-excluded" } else { "needs-attention" };
                    ResultRecord {
                        id,
                        kind: "nu-floor".into(),
                        verdict: verdict.into(),
                        d_plus: Some(f.d_plus().to_string()),
                        nu_floor: Some(nu),
                        new_bound: None,
                        lambda,
                        anchor: "nu-floor:lambda-vs-alpha-power".into(),
                        prec: Some(cfg.effective_prec().unwrap_or_else(|| crate::bounds::policy_prec(*a))),
                        detail: None,
                        wall_ms: 0,
                    }
                }
                Err(e) => error_record(id, "nu-floor", "nu-floor:lambda-vs-alpha-power", &e),
            }
        }
        (Task::Family { eps, a, k }, _) => match verify_pair_at(*a, *k, *eps, cfg.effective_prec()) {
            Ok(rep) => pair_record(id, "verify", "reduction:omega-form", &rep),
            Err(e) => error_record(id, "verify", "reduction:omega-form", &e),
        },
        (Task::Delta(d), _) => match verify_prop_delta(*d) {
            Ok(rep) => pair_record(id, "delta", "reduction:quintuple-delta", &rep),
            Err(e) => error_record(id, "delta", "reduction:quintuple-delta", &e),
        },
    };
    rec.wall_ms = start.elapsed().as_millis() as u64;
    rec
}

/// Reads every well-formed record of a log; malformed lines (a torn final write) are skipped.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let f = File::open(path).map_err(io_err)?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line.map_err(io_err)?;
        if let Ok(r) = serde_json::from_str::<ResultRecord>(&line) {
            out.push(r);
        }
    }
    Ok(out)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Domain(format!("i/o: {e}"))
}

fn sort_key(id: &str) -> (u8, Option<Task>, String) {
    match Task::parse(id) {
        Some(t) => (0, Some(t), String::new()),
        None => (1, None, id.to_string()),
    }
}

/// Rewrites the log with one record per id, sorted by task.
pub fn finalize(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut recs = read_records(path)?;
    let mut seen = BTreeSet::new();
    recs.retain(|r| seen.insert(r.id.clone()));
    recs.sort_by_cached_key(|r| sort_key(&r.id));
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp).map_err(io_err)?;
        for r in &recs {
            writeln!(f, "{}", serde_json::to_string(r).expect("records serialise")).map_err(io_err)?;
        }
        f.sync_all().map_err(io_err)?;
    }
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(recs)
}

/// Comma-separated summary of records.
pub fn summary_csv(recs: &[ResultRecord]) -> String {
    let mut s = String::from("id,kind,verdict,d_plus,nu_floor,new_bound,lambda,prec\n");
    for r in recs {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub total: usize,
    pub ran: usize,
    pub skipped: usize,
    pub positive: usize,
    pub attention: Vec<String>,
    pub precision_failures: Vec<String>,
}

impl SweepSummary {
    /// 0 when every verdict is positive, 3 on precision exhaustion, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.precision_failures.is_empty() {
            3
        } else if !self.attention.is_empty() {
            1
        } else {
            0
        }
    }
}

/// Runs the sweep, appending records as tasks finish, then finalises the log.
/// Cuts an interrupted last line so the next append starts on a fresh line.
fn drop_torn_tail(path: &Path) -> Result<()> {
    let Ok(bytes) = fs::read(path) else { return Ok(()) };
    if bytes.last().is_some_and(|&b| b != b'\n') {
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let f = OpenOptions::new().write(true).open(path).map_err(io_err)?;
        f.set_len(keep as u64).map_err(io_err)?;
    }
    Ok(())
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    cfg.validate()?;
    let all = tasks(cfg);
    let done: BTreeSet<String> = if cfg.resume {
        read_records(&cfg.output)?.into_iter().map(|r| r.id).collect()
    } else {
        BTreeSet::new()
    };
    if !cfg.resume && cfg.output.exists() {
        fs::remove_file(&cfg.output).map_err(io_err)?;
    }
    if cfg.resume {
        drop_torn_tail(&cfg.output)?;
    }
    let todo: Vec<&Task> = all.iter().filter(|t| !done.contains(&t.id())).collect();
    let file = OpenOptions::new().create(true).append(true).open(&cfg.output).map_err(io_err)?;
    let writer = Mutex::new(file);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let write_result: Result<()> = pool.install(|| {
        todo.par_iter().try_for_each(|t| {
            let rec = run_task(t, cfg);
            let line = serde_json::to_string(&rec).expect("records serialise");
            let mut f = writer.lock().expect("writer lock");
            writeln!(f, "{line}").and_then(|_| f.flush()).map_err(io_err)
        })
    });
    write_result?;
    drop(writer);
    let recs = finalize(&cfg.output)?;
    let ids: BTreeSet<String> = all.iter().map(Task::id).collect();
    let mut summary = SweepSummary { total: all.len(), ran: todo.len(), skipped: all.len() - todo.len(), ..Default::default() };
    for r in recs.iter().filter(|r| ids.contains(&r.id)) {
        if r.is_positive() {
            summary.positive += 1;
        } else if r.is_precision_failure() {
            summary.precision_failures.push(r.id.clone());
        } else {
            summary.attention.push(r.id.clone());
        }
    }
    Ok(summary)
}
