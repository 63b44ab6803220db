use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use dtriple::bounds::{
    aux_lemma_suite, doubled, hg_k_check, laurent_a_bound, matveev_m_bound, nu_floor, policy_prec, rickert,
    rickert_applicable, AlgCtx, AuxStatus,
};
use dtriple::pell::{classify_fundamentals, extensions_from_fundamentals, triple_fundamentals, PellSystem};
use dtriple::reduce::{verify_pair_at, verify_prop_delta, PairReport, Verdict};
use dtriple::sweep::{parse_eps_list, parse_range, run_sweep, summary_csv, KRule, SweepConfig, SweepMode};
use dtriple::tuple::{
    brute_force_extensions, d_plus_closed, family_triple, quintuple_scan_b4a, quintuple_scan_regular, verify_dtuple,
    TupleCheck, Triple,
};
use dtriple::Error;

#[derive(Parser)]
#[command(name = "dtriple", version, about = "Extension checks for Diophantine triples")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a set is a D(n)-tuple.
    Verify {
        /// Comma-separated elements.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        elems: Vec<BigInt>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        n: BigInt,
    },
    /// Family triple for (A, K, ε) and its regular extension.
    Family {
        #[arg(long = "A")]
        big_a: i64,
        #[arg(long = "K")]
        big_k: i64,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
    },
    /// Extensions of a triple below a bound, by exhaustive search and from the Pell solutions.
    Extend {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        c: BigInt,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
        /// Search bound; defaults to 2·d₊.
        #[arg(long)]
        d_max: Option<BigInt>,
    },
    /// Fundamental solutions and the first terms of the z-sequences.
    Pell {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        c: BigInt,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Analytic bounds for a family pair.
    Bounds {
        #[arg(long = "A")]
        big_a: i64,
        #[arg(long = "K")]
        big_k: i64,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
        /// Index gap used by the hypergeometric and two-logarithm checks.
        #[arg(long, default_value_t = 1)]
        nu: u64,
        /// Largest ν tried by the ν-floor search.
        #[arg(long, default_value_t = 10)]
        nu_max: u64,
    },
    /// Reduction and residual intersection for a family pair or a Δ triple.
    Reduce {
        #[arg(long = "A")]
        big_a: Option<i64>,
        #[arg(long = "K")]
        big_k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<i64>,
        #[arg(long)]
        delta: Option<u64>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Resumable grid sweep writing one JSON line per task.
    Sweep {
        /// key = value file; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long = "A")]
        a_range: Option<String>,
        /// `lo..hi` or `paper-bound`.
        #[arg(long = "K")]
        k_rule: Option<String>,
        #[arg(long)]
        k_samples: Option<usize>,
        #[arg(long)]
        nu_max: Option<u64>,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, env = "DTRIPLE_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        resume: bool,
        /// Also write a comma-separated summary here.
        #[arg(long)]
        summary_csv: Option<PathBuf>,
    },
    /// Candidate sieves for quintuples with a regular triple at the bottom.
    Quintuple {
        #[arg(long, value_enum, default_value_t = QuintMode::Regular)]
        mode: QuintMode,
        #[arg(long, default_value_t = 10)]
        delta_max: u64,
        #[arg(long, default_value_t = 1)]
        a_min: u64,
        #[arg(long, default_value_t = u64::MAX)]
        a_max: u64,
        /// Lower cutoff on `a` in the regular scan.
        #[arg(long, default_value_t = 20)]
        min_a: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuintMode {
    Regular,
    B4a,
}

/// Printed object and exit code of a subcommand.
struct Outcome {
    body: Value,
    code: u8,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome { body, code: 0 }
    }
    fn flag(body: Value, positive: bool) -> Self {
        Outcome { body, code: if positive { 0 } else { 1 } }
    }
}

fn code_of(e: &Error) -> u8 {
    if e.is_precision() {
        3
    } else {
        2
    }
}

fn s(n: &BigInt) -> String {
    n.to_string()
}

fn triple_json(t: &Triple) -> Value {
    json!({"a": s(&t.a), "b": s(&t.b), "c": s(&t.c), "sigma": t.sigma, "r": s(&t.r), "s": s(&t.s), "t": s(&t.t)})
}

fn pair_json(rep: &PairReport) -> Value {
    let note = match &rep.verdict {
        Verdict::NeedsAttention(n) => Some(n.clone()),
        Verdict::UniqueExtension => None,
    };
    json!({
        "triple": triple_json(&rep.triple),
        "d_plus": s(&rep.d_plus),
        "verdict": rep.verdict.as_str(),
        "note": note,
        "m_start": s(&rep.m_start),
        "branches": rep.branches.iter().map(|b| json!({
            "branch": b.branch.as_str(),
            "steps": b.steps.iter().map(|o| o.new_bound().map(s)).collect::<Vec<_>>(),
            "final_bound": s(&b.final_bound),
        })).collect::<Vec<_>>(),
        "residual": rep.residual.iter().map(s).collect::<Vec<_>>(),
        "fundamentals": rep.fundamentals,
        "precision": rep.prec,
    })
}

fn cmd_verify(elems: &[BigInt], n: &BigInt) -> Result<Outcome, Error> {
    Ok(match verify_dtuple(elems, n)? {
        TupleCheck::Valid(t) => Outcome::ok(json!({
            "valid": true,
            "elems": t.elems.iter().map(s).collect::<Vec<_>>(),
            "n": s(&t.n),
            "witnesses": t.witnesses.iter().map(|(u, v, w)| [s(u), s(v), s(w)]).collect::<Vec<_>>(),
        })),
        TupleCheck::Invalid { u, v, value } => Outcome::flag(
            json!({"valid": false, "pair": [s(&u), s(&v)], "value": s(&value)}),
            false,
        ),
    })
}

fn cmd_family(a: i64, k: i64, eps: i64) -> Result<Outcome, Error> {
    let f = family_triple(a, k, eps)?;
    let dp = f.d_plus();
    let closed = d_plus_closed(a, k, eps)?;
    let n = BigInt::from(eps * eps);
    let quad = verify_dtuple(&[f.a().clone(), f.b().clone(), f.c().clone(), dp.clone()], &n)?.is_valid();
    let good = quad && closed == dp;
    Ok(Outcome::flag(
        json!({
            "A": a, "K": k, "eps": eps,
            "triple": triple_json(&f.triple),
            "N": s(&f.big_n()),
            "d_plus": s(&dp),
            "d_plus_closed_agrees": closed == dp,
            "quadruple_valid": quad,
        }),
        good,
    ))
}

fn cmd_extend(a: BigInt, b: BigInt, c: BigInt, sigma: u32, d_max: Option<BigInt>) -> Result<Outcome, Error> {
    let t = Triple::new(a, b, c, sigma)?;
    let dp = t.d_plus()?;
    let d_max = d_max.unwrap_or_else(|| &dp * 2);
    let brute = brute_force_extensions(&t, &d_max);
    let pell = extensions_from_fundamentals(&t, &d_max)?;
    let unique = brute == pell && (brute.is_empty() || brute == vec![dp.clone()]);
    Ok(Outcome::flag(
        json!({
            "triple": triple_json(&t),
            "d_plus": s(&dp),
            "d_minus": t.d_minus().ok().map(|d| s(&d)),
            "d_max": s(&d_max),
            "exhaustive": brute.iter().map(s).collect::<Vec<_>>(),
            "from_pell": pell.iter().map(s).collect::<Vec<_>>(),
            "only_regular": unique,
        }),
        unique,
    ))
}

fn cmd_pell(a: BigInt, b: BigInt, c: BigInt, sigma: u32, terms: usize) -> Result<Outcome, Error> {
    let t = Triple::new(a, b, c, sigma)?;
    let sys = PellSystem::new(&t)?;
    let fund = triple_fundamentals(&t)?;
    let class = if sigma == 4 { classify_fundamentals(&t).ok() } else { None };
    let root = BigInt::from(if sigma == 4 { 2 } else { 1 });
    let mut seqs = Vec::new();
    for z0 in [root.clone(), -root.clone()] {
        let v = sys.v_seq(&z0, &root)?;
        let w = sys.w_seq(&z0, &root)?;
        seqs.push(json!({
            "z0": s(&z0),
            "v": v.iter().take(terms).map(|x| s(&x)).collect::<Vec<_>>(),
            "w": w.iter().take(terms).map(|x| s(&x)).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome::ok(json!({
        "triple": triple_json(&t),
        "eq1_window": s(&sys.eq1.window()),
        "fundamentals": fund.iter().map(|f| json!({
            "z0": s(&f.z0), "x0": s(&f.x0), "fundamental": f.fundamental, "class": format!("{:?}", f.class),
        })).collect::<Vec<_>>(),
        "classification": class.map(|c| json!({
            "two_only": c.two_only,
            "allowed_abs_z0": c.allowed_abs_z0.iter().map(s).collect::<Vec<_>>(),
            "small_excluded": c.small_excluded,
        })),
        "sequences": seqs,
    })))
}

fn cmd_bounds(a: i64, k: i64, eps: i64, nu: u64, nu_max: u64) -> Result<Outcome, Error> {
    let (da, dk, de) = doubled(a, k, eps)?;
    let ctx = AlgCtx::family(da, dk, de, policy_prec(da))?;
    let lambda = if rickert_applicable(a, k, eps) {
        Some(rickert(a, k, eps)?.lambda.to_decimal(8))
    } else {
        None
    };
    // outside the hypergeometric range the check has nothing to say
    let hg = match hg_k_check(a, k, eps, nu) {
        Ok(v) => Some(v),
        Err(e) if e.is_precision() => return Err(e),
        Err(_) => None,
    };
    let laurent = laurent_a_bound(de, nu).ok().map(|b| s(&b));
    let m_bound = matveev_m_bound(&ctx)?;
    let floor = nu_floor(a, k, eps, nu_max)?;
    let aux = aux_lemma_suite(a, k, eps)?;
    let checks: Vec<Value> = aux
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "status": format!("{:?}", c.status).to_lowercase()}))
        .collect();
    let aux_ok = aux.checks.iter().all(|c| c.status != AuxStatus::Fail);
    let excluded = floor > nu_max;
    Ok(Outcome::flag(
        json!({
            "A": a, "K": k, "eps": eps,
            "precision": ctx.prec,
            "rickert_lambda": lambda,
            "hg_k_check": hg,
            "laurent_a_bound": laurent,
            "matveev_m_bound": s(&m_bound),
            "nu_floor": floor,
            "nu_excluded": excluded,
            "aux": checks,
        }),
        excluded && aux_ok,
    ))
}

fn cmd_reduce(a: Option<i64>, k: Option<i64>, eps: Option<i64>, delta: Option<u64>, prec: Option<u32>) -> Result<Outcome, Error> {
    let rep = match (a, k, eps, delta) {
        (Some(a), Some(k), Some(e), None) => verify_pair_at(a, k, e, prec.map(|p| p.max(180)))?,
        (None, None, None, Some(d)) => verify_prop_delta(d)?,
        _ => return Err(Error::Domain("give either --A --K --eps or --delta".into())),
    };
    let good = rep.verdict.is_unique();
    Ok(Outcome::flag(pair_json(&rep), good))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: Option<PathBuf>,
    mode: Option<String>,
    eps: Option<String>,
    a_range: Option<String>,
    k_rule: Option<String>,
    k_samples: Option<usize>,
    nu_max: Option<u64>,
    precision: Option<u32>,
    jobs: Option<usize>,
    output: Option<PathBuf>,
    resume: bool,
    csv: Option<PathBuf>,
) -> Result<Outcome, Error> {
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| Error::Domain(format!("{}: {e}", p.display())))?;
            SweepConfig::from_kv(&text)?
        }
        None => SweepConfig::default(),
    };
    if let Some(m) = mode {
        cfg.mode = SweepMode::parse(&m)?;
    }
    if let Some(e) = eps {
        cfg.eps_list = parse_eps_list(&e)?;
    }
    if let Some(r) = a_range {
        cfg.a_range = parse_range(&r)?;
    }
    match k_rule.as_deref() {
        Some("paper-bound") => cfg.k_rule = KRule::PaperBound { samples: 4 },
        Some(r) => {
            let (lo, hi) = parse_range(r)?;
            cfg.k_rule = KRule::Range(lo, hi);
        }
        None => {}
    }
    if let (Some(n), KRule::PaperBound { samples }) = (k_samples, &mut cfg.k_rule) {
        *samples = n;
    }
    if let Some(n) = nu_max {
        cfg.nu_max = n;
    }
    if precision.is_some() {
        cfg.prec = precision;
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if let Some(o) = output {
        cfg.output = o;
    }
    cfg.resume |= resume;
    cfg.validate()?;
    let summary = run_sweep(&cfg)?;
    if let Some(path) = csv {
        let recs = dtriple::sweep::read_records(&cfg.output)?;
        fs::write(&path, summary_csv(&recs)).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    }
    let code = summary.exit_code() as u8;
    Ok(Outcome {
        body: json!({
            "output": cfg.output.display().to_string(),
            "tasks": summary.total,
            "ran": summary.ran,
            "skipped": summary.skipped,
            "positive": summary.positive,
            "needs_attention": summary.attention,
            "precision_exhausted": summary.precision_failures,
        }),
        code,
    })
}

fn cmd_quintuple(mode: QuintMode, delta_max: u64, a_min: u64, a_max: u64, min_a: u64) -> Result<Outcome, Error> {
    let verdicts = match mode {
        QuintMode::Regular => quintuple_scan_regular((a_min, a_max), delta_max, min_a),
        QuintMode::B4a => quintuple_scan_b4a((a_min, a_max), delta_max),
    };
    let survivors: Vec<Value> =
        verdicts.iter().filter(|v| v.is_survivor()).map(|v| json!([v.a, v.b, v.c])).collect();
    Ok(Outcome::ok(json!({
        "candidates": verdicts.iter().map(|v| json!({
            "a": v.a, "delta": v.delta, "b": v.b, "c": v.c, "status": v.status.as_str(), "reason": v.reason,
        })).collect::<Vec<_>>(),
        "survivors": survivors,
    })))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.cmd {
        Cmd::Verify { elems, n } => cmd_verify(&elems, &n),
        Cmd::Family { big_a, big_k, eps } => cmd_family(big_a, big_k, eps),
        Cmd::Extend { a, b, c, sigma, d_max } => cmd_extend(a, b, c, sigma, d_max),
        Cmd::Pell { a, b, c, sigma, terms } => cmd_pell(a, b, c, sigma, terms),
        Cmd::Bounds { big_a, big_k, eps, nu, nu_max } => cmd_bounds(big_a, big_k, eps, nu, nu_max),
        Cmd::Reduce { big_a, big_k, eps, delta, precision } => cmd_reduce(big_a, big_k, eps, delta, precision),
        Cmd::Sweep {
            config,
            mode,
            eps,
            a_range,
            k_rule,
            k_samples,
            nu_max,
            precision,
            jobs,
            output,
            resume,
            summary_csv,
        } => cmd_sweep(config, mode, eps, a_range, k_rule, k_samples, nu_max, precision, jobs, output, resume, summary_csv),
        Cmd::Quintuple { mode, delta_max, a_min, a_max, min_a } => cmd_quintuple(mode, delta_max, a_min, a_max, min_a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out.body).expect("json output"));
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code_of(&e))
        }
    }
}
