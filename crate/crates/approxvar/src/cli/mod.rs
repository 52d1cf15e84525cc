//! Command-line front end. Every output embeds a run manifest; JSON outputs carry
//! `format_version`. Exit codes: 0 success, 1 verification or verdict failure,
//! 2 usage or input error, 3 capacity exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::approxvar::{approx_variation, profile, witness};
use crate::closed_forms::{catalog, run_catalog};
use crate::error::{Error, Result};
use crate::oracle::{run_oracle, Engine, OracleConfig};
use crate::sampled::{BetaRule, FunctionFamily, GeneratorName, GeneratorSpec, SampledFunction, FORMAT_VERSION};
use crate::selection::{
    check_condition, check_exceptional_subset, families, helly_bv, helly_monotone, irregular_extract, sp_extract, sp_extract_local,
    CheckParams, Condition, EpsilonLadder, Mode, Verdict,
};
use crate::spaces::{MetricSpace, Point};
use crate::variations::{classical_report, exhaustive_cap, waterman_variation_capped, Gauge, WatermanSequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "approxvar", version, about = "Approximate variation of sampled functions")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classical functionals of one function.
    Compute(ComputeArgs),
    /// eps-variation over a grid of eps values.
    Profile(ProfileArgs),
    /// Minimizer (or near-minimizer) at one eps.
    Witness(WitnessArgs),
    /// Write a family file.
    Family(FamilyArgs),
    /// Run a selection procedure on a family.
    Select(SelectArgs),
    /// Finite-scale check of a family condition.
    Check(CheckArgs),
    /// Run the closed-form catalog against the engines.
    VerifyPaper(VerifyArgs),
    /// Compare an engine with the brute-force reference on random instances.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Comma-separated eps values for the N_eps counts.
    #[arg(long, default_value = "")]
    eps_list: String,
    /// `harmonic:N` or comma-separated weights.
    #[arg(long)]
    lambda: Option<String>,
    /// `identity`, `power:P` or `exp`.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    max_exhaustive: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    input: PathBuf,
    /// `start:stop:step`, inclusive.
    #[arg(long, conflicts_with = "eps_list")]
    eps_grid: Option<String>,
    #[arg(long)]
    eps_list: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    emit_witness: Option<PathBuf>,
    /// Writes `PREFIX.dat` and `PREFIX.gp`.
    #[arg(long)]
    emit_gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Generator name (identity, spike, three_step, dirichlet_pattern, sin_jt, ...).
    #[arg(long, conflicts_with = "named")]
    generator: Option<String>,
    /// Built-in selection family (sin, reciprocal-dirichlet, two-cluster, ...).
    #[arg(long)]
    named: Option<String>,
    /// `lo:hi`.
    #[arg(long, default_value = "1:8")]
    j_range: String,
    /// Space JSON, default the real line.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    tau_decay: bool,
    #[arg(long)]
    k: Option<usize>,
    /// `constant:V`, `reciprocal`, `one_plus_reciprocal`, `two_cluster`, `geometric:R`.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 0)]
    resolution: usize,
}

#[derive(Args, Debug)]
struct LadderArgs {
    #[arg(long, default_value_t = 0.25)]
    eps1: f64,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[arg(long)]
    family: PathBuf,
    /// sp, sp-local, irregular, helly-monotone, helly-bv.
    #[arg(long)]
    mode: String,
    #[command(flatten)]
    ladder: LadderArgs,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0.5)]
    tail_fraction: f64,
    /// Bisection depth for `irregular`.
    #[arg(long, default_value_t = 3)]
    bisections: usize,
    /// Variation bound for `helly-bv`.
    #[arg(long)]
    bound: Option<f64>,
    /// `a:b,c:d` for `sp-local`.
    #[arg(long)]
    windows: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    family: PathBuf,
    /// bv, nu, neps, vep, pairwise, schrader.
    #[arg(long)]
    condition: String,
    #[command(flatten)]
    ladder: LadderArgs,
    /// Explicit eps values (overrides the ladder).
    #[arg(long)]
    eps_list: Option<String>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 0.5)]
    tail_fraction: f64,
    /// 1-based member positions to exclude.
    #[arg(long)]
    exclude: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// taut, candidate or finite.
    #[arg(long, default_value = "taut")]
    engine: String,
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    max_points: usize,
    #[arg(long, default_value_t = 1e-3)]
    step_factor: f64,
}

/// What a subcommand produced.
struct Outcome {
    body: String,
    code: i32,
}

/// Record of a run, embedded in every output.
#[derive(Debug, Default)]
struct Manifest {
    subcommand: String,
    params: Map<String, Value>,
    digests: Map<String, Value>,
    seed: Option<u64>,
}

impl Manifest {
    fn new(sub: &str) -> Self {
        Manifest { subcommand: sub.into(), ..Default::default() }
    }

    fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.params.insert(k.into(), v.into());
    }

    fn to_json(&self) -> Value {
        let ts = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        json!({
            "subcommand": self.subcommand,
            "parameters": self.params,
            "input_digests": self.digests,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "timestamp": ts,
        })
    }

    fn csv_header(&self) -> String {
        let mut s = String::new();
        let m = self.to_json();
        let _ = writeln!(s, "# format_version: {FORMAT_VERSION}");
        for (k, v) in m.as_object().into_iter().flatten() {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s
    }

    fn wrap(&self, result: Value) -> String {
        let v = json!({ "format_version": FORMAT_VERSION, "manifest": self.to_json(), "result": result });
        serde_json::to_string_pretty(&v).unwrap_or_default() + "\n"
    }

    /// Reads and digests an input file.
    fn read_json(&mut self, path: &Path) -> Result<Value> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.digests.insert(path.display().to_string(), Value::String(format!("{:x}", Sha256::digest(text.as_bytes()))));
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
        // outputs of this tool can be fed back in
        match v {
            Value::Object(mut o) if o.contains_key("manifest") && o.contains_key("result") => Ok(o.remove("result").unwrap_or(Value::Null)),
            v => Ok(v),
        }
    }
}

/// 12 significant digits, plain decimal where reasonable.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=14).contains(&mag) {
        return format!("{x:.11e}");
    }
    let digits = (11 - mag).max(0) as usize;
    let s = format!("{x:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Quotes a CSV field when it needs it.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect()
}

/// `start:stop:step`, inclusive, values rounded to 12 significant digits.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let p = parse_list(&s.replace(':', ","))?;
    let [a, b, h] = p[..] else {
        return Err(Error::Parse(format!("eps grid {s:?} is not start:stop:step")));
    };
    if !(h > 0.0) || b < a {
        return Err(Error::Parse(format!("eps grid {s:?} needs step > 0 and stop >= start")));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| fmt_num(a + i as f64 * h).parse().unwrap_or(f64::NAN)).collect())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("range {s:?} is not lo:hi")))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index {t:?}")));
    Ok((p(a)?, p(b)?))
}

fn parse_windows(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .map(|w| {
            let p = parse_list(&w.replace(':', ","))?;
            match p[..] {
                [a, b] => Ok((a, b)),
                _ => Err(Error::Parse(format!("window {w:?} is not a:b"))),
            }
        })
        .collect()
}

fn parse_lambda(s: &str) -> Result<WatermanSequence> {
    match s.split_once(':') {
        Some(("harmonic", n)) => Ok(WatermanSequence::harmonic(n.trim().parse().map_err(|_| Error::Parse(format!("bad length {n:?}")))?)),
        _ => WatermanSequence::new(parse_list(s)?),
    }
}

fn parse_beta(s: &str) -> Result<BetaRule> {
    Ok(match s.split_once(':') {
        Some(("constant", v)) => BetaRule::Constant { value: v.parse().map_err(|_| Error::Parse(format!("bad beta {v:?}")))? },
        Some(("geometric", r)) => BetaRule::Geometric { ratio: r.parse().map_err(|_| Error::Parse(format!("bad ratio {r:?}")))? },
        None if s == "reciprocal" => BetaRule::Reciprocal,
        None if s == "one_plus_reciprocal" => BetaRule::OnePlusReciprocal,
        None if s == "two_cluster" => BetaRule::TwoCluster,
        _ => return Err(Error::Parse(format!("unknown beta rule {s:?}"))),
    })
}

fn load_function(m: &mut Manifest, path: &Path) -> Result<SampledFunction> {
    let v = m.read_json(path)?;
    SampledFunction::from_json(&v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_family(m: &mut Manifest, path: &Path) -> Result<FunctionFamily> {
    let v = m.read_json(path)?;
    FunctionFamily::from_json(&v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn ladder_of(a: &LadderArgs, m: &mut Manifest) -> Result<EpsilonLadder> {
    m.param("eps1", a.eps1);
    m.param("ratio", a.ratio);
    m.param("depth", a.depth);
    EpsilonLadder::new(a.eps1, a.ratio, a.depth)
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::FailsAtScale {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

fn cmd_compute(a: &ComputeArgs) -> Result<Outcome> {
    let mut m = Manifest::new("compute");
    let f = load_function(&mut m, &a.input)?;
    let eps = parse_list(&a.eps_list)?;
    let cap = a.max_exhaustive.unwrap_or_else(exhaustive_cap);
    m.param("n_max", a.n_max);
    m.param("eps_list", eps.clone());
    m.param("max_exhaustive", cap);
    let phi = a.phi.as_deref().map(Gauge::parse).transpose()?;
    let mut r = classical_report(&f, a.n_max, &eps, None, phi)?;
    if let Some(l) = &a.lambda {
        m.param("lambda", l.as_str());
        r.lambda_var = Some(waterman_variation_capped(&f, &parse_lambda(l)?, cap)?);
    }
    if let Some(p) = &a.phi {
        m.param("phi", p.as_str());
    }
    let body = match a.format {
        Format::Json => m.wrap(serde_json::to_value(&r).unwrap_or(Value::Null)),
        Format::Csv => {
            let mut s = m.csv_header();
            s.push_str("functional,parameter,value\n");
            let _ = writeln!(s, "jordan,,{}", fmt_num(r.jordan));
            let _ = writeln!(s, "oscillation,,{}", fmt_num(r.oscillation));
            for (n, v) in r.nu.iter().enumerate() {
                let _ = writeln!(s, "nu,{},{}", n + 1, fmt_num(*v));
            }
            for (e, c) in &r.n_eps {
                let _ = writeln!(s, "n_eps,{},{c}", fmt_num(*e));
            }
            if let Some(v) = r.lambda_var {
                let _ = writeln!(s, "lambda_variation,,{}", fmt_num(v));
            }
            if let Some(v) = r.phi_var {
                let _ = writeln!(s, "phi_variation,,{}", fmt_num(v));
            }
            if let Some(v) = r.schrader {
                let _ = writeln!(s, "schrader,,{}", fmt_num(v));
            }
            s
        }
    };
    Ok(Outcome { body, code: EXIT_OK })
}

fn cmd_profile(a: &ProfileArgs) -> Result<Outcome> {
    let mut m = Manifest::new("profile");
    let f = load_function(&mut m, &a.input)?;
    let grid = match (&a.eps_grid, &a.eps_list) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(l)) => parse_list(l)?,
        (None, None) => return Err(Error::Parse("one of --eps-grid or --eps-list is required".into())),
    };
    m.param("eps", grid.clone());
    let p = profile(&f, &grid)?;
    if let Some(path) = &a.emit_witness {
        let ws: Vec<Value> = p.rows.iter().map(|r| json!({ "eps": r.eps, "witness": r.result.witness.as_ref().map(|w| w.to_json()) })).collect();
        write_file(path, &m.wrap(Value::Array(ws)))?;
    }
    if let Some(prefix) = &a.emit_gnuplot {
        let dat = prefix.with_extension("dat");
        let mut d = String::from("# eps value lower upper\n");
        for r in &p.rows {
            let _ = writeln!(d, "{} {} {} {}", fmt_num(r.eps), fmt_num(r.result.value), fmt_num(r.result.lower_bound), fmt_num(r.result.upper_bound));
        }
        write_file(&dat, &d)?;
        let name = dat.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let gp = format!(
            "set xlabel 'eps'\nset ylabel 'V_eps'\nset key top right\nplot '{name}' using 1:2 with linespoints title 'V_eps', '' using 1:3 with lines dt 2 title 'lower', '' using 1:4 with lines dt 2 title 'upper'\n"
        );
        write_file(&prefix.with_extension("gp"), &gp)?;
    }
    let body = match a.format {
        Format::Json => m.wrap(json!({
            "rows": p.rows.iter().map(|r| json!({"eps": r.eps, "result": r.result.to_json()})).collect::<Vec<_>>(),
            "nonincreasing": p.nonincreasing,
            "slopes": p.slopes,
            "breakpoints": p.breakpoints,
        })),
        Format::Csv => {
            let mut s = m.csv_header();
            s.push_str("eps,value,attained,method,lower,upper\n");
            for r in &p.rows {
                let x = &r.result;
                let _ = writeln!(s, "{},{},{},{},{},{}", fmt_num(r.eps), fmt_num(x.value), x.attained, x.method.name(), fmt_num(x.lower_bound), fmt_num(x.upper_bound));
            }
            s
        }
    };
    Ok(Outcome { body, code: EXIT_OK })
}

fn cmd_witness(a: &WitnessArgs) -> Result<Outcome> {
    let mut m = Manifest::new("witness");
    let f = load_function(&mut m, &a.input)?;
    m.param("eps", a.eps);
    let r = approx_variation(&f, a.eps)?;
    let w = witness(&f, a.eps)?;
    Ok(Outcome {
        body: m.wrap(json!({ "value": r.value, "attained": r.attained, "slack": r.slack, "method": r.method, "witness": w.to_json() })),
        code: EXIT_OK,
    })
}

fn parse_point(space: &MetricSpace, s: &str) -> Result<Point> {
    let v: Value = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    space.point_from_json(&v)
}

fn cmd_family(a: &FamilyArgs) -> Result<Outcome> {
    let mut m = Manifest::new("family");
    let (lo, hi) = parse_range(&a.j_range)?;
    m.param("j_range", json!([lo, hi]));
    let fam = if let Some(name) = &a.named {
        if lo != 1 {
            return Err(Error::Parse("named families start at j = 1".into()));
        }
        m.param("named", name.as_str());
        m.param("k", a.k.unwrap_or(4));
        families::by_name(name, hi, a.k.unwrap_or(4))?
    } else {
        let name = a.generator.as_deref().ok_or_else(|| Error::Parse("one of --generator or --named is required".into()))?;
        let space: MetricSpace = match &a.space {
            Some(s) => serde_json::from_str(s).map_err(|e| Error::Parse(format!("--space: {e}")))?,
            None => MetricSpace::RealLine,
        };
        let mut spec = GeneratorSpec::in_space(GeneratorName::parse(name)?, space.clone());
        if let Some(x) = &a.x {
            spec.x = parse_point(&space, x)?;
        }
        if let Some(y) = &a.y {
            spec.y = parse_point(&space, y)?;
        }
        if let Some(v) = a.alpha {
            spec.alpha = v;
        }
        if let Some(v) = a.tau {
            spec.tau = v;
        }
        if let Some(v) = a.k {
            spec.k = v;
        }
        if let Some(b) = &a.beta {
            spec.beta = parse_beta(b)?;
        }
        spec.tau_decay = a.tau_decay;
        spec.resolution = a.resolution;
        m.param("generator", spec.to_json());
        let fam = FunctionFamily::generated(spec, lo, hi)?;
        // surface generator errors now rather than at first use
        fam.members()?;
        fam
    };
    Ok(Outcome { body: m.wrap(fam.to_json()), code: EXIT_OK })
}

fn cmd_select(a: &SelectArgs) -> Result<Outcome> {
    let mut m = Manifest::new("select");
    let fam = load_family(&mut m, &a.family)?;
    let mode = Mode::parse(&a.mode)?;
    m.param("mode", a.mode.as_str());
    m.param("tol", a.tol);
    m.param("tail_fraction", a.tail_fraction);
    let rep = match mode {
        Mode::HellyMonotone => helly_monotone(&fam, a.tol)?,
        Mode::HellyBv => {
            if let Some(b) = a.bound {
                m.param("bound", b);
            }
            helly_bv(&fam, a.bound, a.tol)?
        }
        Mode::Sp => sp_extract(&fam, &ladder_of(&a.ladder, &mut m)?, a.tol)?,
        Mode::SpLocal => {
            let w = parse_windows(a.windows.as_deref().ok_or_else(|| Error::Parse("sp-local needs --windows".into()))?)?;
            m.param("windows", json!(w.iter().map(|(x, y)| [*x, *y]).collect::<Vec<_>>()));
            sp_extract_local(&fam, &w, &ladder_of(&a.ladder, &mut m)?, a.tol)?
        }
        Mode::Irregular => {
            m.param("bisections", a.bisections);
            irregular_extract(&fam, &ladder_of(&a.ladder, &mut m)?, a.bisections, a.tol)?
        }
    };
    Ok(Outcome { body: m.wrap(rep.to_json()), code: verdict_code(rep.verdict) })
}

fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    let mut m = Manifest::new("check");
    let fam = load_family(&mut m, &a.family)?;
    let cond = Condition::parse(&a.condition)?;
    m.param("condition", a.condition.as_str());
    let eps = match &a.eps_list {
        Some(l) => parse_list(l)?,
        None => ladder_of(&a.ladder, &mut m)?.all(),
    };
    m.param("eps", eps.clone());
    m.param("n_max", a.n_max);
    m.param("tail_fraction", a.tail_fraction);
    let params = CheckParams { eps, n_max: a.n_max, tail_fraction: a.tail_fraction, ..Default::default() };
    match &a.exclude {
        Some(x) => {
            let ex: Vec<usize> = parse_list(x)?.into_iter().map(|v| v as usize).collect();
            m.param("exclude", ex.clone());
            let r = check_exceptional_subset(&fam, &ex, cond, &params)?;
            Ok(Outcome { body: m.wrap(r.to_json()), code: verdict_code(r.restricted.verdict) })
        }
        None => {
            let r = check_condition(&fam, cond, &params)?;
            Ok(Outcome { body: m.wrap(r.to_json()), code: verdict_code(r.verdict) })
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let m = Manifest::new("verify-paper");
    let rows = run_catalog(&catalog());
    let all = rows.iter().all(|r| r.pass);
    let body = match a.format {
        Format::Json => m.wrap(json!({ "all_pass": all, "cases": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>() })),
        Format::Csv => {
            let mut s = m.csv_header();
            s.push_str("case,anchor,formula_value,engine_value,delta,verdict\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    csv_field(&r.id),
                    csv_field(&r.anchor),
                    fmt_num(r.formula_value),
                    fmt_num(r.engine_value),
                    fmt_num(r.delta),
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
    };
    Ok(Outcome { body, code: if all { EXIT_OK } else { EXIT_FAIL } })
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome> {
    let mut m = Manifest::new("oracle");
    let engine = Engine::parse(&a.engine)?;
    let cfg = OracleConfig { max_points: a.max_points, step_factor: a.step_factor, seed: a.seed, instances: a.instances };
    m.param("engine", a.engine.as_str());
    m.param("instances", a.instances);
    m.param("max_points", a.max_points);
    m.param("step_factor", a.step_factor);
    m.seed = Some(a.seed);
    let s = run_oracle(engine, &cfg)?;
    let code = if s.failed == 0 { EXIT_OK } else { EXIT_FAIL };
    Ok(Outcome { body: m.wrap(serde_json::to_value(&s).unwrap_or(Value::Null)), code })
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Exit code for an error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let work = || match &cli.cmd {
        Cmd::Compute(a) => cmd_compute(a),
        Cmd::Profile(a) => cmd_profile(a),
        Cmd::Witness(a) => cmd_witness(a),
        Cmd::Family(a) => cmd_family(a),
        Cmd::Select(a) => cmd_select(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::VerifyPaper(a) => cmd_verify(a),
        Cmd::Oracle(a) => cmd_oracle(a),
    };
    let res = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::Io(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    match res {
        Ok(out) => {
            let written = match &cli.output {
                Some(p) => write_file(p, &out.body),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.8), "0.8");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(7.2), "7.2");
        assert_eq!(fmt_num(-1.5), "-1.5");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.05:1.0:0.05").unwrap().len(), 20);
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert_eq!(parse_windows("0:0.5,0.5:1").unwrap(), vec![(0.0, 0.5), (0.5, 1.0)]);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["approxvar", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["approxvar", "witness", "--input", "/nonexistent.json", "--eps", "0.1"]), EXIT_USAGE);
    }
}
